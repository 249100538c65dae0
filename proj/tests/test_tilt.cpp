#include <doctest.h>

#include <cmath>
#include <map>

#include "tilt.hpp"

using namespace modphi;
using namespace modphi::tilt;

TEST_CASE("curie weiss residues") {
    auto cw = curie_weiss();
    CHECK(std::abs(cw.psi(100, cplx{0.0, 0.0}) - cplx{1.0, 0.0}) < 1e-13);
    // psi_n > 0 on the real axis
    for (double x : {-3.0, -0.5, 0.1, 2.0, 5.0})
        CHECK(cw.psi(400, cplx{x, 0.0}).real() > 0.0);
    // L1 convergence of psi_n to e^{-x^4/12}
    auto l1 = [&](double n) {
        auto f = [&](double x) {
            return std::abs(cw.psi(n, cplx{x, 0.0}) - cw.psi_limit(cplx{x, 0.0}));
        };
        return integrate(f, -cw.strip_cutoff(n), cw.strip_cutoff(n), {1e-10, 1e-8, 8'000'000})
            .value;
    };
    double d2 = l1(100), d3 = l1(1000), d4 = l1(10000);
    CHECK(d3 < d2);
    CHECK(d4 < d3);
}

TEST_CASE("tilted pmf: Gibbs weights and limits") {
    auto cw = curie_weiss();
    // n = 2: states M in {-2, 0, 2} with weights {e, 2, e}/(2 + 2e)
    ExactPmf t2 = tilted_pmf(cw, 2);
    t2.validate();
    CHECK(std::abs(t2.probs[1] - 1.0 / (1.0 + std::exp(1.0))) < 1e-14);
    CHECK(std::abs(t2.probs[0] - t2.probs[2]) < 1e-16);
    CHECK(std::abs(t2.mean()) < 1e-14); // symmetric base stays symmetric

    // tilt -> 1 for huge t: toy model with binomial base and enormous t_n
    LaplaceModel toy = cw;
    toy.t_of = [](double) { return 1e12; };
    ExactPmf base = cw.base_pmf(40);
    ExactPmf tilted = tilted_pmf(toy, 40);
    double tv = 0.0;
    for (size_t j = 0; j < base.probs.size(); ++j)
        tv += std::abs(base.probs[j] - tilted.probs[j]);
    CHECK(tv < 1e-9);

    // atom-by-atom identity with the spin-enumeration weights for n <= 12
    for (long n : {3, 7, 12}) {
        ExactPmf lhs = tilted_pmf(cw, static_cast<double>(n));
        ExactPmf rhs = curie_weiss_pmf(n).affine(1.0 / std::pow(n, 0.25), 0.0);
        REQUIRE(lhs.probs.size() == rhs.probs.size());
        for (size_t j = 0; j < lhs.probs.size(); ++j)
            CHECK(std::abs(lhs.probs[j] - rhs.probs[j]) < 1e-12);
        CHECK(std::abs(lhs.offset - rhs.offset) < 1e-12);
        CHECK(std::abs(lhs.step - rhs.step) < 1e-14);
    }
}

TEST_CASE("brute-force spin enumeration matches the binomial-weight law (n = 3)") {
    // 8 configurations of 3 spins, Gibbs weight e^{M^2/2n}
    double z = 0.0;
    std::map<long, double> mass;
    for (int cfg = 0; cfg < 8; ++cfg) {
        long M = 0;
        for (int i = 0; i < 3; ++i) M += (cfg >> i) & 1 ? 1 : -1;
        double w = std::exp(static_cast<double>(M * M) / 6.0);
        mass[M] += w;
        z += w;
    }
    ExactPmf ref = curie_weiss_pmf(3);
    for (size_t j = 0; j < ref.probs.size(); ++j) {
        long M = static_cast<long>(std::lround(ref.atom(j)));
        CHECK(std::abs(ref.probs[j] - mass[M] / z) < 1e-14);
    }
}

TEST_CASE("A3 strip constants") {
    // Gaussian-like toy: psi = e^{-z^2}; integral over the strip is sqrt(pi) e^{m^2}
    LaplaceModel toy;
    toy.name = "gauss_toy";
    toy.t_of = [](double) { return 10.0; };
    toy.psi = [](double, cplx z) { return std::exp(-z * z); };
    toy.psi_limit = [](cplx z) { return std::exp(-z * z); };
    toy.strip_cutoff = [](double) { return 9.0; };
    for (double M : {0.5, 1.0}) {
        double c = a3_constant(toy, M, {1.0});
        CHECK(std::abs(c - std::sqrt(consts::pi) * std::exp(M * M)) < 1e-6);
    }

    auto cw = curie_weiss();
    // M = 0: the strip integral collapses to ||psi_n||_1 -> I_inf
    double c0 = a3_constant(cw, 0.0, {10000.0}, 1);
    CHECK(std::abs(c0 - psi_integral_curie_weiss()) < 0.05);
    // known strip envelope C(M) = e^{13 M^4 / 12} (2 sqrt(3) M + I_inf)
    const double M = 1.0;
    double c1 = a3_constant(cw, M, {100.0, 1000.0});
    double envelope = std::exp(13.0 * std::pow(M, 4.0) / 12.0) *
                      (2.0 * std::sqrt(3.0) * M + psi_integral_curie_weiss());
    CHECK(c1 <= envelope * 1.05);
}

TEST_CASE("fourier decay bound of the residues") {
    auto cw = curie_weiss();
    std::vector<double> grid;
    for (double xi = -20.0; xi <= 20.0; xi += 2.5) grid.push_back(xi);
    auto rep = fourier_decay_check(cw, 1000.0, 1.0, grid);
    for (const auto& pt : rep) CHECK(pt.pass);
    // |psi_hat(0)| = I_n <= 2 C(M)
    auto at0 = fourier_decay_check(cw, 1000.0, 1.0, {0.0});
    CHECK(at0[0].psi_hat_abs <= at0[0].bound);
    CHECK(at0[0].psi_hat_abs > 3.0); // I_n is near I_inf = 3.374
    // decay slope: twice the frequency at least halves ... log-gap >= M |xi|
    auto pair = fourier_decay_check(cw, 1000.0, 1.0, {6.0, 12.0});
    CHECK(std::log(pair[0].psi_hat_abs) - std::log(pair[1].psi_hat_abs) >= 6.0 - 1e-6);
}

TEST_CASE("tilted local limit: targets and sanity scales") {
    auto cw = curie_weiss();
    Window B{{-1.0, 1.0}};
    auto r = tilted_local_limit(cw, 1e4, 0.0, B, 0.5);
    const double I = psi_integral_curie_weiss();
    CHECK(std::abs(r.target - 2.0 / I) < 1e-10);
    CHECK(r.rel_err < 0.10);
    CHECK(std::abs(r.lhs - 0.59138) < 5e-4); // frozen from the exact binomial run
    CHECK(r.within_quoted_regime);

    auto r1 = tilted_local_limit(cw, 1e4, 1.0, B, 0.5);
    CHECK(std::abs(r1.target - std::exp(-1.0 / 12.0) * 2.0 / I) < 1e-10);
    CHECK(r1.rel_err < 0.10);

    // eps -> 0 proxy: scale ~ 1, lhs is close to the plain window probability
    auto r0 = tilted_local_limit(cw, 1e4, 0.0, B, 0.05);
    ExactPmf ty = tilted_pmf(cw, 1e4).affine(1.0 / 100.0, 0.0);
    double plain = ty.mass_in(-1.0 / r0.scale, 1.0 / r0.scale);
    CHECK(std::abs(r0.lhs - r0.scale * plain) < 1e-12);

    auto r7 = tilted_local_limit(cw, 1e4, 0.0, B, 0.7);
    CHECK(!r7.within_quoted_regime);
    CHECK_THROWS_AS(tilted_local_limit(cw, 100.0, 0.0, B, 1.5), std::invalid_argument);
}

TEST_CASE("base charfn equals cos^n (cross-check of the binomial base)") {
    auto cw = curie_weiss();
    ExactPmf base = cw.base_pmf(500);
    for (double xi : {0.3, 1.0, 2.2}) {
        cplx from_pmf = base.charfn(xi);
        double closed = std::pow(std::cos(xi / std::pow(500.0, 0.25)), 500);
        CHECK(std::abs(from_pmf - cplx{closed, 0.0}) < 1e-9);
    }
}

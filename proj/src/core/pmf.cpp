#include "pmf.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modphi {

double ExactPmf::total() const {
    double s = 0.0, c = 0.0;
    for (double p : probs) {
        double y = p - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

double ExactPmf::mean() const {
    double s = 0.0, c = 0.0;
    for (size_t j = 0; j < probs.size(); ++j) {
        double y = probs[j] * atom(j) - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

double ExactPmf::variance() const {
    double m = mean();
    double s = 0.0;
    for (size_t j = 0; j < probs.size(); ++j) {
        double d = atom(j) - m;
        s += probs[j] * d * d;
    }
    return s;
}

cplx ExactPmf::charfn(double xi) const {
    // sum p_j e^{i xi (offset + j step)} with an incremental rotation
    const cplx rot = std::polar(1.0, xi * step);
    cplx cur = std::polar(1.0, xi * offset);
    cplx s{0.0, 0.0};
    for (double p : probs) {
        s += p * cur;
        cur *= rot;
    }
    return s;
}

double ExactPmf::mass_in(double a, double b) const {
    if (b < a) std::swap(a, b);
    // atoms within snap of a boundary are resolved by the (a, b] convention as
    // if they sat exactly on it; affine-mapped lattices drift by a few ulps
    const double snap = 1e-9 * step;
    double s = 0.0;
    for (size_t j = 0; j < probs.size(); ++j) {
        double x = atom(j);
        if (x > a + snap && x <= b + snap) s += probs[j];
    }
    return s;
}

ExactPmf ExactPmf::affine(double s, double c) const {
    ExactPmf out = *this;
    out.offset = s * offset + c;
    out.step = s * step;
    if (out.step < 0) { // keep step positive, reverse atom order
        out.step = -out.step;
        std::reverse(out.probs.begin(), out.probs.end());
        out.offset -= out.step * static_cast<double>(probs.size() - 1);
    }
    return out;
}

void ExactPmf::validate(double tol) const {
    double t = total();
    if (std::abs(t - 1.0) > tol)
        throw std::runtime_error("pmf total deviates from 1 by " + std::to_string(t - 1.0));
    for (double p : probs)
        if (p < -1e-15) throw std::runtime_error("pmf has a negative atom");
}

ExactPmf poisson_binomial(const std::vector<double>& ps) {
    for (double p : ps)
        if (p < 0.0 || p > 1.0) throw std::domain_error("poisson_binomial: p outside [0,1]");
    std::vector<double> pmf{1.0};
    pmf.reserve(ps.size() + 1);
    for (double p : ps) {
        pmf.push_back(0.0);
        for (size_t j = pmf.size() - 1; j > 0; --j)
            pmf[j] = pmf[j] * (1.0 - p) + pmf[j - 1] * p;
        pmf[0] *= (1.0 - p);
    }
    return ExactPmf{0.0, 1.0, std::move(pmf)};
}

ExactPmf euler_partition_pmf(double q, long n_max) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("euler_partition_pmf: q in (0,1)");
    if (n_max < 0) throw std::domain_error("euler_partition_pmf: n_max >= 0");
    const size_t N = static_cast<size_t>(n_max);
    std::vector<double> pmf(N + 1, 0.0);
    pmf[0] = 1.0;
    // part size n contributes an independent n*Geom(1-q^n); fold them in while
    // they carry mass. All updates are positive: no cancellation.
    for (long n = 1; n <= n_max; ++n) {
        double qn = std::pow(q, static_cast<double>(n));
        if (qn < 1e-300) break;
        double mean_contrib = static_cast<double>(n) * qn / (1.0 - qn);
        if (mean_contrib < 1e-18 && n > 1) break;
        for (double& v : pmf) v *= (1.0 - qn);
        for (size_t m = static_cast<size_t>(n); m <= N; ++m)
            pmf[m] += qn * pmf[m - static_cast<size_t>(n)];
    }
    ExactPmf out{0.0, 1.0, std::move(pmf)};
    double tail = 1.0 - out.total();
    if (tail > 1e-10)
        throw std::runtime_error("euler_partition_pmf: truncation tail mass " +
                                 std::to_string(tail) + " exceeds 1e-10; increase n_max");
    return out;
}

ExactPmf euler_partition_pmf_pentagonal(double q, long n_max) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("pentagonal pmf: q in (0,1)");
    const size_t N = static_cast<size_t>(n_max);
    std::vector<double> r(N + 1, 0.0);
    r[0] = 1.0;
    struct Pent { long g; double sign, qg; };
    std::vector<Pent> pents;
    for (long k = 1;; ++k) {
        long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
        double sgn = (k % 2 == 1) ? 1.0 : -1.0;
        if (g1 > n_max) break;
        pents.push_back({g1, sgn, std::pow(q, static_cast<double>(g1))});
        if (g2 <= n_max) pents.push_back({g2, sgn, std::pow(q, static_cast<double>(g2))});
    }
    for (size_t m = 1; m <= N; ++m) {
        double s = 0.0;
        for (const auto& p : pents) {
            if (static_cast<size_t>(p.g) > m) break;
            s += p.sign * p.qg * r[m - static_cast<size_t>(p.g)];
        }
        r[m] = s;
    }
    // normalizer prod (1-q^n)
    double logz = 0.0;
    for (long n = 1;; ++n) {
        double qn = std::pow(q, static_cast<double>(n));
        if (qn < 1e-18) break;
        logz += std::log1p(-qn);
    }
    double z = std::exp(logz);
    for (double& v : r) v *= z;
    ExactPmf out{0.0, 1.0, std::move(r)};
    return out;
}

ExactPmf macmahon_pmf(double q, long n_max) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("macmahon_pmf: q in (0,1)");
    const size_t N = static_cast<size_t>(n_max);
    std::vector<double> pmf(N + 1, 0.0);
    pmf[0] = 1.0;
    // part size n appears with multiplicity n
    for (long n = 1; n <= n_max; ++n) {
        double qn = std::pow(q, static_cast<double>(n));
        if (qn < 1e-300) break;
        double mean_contrib =
            static_cast<double>(n) * static_cast<double>(n) * qn / (1.0 - qn);
        if (mean_contrib < 1e-18 && n > 1) break;
        for (long rep = 0; rep < n; ++rep) {
            for (double& v : pmf) v *= (1.0 - qn);
            for (size_t m = static_cast<size_t>(n); m <= N; ++m)
                pmf[m] += qn * pmf[m - static_cast<size_t>(n)];
        }
    }
    ExactPmf out{0.0, 1.0, std::move(pmf)};
    double tail = 1.0 - out.total();
    if (tail > 1e-10)
        throw std::runtime_error("macmahon_pmf: truncation tail mass exceeds 1e-10");
    return out;
}

static void check_stochastic(const std::vector<std::vector<double>>& P) {
    const size_t M = P.size();
    if (M == 0) throw std::domain_error("markov: empty transition matrix");
    for (const auto& row : P) {
        if (row.size() != M) throw std::domain_error("markov: matrix not square");
        double s = 0.0;
        for (double v : row) {
            if (v < 0.0) throw std::domain_error("markov: negative entry");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-12)
            throw std::domain_error("markov: row sum deviates from 1 by more than 1e-12");
    }
}

std::vector<double> markov_stationary(const std::vector<std::vector<double>>& P) {
    check_stochastic(P);
    const int M = static_cast<int>(P.size());
    // solve pi (P - I) = 0 with sum(pi) = 1
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M + 1, M);
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < M; ++i) A(j, i) = P[static_cast<size_t>(i)][static_cast<size_t>(j)] - (i == j ? 1.0 : 0.0);
    for (int i = 0; i < M; ++i) A(M, i) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(M + 1);
    b(M) = 1.0;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
    std::vector<double> out(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i) {
        if (pi(i) < -1e-10) throw std::runtime_error("markov: chain appears reducible");
        out[static_cast<size_t>(i)] = std::max(pi(i), 0.0);
    }
    return out;
}

double markov_theta(const std::vector<std::vector<double>>& P) {
    const int M = static_cast<int>(P.size());
    auto pi = markov_stationary(P);
    for (double v : pi)
        if (v <= 1e-14) throw std::runtime_error("markov: stationary mass vanishes on a state");
    Eigen::MatrixXd Pm(M, M), Pt(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            Pm(i, j) = P[static_cast<size_t>(i)][static_cast<size_t>(j)];
            // time reversal P~(i,j) = pi(j) P(j,i) / pi(i)
            Pt(i, j) = pi[static_cast<size_t>(j)] * P[static_cast<size_t>(j)][static_cast<size_t>(i)] /
                       pi[static_cast<size_t>(i)];
        }
    Eigen::MatrixXd R = Pm * Pt; // similar to a symmetric PSD matrix
    // symmetrize: S = D^{1/2} R D^{-1/2} with D = diag(pi)
    Eigen::MatrixXd S(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            S(i, j) = std::sqrt(pi[static_cast<size_t>(i)]) * R(i, j) / std::sqrt(pi[static_cast<size_t>(j)]);
    S = 0.5 * (S + S.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::VectorXd ev = es.eigenvalues(); // ascending
    if (M == 1) return 0.0;
    double second = ev(M - 2);
    if (second < 0.0) second = 0.0;
    double theta = std::sqrt(second);
    if (theta >= 1.0 - 1e-12)
        throw std::runtime_error("markov: theta_P = 1, chain not ergodic enough");
    return theta;
}

ExactPmf markov_visit_pmf(const std::vector<std::vector<double>>& P, int state, long n) {
    check_stochastic(P);
    const int M = static_cast<int>(P.size());
    if (state < 0 || state >= M) throw std::domain_error("markov: state out of range");
    if (n < 0) throw std::domain_error("markov: horizon must be >= 0");
    if (n > 20000 || M > 8)
        throw std::domain_error("markov_visit_pmf: state space cap exceeded (n <= 2e4, M <= 8)");
    auto pi = markov_stationary(P);
    const size_t K = static_cast<size_t>(n) + 1;
    // D[s][c]: P[X_t = s, count = c]
    std::vector<std::vector<double>> D(static_cast<size_t>(M), std::vector<double>(K, 0.0));
    for (int s = 0; s < M; ++s) D[static_cast<size_t>(s)][0] = pi[static_cast<size_t>(s)];
    std::vector<std::vector<double>> E(static_cast<size_t>(M), std::vector<double>(K, 0.0));
    for (long t = 1; t <= n; ++t) {
        for (auto& row : E) std::fill(row.begin(), row.end(), 0.0);
        for (int s2 = 0; s2 < M; ++s2) {
            const bool inc = (s2 == state);
            auto& dst = E[static_cast<size_t>(s2)];
            for (int s1 = 0; s1 < M; ++s1) {
                const double p = P[static_cast<size_t>(s1)][static_cast<size_t>(s2)];
                if (p == 0.0) continue;
                const auto& src = D[static_cast<size_t>(s1)];
                if (inc)
                    for (size_t c = static_cast<size_t>(t); c >= 1; --c) dst[c] += p * src[c - 1];
                else
                    for (size_t c = 0; c <= static_cast<size_t>(t); ++c) dst[c] += p * src[c];
            }
        }
        D.swap(E);
    }
    std::vector<double> pmf(K, 0.0);
    for (int s = 0; s < M; ++s)
        for (size_t c = 0; c < K; ++c) pmf[c] += D[static_cast<size_t>(s)][c];
    return ExactPmf{0.0, 1.0, std::move(pmf)};
}

ReturnTimeMoments markov_return_time(const std::vector<std::vector<double>>& P, int state,
                                     double tail_tol) {
    check_stochastic(P);
    const int M = static_cast<int>(P.size());
    if (state < 0 || state >= M) throw std::domain_error("markov: state out of range");
    // f_k = P_a[T_a = k] via taboo vector u over states != a
    std::vector<double> u(static_cast<size_t>(M), 0.0);
    double m1 = 0.0, m2 = 0.0, mass = 0.0;
    double f1 = P[static_cast<size_t>(state)][static_cast<size_t>(state)];
    m1 += f1;
    m2 += f1;
    mass += f1;
    for (int s = 0; s < M; ++s)
        if (s != state) u[static_cast<size_t>(s)] = P[static_cast<size_t>(state)][static_cast<size_t>(s)];
    for (long k = 2; k < 2'000'000; ++k) {
        double fk = 0.0;
        std::vector<double> v(static_cast<size_t>(M), 0.0);
        for (int s = 0; s < M; ++s) {
            if (u[static_cast<size_t>(s)] == 0.0 || s == state) continue;
            fk += u[static_cast<size_t>(s)] * P[static_cast<size_t>(s)][static_cast<size_t>(state)];
            for (int s2 = 0; s2 < M; ++s2)
                if (s2 != state)
                    v[static_cast<size_t>(s2)] +=
                        u[static_cast<size_t>(s)] * P[static_cast<size_t>(s)][static_cast<size_t>(s2)];
        }
        double kd = static_cast<double>(k);
        m1 += kd * fk;
        m2 += kd * kd * fk;
        mass += fk;
        u.swap(v);
        double rem = 0.0;
        for (int s = 0; s < M; ++s)
            if (s != state) rem += u[static_cast<size_t>(s)];
        // remaining mass decays geometrically; k^2-weighted tail is still tiny
        // once rem * (k+bound)^2-ish drops below tolerance
        if (rem * kd * kd * 100.0 < tail_tol && 1.0 - mass - rem < tail_tol) break;
    }
    return {m1, m2 - m1 * m1};
}

ExactPmf curie_weiss_pmf(long n) {
    if (n < 1) throw std::domain_error("curie_weiss_pmf: n >= 1");
    std::vector<double> logw(static_cast<size_t>(n) + 1);
    double mx = -std::numeric_limits<double>::infinity();
    for (long k = 0; k <= n; ++k) {
        double m = static_cast<double>(2 * k - n);
        logw[static_cast<size_t>(k)] =
            log_binomial(n, k) + m * m / (2.0 * static_cast<double>(n));
        mx = std::max(mx, logw[static_cast<size_t>(k)]);
    }
    std::vector<double> w(logw.size());
    double tot = 0.0;
    for (size_t k = 0; k < w.size(); ++k) {
        w[k] = std::exp(logw[k] - mx);
        tot += w[k];
    }
    for (double& v : w) v /= tot;
    return ExactPmf{-static_cast<double>(n), 2.0, std::move(w)};
}

} // namespace modphi

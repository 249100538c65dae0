#pragma once

#include <functional>
#include <optional>
#include <string>

#include "pmf.hpp"
#include "rng.hpp"
#include "stable.hpp"

namespace modphi {

// Zone of control [-K t_n^gamma, K t_n^gamma] with index (nu, omega):
// (Z1)  |theta_n(xi) - 1| <= K1 |xi|^nu exp(K2 |xi|^omega) on the zone
// (Z2)  alpha <= omega, -1/alpha < gamma <= 1/(omega - alpha),
//       0 < K <= (c^alpha / 2 K2)^{1/(omega - alpha)}
struct ZoneOfControl {
    double K = 1.0;
    double gamma = 0.0;
    double nu = 1.0;
    double omega = 1.0;
    double K1 = 1.0;
    double K2 = 0.0;

    // throws std::domain_error when (Z2) fails for the given reference law
    void validate(double c, double alpha) const;
};

// A mod-phi convergent sequence: everything the calculus needs to know about
// X_n. Continuous families (q -> 1, R -> 1) use the index to select a rung of
// a parameter ladder; size-driven models use the index directly.
struct ModPhiModel {
    std::string name;
    StableLaw law{1.0, 2.0, 0.0};
    int dimension = 1;

    std::function<double(double)> t_of;              // index -> t_n
    std::function<cplx(double, double)> log_charfn;  // (index, xi) -> log E[e^{i xi X_n}]

    // optional capabilities
    std::function<ExactPmf(double)> pmf;                         // exact law of X_n
    std::function<double(double, RngStream&)> sample;            // one draw of X_n
    std::function<cplx(double, double, double)> log_charfn2;     // d=2: (index, xi1, xi2)
    std::function<std::pair<double, double>(double, RngStream&)> sample2;

    bool l1_mod_phi = false;              // flagged by construction, never inferred
    std::optional<ZoneOfControl> zone;    // recommended zone, when one is known
    std::function<cplx(double)> limiting_theta; // limit residue, when known

    // inversion support for the "fourier" window method: |charfn of Y_n| is
    // integrable with certified tail sup_{|xi|>X} stored as exp envelope
    double fourier_cutoff = 0.0; // 0 = method unavailable

    cplx charfn(double idx, double xi) const { return std::exp(log_charfn(idx, xi)); }

    bool has_pmf() const { return static_cast<bool>(pmf); }
    bool has_sampler() const { return static_cast<bool>(sample) || static_cast<bool>(sample2); }
};

} // namespace modphi

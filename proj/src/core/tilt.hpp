#pragma once

#include <functional>
#include <string>
#include <vector>

#include "modphi.hpp"
#include "pmf.hpp"

namespace modphi::tilt {

// lattice pmf carried in log space (tilting exponents can exceed the double
// range long before the tilted weights do)
struct LogPmf {
    double offset = 0.0;
    double step = 1.0;
    std::vector<double> logw; // unnormalized
};

// A sequence with Laplace-domain residues psi_n(z) = E[e^{z X_n}] e^{-t_n z^2 / 2}
// (real domain, mod-Gaussian).
struct LaplaceModel {
    std::string name;
    std::function<double(double)> t_of;
    std::function<cplx(double, cplx)> psi;        // (index, z)
    std::function<cplx(cplx)> psi_limit;
    std::function<ExactPmf(double)> base_pmf;     // law of X_n
    std::function<LogPmf(double)> log_base_pmf;   // same, in log space (preferred)
    std::function<double(double)> strip_cutoff;   // |x| truncation for strip integrals
    double eps_regime_max = 1.0;                  // quoted exponent range cap
};

// change of measure P_Y[dx] ∝ e^{x^2 / 2 t_n} P_X[dx]
ExactPmf tilted_pmf(const LaplaceModel& m, double idx);

// sup over the index set and m in [-M, M] of int |psi_n(x + i m)| dx.
// Throws on divergence (value beyond 1e12 reports an A3 failure).
double a3_constant(const LaplaceModel& m, double M, const std::vector<double>& idx_set,
                   int m_grid = 9);

struct DecayPoint {
    double xi = 0.0;
    double psi_hat_abs = 0.0;
    double bound = 0.0; // 2 C(M) e^{-M |xi|}
    bool pass = false;
};
std::vector<DecayPoint> fourier_decay_check(const LaplaceModel& m, double idx, double M,
                                            const std::vector<double>& xi_grid);

struct TiltedLlt {
    double index = 0.0;
    double t_n = 0.0;
    double eps = 0.0;
    double scale = 0.0;
    double x = 0.0;
    double lhs = 0.0;    // t^eps P[Y_n / t_n - x in B / t^eps]
    double target = 0.0; // psi(x) m(B) / int psi
    double abs_err = 0.0;
    double rel_err = 0.0;
    bool within_quoted_regime = true;
};
TiltedLlt tilted_local_limit(const LaplaceModel& m, double idx, double x, const Window& B,
                             double eps);

// total magnetization of the critical Curie-Weiss chain of spins; index = n.
// Base X_n = (sum of n fair signs) / n^{1/4}, t_n = sqrt(n),
// psi_n(z) = e^{-sqrt(n) z^2/2} cosh(z / n^{1/4})^n, limit e^{-z^4/12}.
LaplaceModel curie_weiss();

// int_R e^{-y^4/12} dy, by quadrature (cached)
double psi_integral_curie_weiss();

} // namespace modphi::tilt

#pragma once

#include <vector>

#include "model.hpp"
#include "testfn.hpp"

namespace modphi {

// theta_n(xi) = E[e^{i xi X_n}] e^{-t_n eta(i xi)}, accumulated in log space
cplx residue(const ModPhiModel& m, double idx, double xi);
cplx residue_log(const ModPhiModel& m, double idx, double xi);

struct ZoneIndexReport {
    double index = 0.0;
    double t_n = 0.0;
    double zone_half_width = 0.0;
    double max_ratio = 0.0;  // max over grid of |theta-1| / (K1 |xi|^nu e^{K2 |xi|^omega})
    double argmax_xi = 0.0;
    bool pass = false;       // max_ratio <= 1 + 1e-9
};

struct ZoneReport {
    ZoneOfControl zone;
    std::vector<ZoneIndexReport> per_index;
    bool all_pass = false;
};

// grid_points are split half geometric near 0, half uniform across the zone
ZoneReport verify_zone(const ModPhiModel& m, const std::vector<double>& indices,
                       const ZoneOfControl& zone, int grid_points = 1024);

// Y_n = X_n / t_n^{1/alpha}, with the (2 c beta / pi) log t_n shift at alpha = 1
double renormalize(const ModPhiModel& m, double idx, double x_value);
ExactPmf renormalized_pmf(const ModPhiModel& m, double idx);

// E[e^{i xi Y_n}]
cplx charfn_of_y(const ModPhiModel& m, double idx, double xi);

enum class WindowMethod { exact, parseval, montecarlo, fourier };

struct LltOptions {
    WindowMethod method = WindowMethod::exact;
    long mc_budget = 100'000;
    std::uint64_t seed = 1;
    double sandwich_eta = 0.02; // parseval bracket tightness
};

struct LltResult {
    double index = 0.0;
    double t_n = 0.0;
    double scale = 0.0;        // s multiplying the probability
    double x = 0.0;
    double lhs = 0.0;          // s * P[Y_n - x in B / s]  (s^d in dimension d)
    double target = 0.0;       // p_{c,alpha,beta}(x) * m(B)
    double abs_err = 0.0;
    double rel_err = 0.0;
    double bracket_lo = 0.0;   // parseval: certified bracket on lhs
    double bracket_hi = 0.0;
    double mc_stderr = 0.0;    // montecarlo: standard error of lhs
    const char* method = "exact";
};

using Window = std::vector<std::pair<double, double>>;

// local limit at scale t_n^delta
LltResult local_limit_estimate(const ModPhiModel& m, double idx, double x, const Window& B,
                               double delta, const LltOptions& opt = {});

// local limit at an arbitrary scale s_n (requires the L1-mod-phi flag)
LltResult strong_local_limit(const ModPhiModel& m, double idx, double x, const Window& B,
                             double s_n, const LltOptions& opt = {});

struct GapResult {
    double gap = 0.0;   // |E[f(Y_n)] - int f dphi|
    double bound = 0.0; // C(c, alpha, nu) K1 ||f||_1 / t_n^{nu/alpha}
};

// requires a declared zone and f.K <= K t_n^{gamma + 1/alpha}
GapResult test_function_gap(const ModPhiModel& m, double idx, const FourierTestFunction& f);

struct L1Distance {
    double truncated = 0.0; // int_{-Xi}^{Xi} |theta_n - theta|
    double tail_bound = 0.0;
    double total() const { return truncated + tail_bound; }
};

L1Distance l1_residue_distance(const ModPhiModel& m, double idx,
                               const std::function<cplx(double)>& limiting_theta,
                               double integration_bound, double tail_bound = 0.0);

// sup over grid of |F_{Y_n} - F_phi|; exact pmf when available, else Monte Carlo ECDF
double kolmogorov_distance(const ModPhiModel& m, double idx, const std::vector<double>& grid,
                           long mc_budget = 200'000, std::uint64_t seed = 1);

struct CumulantZone {
    double t_n = 0.0;
    double delta_min = 0.0; // admissible local-limit exponents (open interval)
    double delta_max = 1.0;
};

// t_n = Var(S_n) / (N_n^{2/3} D_n^{4/3}) from uniform cumulant bounds
CumulantZone cumulant_zone(double variance, double N_n, double D_n, double A);

// probability of a product window under the 2-d renormalized law (used by the
// d=2 model); Monte Carlo
struct Window2Prob {
    double p = 0.0;
    double stderr_ = 0.0;
};
Window2Prob window2_montecarlo(const ModPhiModel& m, double idx, double z1, double z2,
                               const Window& B1, const Window& B2, long budget,
                               std::uint64_t seed);

// same probability bracketed by product sandwiches g1 x g1 <= 1_{B1 x B2}
// <= g2 x g2 of a rectangle, evaluated through the 2-d Parseval identity
struct Window2Bracket {
    double lo = 0.0;
    double hi = 0.0;
};
Window2Bracket window2_parseval(const ModPhiModel& m, double idx, double z1, double z2,
                                double a1, double b1, double a2, double b2, double eta);

// two-dimensional local limit at scale t_n^delta:
//   lhs = t^{2 delta} P[Y_n - z in t^{-delta} (B1 x B2)],
//   target = e^{-|z|^2}/pi * m(B1) m(B2)
struct Llt2Result {
    double index = 0.0;
    double t_n = 0.0;
    double scale = 0.0;
    double z1 = 0.0, z2 = 0.0;
    double lhs = 0.0;
    double target = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    double mc_stderr = 0.0;
    const char* method = "montecarlo";
};
Llt2Result local_limit_2d(const ModPhiModel& m, double idx, double z1, double z2,
                          const Window& B1, const Window& B2, double delta,
                          const LltOptions& opt = {});

} // namespace modphi

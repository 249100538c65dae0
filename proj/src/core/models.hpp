#pragma once

#include <string>
#include <vector>

#include "model.hpp"
#include "modphi.hpp"

namespace modphi::models {

// --- sums of independent variables ---------------------------------------

// size of a q-weighted random integer partition; the index selects a rung of
// the q ladder. X_q = (S_q - M_q) / V_q^{4/9}, t_q = V_q^{1/9}.
ModPhiModel partition_size(std::vector<double> q_ladder);

// volume of a q-weighted random plane partition;
// X'_q = (S'_q - M'_q) / (V'_q)^{5/12}, t_q = (V'_q)^{1/12}.
ModPhiModel plane_partition_size(std::vector<double> q_ladder);

// zero counts of the hyperbolic Gaussian analytic function in growing discs;
// the index selects r2 = R^2 from the ladder. Bernoulli sum with p_k = R^{2k}.
ModPhiModel gaf_zeros(std::vector<double> r2_ladder);
ModPhiModel gaf_zeros_hyperbolic(std::vector<double> h_ladder);
double gaf_r2_from_hyperbolic_area(double h);
double gaf_hyperbolic_area(double r2);

// generic determinantal counting model from explicit eigenvalue lists
ModPhiModel determinantal_counts(std::vector<std::vector<double>> eigenvalue_ladder);

// exact mean / variance of the partition-size and plane-partition laws
struct QMoments {
    double mean = 0.0;
    double variance = 0.0;
};
QMoments partition_moments(double q);
QMoments plane_partition_moments(double q);

// --- dependent sums --------------------------------------------------------

// visits of `state` by a stationary ergodic chain; index = horizon n
ModPhiModel markov_visits(std::vector<std::vector<double>> P, int state);

// labeled triangle embeddings of an Erdos-Renyi graph G(n, p); index = n.
// Exact pmf by exhaustive enumeration for n <= 7, Monte Carlo for n <= 1000.
ModPhiModel subgraph_count(double p);

// --- two-dimensional model ---------------------------------------------

// random zeta log-values; index = prime cutoff N; dimension 2
ModPhiModel random_zeta();

struct ZetaZonePoint {
    double xi1 = 0.0, xi2 = 0.0;
    double s_bound = 0.0;       // 16 (sum 1/p^2) |xi|^2 (|xi|+2)^2
    double s_cap = 0.0;         // 8 |xi|^2 (|xi|+2)^2
    double residue_dev = 0.0;   // |theta_N(xi) - 1|
    bool s_ok = false;          // s_bound <= s_cap
    bool residue_ok = false;    // residue_dev <= s_bound e^{s_bound}
};
std::vector<ZetaZonePoint> zeta_zone_report(long prime_cutoff, int grid_per_axis,
                                            double xi_max);

// --- matrix models -------------------------------------------------------

ModPhiModel gue_logdet();                 // index = matrix size n
ModPhiModel laguerre_logdet(double beta); // index = n
double gue_centering_closed_form(double n); // (1/2)log 2pi - n/2 + (n/2) log n
double gue_centering_exact(double n);       // exact mean of log|det|

// --- L1 models -------------------------------------------------------------

ModPhiModel brownian_winding(); // index = time t; L1-mod-Cauchy
// ||theta_t - theta||_{L1} with a certified truncation, plus the closed bound
// chain ||theta||(1-e^{-1/4t}) + e^{-1/4t}(e^{(1/8t)^2}-1) + (1/8t)e^{-1/4t+(1/8t)^2}
struct WindingL1 {
    double distance = 0.0;
    double tail_bound = 0.0;
    double chain_bound = 0.0;
    double theta_l1 = 0.0;
};
WindingL1 winding_l1_distance(double t);

// --- i.i.d. sums ----------------------------------------------------------

enum class Increment { exponential, uniform, pareto };

// X_n = (S_n - A_n) * n^{1/alpha} / B_n with the classical norming; index = n
ModPhiModel iid_sum(Increment inc, double pareto_alpha = 1.5);

struct IidNorming {
    double A_n = 0.0;
    double B_n = 0.0;
    double alpha = 2.0;
    double beta = 0.0;
};
IidNorming iid_norming(Increment inc, double pareto_alpha, double n);

// --- registry --------------------------------------------------------------

// model names the experiment driver accepts ("curie_weiss" routes to the
// Laplace-domain machinery)
const std::vector<std::string>& registry_names();

} // namespace modphi::models

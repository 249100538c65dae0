#pragma once

#include <complex>
#include <vector>

#include "special.hpp"

namespace modphi {

// Finite lattice distribution: atom j sits at offset + j*step with mass probs[j].
struct ExactPmf {
    double offset = 0.0;
    double step = 1.0;
    std::vector<double> probs;

    double total() const;
    double mean() const;
    double variance() const;
    double atom(size_t j) const { return offset + step * static_cast<double>(j); }

    // E[e^{i xi X}]
    cplx charfn(double xi) const;

    // mass of the half-open window (a, b]; atoms on the boundary follow the
    // convention: excluded at a, included at b
    double mass_in(double a, double b) const;

    // pmf of s*X + c
    ExactPmf affine(double s, double c) const;

    void validate(double tol = 1e-12) const; // throws if sum != 1 within tol
};

// exact law of a sum of independent Bernoulli(p_j); O(m^2) convolution
ExactPmf poisson_binomial(const std::vector<double>& probs);

// size of a q-weighted random integer partition, truncated to sizes 0..n_max.
// Convolution over the geometric parts n*Geom(1-q^n); backward stable.
ExactPmf euler_partition_pmf(double q, long n_max);

// same quantity via the pentagonal-number recurrence on r(m) = p(m) q^m.
// Exact in exact arithmetic but numerically unstable for q above ~0.92
// (a parasitic mode of the recurrence amplifies roundoff); kept as an
// independent cross-check oracle in its stable range.
ExactPmf euler_partition_pmf_pentagonal(double q, long n_max);

// volume of a q-weighted random plane partition, sizes 0..n_max
ExactPmf macmahon_pmf(double q, long n_max);

// exact distribution of the number of visits to `state` during steps 1..n of
// a stationary ergodic chain with row-stochastic transition matrix P
ExactPmf markov_visit_pmf(const std::vector<std::vector<double>>& P, int state, long n);

std::vector<double> markov_stationary(const std::vector<std::vector<double>>& P);

// sqrt of the second largest eigenvalue of the multiplicative
// reversiblization P*P~ (Fill's constant theta_P)
double markov_theta(const std::vector<std::vector<double>>& P);

// mean and variance of the first return time to `state`, by taboo-probability
// enumeration with a certified geometric tail bound
struct ReturnTimeMoments {
    double mean = 0.0;
    double variance = 0.0;
};
ReturnTimeMoments markov_return_time(const std::vector<std::vector<double>>& P, int state,
                                     double tail_tol = 1e-13);

// total magnetization M = 2k - n of the critical Curie-Weiss model on n spins:
// weights C(n,k) exp(M^2 / 2n), normalized; lattice offset -n, step 2
ExactPmf curie_weiss_pmf(long n);

} // namespace modphi

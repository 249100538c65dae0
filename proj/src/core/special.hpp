#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace modphi {

using cplx = std::complex<double>;

namespace consts {
inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double zeta2 = 1.64493406684822643647241516664602519;
inline constexpr double zeta3 = 1.20205690315959428539973816151144999;
inline constexpr double sqrt_2pi = 2.50662827463100050241576528481104525;
} // namespace consts

// principal-branch log Gamma for Re z > 0 (reflection handles the rest)
cplx log_gamma(cplx z);
double log_gamma(double x); // real, x > 0

double digamma(double x);
double trigamma(double x);
double polygamma(int m, double x); // m in 1..8, x >= 1

// log Gamma(a + i xi) - log Gamma(a) - i xi psi(a). Exact zero at xi = 0 and
// free of the large-|log Gamma| cancellation that plagues the naive
// difference when a is huge (the mean-centered Gamma-product models sum
// millions of these).
cplx log_gamma_ratio(double a, double xi);

double log_binomial(long n, long k); // log C(n,k)

struct SeriesValue {
    double value = 0.0;
    double error_bound = 0.0; // certified truncation remainder
};

// modified Bessel I_nu(x) by its power series; nu >= -1/2, x >= 0 moderate.
// Remainder certified by a geometric-ratio tail bound.
SeriesValue bessel_i_series(double nu, double x, double tol = 1e-15);

// log I_nu(x) for the same range; survives huge orders where I_nu underflows
double log_bessel_i_series(double nu, double x, double tol = 1e-15);

// Gauss hypergeometric 2F1(a, b; 1; z) for complex a, b and real |z| <= 1/2,
// by the defining series with a certified tail bound.
cplx hyp2f1_c1(cplx a, cplx b, double z, double tol = 1e-15);

std::vector<long> prime_sieve(long n);

} // namespace modphi

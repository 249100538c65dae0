#include "special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace modphi {
namespace {

// Lanczos, g = 7, n = 9
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,    -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos_log_gamma(cplx z) {
    // valid for Re z > 0.5
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    cplx t = z + 7.5;
    return 0.91893853320467274178 /*log sqrt(2pi)*/ + (z + 0.5) * std::log(t) - t +
           std::log(x);
}

} // namespace

cplx log_gamma(cplx z) {
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    // reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
    // keep the branch continuous enough for our use (factors are exponentiated)
    cplx lg = std::log(consts::pi / std::sin(consts::pi * z)) - lanczos_log_gamma(1.0 - z);
    return lg;
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
    double r = 0.0;
    while (x < 16.0) {
        r -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series with Bernoulli numbers, |error| < B16/(16 x^16)
    double inv = 1.0 / x, inv2 = inv * inv;
    return r + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12 -
                   inv2 * (1.0 / 120 -
                           inv2 * (1.0 / 252 -
                                   inv2 * (1.0 / 240 -
                                           inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
}

double trigamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("trigamma: requires x > 0");
    double r = 0.0;
    while (x < 16.0) {
        r += 1.0 / (x * x);
        x += 1.0;
    }
    double inv = 1.0 / x, inv2 = inv * inv;
    return r + inv * (1.0 +
                      inv * (0.5 +
                             inv * (1.0 / 6 -
                                    inv2 * (1.0 / 30 -
                                            inv2 * (1.0 / 42 -
                                                    inv2 * (1.0 / 30 - inv2 * (5.0 / 66)))))));
}

double polygamma(int m, double x) {
    if (m < 1 || m > 8) throw std::domain_error("polygamma: order in 1..8");
    if (!(x > 0.0)) throw std::domain_error("polygamma: requires x > 0");
    if (m == 1) return trigamma(x);
    double r = 0.0;
    const double sign = (m % 2 == 0) ? -1.0 : 1.0; // sign of psi^{(m)} on x > 0
    while (x < 40.0) {
        r += std::tgamma(static_cast<double>(m) + 1.0) / std::pow(x, m + 1);
        x += 1.0;
    }
    // asymptotic: (m-1)!/x^m + m!/(2 x^{m+1}) + sum B_{2k} (2k+m-1)!/((2k)! x^{2k+m})
    auto fact = [](int k) { return std::tgamma(static_cast<double>(k) + 1.0); };
    const double b2k[3] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0};
    double s = fact(m - 1) / std::pow(x, m) + fact(m) / (2.0 * std::pow(x, m + 1));
    for (int k = 1; k <= 3; ++k)
        s += b2k[k - 1] * fact(2 * k + m - 1) / fact(2 * k) / std::pow(x, 2 * k + m);
    return sign * (s + r);
}

cplx log_gamma_ratio(double a, double xi) {
    if (!(a > 0.0)) throw std::domain_error("log_gamma_ratio: requires a > 0");
    if (xi == 0.0) return {0.0, 0.0};
    if (a < 100.0 || std::abs(xi) > 0.25 * a)
        return log_gamma(cplx{a, xi}) - log_gamma(cplx{a, 0.0}) -
               cplx{0.0, xi * digamma(a)};
    // Taylor in the imaginary shift: sum_{m>=1} psi^{(m)}(a) (i xi)^{m+1}/(m+1)!
    cplx iz{0.0, xi};
    cplx pw = iz; // (i xi)^m
    cplx s{0.0, 0.0};
    double factorial = 1.0; // (m+1)!
    for (int m = 1; m <= 7; ++m) {
        pw *= iz;
        factorial *= static_cast<double>(m + 1);
        s += polygamma(m, a) * pw / factorial;
    }
    return s;
}

double log_binomial(long n, long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

SeriesValue bessel_i_series(double nu, double x, double tol) {
    if (nu < -0.5) throw std::domain_error("bessel_i_series: order must be >= -1/2");
    if (x < 0.0) throw std::domain_error("bessel_i_series: argument must be >= 0");
    if (x == 0.0) return {nu == 0.0 ? 1.0 : 0.0, 0.0};
    const double q = 0.25 * x * x;
    // term_k = (x/2)^{nu+2k} / (k! Gamma(nu+k+1)); term ratio q/((k+1)(nu+k+1))
    double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    if (term == 0.0) return {0.0, 0.0}; // genuinely below the double range
    double sum = term;
    double bound = 0.0;
    for (int k = 0; k < 500; ++k) {
        double ratio = q / ((k + 1.0) * (nu + k + 1.0));
        term *= ratio;
        sum += term;
        if (ratio < 0.5 && std::abs(term) * ratio / (1.0 - ratio) < tol * std::abs(sum)) {
            bound = std::abs(term) * ratio / (1.0 - ratio);
            return {sum, bound};
        }
    }
    throw std::runtime_error("bessel_i_series: no convergence within 500 terms");
}

double log_bessel_i_series(double nu, double x, double tol) {
    if (nu < -0.5) throw std::domain_error("log_bessel_i_series: order must be >= -1/2");
    if (!(x > 0.0)) throw std::domain_error("log_bessel_i_series: argument must be > 0");
    const double q = 0.25 * x * x;
    // leading factor in log space, the normalized series stays near 1
    double u = 1.0, s = 1.0;
    for (int k = 0; k < 500; ++k) {
        double ratio = q / ((k + 1.0) * (nu + k + 1.0));
        u *= ratio;
        s += u;
        if (ratio < 0.5 && u * ratio / (1.0 - ratio) < tol * s)
            return nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) + std::log(s);
    }
    throw std::runtime_error("log_bessel_i_series: no convergence within 500 terms");
}

cplx hyp2f1_c1(cplx a, cplx b, double z, double tol) {
    if (std::abs(z) > 0.5 + 1e-12)
        throw std::domain_error("hyp2f1_c1: series evaluator requires |z| <= 1/2");
    cplx term{1.0, 0.0}, sum{1.0, 0.0};
    for (int m = 0; m < 400; ++m) {
        double md = static_cast<double>(m);
        term *= (a + md) * (b + md) / ((1.0 + md) * (1.0 + md)) * z;
        sum += term;
        // ratio of consecutive absolute terms is eventually <= rho < 1
        double rho = std::abs(z) * (std::abs(a) + md + 1.0) * (std::abs(b) + md + 1.0) /
                     ((md + 2.0) * (md + 2.0));
        if (rho < 0.75 && std::abs(term) * rho / (1.0 - rho) < tol * std::abs(sum))
            return sum;
    }
    throw std::runtime_error("hyp2f1_c1: no convergence within 400 terms");
}

std::vector<long> prime_sieve(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<size_t>(n) + 1, false);
    for (long i = 2; i * i <= n; ++i)
        if (!comp[static_cast<size_t>(i)])
            for (long j = i * i; j <= n; j += i) comp[static_cast<size_t>(j)] = true;
    for (long i = 2; i <= n; ++i)
        if (!comp[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

} // namespace modphi

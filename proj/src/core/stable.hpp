#pragma once

#include <complex>

#include "quadrature.hpp"
#include "special.hpp"

namespace modphi {

// Stable law phi_{c,alpha,beta}: Fourier transform e^{eta(i xi)} with
//   eta(i xi) = -|c xi|^alpha (1 - i beta h(alpha, xi) sgn xi),
//   h = tan(pi alpha / 2) for alpha != 1, -(2/pi) log|xi| for alpha = 1.
class StableLaw {
public:
    StableLaw(double c, double alpha, double beta);

    double c() const { return c_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    cplx levy_exponent(double xi) const;

    // density by Fourier inversion of e^{eta(i xi)}; adaptive quadrature over
    // the decaying band plus a certified tail bound
    double density(double x) const;

    // density at 0 by the convergent Gamma-ratio series; requires
    // |beta tan(alpha pi / 2)| < 1
    double density_at_zero_series() const;

    // |t eta(i xi / t^{1/alpha}) - eta(i xi)| (alpha != 1), with the
    // (2 c beta / pi)(log t)(i xi) correction included for alpha = 1
    double scaling_defect(double t, double xi) const;

    // mass of the interval (a, b] under the law, by inversion with the
    // interval kernel; arch-aligned panels keep large |a|,|b| affordable
    QuadResult mass_in(double a, double b) const;

    // quadrature tolerances (constructor-adjustable knobs)
    struct Tolerances {
        double density_abs_tol = 1e-11;
        double series_tol = 1e-12;
        double tail_exponent = 40.0; // integrate to (c xi)^alpha = this
    };
    StableLaw(double c, double alpha, double beta, Tolerances tol);

    double band_limit() const; // Xi with e^{-(c Xi)^alpha} below tail cutoff

private:
    double c_, alpha_, beta_;
    Tolerances tol_{};
};

} // namespace modphi

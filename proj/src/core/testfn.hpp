#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "quadrature.hpp"
#include "special.hpp"

namespace modphi {

// A real integrable function known through its compactly supported Fourier
// transform fhat(xi) = int f(x) e^{i x xi} dx, supported in [-K, K].
// Inversion: f(x) = (1/2pi) int_{-K}^{K} fhat(xi) e^{-i xi x} d xi.
struct FourierTestFunction {
    double K = 0.0;
    std::function<cplx(double)> fhat;   // zero outside [-K, K]
    std::function<double(double)> eval; // pointwise values of f
    double l1_norm = 0.0;               // ||f||_{L1}
    double integral = 0.0;              // int f dx = fhat(0)

    bool is_zero() const { return !fhat; }

    // f(s (x - x0)); band limit scales to s K, L1 norm to ||f||/s
    FourierTestFunction scaled_shifted(double s, double x0) const;

    // pointwise evaluation through the inversion integral (cross-check path)
    double eval_by_inversion(double x) const;
};

namespace testfn {

// Beurling's band-limited majorant of sgn and its Fourier transform data
double beurling_b(double z);

// Extremal majorant/minorant of the indicator of (a, b) with Fourier support
// in [-K, K]; the one-sided integral excess/deficit is exactly 2 pi / K.
FourierTestFunction selberg_majorant(double a, double b, double K);
FourierTestFunction selberg_minorant(double a, double b, double K);

// g1 <= 1_B <= g2 for B a disjoint union of open intervals, with
// int (g2 - g1) <= eta. Throws std::invalid_argument on overlapping intervals.
std::pair<FourierTestFunction, FourierTestFunction>
sandwich_indicator(const std::vector<std::pair<double, double>>& intervals, double eta);

// triangle spectrum fhat(xi) = max(0, 1 - |xi|/K); f >= 0, int f = 1
FourierTestFunction fejer(double K);

// fhat sampled on a uniform grid over [-K, K] (linear interpolation between
// samples); l1_norm is computed by inversion quadrature over [-width, width]
FourierTestFunction from_sampled(double K, std::vector<cplx> samples, double l1_window = 200.0);

// E[f(Y)] = (1/2pi) int fhat(xi) E[e^{-i xi Y}] d xi for charfn(xi) = E[e^{i xi Y}].
// Throws if the imaginary residue after symmetrization exceeds imag_tol.
double expectation_via_parseval(const FourierTestFunction& f,
                                const std::function<cplx(double)>& charfn,
                                double imag_tol = 1e-8);

} // namespace testfn
} // namespace modphi

#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modphi {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadResult {
    double value = 0.0;
    double error_bound = 0.0; // certified estimate of |value - true|
    long evaluations = 0;
};

struct QuadResultC {
    std::complex<double> value{0.0, 0.0};
    double error_bound = 0.0;
    long evaluations = 0;
};

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    long max_evaluations = 2'000'000;
    // extra interior split points (e.g. phase zeros of an oscillatory factor)
    std::vector<double> breakpoints{};
    // if > 0, no initial panel is wider than this
    double max_panel_width = 0.0;
};

// Adaptive Gauss-Kronrod (7,15) on a finite interval. Throws QuadratureError
// when the budget is exhausted before the tolerance is met.
QuadResult integrate_real(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opt = {});

QuadResultC integrate_complex(const std::function<std::complex<double>(double)>& f,
                              double a, double b, const QuadOptions& opt = {});

template <typename F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    using R = std::invoke_result_t<F&, double>;
    if constexpr (std::is_convertible_v<R, double>) {
        return integrate_real(std::function<double(double)>(std::forward<F>(f)), a, b, opt);
    } else {
        return integrate_complex(std::function<std::complex<double>(double)>(std::forward<F>(f)),
                                 a, b, opt);
    }
}

// Non-adaptive: sum of one GK15 panel per arch [a + k*h, a + (k+1)*h].
// Used for Dirichlet-kernel style integrands where the panels are aligned
// with the oscillation and adaptivity would be wasted.
double integrate_arches(const std::function<double(double)>& f, double a,
                        double width, long n_arches);

// 15-point Kronrod nodes and weights for fixed tensor-product grids
std::vector<std::pair<double, double>> gk15_nodes(double a, double b);

} // namespace modphi

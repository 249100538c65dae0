#include "testfn.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace modphi {

FourierTestFunction FourierTestFunction::scaled_shifted(double s, double x0) const {
    if (!(s > 0.0)) throw std::domain_error("scaled_shifted: scale must be > 0");
    FourierTestFunction g;
    g.K = K * s;
    auto base_hat = fhat;
    g.fhat = [base_hat, s, x0](double xi) -> cplx {
        return std::polar(1.0, x0 * xi) * base_hat(xi / s) / s;
    };
    auto base_eval = eval;
    g.eval = [base_eval, s, x0](double x) { return base_eval(s * (x - x0)); };
    g.l1_norm = l1_norm / s;
    g.integral = integral / s;
    return g;
}

double FourierTestFunction::eval_by_inversion(double x) const {
    auto f = fhat;
    auto integrand = [f, x](double xi) -> cplx {
        return f(xi) * std::polar(1.0, -xi * x);
    };
    QuadOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-11;
    opt.breakpoints = {0.0};
    opt.max_panel_width = consts::pi / (1.0 + std::abs(x));
    opt.max_evaluations = 4'000'000;
    auto r = integrate(integrand, -K, K, opt);
    return r.value.real() / consts::two_pi;
}

namespace testfn {
namespace {

double sinc_sq_pi(double u) {
    // (sin(pi u) / (pi u))^2 with the u = 0 limit
    if (std::abs(u) < 1e-8) {
        double t = consts::pi * u;
        return 1.0 - t * t / 3.0;
    }
    double s = std::sin(consts::pi * u) / (consts::pi * u);
    return s * s;
}

// Bhat(z) - 2i/z on |z| < 2pi, where Bhat is the transform of Beurling's
// majorant of sgn: Bhat(z) = (i/pi) sgn z + (1 - |z|/2pi)(1 + i cot(z/2)).
cplx bhat_reg(double z) {
    const double az = std::abs(z);
    const double s = (z >= 0.0) ? 1.0 : -1.0;
    if (az < 1e-3) {
        // pole removed; series through z^3
        double re = 1.0 - az / consts::two_pi;
        double im = -z / 6.0 + z * az / (12.0 * consts::pi) - z * z * z / 360.0 +
                    z * az * az * az / (720.0 * consts::pi);
        return {re, im};
    }
    if (az < consts::pi) {
        double cot = std::cos(0.5 * az) / std::sin(0.5 * az);
        cplx v = cplx{0.0, s / consts::pi} +
                 (1.0 - az / consts::two_pi) * cplx{1.0, s * cot};
        return v - cplx{0.0, 2.0 / z};
    }
    // reflect about the band edge where cot(z/2) has a benign 0*inf limit
    const double u = consts::two_pi - az;
    cplx v{u / consts::two_pi, s / consts::pi};
    if (u > 1e-300)
        v += cplx{0.0, -(u / consts::two_pi) * s * std::cos(0.5 * u) / std::sin(0.5 * u)};
    else
        v += cplx{0.0, -s / consts::pi};
    return v - cplx{0.0, 2.0 / z};
}

// fhat of the Selberg pair for (a,b) at band K; sign > 0 majorant, < 0 minorant
cplx selberg_hat(double a, double b, double K, double xi, int sign) {
    if (std::abs(xi) >= K) return {0.0, 0.0};
    const double delta = K / consts::two_pi;
    const cplx R = bhat_reg(xi / delta);
    const cplx ea = std::polar(1.0, a * xi), eb = std::polar(1.0, b * xi);
    cplx pole;
    if (std::abs(xi) < 1e-12) {
        pole = {b - a, 0.0};
    } else {
        pole = 2.0 * std::polar(1.0, 0.5 * (a + b) * xi) *
               (std::sin(0.5 * (b - a) * xi) / xi);
    }
    if (sign > 0) return pole + (ea * R + eb * std::conj(R)) / (2.0 * delta);
    return pole - (ea * std::conj(R) + eb * R) / (2.0 * delta);
}

double l1_by_quadrature(const std::function<double(double)>& g, double a, double b,
                        double delta) {
    // |g| decays like 1/(pi delta (x - edge))^2 outside (a,b); integrate over a
    // wide window and bound the rest
    const double W = 2.0e4 / delta;
    QuadOptions opt;
    opt.abs_tol = 1e-9;
    opt.rel_tol = 1e-8;
    opt.max_panel_width = 0.45 / delta; // arches of sin^2(pi delta x)
    opt.max_evaluations = 30'000'000;
    opt.breakpoints = {a, b};
    auto absg = [g](double x) { return std::abs(g(x)); };
    double v = integrate(absg, a - W, b + W, opt).value;
    double tail = 2.0 / (consts::pi * consts::pi * delta * (W * delta));
    return v + tail;
}

} // namespace

double beurling_b(double z) {
    if (z == 0.0) return 1.0;
    if (z >= -0.5) {
        double s2 = std::sin(consts::pi * z);
        s2 = s2 * s2 / (consts::pi * consts::pi);
        return 1.0 + 2.0 * s2 * (1.0 / z - trigamma(1.0 + z));
    }
    // z < -0.5: climb trigamma to positive arguments; u is the distance to the
    // nearest integer -m
    const long m = std::lround(-z);
    const double u = z + static_cast<double>(m);
    const double md = static_cast<double>(m);
    double s2 = std::sin(consts::pi * u);
    s2 = s2 * s2 / (consts::pi * consts::pi);
    double reg = trigamma(1.0 + u) + trigamma(1.0 - u) - trigamma(md - u);
    return 1.0 - 2.0 * sinc_sq_pi(u) + 2.0 * s2 * (1.0 / z - reg);
}

FourierTestFunction selberg_majorant(double a, double b, double K) {
    if (!(a < b)) throw std::invalid_argument("selberg_majorant: requires a < b");
    if (!(K > 0.0)) throw std::invalid_argument("selberg_majorant: requires K > 0");
    const double delta = K / consts::two_pi;
    FourierTestFunction f;
    f.K = K;
    f.fhat = [a, b, K](double xi) { return selberg_hat(a, b, K, xi, +1); };
    f.eval = [a, b, delta](double x) {
        return 0.5 * (beurling_b(delta * (x - a)) + beurling_b(delta * (b - x)));
    };
    f.integral = (b - a) + consts::two_pi / K;
    f.l1_norm = f.integral; // the majorant is nonnegative
    return f;
}

FourierTestFunction selberg_minorant(double a, double b, double K) {
    if (!(a < b)) throw std::invalid_argument("selberg_minorant: requires a < b");
    if (!(K > 0.0)) throw std::invalid_argument("selberg_minorant: requires K > 0");
    const double delta = K / consts::two_pi;
    FourierTestFunction f;
    f.K = K;
    f.fhat = [a, b, K](double xi) { return selberg_hat(a, b, K, xi, -1); };
    f.eval = [a, b, delta](double x) {
        return 0.5 * (-beurling_b(-delta * (x - a)) - beurling_b(-delta * (b - x)));
    };
    f.integral = (b - a) - consts::two_pi / K;
    f.l1_norm = l1_by_quadrature(f.eval, a, b, delta);
    return f;
}

std::pair<FourierTestFunction, FourierTestFunction>
sandwich_indicator(const std::vector<std::pair<double, double>>& intervals, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("sandwich_indicator: eta must be > 0");
    if (intervals.empty()) {
        FourierTestFunction z;
        z.K = 1.0;
        z.fhat = [](double) { return cplx{0.0, 0.0}; };
        z.eval = [](double) { return 0.0; };
        return {z, z};
    }
    auto sorted = intervals;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].first < sorted[i].second))
            throw std::invalid_argument("sandwich_indicator: degenerate interval");
        if (i + 1 < sorted.size() && sorted[i].second > sorted[i + 1].first)
            throw std::invalid_argument("sandwich_indicator: intervals overlap");
    }
    const double K = 4.0 * consts::pi * static_cast<double>(sorted.size()) / eta;
    std::vector<FourierTestFunction> majs, mins;
    for (auto [a, b] : sorted) {
        majs.push_back(selberg_majorant(a, b, K));
        mins.push_back(selberg_minorant(a, b, K));
    }
    auto combine = [K](std::vector<FourierTestFunction> parts) {
        FourierTestFunction f;
        f.K = K;
        f.fhat = [parts](double xi) {
            cplx s{0.0, 0.0};
            for (const auto& p : parts) s += p.fhat(xi);
            return s;
        };
        f.eval = [parts](double x) {
            double s = 0.0;
            for (const auto& p : parts) s += p.eval(x);
            return s;
        };
        for (const auto& p : parts) {
            f.integral += p.integral;
            f.l1_norm += p.l1_norm; // triangle bound is enough for the uses below
        }
        return f;
    };
    return {combine(std::move(mins)), combine(std::move(majs))};
}

FourierTestFunction fejer(double K) {
    if (!(K > 0.0)) throw std::invalid_argument("fejer: requires K > 0");
    FourierTestFunction f;
    f.K = K;
    f.fhat = [K](double xi) -> cplx {
        double v = 1.0 - std::abs(xi) / K;
        return {v > 0.0 ? v : 0.0, 0.0};
    };
    f.eval = [K](double x) {
        if (std::abs(x) < 1e-12) {
            return K / consts::two_pi;
        }
        double s = std::sin(0.5 * K * x) / (0.5 * K * x);
        return (K / consts::two_pi) * s * s;
    };
    f.integral = 1.0;
    f.l1_norm = 1.0;
    return f;
}

FourierTestFunction from_sampled(double K, std::vector<cplx> samples, double l1_window) {
    if (samples.size() < 2) throw std::invalid_argument("from_sampled: need >= 2 samples");
    FourierTestFunction f;
    f.K = K;
    const double step = 2.0 * K / static_cast<double>(samples.size() - 1);
    auto grid = std::make_shared<std::vector<cplx>>(std::move(samples));
    f.fhat = [K, step, grid](double xi) -> cplx {
        if (std::abs(xi) >= K) return {0.0, 0.0};
        double pos = (xi + K) / step;
        auto i = static_cast<size_t>(pos);
        if (i + 1 >= grid->size()) i = grid->size() - 2;
        double w = pos - static_cast<double>(i);
        return (*grid)[i] * (1.0 - w) + (*grid)[i + 1] * w;
    };
    FourierTestFunction probe = f;
    f.eval = [probe](double x) { return probe.eval_by_inversion(x); };
    f.integral = f.fhat(0.0).real();
    QuadOptions opt;
    opt.abs_tol = 1e-8;
    opt.rel_tol = 1e-7;
    opt.max_evaluations = 2'000'000;
    auto absf = [&](double x) { return std::abs(f.eval(x)); };
    f.l1_norm = integrate(absf, -l1_window, l1_window, opt).value;
    return f;
}

double expectation_via_parseval(const FourierTestFunction& f,
                                const std::function<cplx(double)>& charfn,
                                double imag_tol) {
    if (f.is_zero()) return 0.0;
    if (std::abs(charfn(0.0) - cplx{1.0, 0.0}) > 1e-9)
        throw std::invalid_argument("expectation_via_parseval: charfn(0) must equal 1");
    auto fh = f.fhat;
    auto integrand = [fh, &charfn](double xi) -> cplx {
        return fh(xi) * std::conj(charfn(xi));
    };
    QuadOptions opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-9;
    opt.breakpoints = {0.0};
    opt.max_evaluations = 20'000'000;
    auto r = integrate(integrand, -f.K, f.K, opt);
    cplx v = r.value / consts::two_pi;
    if (std::abs(v.imag()) > imag_tol * (1.0 + std::abs(v.real())))
        throw std::runtime_error("expectation_via_parseval: imaginary residue " +
                                 std::to_string(v.imag()));
    return v.real();
}

} // namespace testfn
} // namespace modphi

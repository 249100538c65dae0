#include "tilt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modphi::tilt {

ExactPmf tilted_pmf(const LaplaceModel& m, double idx) {
    const double t = m.t_of(idx);
    LogPmf base;
    if (m.log_base_pmf) {
        base = m.log_base_pmf(idx);
    } else if (m.base_pmf) {
        ExactPmf p = m.base_pmf(idx);
        base.offset = p.offset;
        base.step = p.step;
        base.logw.reserve(p.probs.size());
        for (double v : p.probs)
            base.logw.push_back(v > 0.0 ? std::log(v)
                                        : -std::numeric_limits<double>::infinity());
    } else {
        throw std::domain_error("tilted_pmf: model carries no base pmf");
    }
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(base.logw.size());
    for (size_t j = 0; j < lw.size(); ++j) {
        double x = base.offset + base.step * static_cast<double>(j);
        lw[j] = base.logw[j] + x * x / (2.0 * t);
        mx = std::max(mx, lw[j]);
    }
    if (!std::isfinite(mx)) throw std::runtime_error("tilted_pmf: empty base pmf");
    std::vector<double> w(lw.size());
    double tot = 0.0;
    for (size_t j = 0; j < w.size(); ++j) {
        w[j] = std::exp(lw[j] - mx);
        tot += w[j];
    }
    for (double& v : w) v /= tot;
    return ExactPmf{base.offset, base.step, std::move(w)};
}

double a3_constant(const LaplaceModel& m, double M, const std::vector<double>& idx_set,
                   int m_grid) {
    if (!(M >= 0.0)) throw std::domain_error("a3_constant: M >= 0");
    if (!m.psi) throw std::domain_error("a3_constant: model has no psi evaluator");
    double sup = 0.0;
    for (double idx : idx_set) {
        const double X = m.strip_cutoff ? m.strip_cutoff(idx) : 50.0;
        for (int g = 0; g < std::max(m_grid, 1); ++g) {
            const double mm =
                (m_grid <= 1) ? M : -M + 2.0 * M * static_cast<double>(g) / (m_grid - 1);
            auto integrand = [&](double x) { return std::abs(m.psi(idx, cplx{x, mm})); };
            QuadOptions opt;
            opt.abs_tol = 1e-10;
            opt.rel_tol = 1e-8;
            opt.max_evaluations = 8'000'000;
            double v = integrate(integrand, -X, X, opt).value;
            if (v > 1e12)
                throw std::runtime_error("a3_constant: strip integral diverges (A3 fails)");
            sup = std::max(sup, v);
        }
    }
    return sup;
}

std::vector<DecayPoint> fourier_decay_check(const LaplaceModel& m, double idx, double M,
                                            const std::vector<double>& xi_grid) {
    const double cM = a3_constant(m, M, {idx});
    const double X = m.strip_cutoff ? m.strip_cutoff(idx) : 50.0;
    std::vector<DecayPoint> out;
    for (double xi : xi_grid) {
        auto integrand = [&](double x) -> cplx {
            return m.psi(idx, cplx{x, 0.0}) * std::polar(1.0, x * xi);
        };
        QuadOptions opt;
        opt.abs_tol = 1e-11;
        opt.rel_tol = 1e-9;
        opt.max_panel_width = consts::pi / (1.0 + std::abs(xi));
        opt.max_evaluations = 8'000'000;
        DecayPoint pt;
        pt.xi = xi;
        pt.psi_hat_abs = std::abs(integrate(integrand, -X, X, opt).value);
        pt.bound = 2.0 * cM * std::exp(-M * std::abs(xi));
        pt.pass = pt.psi_hat_abs <= pt.bound * (1.0 + 1e-9) + 1e-12;
        out.push_back(pt);
    }
    return out;
}

TiltedLlt tilted_local_limit(const LaplaceModel& m, double idx, double x, const Window& B,
                             double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("tilted_local_limit: eps in (0, 1]");
    TiltedLlt r;
    r.index = idx;
    r.t_n = m.t_of(idx);
    r.eps = eps;
    r.scale = std::pow(r.t_n, eps);
    r.x = x;
    r.within_quoted_regime = eps <= m.eps_regime_max + 1e-12;

    ExactPmf ty = tilted_pmf(m, idx).affine(1.0 / r.t_n, 0.0); // law of Y_n / t_n
    double p = 0.0, mB = 0.0;
    for (auto [a, b] : B) {
        if (!(a < b)) throw std::invalid_argument("tilted_local_limit: window needs a < b");
        p += ty.mass_in(x + a / r.scale, x + b / r.scale);
        mB += b - a;
    }
    r.lhs = r.scale * p;

    auto psi_int = [&] {
        QuadOptions opt;
        opt.abs_tol = 1e-12;
        opt.rel_tol = 1e-10;
        auto f = [&](double y) { return m.psi_limit(cplx{y, 0.0}).real(); };
        double X = 14.0;
        return integrate(f, -X, X, opt).value;
    };
    const double In = psi_int();
    r.target = m.psi_limit(cplx{x, 0.0}).real() * mB / In;
    r.abs_err = std::abs(r.lhs - r.target);
    r.rel_err = r.target != 0.0 ? r.abs_err / std::abs(r.target)
                                : std::numeric_limits<double>::infinity();
    return r;
}

LaplaceModel curie_weiss() {
    LaplaceModel m;
    m.name = "curie_weiss";
    m.eps_regime_max = 0.5;
    m.t_of = [](double idx) {
        double n = std::round(idx);
        if (!(n >= 1.0)) throw std::domain_error("curie_weiss: n >= 1");
        return std::sqrt(n);
    };
    m.psi = [](double idx, cplx z) -> cplx {
        double n = std::round(idx);
        cplx w = z / std::pow(n, 0.25);
        // exp(n log cosh w - sqrt(n) z^2 / 2); integer n makes the branch moot
        return std::exp(n * std::log(std::cosh(w)) - std::sqrt(n) * z * z * 0.5);
    };
    m.psi_limit = [](cplx z) -> cplx { return std::exp(-z * z * z * z / 12.0); };
    m.log_base_pmf = [](double idx) {
        long n = static_cast<long>(std::round(idx));
        LogPmf p;
        p.offset = -static_cast<double>(n) / std::pow(static_cast<double>(n), 0.25);
        p.step = 2.0 / std::pow(static_cast<double>(n), 0.25);
        const double ln2 = std::log(2.0);
        p.logw.reserve(static_cast<size_t>(n) + 1);
        for (long k = 0; k <= n; ++k)
            p.logw.push_back(log_binomial(n, k) - static_cast<double>(n) * ln2);
        return p;
    };
    auto lbp = m.log_base_pmf;
    m.base_pmf = [lbp](double idx) {
        LogPmf lp = lbp(idx);
        std::vector<double> w(lp.logw.size());
        for (size_t j = 0; j < w.size(); ++j) w[j] = std::exp(lp.logw[j]);
        return ExactPmf{lp.offset, lp.step, std::move(w)};
    };
    m.strip_cutoff = [](double idx) {
        double n = std::round(idx);
        return 2.0 * std::pow(n, 0.25) + 12.0;
    };
    return m;
}

double psi_integral_curie_weiss() {
    static const double value = [] {
        QuadOptions opt;
        opt.abs_tol = 1e-13;
        opt.rel_tol = 1e-12;
        auto f = [](double y) { return std::exp(-y * y * y * y / 12.0); };
        return integrate(f, -14.0, 14.0, opt).value;
    }();
    return value;
}

} // namespace modphi::tilt

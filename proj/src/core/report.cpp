#include "report.hpp"

#include <charconv>

namespace modphi::report {

namespace {
ordered_json window_json(const Window& B) {
    ordered_json w = ordered_json::array();
    for (auto [a, b] : B) w.push_back(ordered_json::array({a, b}));
    return w;
}
} // namespace

ordered_json llt_json(const std::string& model, const LltResult& r, double delta,
                      const Window& B, std::uint64_t seed) {
    ordered_json j;
    j["model"] = model;
    j["n"] = r.index;
    j["delta"] = delta;
    j["x"] = r.x;
    j["window"] = window_json(B);
    j["lhs"] = r.lhs;
    j["target"] = r.target;
    j["abs_err"] = r.abs_err;
    j["rel_err"] = r.rel_err;
    j["method"] = r.method;
    j["seed"] = seed;
    j["t_n"] = r.t_n;
    j["scale"] = r.scale;
    if (std::string(r.method) == "parseval") {
        j["bracket_lo"] = r.bracket_lo;
        j["bracket_hi"] = r.bracket_hi;
    }
    if (std::string(r.method) == "montecarlo") j["mc_stderr"] = r.mc_stderr;
    return j;
}

ordered_json tilted_llt_json(const std::string& model, const tilt::TiltedLlt& r,
                             const Window& B, std::uint64_t seed) {
    ordered_json j;
    j["model"] = model;
    j["n"] = r.index;
    j["delta"] = r.eps;
    j["x"] = r.x;
    j["window"] = window_json(B);
    j["lhs"] = r.lhs;
    j["target"] = r.target;
    j["abs_err"] = r.abs_err;
    j["rel_err"] = r.rel_err;
    j["method"] = "tilted_exact";
    j["seed"] = seed;
    j["t_n"] = r.t_n;
    j["scale"] = r.scale;
    j["within_quoted_regime"] = r.within_quoted_regime;
    return j;
}

ordered_json zone_json(const std::string& model, const ZoneReport& r) {
    ordered_json j;
    j["model"] = model;
    j["zone"] = {{"K", r.zone.K},   {"gamma", r.zone.gamma}, {"nu", r.zone.nu},
                 {"omega", r.zone.omega}, {"K1", r.zone.K1},  {"K2", r.zone.K2}};
    ordered_json rows = ordered_json::array();
    for (const auto& p : r.per_index) {
        ordered_json row;
        row["n"] = p.index;
        row["t_n"] = p.t_n;
        row["zone_half_width"] = p.zone_half_width;
        row["max_ratio"] = p.max_ratio;
        row["argmax_xi"] = p.argmax_xi;
        row["pass"] = p.pass;
        rows.push_back(row);
    }
    j["per_index"] = rows;
    j["all_pass"] = r.all_pass;
    return j;
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_header() {
    return "model,n,t_n,delta,x,window_a,window_b,lhs,target,abs_err,rel_err,method,seed";
}

std::string csv_row(const std::string& model, const LltResult& r, double delta,
                    const Window& B, std::uint64_t seed) {
    const double wa = B.empty() ? 0.0 : B.front().first;
    const double wb = B.empty() ? 0.0 : B.back().second;
    std::string s = model;
    auto add = [&s](const std::string& v) {
        s += ',';
        s += v;
    };
    add(format_double(r.index));
    add(format_double(r.t_n));
    add(format_double(delta));
    add(format_double(r.x));
    add(format_double(wa));
    add(format_double(wb));
    add(format_double(r.lhs));
    add(format_double(r.target));
    add(format_double(r.abs_err));
    add(format_double(r.rel_err));
    add(r.method);
    add(std::to_string(seed));
    return s;
}

} // namespace modphi::report

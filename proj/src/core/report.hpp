#pragma once

#include <json.hpp>

#include "modphi.hpp"
#include "tilt.hpp"

namespace modphi::report {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "modphi 1.0.0";

// fixed field order: model, n, delta, x, window, lhs, target, abs_err,
// rel_err, method, seed
ordered_json llt_json(const std::string& model, const LltResult& r, double delta,
                      const Window& B, std::uint64_t seed);
ordered_json tilted_llt_json(const std::string& model, const tilt::TiltedLlt& r,
                             const Window& B, std::uint64_t seed);
ordered_json zone_json(const std::string& model, const ZoneReport& r);

// model,n,t_n,delta,x,window_a,window_b,lhs,target,abs_err,rel_err,method,seed
std::string csv_header();
std::string csv_row(const std::string& model, const LltResult& r, double delta,
                    const Window& B, std::uint64_t seed);

std::string format_double(double v); // shortest round-trip, deterministic

} // namespace modphi::report

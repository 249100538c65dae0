#include "modphi/modphi.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "driver.hpp"
#include "models.hpp"
#include "report.hpp"

using namespace modphi;
using report::ordered_json;

struct mp_stable {
    StableLaw law;
};
struct mp_model {
    driver::AnyModel any;
    ordered_json params;
};

namespace {

thread_local std::string g_last_error;

mp_status fail(mp_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename F>
mp_status guarded(F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        return fail(MP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(MP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const QuadratureError& e) {
        return fail(MP_ERR_NUMERICAL, e.what());
    } catch (const std::exception& e) {
        return fail(MP_ERR_INTERNAL, e.what());
    }
}

} // namespace

extern "C" {

const char* mp_version(void) { return report::kToolVersion; }

const char* mp_last_error(void) { return g_last_error.c_str(); }

void mp_string_free(char* s) { std::free(s); }

mp_status mp_stable_create(double c, double alpha, double beta, mp_stable** out) {
    if (!out) return fail(MP_ERR_INVALID_ARGUMENT, "null out-parameter");
    return guarded([&] {
        *out = new mp_stable{StableLaw(c, alpha, beta)};
        return MP_OK;
    });
}

void mp_stable_free(mp_stable* law) { delete law; }

mp_status mp_stable_levy_exponent(const mp_stable* law, double xi, double* re, double* im) {
    if (!law || !re || !im) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        cplx v = law->law.levy_exponent(xi);
        *re = v.real();
        *im = v.imag();
        return MP_OK;
    });
}

mp_status mp_stable_density(const mp_stable* law, double x, double* out) {
    if (!law || !out) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = law->law.density(x);
        return MP_OK;
    });
}

mp_status mp_stable_density_zero_series(const mp_stable* law, double* out) {
    if (!law || !out) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = law->law.density_at_zero_series();
        return MP_OK;
    });
}

mp_status mp_stable_scaling_defect(const mp_stable* law, double t, double xi, double* out) {
    if (!law || !out) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = law->law.scaling_defect(t, xi);
        return MP_OK;
    });
}

mp_status mp_model_names(char** json_array) {
    if (!json_array) return fail(MP_ERR_INVALID_ARGUMENT, "null out-parameter");
    ordered_json j = ordered_json::array();
    for (const auto& n : models::registry_names()) j.push_back(n);
    *json_array = dup_string(j.dump());
    return MP_OK;
}

mp_status mp_model_create(const char* name, const char* params_json, mp_model** out) {
    if (!name || !out) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() -> mp_status {
        ordered_json params = ordered_json::object();
        if (params_json && *params_json) {
            params = ordered_json::parse(params_json, nullptr, false);
            if (params.is_discarded())
                return fail(MP_ERR_INVALID_ARGUMENT, "params_json: parse error");
        }
        try {
            auto any = driver::make_model(name, params);
            *out = new mp_model{std::move(any), std::move(params)};
        } catch (const std::invalid_argument& e) {
            if (std::string(e.what()).rfind("unknown model", 0) == 0)
                return fail(MP_ERR_UNKNOWN_MODEL, e.what());
            throw;
        }
        return MP_OK;
    });
}

void mp_model_free(mp_model* m) { delete m; }

mp_status mp_model_info(const mp_model* m, char** json) {
    if (!m || !json) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        ordered_json j;
        j["name"] = m->any.name;
        j["params"] = m->params;
        if (m->any.is_laplace) {
            j["kind"] = "laplace";
            j["eps_regime_max"] = m->any.laplace.eps_regime_max;
        } else {
            j["kind"] = "fourier";
            j["dimension"] = m->any.mod.dimension;
            j["law"] = {{"c", m->any.mod.law.c()},
                        {"alpha", m->any.mod.law.alpha()},
                        {"beta", m->any.mod.law.beta()}};
            j["has_pmf"] = m->any.mod.has_pmf();
            j["has_sampler"] = m->any.mod.has_sampler();
            j["l1_mod_phi"] = m->any.mod.l1_mod_phi;
            j["zone_declared"] = m->any.mod.zone.has_value();
        }
        *json = dup_string(j.dump());
        return MP_OK;
    });
}

mp_status mp_model_t(const mp_model* m, double index, double* out) {
    if (!m || !out) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = m->any.is_laplace ? m->any.laplace.t_of(index) : m->any.mod.t_of(index);
        return MP_OK;
    });
}

mp_status mp_model_charfn(const mp_model* m, double index, double xi, double* re, double* im) {
    if (!m || !re || !im) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    if (m->any.is_laplace)
        return fail(MP_ERR_CAPABILITY, "charfn: Laplace-domain model");
    return guarded([&]() -> mp_status {
        if (!m->any.mod.log_charfn)
            return fail(MP_ERR_CAPABILITY, "charfn: model exposes no 1-d charfn");
        cplx v = m->any.mod.charfn(index, xi);
        *re = v.real();
        *im = v.imag();
        return MP_OK;
    });
}

mp_status mp_model_residue(const mp_model* m, double index, double xi, double* re, double* im) {
    if (!m || !re || !im) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    if (m->any.is_laplace)
        return fail(MP_ERR_CAPABILITY, "residue: Laplace-domain model");
    return guarded([&] {
        cplx v = residue(m->any.mod, index, xi);
        *re = v.real();
        *im = v.imag();
        return MP_OK;
    });
}

mp_status mp_model_verify_zone(const mp_model* m, const double* indices, size_t n_indices,
                               const char* zone_json, int grid_points, char** report_json) {
    if (!m || !indices || !report_json) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    if (m->any.is_laplace)
        return fail(MP_ERR_CAPABILITY, "verify_zone: Laplace-domain model");
    return guarded([&]() -> mp_status {
        // the model's declared zone is the baseline; explicit keys override it
        ZoneOfControl z;
        if (m->any.mod.zone) z = *m->any.mod.zone;
        bool have_any = m->any.mod.zone.has_value();
        if (zone_json && *zone_json) {
            auto j = ordered_json::parse(zone_json, nullptr, false);
            if (j.is_discarded()) return fail(MP_ERR_INVALID_ARGUMENT, "zone_json: parse error");
            z.K = j.value("K", z.K);
            z.gamma = j.value("gamma", z.gamma);
            z.nu = j.value("nu", z.nu);
            z.omega = j.value("omega", z.omega);
            z.K1 = j.value("K1", z.K1);
            z.K2 = j.value("K2", z.K2);
            have_any = true;
        }
        if (!have_any)
            return fail(MP_ERR_INVALID_ARGUMENT,
                        "verify_zone: no zone parameters given and the model declares none");
        std::vector<double> idx(indices, indices + n_indices);
        auto rep = verify_zone(m->any.mod, idx, z, grid_points > 0 ? grid_points : 1024);
        *report_json = dup_string(report::zone_json(m->any.name, rep).dump());
        return MP_OK;
    });
}

mp_status mp_model_llt(const mp_model* m, const char* config_json, char** report_json) {
    if (!m || !config_json || !report_json)
        return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() -> mp_status {
        auto j = ordered_json::parse(config_json, nullptr, false);
        if (j.is_discarded()) return fail(MP_ERR_INVALID_ARGUMENT, "config_json: parse error");
        driver::Experiment exp;
        exp.name = "llt";
        exp.kv["kind"] = "llt";
        exp.kv["model"] = m->any.name;
        auto put_list = [&exp](const char* key, const ordered_json& v) {
            std::string s;
            if (v.is_array()) {
                for (const auto& e : v) {
                    if (!s.empty()) s += ",";
                    s += report::format_double(e.get<double>());
                }
            } else {
                s = report::format_double(v.get<double>());
            }
            exp.kv[key] = s;
        };
        if (j.contains("x")) exp.kv["x"] = report::format_double(j["x"].get<double>());
        if (j.contains("x2")) exp.kv["x2"] = report::format_double(j["x2"].get<double>());
        if (j.contains("indices")) put_list("indices", j["indices"]);
        if (j.contains("delta")) put_list("delta", j["delta"]);
        if (j.contains("eps")) put_list("delta", j["eps"]);
        if (j.contains("scale")) put_list("scale", j["scale"]);
        if (j.contains("method")) exp.kv["method"] = j["method"].get<std::string>();
        if (j.contains("mc_budget"))
            exp.kv["mc_budget"] = std::to_string(j["mc_budget"].get<long>());
        if (j.contains("seed")) exp.kv["seed"] = std::to_string(j["seed"].get<std::uint64_t>());
        for (const char* wkey : {"window", "window2"}) {
            if (!j.contains(wkey)) continue;
            std::string w;
            for (const auto& iv : j[wkey]) {
                if (!w.empty()) w += ";";
                w += report::format_double(iv[0].get<double>()) + "," +
                     report::format_double(iv[1].get<double>());
            }
            exp.kv[wkey] = w;
        }
        // carry the model parameters through so the document embeds them
        for (auto& [k, v] : m->params.items())
            exp.kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
        // model params of ladder type need their flat-config spelling
        for (const char* key : {"q", "r2", "h"})
            if (m->params.contains(key)) {
                std::string s;
                for (const auto& e : m->params[key]) {
                    if (!s.empty()) s += ",";
                    s += report::format_double(e.get<double>());
                }
                exp.kv[key] = s;
            }
        if (m->params.contains("P")) {
            std::string s;
            for (const auto& row : m->params["P"]) {
                if (!s.empty()) s += ";";
                std::string r;
                for (const auto& e : row) {
                    if (!r.empty()) r += ",";
                    r += report::format_double(e.get<double>());
                }
                s += r;
            }
            exp.kv["P"] = s;
        }
        auto doc = driver::run_experiment(exp, {}, nullptr);
        *report_json = dup_string(doc.dump(2));
        return MP_OK;
    });
}

mp_status mp_model_l1_distance(const mp_model* m, double index, double cutoff,
                               double* value, double* tail_bound) {
    if (!m || !value || !tail_bound) return fail(MP_ERR_INVALID_ARGUMENT, "null argument");
    if (m->any.is_laplace || !m->any.mod.limiting_theta)
        return fail(MP_ERR_CAPABILITY, "l1_distance: model has no limiting residue");
    return guarded([&] {
        auto d = l1_residue_distance(m->any.mod, index, m->any.mod.limiting_theta, cutoff);
        *value = d.truncated;
        *tail_bound = d.tail_bound;
        return MP_OK;
    });
}

mp_status mp_run_report(const char* config_text, const char* out_dir, char** summary_json) {
    if (!config_text) return fail(MP_ERR_INVALID_ARGUMENT, "null config");
    return guarded([&]() -> mp_status {
        auto cfg = driver::parse_config(config_text);
        auto batch = driver::run_batch(cfg);
        if (out_dir && *out_dir) {
            std::filesystem::create_directories(out_dir);
            for (const auto& [name, doc] : batch.documents) {
                std::ofstream f(std::filesystem::path(out_dir) / (name + ".json"),
                                std::ios::binary);
                f << doc.dump(2) << "\n";
            }
            std::ofstream c(std::filesystem::path(out_dir) / "summary.csv", std::ios::binary);
            c << batch.summary_csv;
        }
        if (summary_json) {
            ordered_json all;
            all["version"] = report::kToolVersion;
            ordered_json docs = ordered_json::array();
            for (const auto& [name, doc] : batch.documents) docs.push_back(doc);
            all["experiments"] = docs;
            all["summary_csv"] = batch.summary_csv;
            *summary_json = dup_string(all.dump(2));
        }
        return MP_OK;
    });
}

} // extern "C"

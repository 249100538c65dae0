// Experiment driver for the mod-phi laboratory. Links the C API only.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "modphi/modphi.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { mp_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

int status_to_exit(mp_status st) {
    switch (st) {
    case MP_OK:
        return kExitOk;
    case MP_ERR_NUMERICAL:
        return kExitNumerical;
    default:
        return kExitUsage;
    }
}

int report_failure(mp_status st) {
    std::cerr << "error: " << mp_last_error() << "\n";
    return status_to_exit(st);
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(path, std::ios::binary);
    f << text << "\n";
}

struct ModelFlags {
    std::string model;
    std::string q, r2, h, P, eigenvalues, increment;
    double p = -1.0, ensemble_beta = -1.0, pareto_alpha = -1.0;
    int state = -1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "model name from the registry")->required();
        cmd->add_option("--q", q, "q ladder (comma separated)");
        cmd->add_option("--r2", r2, "r^2 ladder (comma separated)");
        cmd->add_option("--hyperbolic-area", h, "hyperbolic-area ladder");
        cmd->add_option("--P", P, "transition matrix, rows 'a,b;c,d'");
        cmd->add_option("--eigenvalues", eigenvalues, "eigenvalue lists, rows ';'-separated");
        cmd->add_option("--state", state, "target state (markov)");
        cmd->add_option("--p", p, "edge probability (triangles)");
        cmd->add_option("--ensemble-beta", ensemble_beta, "beta (laguerre)");
        cmd->add_option("--increment", increment, "iid increment: exponential|uniform|pareto");
        cmd->add_option("--pareto-alpha", pareto_alpha, "pareto tail exponent");
    }

    std::string params_json() const {
        json j = json::object();
        auto list = [](const std::string& s) {
            json a = json::array();
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) a.push_back(std::stod(item));
            return a;
        };
        auto matrix = [&list](const std::string& s) {
            json m = json::array();
            std::stringstream ss(s);
            std::string row;
            while (std::getline(ss, row, ';')) m.push_back(list(row));
            return m;
        };
        if (!q.empty()) j["q"] = list(q);
        if (!r2.empty()) j["r2"] = list(r2);
        if (!h.empty()) j["h"] = list(h);
        if (!P.empty()) j["P"] = matrix(P);
        if (!eigenvalues.empty()) j["eigenvalues"] = matrix(eigenvalues);
        if (state >= 0) j["state"] = state;
        if (p >= 0.0) j["p"] = p;
        if (ensemble_beta > 0.0) j["beta"] = ensemble_beta;
        if (!increment.empty()) j["increment"] = increment;
        if (pareto_alpha > 0.0) j["pareto_alpha"] = pareto_alpha;
        return j.dump();
    }
};

int make_model_or_exit(const ModelFlags& mf, mp_model** out) {
    mp_status st = mp_model_create(mf.model.c_str(), mf.params_json().c_str(), out);
    if (st == MP_OK) return kExitOk;
    std::cerr << "error: " << mp_last_error() << "\n";
    return status_to_exit(st);
}

json window_to_json(const std::string& w) {
    json out = json::array();
    std::stringstream ss(w);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto comma = part.find(',');
        out.push_back(json::array(
            {std::stod(part.substr(0, comma)), std::stod(part.substr(comma + 1))}));
    }
    return out;
}

json list_to_json(const std::string& s) {
    json out = json::array();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::string csv_from_doc(const json& doc) {
    std::string csv =
        "model,n,t_n,delta,x,window_a,window_b,lhs,target,abs_err,rel_err,method,seed";
    csv += "\n";
    const auto& results = doc.at("results");
    auto fmt = [](const json& v) {
        std::ostringstream o;
        o.precision(17);
        o << v.get<double>();
        return o.str();
    };
    for (const auto& r : results) {
        const auto& w = r.at("window");
        csv += r.at("model").get<std::string>() + "," + fmt(r.at("n")) + "," +
               fmt(r.at("t_n")) + "," + fmt(r.at("delta")) + "," + fmt(r.at("x")) + "," +
               fmt(w[0][0]) + "," + fmt(w.back()[1]) + "," + fmt(r.at("lhs")) + "," +
               fmt(r.at("target")) + "," + fmt(r.at("abs_err")) + "," + fmt(r.at("rel_err")) +
               "," + r.at("method").get<std::string>() + "," +
               std::to_string(r.at("seed").get<std::uint64_t>()) + "\n";
    }
    return csv;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mod-phi convergence laboratory"};
    app.require_subcommand(1);

    // density
    auto* density = app.add_subcommand("density", "tabulate a stable density");
    double d_c = 1.0, d_alpha = 2.0, d_beta = 0.0, d_xmin = -5.0, d_xmax = 5.0;
    int d_points = 101;
    std::string d_out;
    density->add_option("--c", d_c, "scale");
    density->add_option("--alpha", d_alpha, "stability index in (0,2]");
    density->add_option("--beta", d_beta, "skewness in [-1,1]");
    density->add_option("--xmin", d_xmin);
    density->add_option("--xmax", d_xmax);
    density->add_option("--points", d_points);
    density->add_option("--out", d_out, "output path (default stdout)");

    // zone
    auto* zone = app.add_subcommand("zone", "verify a zone of control");
    ModelFlags z_mf;
    z_mf.attach(zone);
    std::string z_indices = "0", z_out;
    int z_grid = 1024;
    double z_K = -1, z_gamma = -10, z_nu = -1, z_omega = -1, z_K1 = -1, z_K2 = -1;
    zone->add_option("--indices", z_indices, "index list (comma separated)");
    zone->add_option("--grid", z_grid, "grid points across the zone");
    zone->add_option("--K", z_K);
    zone->add_option("--gamma", z_gamma);
    zone->add_option("--nu", z_nu);
    zone->add_option("--omega", z_omega);
    zone->add_option("--K1", z_K1);
    zone->add_option("--K2", z_K2);
    zone->add_option("--out", z_out, "output path (default stdout)");

    // llt
    auto* llt = app.add_subcommand("llt", "local limit estimates across indices and scales");
    ModelFlags l_mf;
    l_mf.attach(llt);
    std::string l_window = "-1,1", l_window2, l_delta, l_scale, l_indices = "0", l_method = "auto";
    std::string l_out, l_csv;
    double l_x = 0.0, l_x2 = 0.0;
    long l_budget = 100000;
    std::uint64_t l_seed = 1;
    llt->add_option("--x", l_x, "limit point");
    llt->add_option("--window", l_window, "window B: 'a,b' or 'a,b;c,d'");
    llt->add_option("--x2", l_x2, "second coordinate of the limit point (d=2 models)");
    llt->add_option("--window2", l_window2, "second-axis window (d=2 models)");
    llt->add_option("--delta", l_delta, "delta ladder (comma separated); eps for tilted models");
    llt->add_option("--scale", l_scale, "explicit scale ladder (L1 models)");
    llt->add_option("--indices", l_indices, "index list");
    llt->add_option("--method", l_method, "exact|parseval|montecarlo|fourier|auto");
    llt->add_option("--mc-budget", l_budget, "Monte Carlo sample count");
    llt->add_option("--seed", l_seed, "master seed");
    llt->add_option("--out", l_out, "JSON output path (default stdout)");
    llt->add_option("--csv", l_csv, "also write a CSV table here");

    // report
    auto* rep = app.add_subcommand("report", "run a batch config");
    std::string r_config, r_outdir = "reports";
    rep->add_option("--config", r_config, "flat key=value config file")->required();
    rep->add_option("--out-dir", r_outdir, "directory for per-experiment JSON + summary.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (density->parsed()) {
        mp_stable* law = nullptr;
        mp_status st = mp_stable_create(d_c, d_alpha, d_beta, &law);
        if (st != MP_OK) return report_failure(st);
        json rows = json::array();
        for (int i = 0; i < d_points; ++i) {
            double x = d_xmin + (d_xmax - d_xmin) * i / std::max(d_points - 1, 1);
            double v = 0.0;
            st = mp_stable_density(law, x, &v);
            if (st != MP_OK) {
                mp_stable_free(law);
                return report_failure(st);
            }
            rows.push_back(json{{"x", x}, {"density", v}});
        }
        mp_stable_free(law);
        json doc;
        doc["version"] = mp_version();
        doc["config"] = {{"c", d_c},       {"alpha", d_alpha},   {"beta", d_beta},
                         {"xmin", d_xmin}, {"xmax", d_xmax},     {"points", d_points}};
        doc["results"] = rows;
        write_output(doc.dump(2), d_out);
        return kExitOk;
    }

    if (zone->parsed()) {
        mp_model* m = nullptr;
        int rc = make_model_or_exit(z_mf, &m);
        if (rc != kExitOk) return rc;
        json zj = json::object();
        if (z_K > 0) zj["K"] = z_K;
        if (z_gamma > -10) zj["gamma"] = z_gamma;
        if (z_nu > 0) zj["nu"] = z_nu;
        if (z_omega > 0) zj["omega"] = z_omega;
        if (z_K1 >= 0) zj["K1"] = z_K1;
        if (z_K2 >= 0) zj["K2"] = z_K2;
        std::vector<double> idx;
        for (const auto& v : list_to_json(z_indices)) idx.push_back(v.get<double>());
        OwnedString out;
        mp_status st = mp_model_verify_zone(m, idx.data(), idx.size(),
                                            zj.empty() ? nullptr : zj.dump().c_str(), z_grid,
                                            &out.p);
        mp_model_free(m);
        if (st != MP_OK) return report_failure(st);
        json doc;
        doc["version"] = mp_version();
        doc["config"] = json::parse(z_mf.params_json());
        doc["results"] = json::parse(out.str());
        write_output(doc.dump(2), z_out);
        return kExitOk;
    }

    if (llt->parsed()) {
        mp_model* m = nullptr;
        int rc = make_model_or_exit(l_mf, &m);
        if (rc != kExitOk) return rc;
        json cfg;
        cfg["x"] = l_x;
        cfg["window"] = window_to_json(l_window);
        if (!l_window2.empty()) cfg["window2"] = window_to_json(l_window2);
        if (l_x2 != 0.0) cfg["x2"] = l_x2;
        cfg["indices"] = list_to_json(l_indices);
        if (!l_delta.empty()) cfg["delta"] = list_to_json(l_delta);
        if (!l_scale.empty()) cfg["scale"] = list_to_json(l_scale);
        if (l_method != "auto") cfg["method"] = l_method;
        cfg["mc_budget"] = l_budget;
        cfg["seed"] = l_seed;
        OwnedString out;
        mp_status st = mp_model_llt(m, cfg.dump().c_str(), &out.p);
        mp_model_free(m);
        if (st != MP_OK) return report_failure(st);
        write_output(out.str(), l_out);
        if (!l_csv.empty()) write_output(csv_from_doc(json::parse(out.str())), l_csv);
        return kExitOk;
    }

    if (rep->parsed()) {
        std::ifstream f(r_config);
        if (!f) {
            std::cerr << "error: cannot read config '" << r_config << "'\n";
            return kExitUsage;
        }
        std::stringstream buf;
        buf << f.rdbuf();
        OwnedString out;
        mp_status st = mp_run_report(buf.str().c_str(), r_outdir.c_str(), &out.p);
        if (st != MP_OK) return report_failure(st);
        std::cout << "wrote " << r_outdir << "/summary.csv\n";
        return kExitOk;
    }

    return kExitUsage;
}

#include "driver.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "models.hpp"

namespace modphi::driver {

using report::ordered_json;

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

Window parse_window(const std::string& s) {
    // "a,b" or "a,b;c,d"
    Window w;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto vals = parse_double_list(part);
        if (vals.size() != 2) throw std::invalid_argument("window: expected 'a,b' pairs");
        w.push_back({vals[0], vals[1]});
    }
    return w;
}

namespace {

std::vector<double> json_list(const ordered_json& j) {
    std::vector<double> v;
    if (j.is_number()) {
        v.push_back(j.get<double>());
    } else if (j.is_array()) {
        for (const auto& e : j) v.push_back(e.get<double>());
    } else if (j.is_string()) {
        v = parse_double_list(j.get<std::string>());
    } else {
        throw std::invalid_argument("expected a number, list, or comma string");
    }
    return v;
}

} // namespace

AnyModel make_model(const std::string& name, const ordered_json& params) {
    AnyModel out;
    out.name = name;
    auto has = [&](const char* k) { return params.contains(k); };
    if (name == "partition") {
        out.mod = models::partition_size(has("q") ? json_list(params["q"])
                                                  : std::vector<double>{0.9});
    } else if (name == "plane_partition") {
        out.mod = models::plane_partition_size(has("q") ? json_list(params["q"])
                                                        : std::vector<double>{0.9});
    } else if (name == "gaf") {
        if (has("h"))
            out.mod = models::gaf_zeros_hyperbolic(json_list(params["h"]));
        else
            out.mod = models::gaf_zeros(has("r2") ? json_list(params["r2"])
                                                  : std::vector<double>{0.9});
    } else if (name == "determinantal") {
        if (!has("eigenvalues"))
            throw std::invalid_argument("determinantal: needs 'eigenvalues' (list of lists)");
        std::vector<std::vector<double>> ladder;
        for (const auto& row : params["eigenvalues"]) ladder.push_back(json_list(row));
        out.mod = models::determinantal_counts(std::move(ladder));
    } else if (name == "zeta2d") {
        out.mod = models::random_zeta();
    } else if (name == "markov") {
        if (!has("P")) throw std::invalid_argument("markov: needs transition matrix 'P'");
        std::vector<std::vector<double>> P;
        for (const auto& row : params["P"]) P.push_back(json_list(row));
        int state = has("state") ? params["state"].get<int>() : 0;
        out.mod = models::markov_visits(std::move(P), state);
    } else if (name == "triangles") {
        out.mod = models::subgraph_count(has("p") ? params["p"].get<double>() : 0.5);
    } else if (name == "gue") {
        out.mod = models::gue_logdet();
    } else if (name == "laguerre") {
        out.mod = models::laguerre_logdet(has("beta") ? params["beta"].get<double>() : 2.0);
    } else if (name == "winding") {
        out.mod = models::brownian_winding();
    } else if (name == "iid") {
        std::string inc = has("increment") ? params["increment"].get<std::string>()
                                           : std::string("exponential");
        double pa = has("pareto_alpha") ? params["pareto_alpha"].get<double>() : 1.5;
        models::Increment which;
        if (inc == "exponential") which = models::Increment::exponential;
        else if (inc == "uniform") which = models::Increment::uniform;
        else if (inc == "pareto") which = models::Increment::pareto;
        else throw std::invalid_argument("iid: unknown increment '" + inc + "'");
        out.mod = models::iid_sum(which, pa);
    } else if (name == "curie_weiss") {
        out.is_laplace = true;
        out.laplace = tilt::curie_weiss();
    } else {
        std::string msg = "unknown model '" + name + "'; registry:";
        for (const auto& n : models::registry_names()) msg += " " + n;
        throw std::invalid_argument(msg);
    }
    return out;
}

ParsedConfig parse_config(const std::string& text) {
    ParsedConfig cfg;
    Experiment* cur = nullptr;
    std::stringstream ss(text);
    std::string line;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        return s.substr(a, b - a + 1);
    };
    while (std::getline(ss, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            std::string name = trim(t.substr(1, t.size() - 2));
            if (name == "global") {
                cur = nullptr;
            } else {
                cfg.experiments.push_back({name, {}});
                cur = &cfg.experiments.back();
            }
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value, got '" + t + "'");
        std::string k = trim(t.substr(0, eq)), v = trim(t.substr(eq + 1));
        if (cur)
            cur->kv[k] = v;
        else
            cfg.global[k] = v;
    }
    return cfg;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string get(const std::map<std::string, std::string>& kv, const std::string& k,
                const std::string& dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
}

bool has(const std::map<std::string, std::string>& kv, const std::string& k) {
    return kv.count(k) > 0;
}

// model parameters appearing in the flat config
ordered_json params_from_kv(const std::map<std::string, std::string>& kv) {
    ordered_json p = ordered_json::object();
    for (const char* key : {"q", "r2", "h"}) {
        if (has(kv, key)) {
            ordered_json arr = ordered_json::array();
            for (double v : parse_double_list(kv.at(key))) arr.push_back(v);
            p[key] = arr;
        }
    }
    if (has(kv, "p")) p["p"] = std::stod(kv.at("p"));
    if (has(kv, "beta")) p["beta"] = std::stod(kv.at("beta"));
    if (has(kv, "state")) p["state"] = std::stoi(kv.at("state"));
    if (has(kv, "increment")) p["increment"] = kv.at("increment");
    if (has(kv, "pareto_alpha")) p["pareto_alpha"] = std::stod(kv.at("pareto_alpha"));
    if (has(kv, "P")) {
        // rows separated by ';', entries by ','
        ordered_json rows = ordered_json::array();
        std::stringstream ss(kv.at("P"));
        std::string row;
        while (std::getline(ss, row, ';')) {
            ordered_json r = ordered_json::array();
            for (double v : parse_double_list(row)) r.push_back(v);
            rows.push_back(r);
        }
        p["P"] = rows;
    }
    if (has(kv, "eigenvalues")) {
        ordered_json rows = ordered_json::array();
        std::stringstream ss(kv.at("eigenvalues"));
        std::string row;
        while (std::getline(ss, row, ';')) {
            ordered_json r = ordered_json::array();
            for (double v : parse_double_list(row)) r.push_back(v);
            rows.push_back(r);
        }
        p["eigenvalues"] = rows;
    }
    return p;
}

} // namespace

std::uint64_t experiment_seed(std::uint64_t master, const std::string& name,
                              const std::map<std::string, std::string>& kv) {
    if (has(kv, "seed")) return std::stoull(kv.at("seed"));
    return master ^ fnv1a(name);
}

report::ordered_json run_experiment(const Experiment& exp,
                                    const std::map<std::string, std::string>& global,
                                    std::vector<std::string>* csv_rows) {
    const auto& kv = exp.kv;
    ordered_json doc;
    doc["experiment"] = exp.name;
    doc["version"] = report::kToolVersion;
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : kv) cfg[k] = v;
    doc["config"] = cfg;

    const std::string kind = get(kv, "kind", "llt");
    const std::uint64_t master = std::stoull(get(global, "seed", "1"));
    const std::uint64_t seed = experiment_seed(master, exp.name, kv);
    ordered_json results = ordered_json::array();

    if (kind == "density") {
        StableLaw law(std::stod(get(kv, "c", "1")), std::stod(get(kv, "alpha", "2")),
                      std::stod(get(kv, "beta", "0")));
        double xmin = std::stod(get(kv, "xmin", "-5"));
        double xmax = std::stod(get(kv, "xmax", "5"));
        int points = std::stoi(get(kv, "points", "101"));
        for (int i = 0; i < points; ++i) {
            double x = xmin + (xmax - xmin) * i / std::max(points - 1, 1);
            ordered_json row;
            row["x"] = x;
            row["density"] = law.density(x);
            results.push_back(row);
        }
    } else if (kind == "zone") {
        AnyModel am = make_model(get(kv, "model", ""), params_from_kv(kv));
        if (am.is_laplace) throw std::invalid_argument("zone: not defined for curie_weiss");
        ZoneOfControl z = am.mod.zone.value_or(ZoneOfControl{});
        if (has(kv, "K")) z.K = std::stod(kv.at("K"));
        if (has(kv, "gamma")) z.gamma = std::stod(kv.at("gamma"));
        if (has(kv, "nu")) z.nu = std::stod(kv.at("nu"));
        if (has(kv, "omega")) z.omega = std::stod(kv.at("omega"));
        if (has(kv, "K1")) z.K1 = std::stod(kv.at("K1"));
        if (has(kv, "K2")) z.K2 = std::stod(kv.at("K2"));
        auto indices = parse_double_list(get(kv, "indices", "0"));
        int grid = std::stoi(get(kv, "grid", "1024"));
        results.push_back(report::zone_json(am.name, verify_zone(am.mod, indices, z, grid)));
    } else if (kind == "llt") {
        AnyModel am = make_model(get(kv, "model", ""), params_from_kv(kv));
        Window B = parse_window(get(kv, "window", "-1,1"));
        double x = std::stod(get(kv, "x", "0"));
        auto indices = parse_double_list(get(kv, "indices", "0"));
        auto deltas = parse_double_list(get(kv, "delta", "0.4"));
        if (am.is_laplace) {
            for (double idx : indices)
                for (double eps : deltas) {
                    auto r = tilt::tilted_local_limit(am.laplace, idx, x, B, eps);
                    results.push_back(report::tilted_llt_json(am.name, r, B, seed));
                    if (csv_rows) {
                        LltResult lr;
                        lr.index = r.index;
                        lr.t_n = r.t_n;
                        lr.x = r.x;
                        lr.lhs = r.lhs;
                        lr.target = r.target;
                        lr.abs_err = r.abs_err;
                        lr.rel_err = r.rel_err;
                        lr.method = "tilted_exact";
                        csv_rows->push_back(report::csv_row(am.name, lr, eps, B, seed));
                    }
                }
        } else if (am.mod.dimension == 2) {
            LltOptions opt;
            opt.seed = seed;
            opt.mc_budget = std::stol(get(kv, "mc_budget", "100000"));
            std::string method = get(kv, "method", "montecarlo");
            if (method == "auto") method = "montecarlo";
            if (method == "parseval") opt.method = WindowMethod::parseval;
            else if (method == "montecarlo") opt.method = WindowMethod::montecarlo;
            else throw std::invalid_argument("llt (d=2): method must be montecarlo or parseval");
            Window B2 = parse_window(get(kv, "window2", get(kv, "window", "-1,1")));
            double z2 = std::stod(get(kv, "x2", "0"));
            for (double idx : indices)
                for (double d : deltas) {
                    auto r = local_limit_2d(am.mod, idx, x, z2, B, B2, d, opt);
                    ordered_json row;
                    row["model"] = am.name;
                    row["n"] = r.index;
                    row["delta"] = d;
                    row["x"] = r.z1;
                    row["x2"] = r.z2;
                    ordered_json wj = ordered_json::array();
                    for (auto [a, b] : B) wj.push_back(ordered_json::array({a, b}));
                    ordered_json wj2 = ordered_json::array();
                    for (auto [a, b] : B2) wj2.push_back(ordered_json::array({a, b}));
                    row["window"] = wj;
                    row["window2"] = wj2;
                    row["lhs"] = r.lhs;
                    row["target"] = r.target;
                    row["abs_err"] = r.abs_err;
                    row["rel_err"] = r.rel_err;
                    row["method"] = r.method;
                    row["seed"] = seed;
                    row["t_n"] = r.t_n;
                    row["scale"] = r.scale;
                    if (opt.method == WindowMethod::montecarlo) row["mc_stderr"] = r.mc_stderr;
                    if (opt.method == WindowMethod::parseval) {
                        row["bracket_lo"] = r.bracket_lo;
                        row["bracket_hi"] = r.bracket_hi;
                    }
                    results.push_back(row);
                    if (csv_rows) {
                        LltResult lr;
                        lr.index = r.index;
                        lr.t_n = r.t_n;
                        lr.x = r.z1;
                        lr.lhs = r.lhs;
                        lr.target = r.target;
                        lr.abs_err = r.abs_err;
                        lr.rel_err = r.rel_err;
                        lr.method = r.method;
                        csv_rows->push_back(report::csv_row(am.name, lr, d, B, seed));
                    }
                }
        } else {
            LltOptions opt;
            opt.seed = seed;
            opt.mc_budget = std::stol(get(kv, "mc_budget", "100000"));
            std::string method = get(kv, "method", "auto");
            if (method == "auto")
                method = am.mod.has_pmf() ? "exact"
                         : am.mod.fourier_cutoff > 0.0 ? "fourier"
                                                       : "montecarlo";
            if (method == "exact") opt.method = WindowMethod::exact;
            else if (method == "parseval") opt.method = WindowMethod::parseval;
            else if (method == "montecarlo") opt.method = WindowMethod::montecarlo;
            else if (method == "fourier") opt.method = WindowMethod::fourier;
            else throw std::invalid_argument("llt: unknown method '" + method + "'");
            const bool strong = has(kv, "scale");
            auto scales = strong ? parse_double_list(kv.at("scale")) : std::vector<double>{};
            for (double idx : indices) {
                if (strong) {
                    for (double s : scales) {
                        auto r = strong_local_limit(am.mod, idx, x, B, s, opt);
                        results.push_back(report::llt_json(am.name, r, 0.0, B, seed));
                        if (csv_rows) csv_rows->push_back(report::csv_row(am.name, r, 0.0, B, seed));
                    }
                } else {
                    for (double d : deltas) {
                        auto r = local_limit_estimate(am.mod, idx, x, B, d, opt);
                        results.push_back(report::llt_json(am.name, r, d, B, seed));
                        if (csv_rows) csv_rows->push_back(report::csv_row(am.name, r, d, B, seed));
                    }
                }
            }
        }
    } else if (kind == "l1") {
        AnyModel am = make_model(get(kv, "model", ""), params_from_kv(kv));
        if (am.is_laplace || !am.mod.limiting_theta)
            throw std::invalid_argument("l1: model has no limiting residue");
        auto indices = parse_double_list(get(kv, "indices", "0"));
        for (double idx : indices) {
            ordered_json row;
            row["n"] = idx;
            if (am.name == "winding") {
                auto w = models::winding_l1_distance(idx);
                row["distance"] = w.distance;
                row["tail_bound"] = w.tail_bound;
                row["chain_bound"] = w.chain_bound;
            } else {
                auto d = l1_residue_distance(am.mod, idx, am.mod.limiting_theta,
                                             std::stod(get(kv, "cutoff", "40")));
                row["distance"] = d.truncated;
                row["tail_bound"] = d.tail_bound;
            }
            results.push_back(row);
        }
    } else {
        throw std::invalid_argument("unknown experiment kind '" + kind + "'");
    }
    doc["results"] = results;
    return doc;
}

BatchResult run_batch(const ParsedConfig& cfg) {
    BatchResult out;
    const size_t n = cfg.experiments.size();
    out.documents.resize(n);
    std::vector<std::vector<std::string>> csv_parts(n);
    std::vector<std::string> errors(n);

    long threads = 1;
    if (const char* env = std::getenv("MODPHI_THREADS")) threads = std::atol(env);
    threads = std::clamp<long>(threads, 1, static_cast<long>(std::thread::hardware_concurrency()));

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                out.documents[i] = {cfg.experiments[i].name,
                                    run_experiment(cfg.experiments[i], cfg.global, &csv_parts[i])};
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (threads <= 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (long t = 0; t < std::min<long>(threads, static_cast<long>(n)); ++t)
            pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (size_t i = 0; i < n; ++i)
        if (!errors[i].empty())
            throw std::runtime_error("experiment '" + cfg.experiments[i].name +
                                     "' failed: " + errors[i]);
    std::string csv = report::csv_header() + "\n";
    for (const auto& part : csv_parts)
        for (const auto& row : part) csv += row + "\n";
    out.summary_csv = csv;
    return out;
}

} // namespace modphi::driver

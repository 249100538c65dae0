#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>

#include "modphi/modphi.h"

using json = nlohmann::ordered_json;

namespace {
struct Str {
    char* p = nullptr;
    ~Str() { mp_string_free(p); }
};
} // namespace

TEST_CASE("stable law lifecycle and values") {
    mp_stable* law = nullptr;
    REQUIRE(mp_stable_create(1.0, 1.0, 0.0, &law) == MP_OK);
    double re = 0, im = 0;
    CHECK(mp_stable_levy_exponent(law, 2.0, &re, &im) == MP_OK);
    CHECK(std::abs(re + 2.0) < 1e-14);
    CHECK(std::abs(im) < 1e-14);
    double d = 0;
    CHECK(mp_stable_density(law, 0.0, &d) == MP_OK);
    CHECK(std::abs(d - 1.0 / 3.14159265358979324) < 1e-10);
    double z = 0;
    CHECK(mp_stable_density_zero_series(law, &z) == MP_OK);
    CHECK(std::abs(z - d) < 1e-9);
    double defect = 1;
    CHECK(mp_stable_scaling_defect(law, 7.0, 3.0, &defect) == MP_OK);
    CHECK(defect < 1e-13);
    mp_stable_free(law);

    mp_stable* bad = nullptr;
    CHECK(mp_stable_create(1.0, 3.0, 0.0, &bad) == MP_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(mp_last_error()) > 0);
}

TEST_CASE("registry and unknown models") {
    Str names;
    REQUIRE(mp_model_names(&names.p) == MP_OK);
    auto arr = json::parse(names.p);
    CHECK(arr.size() == 12);

    mp_model* m = nullptr;
    CHECK(mp_model_create("no_such_model", nullptr, &m) == MP_ERR_UNKNOWN_MODEL);
    CHECK(std::string(mp_last_error()).find("registry") != std::string::npos);
}

TEST_CASE("model handles: info, residue, zone, llt") {
    mp_model* m = nullptr;
    REQUIRE(mp_model_create("gaf", R"({"r2":[0.9,0.98]})", &m) == MP_OK);

    Str info;
    REQUIRE(mp_model_info(m, &info.p) == MP_OK);
    auto j = json::parse(info.p);
    CHECK(j["name"] == "gaf");
    CHECK(j["has_pmf"] == true);
    CHECK(j["zone_declared"] == true);

    double t = 0;
    CHECK(mp_model_t(m, 1, &t) == MP_OK);
    CHECK(std::abs(t - std::cbrt(0.98 / (1.0 - 0.98 * 0.98))) < 1e-12);

    double re = 0, im = 0;
    CHECK(mp_model_residue(m, 0, 0.0, &re, &im) == MP_OK);
    CHECK(std::abs(re - 1.0) < 1e-12);
    CHECK(std::abs(im) < 1e-12);

    double idx[2] = {0, 1};
    Str zrep;
    REQUIRE(mp_model_verify_zone(m, idx, 2, nullptr, 256, &zrep.p) == MP_OK);
    auto zj = json::parse(zrep.p);
    CHECK(zj["all_pass"] == true);

    Str lrep;
    REQUIRE(mp_model_llt(m, R"({"x":0,"window":[[-1,1]],"indices":[1],"delta":[0.4],
                              "method":"exact","seed":7})", &lrep.p) == MP_OK);
    auto lj = json::parse(lrep.p);
    const auto& row = lj["results"][0];
    CHECK(row.contains("lhs"));
    CHECK(row.contains("target"));
    CHECK(row.contains("rel_err"));
    CHECK(row["rel_err"].get<double>() < 0.1);
    CHECK(row["method"] == "exact");
    mp_model_free(m);

    // capability error: exact llt on a model without a pmf
    mp_model* gue = nullptr;
    REQUIRE(mp_model_create("gue", nullptr, &gue) == MP_OK);
    Str fail;
    CHECK(mp_model_llt(gue, R"({"x":0,"window":[[-1,1]],"indices":[100],"delta":[0.4],
                              "method":"exact"})", &fail.p) == MP_ERR_INVALID_ARGUMENT);
    mp_model_free(gue);
}

TEST_CASE("winding through the C surface: strong scales and L1 distance") {
    mp_model* w = nullptr;
    REQUIRE(mp_model_create("winding", nullptr, &w) == MP_OK);
    double v = 0, tail = 0;
    REQUIRE(mp_model_l1_distance(w, 1e3, 40.0, &v, &tail) == MP_OK);
    CHECK(std::abs(v - 3.204418e-3) < 1e-7);
    Str rep;
    REQUIRE(mp_model_llt(w, R"({"x":0,"window":[[-1,1]],"indices":[1000],
                              "scale":[1.0],"method":"fourier"})", &rep.p) == MP_OK);
    auto j = json::parse(rep.p);
    CHECK(j["results"][0]["lhs"].get<double>() > 0.3);
    mp_model_free(w);
}

TEST_CASE("batch reports are byte-identical for a fixed seed") {
    const char* cfg = R"([global]
seed = 42

[gaf_llt]
kind = llt
model = gaf
r2 = 0.9
indices = 0
delta = 0.3,0.4
x = 0
window = -1,1
method = exact

[coin_mc]
kind = llt
model = gaf
r2 = 0.9
indices = 0
delta = 0.4
x = 0
window = -1,1
method = montecarlo
mc_budget = 20000
)";
    Str a, b;
    REQUIRE(mp_run_report(cfg, nullptr, &a.p) == MP_OK);
    REQUIRE(mp_run_report(cfg, nullptr, &b.p) == MP_OK);
    CHECK(std::string(a.p) == std::string(b.p));
    auto j = json::parse(a.p);
    CHECK(j["experiments"].size() == 2);
    CHECK(j["experiments"][0]["version"] == std::string(mp_version()));
    CHECK(j["experiments"][0].contains("config"));
    CHECK(j["summary_csv"].get<std::string>().find("model,n,t_n,delta") == 0);
}

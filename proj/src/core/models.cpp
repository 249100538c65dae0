#include "models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace modphi::models {
namespace {

constexpr double kBernoulliCubicA = 0.25; // |log(1+p(e^{iz}-1)) - ipz + p(1-p)z^2/2| <= A p |z|^3, |z| <= 1

size_t ladder_rung(double idx, size_t size, const char* what) {
    double r = std::round(idx);
    if (std::abs(idx - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(size))
        throw std::domain_error(std::string(what) + ": index must select a ladder rung in [0, " +
                                std::to_string(size) + ")");
    return static_cast<size_t>(r);
}

long positive_integer_index(double idx, const char* what) {
    double r = std::round(idx);
    if (std::abs(idx - r) > 1e-9 || r < 1.0)
        throw std::domain_error(std::string(what) + ": index must be a positive integer");
    return static_cast<long>(r);
}

StableLaw standard_gaussian() { return StableLaw(1.0 / std::sqrt(2.0), 2.0, 0.0); }

// log(1 - w) on the principal branch; callers guarantee |w| < 1
cplx log1m(cplx w) { return std::log(cplx{1.0, 0.0} - w); }

// ---------------------------------------------------------------------------
// partitions

struct QRung {
    double q = 0.0;
    double mean = 0.0, var = 0.0;
    long charfn_cut = 0; // largest part size carried by the characteristic function
};

QMoments moments_impl(double q, bool plane) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("partition moments: q in (0,1)");
    long double m = 0.0L, v = 0.0L;
    for (long n = 1;; ++n) {
        long double nd = static_cast<long double>(n);
        long double qn = std::pow(static_cast<long double>(q), nd);
        if (qn < 1e-300L) break;
        long double w = plane ? nd * nd : nd;
        long double tm = w * qn / (1.0L - qn);
        long double tv = w * nd * qn / ((1.0L - qn) * (1.0L - qn));
        m += tm;
        v += tv;
        if (tm < 1e-22L * m && tv < 1e-22L * v && n > 8) break;
    }
    return {static_cast<double>(m), static_cast<double>(v)};
}

ModPhiModel partition_like(std::vector<double> q_ladder, bool plane) {
    const char* nm = plane ? "plane_partition" : "partition";
    if (q_ladder.empty()) throw std::domain_error(std::string(nm) + ": empty q ladder");
    auto rungs = std::make_shared<std::vector<QRung>>();
    for (double q : q_ladder) {
        QMoments mo = moments_impl(q, plane);
        QRung r;
        r.q = q;
        r.mean = mo.mean;
        r.var = mo.variance;
        r.charfn_cut = static_cast<long>(std::ceil(std::log(1e-17) / std::log(q)));
        rungs->push_back(r);
    }
    const double scale_exp = plane ? 5.0 / 12.0 : 4.0 / 9.0;
    const double t_exp = plane ? 1.0 / 12.0 : 1.0 / 9.0;

    ModPhiModel m;
    m.name = nm;
    m.law = standard_gaussian();
    m.t_of = [rungs, t_exp, nm](double idx) {
        return std::pow((*rungs)[ladder_rung(idx, rungs->size(), nm)].var, t_exp);
    };
    m.log_charfn = [rungs, scale_exp, plane, nm](double idx, double xi) -> cplx {
        const QRung& r = (*rungs)[ladder_rung(idx, rungs->size(), nm)];
        const double scale = std::pow(r.var, scale_exp);
        const double zeta = xi / scale;
        cplx s{0.0, -r.mean * zeta};
        for (long n = 1; n <= r.charfn_cut; ++n) {
            double nd = static_cast<double>(n);
            double qn = std::pow(r.q, nd);
            cplx term = std::log1p(-qn) - log1m(qn * std::polar(1.0, nd * zeta));
            s += plane ? nd * term : term;
        }
        return s;
    };
    m.pmf = [rungs, scale_exp, plane, nm](double idx) {
        const QRung& r = (*rungs)[ladder_rung(idx, rungs->size(), nm)];
        long n_max = static_cast<long>(std::ceil(r.mean + 16.0 * std::sqrt(r.var))) + 60;
        ExactPmf base = plane ? macmahon_pmf(r.q, n_max) : euler_partition_pmf(r.q, n_max);
        const double scale = std::pow(r.var, scale_exp);
        return base.affine(1.0 / scale, -r.mean / scale);
    };
    m.sample = [rungs, scale_exp, plane, nm](double idx, RngStream& rng) {
        const QRung& r = (*rungs)[ladder_rung(idx, rungs->size(), nm)];
        double s = 0.0;
        for (long n = 1; n <= r.charfn_cut; ++n) {
            double qn = std::pow(r.q, static_cast<double>(n));
            long reps = plane ? n : 1;
            for (long j = 0; j < reps; ++j)
                s += static_cast<double>(n) * static_cast<double>(rng.geometric_q(qn));
        }
        const double scale = std::pow(r.var, scale_exp);
        return (s - r.mean) / scale;
    };
    ZoneOfControl z;
    z.nu = 3.0;
    z.omega = 3.0;
    z.gamma = 1.0;
    z.K1 = z.K2 = plane ? 0.6 : 0.5;
    z.K = 0.5 / (2.0 * z.K2); // = (c^2 / 2 K2)^{1/(omega-alpha)} for c = 1/sqrt(2)
    m.zone = z;
    return m;
}

// ---------------------------------------------------------------------------
// Bernoulli products (determinantal counts, GAF zeros)

struct BernoulliRung {
    std::vector<double> ps;
    double mean = 0.0, var = 0.0, r_n = 0.0;
};

ModPhiModel bernoulli_product(std::string name, std::vector<std::vector<double>> ladder) {
    if (ladder.empty()) throw std::domain_error(name + ": empty ladder");
    auto rungs = std::make_shared<std::vector<BernoulliRung>>();
    for (auto& ps : ladder) {
        BernoulliRung r;
        r.ps = std::move(ps);
        for (double p : r.ps) {
            if (p < 0.0 || p > 1.0) throw std::domain_error(name + ": eigenvalue outside [0,1]");
            r.mean += p;
            r.var += p * (1.0 - p);
        }
        if (r.var <= 0.0)
            throw std::domain_error(name + ": degenerate rung (variance 0, r undefined)");
        r.r_n = r.mean / (r.mean - r.var);
        rungs->push_back(std::move(r));
    }
    auto nm = std::make_shared<std::string>(std::move(name));

    ModPhiModel m;
    m.name = *nm;
    m.law = standard_gaussian();
    m.t_of = [rungs, nm](double idx) {
        return std::cbrt((*rungs)[ladder_rung(idx, rungs->size(), nm->c_str())].var);
    };
    m.log_charfn = [rungs, nm](double idx, double xi) -> cplx {
        const BernoulliRung& r = (*rungs)[ladder_rung(idx, rungs->size(), nm->c_str())];
        const double zeta = xi / std::cbrt(r.var);
        const cplx e = std::polar(1.0, zeta) - 1.0;
        cplx s{0.0, -r.mean * zeta};
        for (double p : r.ps) s += std::log(1.0 + p * e);
        return s;
    };
    m.pmf = [rungs, nm](double idx) {
        const BernoulliRung& r = (*rungs)[ladder_rung(idx, rungs->size(), nm->c_str())];
        const double scale = std::cbrt(r.var);
        return poisson_binomial(r.ps).affine(1.0 / scale, -r.mean / scale);
    };
    m.sample = [rungs, nm](double idx, RngStream& rng) {
        const BernoulliRung& r = (*rungs)[ladder_rung(idx, rungs->size(), nm->c_str())];
        double s = 0.0;
        for (double p : r.ps) s += rng.bernoulli(p) ? 1.0 : 0.0;
        return (s - r.mean) / std::cbrt(r.var);
    };
    // zone with K1 = K2 = 2 A r_n/(r_n - 1) = 2 A m/v; worst rung governs
    double mv = 0.0;
    for (const auto& r : *rungs) mv = std::max(mv, r.mean / r.var);
    ZoneOfControl z;
    z.nu = 3.0;
    z.omega = 3.0;
    z.gamma = 1.0;
    z.K1 = z.K2 = 2.0 * kBernoulliCubicA * mv;
    z.K = std::min(0.5 / (2.0 * z.K2), 1.0); // (Z2) cap, and |zeta| <= 1 for the cubic bound
    m.zone = z;
    return m;
}

} // namespace

QMoments partition_moments(double q) { return moments_impl(q, false); }
QMoments plane_partition_moments(double q) { return moments_impl(q, true); }

ModPhiModel partition_size(std::vector<double> q_ladder) {
    return partition_like(std::move(q_ladder), false);
}
ModPhiModel plane_partition_size(std::vector<double> q_ladder) {
    return partition_like(std::move(q_ladder), true);
}

double gaf_r2_from_hyperbolic_area(double h) {
    if (!(h > 0.0)) throw std::domain_error("gaf: hyperbolic area must be > 0");
    return h / (4.0 * consts::pi + h);
}
double gaf_hyperbolic_area(double r2) {
    if (!(r2 > 0.0 && r2 < 1.0)) throw std::domain_error("gaf: r2 in (0,1)");
    return 4.0 * consts::pi * r2 / (1.0 - r2);
}

ModPhiModel gaf_zeros(std::vector<double> r2_ladder) {
    std::vector<std::vector<double>> ladder;
    for (double r2 : r2_ladder) {
        if (!(r2 > 0.0 && r2 < 1.0)) throw std::domain_error("gaf_zeros: r2 in (0,1)");
        std::vector<double> ps;
        double p = r2;
        while (p >= 1e-15) {
            ps.push_back(p);
            p *= r2;
        }
        ladder.push_back(std::move(ps));
    }
    return bernoulli_product("gaf", std::move(ladder));
}

ModPhiModel gaf_zeros_hyperbolic(std::vector<double> h_ladder) {
    std::vector<double> r2s;
    for (double h : h_ladder) r2s.push_back(gaf_r2_from_hyperbolic_area(h));
    auto m = gaf_zeros(r2s);
    m.name = "gaf_hyperbolic";
    return m;
}

ModPhiModel determinantal_counts(std::vector<std::vector<double>> eigenvalue_ladder) {
    return bernoulli_product("determinantal", std::move(eigenvalue_ladder));
}

// ---------------------------------------------------------------------------
// Markov visits

namespace {

struct MarkovShared {
    std::vector<std::vector<double>> P;
    int state = 0;
    std::vector<double> pi;
    double theta = 0.0, D = 0.0;
    std::mutex mtx;
    std::map<long, std::shared_ptr<const ExactPmf>> pmf_cache;
    std::map<long, double> var_cache;

    std::shared_ptr<const ExactPmf> pmf_for(long n) {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = pmf_cache.find(n);
        if (it != pmf_cache.end()) return it->second;
        auto p = std::make_shared<const ExactPmf>(markov_visit_pmf(P, state, n));
        pmf_cache[n] = p;
        return p;
    }
    double variance(long n) {
        {
            std::lock_guard<std::mutex> lk(mtx);
            auto it = var_cache.find(n);
            if (it != var_cache.end()) return it->second;
        }
        double v;
        if (n <= 20000 && P.size() <= 8) {
            v = pmf_for(n)->variance();
        } else {
            auto rt = markov_return_time(P, state);
            double pa = pi[static_cast<size_t>(state)];
            v = static_cast<double>(n) * pa * pa * pa * rt.variance; // asymptotic
        }
        std::lock_guard<std::mutex> lk(mtx);
        var_cache[n] = v;
        return v;
    }
    double x_scale(long n) const {
        return std::cbrt(static_cast<double>(n)) * std::pow(D, 2.0 / 3.0);
    }
};

} // namespace

ModPhiModel markov_visits(std::vector<std::vector<double>> P, int state) {
    auto sh = std::make_shared<MarkovShared>();
    sh->P = std::move(P);
    sh->state = state;
    sh->pi = markov_stationary(sh->P);
    sh->theta = markov_theta(sh->P);
    sh->D = (1.0 + sh->theta) / (1.0 - sh->theta);

    ModPhiModel m;
    m.name = "markov";
    m.law = standard_gaussian();
    m.t_of = [sh](double idx) {
        long n = positive_integer_index(idx, "markov");
        return sh->variance(n) /
               (std::pow(static_cast<double>(n), 2.0 / 3.0) * std::pow(sh->D, 4.0 / 3.0));
    };
    m.log_charfn = [sh](double idx, double xi) -> cplx {
        long n = positive_integer_index(idx, "markov");
        const int M = static_cast<int>(sh->P.size());
        const double zeta = xi / sh->x_scale(n);
        const cplx boost = std::polar(1.0, zeta);
        std::vector<cplx> v(sh->pi.begin(), sh->pi.end());
        cplx log_norm{0.0, 0.0};
        for (long t = 1; t <= n; ++t) {
            std::vector<cplx> w(static_cast<size_t>(M), cplx{0.0, 0.0});
            for (int s1 = 0; s1 < M; ++s1) {
                if (v[static_cast<size_t>(s1)] == cplx{0.0, 0.0}) continue;
                for (int s2 = 0; s2 < M; ++s2) {
                    double p = sh->P[static_cast<size_t>(s1)][static_cast<size_t>(s2)];
                    if (p == 0.0) continue;
                    cplx f = v[static_cast<size_t>(s1)] * p;
                    if (s2 == sh->state) f *= boost;
                    w[static_cast<size_t>(s2)] += f;
                }
            }
            v.swap(w);
            if (t % 64 == 0) {
                double mag = 0.0;
                for (auto& c : v) mag = std::max(mag, std::abs(c));
                if (mag > 0.0 && (mag < 1e-100 || mag > 1e100)) {
                    for (auto& c : v) c /= mag;
                    log_norm += std::log(mag);
                }
            }
        }
        cplx tot{0.0, 0.0};
        for (auto& c : v) tot += c;
        double pa = sh->pi[static_cast<size_t>(sh->state)];
        return std::log(tot) + log_norm -
               cplx{0.0, zeta * static_cast<double>(n) * pa};
    };
    m.pmf = [sh](double idx) {
        long n = positive_integer_index(idx, "markov");
        double pa = sh->pi[static_cast<size_t>(sh->state)];
        return sh->pmf_for(n)->affine(1.0 / sh->x_scale(n),
                                      -static_cast<double>(n) * pa / sh->x_scale(n));
    };
    m.sample = [sh](double idx, RngStream& rng) {
        long n = positive_integer_index(idx, "markov");
        const int M = static_cast<int>(sh->P.size());
        double u = rng.uniform();
        int s = M - 1;
        double acc = 0.0;
        for (int i = 0; i < M; ++i) {
            acc += sh->pi[static_cast<size_t>(i)];
            if (u <= acc) {
                s = i;
                break;
            }
        }
        long count = 0;
        for (long t = 1; t <= n; ++t) {
            double uu = rng.uniform(), a2 = 0.0;
            int nxt = M - 1;
            for (int j = 0; j < M; ++j) {
                a2 += sh->P[static_cast<size_t>(s)][static_cast<size_t>(j)];
                if (uu <= a2) {
                    nxt = j;
                    break;
                }
            }
            s = nxt;
            if (s == sh->state) ++count;
        }
        double pa = sh->pi[static_cast<size_t>(sh->state)];
        return (static_cast<double>(count) - static_cast<double>(n) * pa) / sh->x_scale(n);
    };
    return m;
}

// ---------------------------------------------------------------------------
// triangle embeddings in G(n, p)

namespace {

struct TriangleShared {
    double p = 0.5;
    std::mutex mtx;
    std::map<long, std::shared_ptr<const ExactPmf>> pmf_cache; // raw embedding counts

    std::shared_ptr<const ExactPmf> exhaustive(long n) {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = pmf_cache.find(n);
        if (it != pmf_cache.end()) return it->second;
        const int E = static_cast<int>(n * (n - 1) / 2);
        std::vector<std::pair<int, int>> eidx(static_cast<size_t>(n) * static_cast<size_t>(n));
        std::vector<std::uint32_t> tri_masks;
        int e = 0;
        std::vector<std::vector<int>> id(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), -1));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) id[static_cast<size_t>(i)][static_cast<size_t>(j)] = e++;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k)
                    tri_masks.push_back((1u << id[static_cast<size_t>(i)][static_cast<size_t>(j)]) |
                                        (1u << id[static_cast<size_t>(i)][static_cast<size_t>(k)]) |
                                        (1u << id[static_cast<size_t>(j)][static_cast<size_t>(k)]));
        std::vector<double> pmf(tri_masks.size() + 1, 0.0);
        std::vector<double> logp(static_cast<size_t>(E) + 1);
        for (int k = 0; k <= E; ++k)
            logp[static_cast<size_t>(k)] =
                k * std::log(p) + (E - k) * std::log1p(-p);
        for (std::uint32_t g = 0; g < (1u << E); ++g) {
            int edges = __builtin_popcount(g);
            int t = 0;
            for (auto msk : tri_masks)
                if ((g & msk) == msk) ++t;
            pmf[static_cast<size_t>(t)] += std::exp(logp[static_cast<size_t>(edges)]);
        }
        // embeddings = 6 * subsets
        auto out = std::make_shared<const ExactPmf>(ExactPmf{0.0, 6.0, std::move(pmf)});
        pmf_cache[n] = out;
        return out;
    }
};

long count_triangles(const std::vector<std::vector<std::uint64_t>>& adj, int n) {
    long cnt = 0;
    const size_t words = adj[0].size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!(adj[static_cast<size_t>(i)][static_cast<size_t>(j) >> 6] &
                  (1ULL << (j & 63))))
                continue;
            // common neighbors k > j
            for (size_t w = static_cast<size_t>(j) >> 6; w < words; ++w) {
                std::uint64_t both =
                    adj[static_cast<size_t>(i)][w] & adj[static_cast<size_t>(j)][w];
                if (w == static_cast<size_t>(j) >> 6)
                    both &= ~((2ULL << (j & 63)) - 1ULL); // keep bits above j
                cnt += __builtin_popcountll(both);
            }
        }
    return cnt;
}

} // namespace

ModPhiModel subgraph_count(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("subgraph_count: p in (0,1)");
    auto sh = std::make_shared<TriangleShared>();
    sh->p = p;

    auto norms = [p](long n) {
        double nd = static_cast<double>(n);
        double N = nd * (nd - 1.0) * (nd - 2.0); // labeled triple count n^{falling 3}
        double D = 6.0 * (nd - 2.0);
        double var = 18.0 * std::pow(p, 5.0) * (1.0 - p) * std::pow(nd, 4.0);
        double mean = p * p * p * N;
        return std::tuple<double, double, double, double>{N, D, mean, var};
    };
    auto exact_var = [sh, norms](long n) {
        if (n <= 7) return sh->exhaustive(n)->variance();
        return std::get<3>(norms(n));
    };

    ModPhiModel m;
    m.name = "triangles";
    m.law = standard_gaussian();
    m.t_of = [norms, exact_var](double idx) {
        long n = positive_integer_index(idx, "triangles");
        if (n < 3) throw std::domain_error("triangles: n >= 3");
        auto [N, D, mean, var] = norms(n);
        return exact_var(n) / (std::pow(N, 2.0 / 3.0) * std::pow(D, 4.0 / 3.0));
    };
    auto x_scale = [norms](long n) {
        auto [N, D, mean, var] = norms(n);
        return std::cbrt(N) * std::pow(D, 2.0 / 3.0);
    };
    m.pmf = [sh, norms, x_scale](double idx) {
        long n = positive_integer_index(idx, "triangles");
        if (n > 7) throw std::domain_error("triangles: exhaustive pmf only for n <= 7");
        auto [N, D, mean, var] = norms(n);
        return sh->exhaustive(n)->affine(1.0 / x_scale(n), -mean / x_scale(n));
    };
    m.log_charfn = [sh, norms, x_scale](double idx, double xi) -> cplx {
        long n = positive_integer_index(idx, "triangles");
        if (n > 7)
            throw std::domain_error("triangles: characteristic function needs the n <= 7 pmf");
        auto [N, D, mean, var] = norms(n);
        ExactPmf pm = sh->exhaustive(n)->affine(1.0 / x_scale(n), -mean / x_scale(n));
        return std::log(pm.charfn(xi));
    };
    m.sample = [sh, norms, x_scale](double idx, RngStream& rng) {
        long n = positive_integer_index(idx, "triangles");
        if (n > 1000) throw std::domain_error("triangles: Monte Carlo cap n <= 1000");
        const size_t words = (static_cast<size_t>(n) + 63) / 64;
        std::vector<std::vector<std::uint64_t>> adj(static_cast<size_t>(n),
                                                    std::vector<std::uint64_t>(words, 0));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(sh->p)) {
                    adj[static_cast<size_t>(i)][static_cast<size_t>(j) >> 6] |= 1ULL << (j & 63);
                    adj[static_cast<size_t>(j)][static_cast<size_t>(i) >> 6] |= 1ULL << (i & 63);
                }
        double embeddings = 6.0 * static_cast<double>(count_triangles(adj, static_cast<int>(n)));
        auto [N, D, mean, var] = norms(n);
        return (embeddings - mean) / x_scale(n);
    };
    return m;
}

// ---------------------------------------------------------------------------
// random zeta (dimension 2)

namespace {

struct ZetaShared {
    std::mutex mtx;
    std::map<long, std::shared_ptr<const std::vector<long>>> primes_cache;

    std::shared_ptr<const std::vector<long>> primes_for(long N) {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = primes_cache.find(N);
        if (it != primes_cache.end()) return it->second;
        auto p = std::make_shared<const std::vector<long>>(prime_sieve(N));
        primes_cache[N] = p;
        return p;
    }
};

} // namespace

ModPhiModel random_zeta() {
    auto sh = std::make_shared<ZetaShared>();
    ModPhiModel m;
    m.name = "zeta2d";
    m.dimension = 2;
    m.law = standard_gaussian(); // per-coordinate reference; d=2 target e^{-|z|^2}/pi
    m.t_of = [sh](double idx) {
        long N = positive_integer_index(idx, "zeta2d");
        if (N < 2) throw std::domain_error("zeta2d: prime cutoff >= 2");
        double t = 0.0;
        for (long p : *sh->primes_for(N)) t += 0.5 / static_cast<double>(p);
        return t;
    };
    m.log_charfn2 = [sh](double idx, double xi1, double xi2) -> cplx {
        long N = positive_integer_index(idx, "zeta2d");
        const cplx a{0.5 * xi2, 0.5 * xi1};  // (i xi1 + xi2)/2
        const cplx b{-0.5 * xi2, 0.5 * xi1}; // (i xi1 - xi2)/2
        cplx s{0.0, 0.0};
        for (long p : *sh->primes_for(N))
            s += std::log(hyp2f1_c1(a, b, 1.0 / static_cast<double>(p)));
        return s;
    };
    m.sample2 = [sh](double idx, RngStream& rng) {
        long N = positive_integer_index(idx, "zeta2d");
        cplx s{0.0, 0.0};
        for (long p : *sh->primes_for(N)) {
            double th = rng.uniform(0.0, consts::two_pi);
            s -= log1m(std::polar(1.0 / std::sqrt(static_cast<double>(p)), th));
        }
        return std::pair<double, double>{s.real(), s.imag()};
    };
    return m;
}

std::vector<ZetaZonePoint> zeta_zone_report(long prime_cutoff, int grid_per_axis,
                                            double xi_max) {
    ModPhiModel m = random_zeta();
    const double t = m.t_of(static_cast<double>(prime_cutoff));
    double c2 = 0.0;
    for (long p : prime_sieve(prime_cutoff))
        c2 += 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    std::vector<ZetaZonePoint> out;
    for (int i = 0; i < grid_per_axis; ++i)
        for (int j = 0; j < grid_per_axis; ++j) {
            ZetaZonePoint pt;
            pt.xi1 = -xi_max + 2.0 * xi_max * (i + 0.5) / grid_per_axis;
            pt.xi2 = -xi_max + 2.0 * xi_max * (j + 0.5) / grid_per_axis;
            const double n2 = pt.xi1 * pt.xi1 + pt.xi2 * pt.xi2;
            const double nn = std::sqrt(n2);
            pt.s_bound = 16.0 * c2 * n2 * (nn + 2.0) * (nn + 2.0);
            pt.s_cap = 8.0 * n2 * (nn + 2.0) * (nn + 2.0);
            pt.s_ok = pt.s_bound <= pt.s_cap + 1e-12;
            cplx theta = std::exp(m.log_charfn2(static_cast<double>(prime_cutoff), pt.xi1, pt.xi2) +
                                  0.5 * t * n2);
            pt.residue_dev = std::abs(theta - 1.0);
            double cap = pt.s_bound * std::exp(std::min(pt.s_bound, 700.0));
            pt.residue_ok = pt.residue_dev <= cap || !std::isfinite(cap);
            out.push_back(pt);
        }
    return out;
}

// ---------------------------------------------------------------------------
// matrix models

namespace {

struct GammaProductShared {
    std::mutex mtx;
    std::map<long, double> mean_cache;
};

double gue_mean(long n, GammaProductShared& sh) {
    {
        std::lock_guard<std::mutex> lk(sh.mtx);
        auto it = sh.mean_cache.find(n);
        if (it != sh.mean_cache.end()) return it->second;
    }
    // exact mean of log|det|: d/dz [ (nz/2) log 2 + sum_k logG((z+1)/2 + floor(k/2)) ] at 0
    double s = 0.5 * static_cast<double>(n) * std::log(2.0);
    const long J = n / 2;
    if (n % 2 == 0) {
        s += 0.5 * digamma(0.5);
        for (long j = 1; j < J; ++j) s += digamma(0.5 + static_cast<double>(j));
        s += 0.5 * digamma(0.5 + static_cast<double>(J));
    } else {
        s += 0.5 * digamma(0.5);
        for (long j = 1; j <= J; ++j) s += digamma(0.5 + static_cast<double>(j));
    }
    std::lock_guard<std::mutex> lk(sh.mtx);
    sh.mean_cache[n] = s;
    return s;
}

} // namespace

double gue_centering_closed_form(double n) {
    return 0.5 * std::log(consts::two_pi) - 0.5 * n + 0.5 * n * std::log(n);
}

double gue_centering_exact(double n) {
    GammaProductShared tmp;
    return gue_mean(positive_integer_index(n, "gue"), tmp);
}

ModPhiModel gue_logdet() {
    ModPhiModel m;
    m.name = "gue";
    m.law = standard_gaussian();
    m.t_of = [](double idx) {
        long n = positive_integer_index(idx, "gue");
        return 0.5 * std::log(0.5 * static_cast<double>(n));
    };
    m.log_charfn = [](double idx, double xi) -> cplx {
        long n = positive_integer_index(idx, "gue");
        // exact-mean centering cancels the 2^{nz/2} factor and every psi term,
        // leaving a sum of centered Gamma ratios
        auto term = [&](long j) {
            return log_gamma_ratio(0.5 + static_cast<double>(j), 0.5 * xi);
        };
        cplx s{0.0, 0.0};
        const long J = n / 2;
        if (n % 2 == 0) {
            s += term(0) + term(J);
            cplx mid{0.0, 0.0};
            for (long j = 1; j < J; ++j) mid += term(j);
            s += 2.0 * mid;
        } else {
            s += term(0);
            cplx mid{0.0, 0.0};
            for (long j = 1; j <= J; ++j) mid += term(j);
            s += 2.0 * mid;
        }
        return s;
    };
    return m;
}

ModPhiModel laguerre_logdet(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("laguerre: beta > 0");
    ModPhiModel m;
    m.name = "laguerre";
    m.law = standard_gaussian();
    m.t_of = [beta](double idx) {
        long n = positive_integer_index(idx, "laguerre");
        return (2.0 / beta) * std::log(static_cast<double>(n));
    };
    m.log_charfn = [beta](double idx, double xi) -> cplx {
        long n = positive_integer_index(idx, "laguerre");
        cplx s{0.0, 0.0};
        for (long k = 1; k <= n; ++k)
            s += log_gamma_ratio(0.5 * beta * static_cast<double>(k), xi);
        return s;
    };
    return m;
}

// ---------------------------------------------------------------------------
// Brownian winding

namespace {

double winding_log_charfn(double t, double xi) {
    const double z = 1.0 / (4.0 * t);
    const double nu = 0.5 * (std::abs(xi) - 1.0);
    // log(I_nu + I_{nu+1}) in log space: high orders underflow long before
    // the residue theta_t = charfn e^{t_n |xi|} does
    double l1 = log_bessel_i_series(nu, z);
    double l2 = log_bessel_i_series(nu + 1.0, z);
    double lsum = std::max(l1, l2) + std::log1p(std::exp(-std::abs(l1 - l2)));
    return 0.5 * std::log(consts::pi / (8.0 * t)) - z + lsum;
}

double winding_theta_limit(double xi) {
    return std::exp(0.5 * std::log(consts::pi) - std::lgamma(0.5 * (std::abs(xi) + 1.0)));
}

} // namespace

ModPhiModel brownian_winding() {
    ModPhiModel m;
    m.name = "winding";
    m.law = StableLaw(1.0, 1.0, 0.0); // Cauchy reference
    m.t_of = [](double t) {
        if (!(t > 0.125)) throw std::domain_error("winding: time must exceed 1/8");
        return std::log(std::sqrt(8.0 * t));
    };
    m.log_charfn = [](double t, double xi) -> cplx {
        if (!(t > 0.0)) throw std::domain_error("winding: time must be > 0");
        return {winding_log_charfn(t, xi), 0.0};
    };
    m.l1_mod_phi = true;
    m.limiting_theta = [](double xi) -> cplx { return {winding_theta_limit(xi), 0.0}; };
    m.fourier_cutoff = 80.0;
    // control of index (1,1) holds on the whole line, so gamma is free; the
    // residue slope at 0 is -psi(1/2)/2 ~ 0.98, well under K1 = 2
    ZoneOfControl z;
    z.K = 1.0;
    z.gamma = 3.0;
    z.nu = 1.0;
    z.omega = 1.0;
    z.K1 = 2.0;
    z.K2 = 0.0;
    m.zone = z;
    return m;
}

WindingL1 winding_l1_distance(double t) {
    WindingL1 out;
    const double Xi = 40.0;
    auto theta_t = [t](double xi) {
        return std::exp(winding_log_charfn(t, xi) + std::log(std::sqrt(8.0 * t)) * std::abs(xi));
    };
    QuadOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-9;
    opt.max_evaluations = 10'000'000;
    out.distance =
        2.0 * integrate([&](double x) { return std::abs(theta_t(x) - winding_theta_limit(x)); },
                        0.0, Xi, opt)
                  .value;
    out.theta_l1 = 2.0 * integrate([&](double x) { return winding_theta_limit(x); }, 0.0, Xi, opt)
                             .value;
    // beyond Xi = 40 both residues are below sqrt(pi)/Gamma(20.5) ~ 2e-18
    out.tail_bound = 1e-15;
    const double u = 1.0 / (4.0 * t), v = 1.0 / (8.0 * t);
    out.chain_bound = out.theta_l1 * ((1.0 - std::exp(-u)) +
                                      std::exp(-u) * (std::exp(v * v) - 1.0) +
                                      v * std::exp(-u + v * v));
    return out;
}

// ---------------------------------------------------------------------------
// i.i.d. sums

namespace {

struct ParetoShared {
    double alpha = 1.5;
    std::mutex mtx;
    std::map<long, double> b_cache;

    // characteristic function of the Pareto(alpha) law on [1, inf)
    cplx charfn(double xi) const {
        if (xi == 0.0) return {1.0, 0.0};
        const double a = alpha;
        const double X = std::max(std::pow(std::abs(xi) * 1e9, 1.0 / a), 2.0); // tail < 1e-9/|xi|
        auto integrand = [a, xi](double x) -> cplx {
            return a * std::pow(x, -a - 1.0) * std::polar(1.0, xi * x);
        };
        QuadOptions opt;
        opt.abs_tol = 1e-10;
        opt.rel_tol = 1e-9;
        opt.max_panel_width = consts::pi / std::abs(xi);
        opt.max_evaluations = 40'000'000;
        return integrate(integrand, 1.0, X, opt).value;
    }

    // slowly varying part: -Re log cf(u) = s(u) u^alpha near 0
    double s_of(double u) const {
        cplx w = -std::log(charfn(u));
        return w.real() / std::pow(u, alpha);
    }

    // B_n solving B^alpha = n s(1/B); a few fixed-point sweeps converge fast
    double norming(long n) {
        {
            std::lock_guard<std::mutex> lk(mtx);
            auto it = b_cache.find(n);
            if (it != b_cache.end()) return it->second;
        }
        double nd = static_cast<double>(n);
        double B = std::pow(2.0 * nd, 1.0 / alpha);
        for (int it = 0; it < 6; ++it) B = std::pow(nd * s_of(1.0 / B), 1.0 / alpha);
        std::lock_guard<std::mutex> lk(mtx);
        b_cache[n] = B;
        return B;
    }
};

} // namespace

IidNorming iid_norming(Increment inc, double pareto_alpha, double n) {
    IidNorming out;
    switch (inc) {
    case Increment::exponential:
        out.A_n = n;
        out.B_n = std::sqrt(n);
        out.alpha = 2.0;
        out.beta = 0.0;
        break;
    case Increment::uniform:
        out.A_n = 0.5 * n;
        out.B_n = std::sqrt(n / 12.0);
        out.alpha = 2.0;
        out.beta = 0.0;
        break;
    case Increment::pareto: {
        if (!(pareto_alpha > 1.0 && pareto_alpha < 2.0))
            throw std::domain_error("iid pareto: tail exponent in (1,2)");
        ParetoShared ps;
        ps.alpha = pareto_alpha;
        out.A_n = n * pareto_alpha / (pareto_alpha - 1.0);
        out.B_n = ps.norming(static_cast<long>(std::llround(n)));
        out.alpha = pareto_alpha;
        out.beta = 1.0;
        break;
    }
    }
    return out;
}

ModPhiModel iid_sum(Increment inc, double pareto_alpha) {
    // Finite-variance increments are carried at the cube-root normalization
    // X_n = (S_n - n m)/(sigma n^{1/3}) with t_n = n^{1/3}, so the residues
    // converge; Y_n = X_n / sqrt(t_n) recovers the classical (S_n - A_n)/B_n.
    ModPhiModel m;
    switch (inc) {
    case Increment::exponential: {
        m.name = "iid_exponential";
        m.law = standard_gaussian();
        m.t_of = [](double idx) {
            return std::cbrt(static_cast<double>(positive_integer_index(idx, "iid")));
        };
        m.log_charfn = [](double idx, double xi) -> cplx {
            double n = static_cast<double>(positive_integer_index(idx, "iid"));
            double z = xi / std::cbrt(n);
            return n * (-std::log(cplx{1.0, -z}) - cplx{0.0, z});
        };
        m.sample = [](double idx, RngStream& rng) {
            long n = positive_integer_index(idx, "iid");
            double s = 0.0;
            for (long i = 0; i < n; ++i) s += rng.exponential();
            return (s - static_cast<double>(n)) / std::cbrt(static_cast<double>(n));
        };
        break;
    }
    case Increment::uniform: {
        m.name = "iid_uniform";
        m.law = standard_gaussian();
        const double sig = std::sqrt(1.0 / 12.0);
        m.t_of = [](double idx) {
            return std::cbrt(static_cast<double>(positive_integer_index(idx, "iid")));
        };
        m.log_charfn = [sig](double idx, double xi) -> cplx {
            double n = static_cast<double>(positive_integer_index(idx, "iid"));
            double z = xi / (sig * std::cbrt(n));
            cplx cf = (std::abs(z) < 1e-8)
                          ? cplx{1.0 - z * z / 6.0, 0.5 * z}
                          : (std::polar(1.0, z) - 1.0) / cplx{0.0, z};
            return n * (std::log(cf) - cplx{0.0, 0.5 * z});
        };
        m.sample = [sig](double idx, RngStream& rng) {
            long n = positive_integer_index(idx, "iid");
            double s = 0.0;
            for (long i = 0; i < n; ++i) s += rng.uniform();
            return (s - 0.5 * static_cast<double>(n)) / (sig * std::cbrt(static_cast<double>(n)));
        };
        break;
    }
    case Increment::pareto: {
        if (!(pareto_alpha > 1.0 && pareto_alpha < 2.0))
            throw std::domain_error("iid pareto: tail exponent in (1,2)");
        auto ps = std::make_shared<ParetoShared>();
        ps->alpha = pareto_alpha;
        m.name = "iid_pareto";
        m.law = StableLaw(1.0, pareto_alpha, 1.0);
        const double mean = pareto_alpha / (pareto_alpha - 1.0);
        const double a = pareto_alpha;
        // t_n grows slowly: the slowly varying s makes faster choices drift
        m.t_of = [](double idx) {
            return std::pow(static_cast<double>(positive_integer_index(idx, "iid")), 0.2);
        };
        // X_n = (S_n - A_n) t^{1/a} / B_n, so Y_n = X_n / t^{1/a} = (S - A)/B_n
        auto kappa = [ps, a](long n, double t) {
            return std::pow(t, 1.0 / a) / ps->norming(n);
        };
        m.log_charfn = [ps, mean, a, kappa](double idx, double xi) -> cplx {
            long n = positive_integer_index(idx, "iid");
            double t = std::pow(static_cast<double>(n), 0.2);
            double z = xi * kappa(n, t);
            return static_cast<double>(n) * (std::log(ps->charfn(z)) - cplx{0.0, mean * z});
        };
        m.sample = [ps, mean, a, kappa](double idx, RngStream& rng) {
            long n = positive_integer_index(idx, "iid");
            double t = std::pow(static_cast<double>(n), 0.2);
            double s = 0.0;
            for (long i = 0; i < n; ++i) s += std::pow(1.0 - rng.uniform(), -1.0 / a);
            return (s - mean * static_cast<double>(n)) * kappa(n, t);
        };
        break;
    }
    }
    return m;
}

const std::vector<std::string>& registry_names() {
    static const std::vector<std::string> names = {
        "partition", "plane_partition", "gaf",      "determinantal", "zeta2d", "markov",
        "triangles", "gue",             "laguerre", "winding",       "iid",    "curie_weiss"};
    return names;
}

} // namespace modphi::models

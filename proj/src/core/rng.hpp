#pragma once

#include <cstdint>
#include <cmath>

namespace modphi {

// Deterministic splittable RNG. Streams are derived from a master seed and a
// stream id, so parallel workers draw from disjoint, reproducible sequences
// no matter how work is scheduled.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {
        // warm up so nearby seeds decorrelate
        for (int i = 0; i < 4; ++i) next_u64();
    }

    static RngStream split(std::uint64_t master, std::uint64_t stream_id) {
        return RngStream(mix(master ^ mix(stream_id + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Box-Muller; one value per call, cache the pair
    double normal() {
        if (has_spare_) { has_spare_ = false; return spare_; }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double c = std::cos(6.283185307179586476925286766559 * u2);
        double s = std::sin(6.283185307179586476925286766559 * u2);
        spare_ = r * s;
        has_spare_ = true;
        return r * c;
    }

    double exponential(double rate = 1.0) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return -std::log(u) / rate;
    }

    // geometric on {0,1,2,...} with success prob 1-q, i.e. P[k] = (1-q) q^k
    long geometric_q(double q) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return static_cast<long>(std::floor(std::log(u) / std::log(q)));
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        return z ^ (z >> 33);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace modphi

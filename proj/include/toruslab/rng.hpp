#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace toruslab {

// splitmix64: tiny, fast, and fully specified by the seed, so results are
// reproducible across platforms and standard-library versions (std::mt19937
// distributions are not bit-portable).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Box-Muller; no cached spare, so the stream position is a pure
    // function of the number of calls.
    double normal() {
        double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Uniform on the unit sphere in R^n.
    std::vector<double> sphere(int n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& x : v) {
                x = normal();
                norm2 += x * x;
            }
        } while (norm2 == 0.0);
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
        return v;
    }

private:
    std::uint64_t state_;
};

// Independent per-task seed derived from a master seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (0x632be59bd9b4e019ull * (stream + 1)));
    return g.next();
}

}  // namespace toruslab

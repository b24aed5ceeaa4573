#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace bgpl {

/// mt19937_64 with distribution mappings spelled out here, so a seed yields the
/// same draws with every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return p >= 1.0 || (p > 0.0 && uniform() < p); }

    /// Uniform in [0, n); n must be positive.
    std::size_t index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("Rng::index of empty range");
        // Rejection sampling removes the modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % n);
    }

    /// Index drawn with probability proportional to weights (all >= 0, sum > 0).
    std::size_t weighted(const std::vector<double>& weights) {
        double total = 0;
        for (double w : weights) total += w;
        if (!(total > 0)) throw std::invalid_argument("Rng::weighted needs a positive total weight");
        double x = uniform() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (x < weights[i]) return i;
            x -= weights[i];
        }
        for (std::size_t i = weights.size(); i-- > 0;) {
            if (weights[i] > 0) return i;
        }
        return 0;
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[index(v.size())];
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace bgpl

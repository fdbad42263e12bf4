#pragma once

#include <cstdint>
#include <random>

namespace heatlab {

/// Seeded generator with hand-rolled uniform mappings so that identical seeds
/// give identical draws on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        // 53 random bits -> [0,1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double log_uniform(double lo, double hi) {
        return lo * std::pow(hi / lo, uniform01());
    }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(engine_() % span);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace heatlab

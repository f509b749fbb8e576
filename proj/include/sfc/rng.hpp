#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sfc {

/// Deterministic random stream. All randomness in a run derives from one root
/// seed; named sub-streams keep components independent of each other.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t root, std::string_view name, std::uint64_t index = 0);

    std::uint64_t next() { return engine_(); }

    /// Uniform double in the open interval (0, 1).
    double uniform_open() {
        double u;
        do {
            u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        } while (u == 0.0);
        return u;
    }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

} // namespace sfc

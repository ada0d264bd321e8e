#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace nilm {

// Deterministic random stream based on SplitMix64.
//
// All randomness in the project flows from one top-level seed. Independent
// streams are derived with `derive(seed, tag)`, which mixes an FNV-1a hash
// of the tag into the seed and applies one SplitMix64 finalization round.
// The sequence is fully specified here, so identical (seed, tag) pairs give
// identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; draws two uniforms per sample, no cached spare.
    double gaussian(double mean, double sd) {
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    // Fisher-Yates, high index down.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    static std::uint64_t fnv1a(std::string_view tag) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (const char c : tag) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Child-stream seed for a named purpose.
    static std::uint64_t derive(std::uint64_t seed, std::string_view tag) {
        return mix(seed ^ fnv1a(tag));
    }

    static std::uint64_t derive(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
        return mix((seed ^ fnv1a(tag)) + 0x9E3779B97F4A7C15ull * (index + 1));
    }

private:
    std::uint64_t state_;
};

}  // namespace nilm

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <unordered_map>
#include <vector>

namespace frr {

/// Stream tags used when deriving seeds. Adversary and destination streams are
/// disjoint from every protocol stream, so failure selection can never observe
/// the random values a protocol was built from.
enum class Stream : std::uint64_t {
    Cell = 1,
    Adversary = 2,
    Destination = 3,
    Protocol = 4,
    GlobalPermutation = 5,
    LocalPermutation = 6,
    Demands = 7,
    Flow = 8,
    Packing = 9,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable seed hash H(base, parts...). Each part is folded in with its
/// position so that (a, b) and (b, a) give different seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = mix64(base ^ 0x6a09e667f3bcc909ULL);
    std::uint64_t position = 1;
    for (std::uint64_t part : parts) {
        h = mix64(h ^ mix64(part + 0x9e3779b97f4a7c15ULL * position));
        ++position;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::initializer_list<std::uint64_t> parts = {}) {
    std::uint64_t h = derive_seed(base, {static_cast<std::uint64_t>(stream)});
    return parts.size() == 0 ? h : derive_seed(h, parts);
}

/// Portable random source. The standard distributions are implementation
/// defined, so bounded integers and reals are drawn directly from the engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential variate with mean 1.
    double exponential();

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Lazily materialised uniform permutation of [0, size) using a sparse
/// Fisher-Yates shuffle. The first m draws equal the first m entries of the
/// full permutation generated from the same seed.
class PermutationStream {
public:
    PermutationStream(std::uint64_t seed, std::uint32_t size) : rng_(seed), size_(size) {}

    [[nodiscard]] bool exhausted() const { return drawn_ == size_; }
    [[nodiscard]] std::uint32_t drawn() const { return drawn_; }
    [[nodiscard]] std::uint32_t size() const { return size_; }

    std::uint32_t next();

    /// Convenience: the first `count` entries (or all, if fewer remain).
    std::vector<std::uint32_t> take(std::uint32_t count);

private:
    std::uint32_t at(std::uint32_t i) const;

    Rng rng_;
    std::uint32_t size_;
    std::uint32_t drawn_ = 0;
    std::unordered_map<std::uint32_t, std::uint32_t> swapped_;
};

}  // namespace frr

#include "frr/rng.hpp"

#include <cmath>
#include <limits>

#include "frr/common.hpp"

namespace frr {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidSize: return "invalid-size";
        case ErrorCode::InvalidParameter: return "invalid-parameter";
        case ErrorCode::BudgetExceeded: return "budget-exceeded";
        case ErrorCode::ModeMismatch: return "mode-mismatch";
        case ErrorCode::TopologyTooSmall: return "topology-too-small";
        case ErrorCode::IncompatibleTopology: return "incompatible-topology";
        case ErrorCode::PackingFailed: return "packing-failed";
        case ErrorCode::InsufficientConnectivity: return "insufficient-connectivity";
        case ErrorCode::Parse: return "parse-error";
        case ErrorCode::Io: return "io-error";
    }
    return "unknown";
}

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection from the largest multiple of bound that fits in 64 bits.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
}

double Rng::exponential() {
    return -std::log1p(-uniform01());
}

std::uint32_t PermutationStream::at(std::uint32_t i) const {
    auto it = swapped_.find(i);
    return it == swapped_.end() ? i : it->second;
}

std::uint32_t PermutationStream::next() {
    const std::uint32_t i = drawn_;
    const auto j = static_cast<std::uint32_t>(i + rng_.below(size_ - i));
    const std::uint32_t vi = at(i);
    const std::uint32_t vj = at(j);
    swapped_[j] = vi;
    swapped_.erase(i);
    ++drawn_;
    return vj;
}

std::vector<std::uint32_t> PermutationStream::take(std::uint32_t count) {
    std::vector<std::uint32_t> out;
    while (count-- > 0 && !exhausted()) out.push_back(next());
    return out;
}

}  // namespace frr

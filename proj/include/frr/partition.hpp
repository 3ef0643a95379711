#pragma once

#include <cstdint>
#include <vector>

#include "frr/common.hpp"

namespace frr {

/// Split of [0, size) into `parts` consecutive ranges whose sizes differ by
/// at most one. Range i is [floor(i*size/parts), floor((i+1)*size/parts)).
class BalancedSplit {
public:
    BalancedSplit() = default;
    BalancedSplit(std::uint32_t size, std::uint32_t parts);

    [[nodiscard]] std::uint32_t parts() const { return parts_; }
    [[nodiscard]] std::uint32_t size() const { return size_; }
    [[nodiscard]] std::uint32_t begin(std::uint32_t part) const { return bounds_[part]; }
    [[nodiscard]] std::uint32_t end(std::uint32_t part) const { return bounds_[part + 1]; }
    [[nodiscard]] std::uint32_t part_size(std::uint32_t part) const { return end(part) - begin(part); }
    [[nodiscard]] std::uint32_t part_of(std::uint32_t index) const;
    [[nodiscard]] std::uint32_t successor(std::uint32_t part) const { return (part + 1) % parts_; }
    [[nodiscard]] std::uint32_t min_part_size() const;
    [[nodiscard]] const std::vector<std::uint32_t>& bounds() const { return bounds_; }

private:
    std::uint32_t size_ = 0;
    std::uint32_t parts_ = 0;
    std::vector<std::uint32_t> bounds_;
};

/// Consecutive id ranges R_0..R_{K-1} over the nodes of a complete graph.
/// The last range wraps to R_0 as its successor.
using IntervalPartition = BalancedSplit;

}  // namespace frr

#include "frr/partition.hpp"

#include <algorithm>

namespace frr {

BalancedSplit::BalancedSplit(std::uint32_t size, std::uint32_t parts) : size_(size), parts_(parts) {
    if (parts == 0 || parts > size) {
        throw Error(ErrorCode::InvalidParameter, "cannot split " + std::to_string(size) + " items into " +
                                                     std::to_string(parts) + " non-empty parts");
    }
    bounds_.resize(parts + 1);
    for (std::uint32_t i = 0; i <= parts; ++i) {
        bounds_[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) * size / parts);
    }
}

std::uint32_t BalancedSplit::part_of(std::uint32_t index) const {
    auto it = std::upper_bound(bounds_.begin(), bounds_.end(), index);
    return static_cast<std::uint32_t>(it - bounds_.begin()) - 1;
}

std::uint32_t BalancedSplit::min_part_size() const {
    std::uint32_t best = size_;
    for (std::uint32_t i = 0; i < parts_; ++i) best = std::min(best, part_size(i));
    return best;
}

}  // namespace frr

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ficaug/dataset.hpp"

namespace ficaug {

/// Leave-pair-out plan: each fold validates on exactly one sample per class
/// and trains on everything else.
struct FoldPlan {
    struct Fold {
        std::array<int, 2> validation{}; // [class-0 sample id, class-1 sample id]
        std::vector<int> training;       // ascending sample ids
    };
    std::vector<Fold> folds;
    std::uint64_t seed = 0;
};

// With class sizes (a, b) this produces max(a, b) folds. Both classes are
// shuffled with streams derived from `seed` and consumed round-robin, so
// every sample validates at least once and the larger class's samples
// validate exactly once.
FoldPlan make_leave_pair_out_folds(const FeatureDataset& ds, std::uint64_t seed);

} // namespace ficaug

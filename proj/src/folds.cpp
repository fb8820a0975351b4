#include "ficaug/folds.hpp"

#include <algorithm>

#include "ficaug/errors.hpp"
#include "ficaug/rng.hpp"

namespace ficaug {

FoldPlan make_leave_pair_out_folds(const FeatureDataset& ds, std::uint64_t seed) {
    if (ds.n_labels() != 2)
        throw ConfigError("leave-pair-out folds require a binary dataset, got " +
                          std::to_string(ds.n_labels()) + " classes");

    std::array<std::vector<int>, 2> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i)
        by_class[static_cast<std::size_t>(ds.samples[i].label)].push_back(
            static_cast<int>(i));
    for (int c = 0; c < 2; ++c) {
        if (by_class[static_cast<std::size_t>(c)].size() < 2)
            throw FoldError("class '" + ds.label_names[static_cast<std::size_t>(c)] +
                            "' has fewer than 2 samples");
        Rng rng(derive_seed(seed, "lpo-class-" + std::to_string(c)));
        rng.shuffle(by_class[static_cast<std::size_t>(c)]);
    }

    const std::size_t a = by_class[0].size();
    const std::size_t b = by_class[1].size();
    const std::size_t n_folds = std::max(a, b);

    FoldPlan plan;
    plan.seed = seed;
    plan.folds.reserve(n_folds);
    for (std::size_t f = 0; f < n_folds; ++f) {
        FoldPlan::Fold fold;
        fold.validation = {by_class[0][f % a], by_class[1][f % b]};
        for (std::size_t i = 0; i < ds.size(); ++i) {
            int id = static_cast<int>(i);
            if (id != fold.validation[0] && id != fold.validation[1])
                fold.training.push_back(id);
        }
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

} // namespace ficaug

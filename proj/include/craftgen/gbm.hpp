#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "craftgen/error.hpp"
#include "craftgen/features.hpp"

namespace craftgen::pruning {

struct GbmHyperparams {
    double learning_rate = 0.3;
    int max_leaves = 85;
    /// Minimum training samples per leaf.
    int min_samples_leaf = 50;
    int n_trees = 100;
    /// L2 penalty on leaf values (Newton step denominator).
    double l2 = 1.0;
    /// Row fraction drawn (seeded) for each tree; 1 uses every row.
    double subsample = 1.0;

    void validate() const;

    friend bool operator==(const GbmHyperparams&, const GbmHyperparams&) = default;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
    std::size_t samples = 0;

    bool is_leaf() const { return feature < 0; }

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Axis-aligned regression tree; x[feature] <= threshold goes left.
/// Node 0 is the root.
struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> x) const;
    int leaf_count() const;

    friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct GbmModel {
    GbmHyperparams hyperparams;
    std::size_t n_features = 0;
    double base_score = 0.0;
    std::vector<RegressionTree> trees;

    friend bool operator==(const GbmModel&, const GbmModel&) = default;
};

/// Mean training log-loss before the first tree and after every stage.
struct TrainingTrace {
    std::vector<double> log_loss;
};

/// Boosts regression trees on the binary log-loss gradient. Trees grow
/// leaf-wise (largest gain first) up to max_leaves. A stage that would raise
/// the training loss has its leaf values halved until it does not.
GbmModel train_gbm(const std::vector<std::vector<double>>& rows, const std::vector<bool>& labels,
                   const GbmHyperparams& hp, std::uint64_t seed, TrainingTrace& trace);
GbmModel train_gbm(const std::vector<std::vector<double>>& rows, const std::vector<bool>& labels,
                   const GbmHyperparams& hp, std::uint64_t seed);

/// sigmoid(base_score + sum of learning_rate * tree(x)).
double predict(const GbmModel& model, std::span<const double> x);
double predict(const GbmModel& model, const FeatureVector& f);

double log_loss(const GbmModel& model, const std::vector<std::vector<double>>& rows,
                const std::vector<bool>& labels);
double accuracy(const GbmModel& model, const std::vector<std::vector<double>>& rows,
                const std::vector<bool>& labels);

/// A design's features and its three judge votes. The label is the majority.
struct LabeledDesign {
    FeatureVector features;
    std::array<bool, 3> votes{};

    bool label() const { return static_cast<int>(votes[0]) + votes[1] + votes[2] >= 2; }
};

GbmModel train_gbm(const std::vector<LabeledDesign>& data, const GbmHyperparams& hp,
                   std::uint64_t seed, TrainingTrace& trace);
GbmModel train_gbm(const std::vector<LabeledDesign>& data, const GbmHyperparams& hp,
                   std::uint64_t seed);

/// Keeps the designs scoring at least threshold, in their original order.
template <typename Design>
std::vector<Design> prune(const std::vector<std::pair<Design, FeatureVector>>& designs,
                          const GbmModel& model, double threshold = 0.5) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw Error("prune threshold must be in (0,1)");
    std::vector<Design> kept;
    for (const auto& [design, features] : designs) {
        if (predict(model, features) >= threshold) kept.push_back(design);
    }
    return kept;
}

}  // namespace craftgen::pruning

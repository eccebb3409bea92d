#include "craftgen/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "craftgen/rng.hpp"

namespace craftgen::pruning {
namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double mean_log_loss(const std::vector<double>& margin, const std::vector<bool>& labels) {
    double acc = 0.0;
    for (std::size_t i = 0; i < margin.size(); ++i) {
        acc += softplus(margin[i]) - (labels[i] ? margin[i] : 0.0);
    }
    return acc / static_cast<double>(margin.size());
}

struct SplitCandidate {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
};

class TreeBuilder {
public:
    TreeBuilder(const std::vector<std::vector<double>>& rows, const std::vector<double>& grad,
                const std::vector<double>& hess, const GbmHyperparams& hp)
        : rows_(rows), grad_(grad), hess_(hess), hp_(hp) {}

    RegressionTree build(std::vector<std::size_t> sample) {
        RegressionTree tree;
        tree.nodes.push_back(make_leaf(sample));
        std::vector<std::vector<std::size_t>> members{std::move(sample)};
        std::vector<SplitCandidate> best{find_split(members[0])};

        int leaves = 1;
        while (leaves < hp_.max_leaves) {
            int pick = -1;
            for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
                if (!tree.nodes[id].is_leaf() || best[id].feature < 0) continue;
                if (pick < 0 || best[id].gain > best[static_cast<std::size_t>(pick)].gain) {
                    pick = static_cast<int>(id);
                }
            }
            if (pick < 0) break;

            SplitCandidate split = std::move(best[static_cast<std::size_t>(pick)]);
            const int left_id = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(make_leaf(split.left));
            tree.nodes.push_back(make_leaf(split.right));
            TreeNode& node = tree.nodes[static_cast<std::size_t>(pick)];
            node.feature = split.feature;
            node.threshold = split.threshold;
            node.left = left_id;
            node.right = left_id + 1;
            node.value = 0.0;

            best[static_cast<std::size_t>(pick)] = SplitCandidate{};
            members[static_cast<std::size_t>(pick)].clear();
            best.push_back(find_split(split.left));
            best.push_back(find_split(split.right));
            members.push_back(std::move(split.left));
            members.push_back(std::move(split.right));
            ++leaves;
        }
        return tree;
    }

private:
    TreeNode make_leaf(const std::vector<std::size_t>& idx) const {
        double g = 0.0, h = 0.0;
        for (auto i : idx) {
            g += grad_[i];
            h += hess_[i];
        }
        TreeNode leaf;
        leaf.value = -g / (h + hp_.l2);
        leaf.samples = idx.size();
        return leaf;
    }

    SplitCandidate find_split(const std::vector<std::size_t>& idx) const {
        SplitCandidate best;
        const auto min_leaf = static_cast<std::size_t>(hp_.min_samples_leaf);
        if (idx.size() < 2 * min_leaf) return best;

        double g_total = 0.0, h_total = 0.0;
        for (auto i : idx) {
            g_total += grad_[i];
            h_total += hess_[i];
        }
        const double parent = g_total * g_total / (h_total + hp_.l2);
        constexpr double kMinGain = 1e-12;

        std::vector<std::size_t> order = idx;
        const std::size_t n_features = rows_.empty() ? 0 : rows_[0].size();
        for (std::size_t f = 0; f < n_features; ++f) {
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return rows_[a][f] < rows_[b][f];
            });
            double gl = 0.0, hl = 0.0;
            for (std::size_t k = 1; k < order.size(); ++k) {
                gl += grad_[order[k - 1]];
                hl += hess_[order[k - 1]];
                if (k < min_leaf || order.size() - k < min_leaf) continue;
                const double lo = rows_[order[k - 1]][f];
                const double hi = rows_[order[k]][f];
                if (!(lo < hi)) continue;
                const double gr = g_total - gl;
                const double hr = h_total - hl;
                const double gain =
                    gl * gl / (hl + hp_.l2) + gr * gr / (hr + hp_.l2) - parent;
                if (gain > kMinGain && gain > best.gain) {
                    best.gain = gain;
                    best.feature = static_cast<int>(f);
                    double mid = lo + 0.5 * (hi - lo);
                    if (!(mid < hi)) mid = lo;
                    best.threshold = mid;
                }
            }
        }
        if (best.feature >= 0) {
            const auto f = static_cast<std::size_t>(best.feature);
            for (auto i : idx) {
                (rows_[i][f] <= best.threshold ? best.left : best.right).push_back(i);
            }
        }
        return best;
    }

    const std::vector<std::vector<double>>& rows_;
    const std::vector<double>& grad_;
    const std::vector<double>& hess_;
    const GbmHyperparams& hp_;
};

std::vector<std::vector<double>> rows_of(const std::vector<LabeledDesign>& data,
                                         std::vector<bool>& labels) {
    std::vector<std::vector<double>> rows;
    rows.reserve(data.size());
    labels.clear();
    for (const auto& d : data) {
        rows.push_back(d.features.values());
        labels.push_back(d.label());
    }
    return rows;
}

}  // namespace

void GbmHyperparams::validate() const {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw Error("learning rate must be in (0,1]");
    if (max_leaves < 2) throw Error("max_leaves must be at least 2");
    if (min_samples_leaf < 1) throw Error("min_samples_leaf must be at least 1");
    if (n_trees < 0) throw Error("n_trees must be non-negative");
    if (!(l2 >= 0.0)) throw Error("l2 must be non-negative");
    if (!(subsample > 0.0 && subsample <= 1.0)) throw Error("subsample must be in (0,1]");
}

double RegressionTree::predict(std::span<const double> x) const {
    std::size_t id = 0;
    while (!nodes[id].is_leaf()) {
        const TreeNode& n = nodes[id];
        id = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                            : n.right);
    }
    return nodes[id].value;
}

int RegressionTree::leaf_count() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                          [](const TreeNode& n) { return n.is_leaf(); }));
}

GbmModel train_gbm(const std::vector<std::vector<double>>& rows, const std::vector<bool>& labels,
                   const GbmHyperparams& hp, std::uint64_t seed, TrainingTrace& trace) {
    hp.validate();
    if (rows.size() != labels.size()) throw Error("row and label counts differ");
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    if (positives == 0 || positives == labels.size()) throw Error("degenerate labels");
    if (rows.size() < 2 * static_cast<std::size_t>(hp.min_samples_leaf)) {
        throw Error("training set smaller than 2 * min_samples_leaf");
    }
    const std::size_t dim = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != dim) throw Error("inconsistent feature dimensions");
    }

    GbmModel model;
    model.hyperparams = hp;
    model.n_features = dim;
    const double p = static_cast<double>(positives) / static_cast<double>(labels.size());
    model.base_score = std::log(p / (1.0 - p));

    const std::size_t n = rows.size();
    std::vector<double> margin(n, model.base_score);
    std::vector<double> grad(n), hess(n), step(n);
    double loss = mean_log_loss(margin, labels);
    trace.log_loss.assign(1, loss);

    Rng rng(seed);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (int t = 0; t < hp.n_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            const double q = sigmoid(margin[i]);
            grad[i] = q - (labels[i] ? 1.0 : 0.0);
            hess[i] = q * (1.0 - q);
        }
        std::vector<std::size_t> sample = all;
        if (hp.subsample < 1.0) {
            sample.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if (rng.uniform() < hp.subsample) sample.push_back(i);
            }
            if (sample.size() < 2 * static_cast<std::size_t>(hp.min_samples_leaf)) sample = all;
        }

        RegressionTree tree = TreeBuilder(rows, grad, hess, hp).build(std::move(sample));

        std::vector<double> trial(n);
        double trial_loss = loss;
        for (int attempt = 0; attempt <= 40; ++attempt) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = margin[i] + hp.learning_rate * tree.predict(rows[i]);
            }
            trial_loss = mean_log_loss(trial, labels);
            if (trial_loss <= loss) break;
            for (auto& node : tree.nodes) node.value *= attempt < 40 ? 0.5 : 0.0;
        }
        if (trial_loss > loss) {
            trial = margin;
            trial_loss = loss;
        }
        margin = std::move(trial);
        loss = trial_loss;
        trace.log_loss.push_back(loss);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

GbmModel train_gbm(const std::vector<std::vector<double>>& rows, const std::vector<bool>& labels,
                   const GbmHyperparams& hp, std::uint64_t seed) {
    TrainingTrace trace;
    return train_gbm(rows, labels, hp, seed, trace);
}

GbmModel train_gbm(const std::vector<LabeledDesign>& data, const GbmHyperparams& hp,
                   std::uint64_t seed, TrainingTrace& trace) {
    std::vector<bool> labels;
    const auto rows = rows_of(data, labels);
    if (rows.empty()) throw Error("training set is empty");
    return train_gbm(rows, labels, hp, seed, trace);
}

GbmModel train_gbm(const std::vector<LabeledDesign>& data, const GbmHyperparams& hp,
                   std::uint64_t seed) {
    TrainingTrace trace;
    return train_gbm(data, hp, seed, trace);
}

double predict(const GbmModel& model, std::span<const double> x) {
    if (x.size() != model.n_features) {
        throw Error("feature dimension mismatch: model expects " + std::to_string(model.n_features) +
                    ", got " + std::to_string(x.size()));
    }
    double z = model.base_score;
    for (const auto& tree : model.trees) z += model.hyperparams.learning_rate * tree.predict(x);
    return sigmoid(z);
}

double predict(const GbmModel& model, const FeatureVector& f) {
    const auto v = f.values();
    return predict(model, v);
}

double log_loss(const GbmModel& model, const std::vector<std::vector<double>>& rows,
                const std::vector<bool>& labels) {
    if (rows.empty() || rows.size() != labels.size()) throw Error("row and label counts differ");
    double acc = 0.0;
    constexpr double kEps = 1e-15;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double q = std::clamp(predict(model, rows[i]), kEps, 1.0 - kEps);
        acc -= labels[i] ? std::log(q) : std::log(1.0 - q);
    }
    return acc / static_cast<double>(rows.size());
}

double accuracy(const GbmModel& model, const std::vector<std::vector<double>>& rows,
                const std::vector<bool>& labels) {
    if (rows.empty() || rows.size() != labels.size()) throw Error("row and label counts differ");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if ((predict(model, rows[i]) >= 0.5) == labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

}  // namespace craftgen::pruning

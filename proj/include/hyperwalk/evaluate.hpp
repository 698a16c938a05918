#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperwalk/graph.hpp"
#include "hyperwalk/random.hpp"
#include "hyperwalk/trainer.hpp"

namespace hyperwalk {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using FeatureMatrix = std::vector<std::vector<double>>;

/// One stratified train/test partition of the vertex set.
struct Split {
    double fraction = 0.0;
    int repetition = 0;
    std::vector<int> train;
    std::vector<int> test;
};

struct SplitSet {
    std::vector<Split> splits;
    int seeded_classes = 0;  // classes given a training vertex despite rounding to zero
};

/// Stratified random partitions for every (fraction, repetition) cell.
/// Per-class training counts round to nearest; a class that rounds to zero
/// is seeded with one vertex when it has any members.
inline SplitSet make_splits(const LabeledGraph& graph, const std::vector<double>& fractions,
                            int repetitions = 10, std::uint64_t seed = 0) {
    if (repetitions < 1) throw EvalError("make_splits: repetitions must be >= 1");
    std::vector<std::vector<int>> members;
    for (int v = 0; v < graph.vertex_count(); ++v) {
        int label = graph.labels[v];
        if (label < 0) throw EvalError("make_splits: vertex " + graph.names[v] + " is unlabeled");
        if (label >= static_cast<int>(members.size())) members.resize(label + 1);
        members[label].push_back(v);
    }

    SplitSet result;
    std::uint64_t cell = 0;
    for (double fraction : fractions) {
        if (fraction <= 0.0 || fraction >= 1.0)
            throw EvalError("make_splits: fraction must be in (0, 1)");
        for (int rep = 0; rep < repetitions; ++rep) {
            Rng rng(seed, ++cell);
            Split split;
            split.fraction = fraction;
            split.repetition = rep;
            for (const auto& verts : members) {
                std::vector<int> shuffled(verts);
                for (std::size_t i = shuffled.size(); i > 1; --i)
                    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
                auto n_train = static_cast<std::size_t>(
                    std::llround(fraction * static_cast<double>(shuffled.size())));
                if (n_train == 0 && !shuffled.empty()) {
                    n_train = 1;
                    ++result.seeded_classes;
                }
                for (std::size_t i = 0; i < shuffled.size(); ++i)
                    (i < n_train ? split.train : split.test).push_back(shuffled[i]);
            }
            std::sort(split.train.begin(), split.train.end());
            std::sort(split.test.begin(), split.test.end());
            result.splits.push_back(std::move(split));
        }
    }
    return result;
}

/// Multinomial logistic regression fit by full-batch gradient descent with
/// backtracking line search; deterministic (zero init). Weights are C rows
/// of (d + 1) columns, bias last, l2 penalty on the non-bias columns.
class LogisticRegression {
public:
    explicit LogisticRegression(double l2 = 1e-4) : l2_(l2) {}

    void fit(const FeatureMatrix& features, const std::vector<int>& labels,
             const std::vector<int>& train, int classes, int max_iter = 5000,
             double grad_tol = 1e-6) {
        if (train.empty()) throw EvalError("fit: empty training set");
        classes_ = classes;
        dim_ = static_cast<int>(features[train[0]].size());
        weights_.assign(static_cast<std::size_t>(classes_) * (dim_ + 1), 0.0);

        std::vector<double> gradient(weights_.size());
        std::vector<double> probs(classes_);
        double loss = objective(features, labels, train, weights_, &gradient, probs);
        double step = 1.0;
        for (int iter = 0; iter < max_iter; ++iter) {
            double grad_norm = 0.0;
            for (double g : gradient) grad_norm += g * g;
            grad_norm = std::sqrt(grad_norm);
            if (grad_norm < grad_tol) break;

            // Armijo backtracking along the negative gradient
            std::vector<double> trial(weights_.size());
            step = std::min(step * 2.0, 1e4);
            double next_loss;
            while (true) {
                for (std::size_t i = 0; i < weights_.size(); ++i)
                    trial[i] = weights_[i] - step * gradient[i];
                next_loss = objective(features, labels, train, trial, nullptr, probs);
                if (next_loss <= loss - 0.5 * step * grad_norm * grad_norm || step < 1e-16)
                    break;
                step *= 0.5;
            }
            weights_.swap(trial);
            loss = objective(features, labels, train, weights_, &gradient, probs);
        }
        final_loss_ = loss;
    }

    int predict(const std::vector<double>& x) const {
        int best = 0;
        double best_score = class_score(0, x);
        for (int c = 1; c < classes_; ++c) {
            double s = class_score(c, x);
            if (s > best_score) {
                best_score = s;
                best = c;
            }
        }
        return best;
    }

    std::vector<int> predict(const FeatureMatrix& features, const std::vector<int>& subset) const {
        std::vector<int> out;
        out.reserve(subset.size());
        for (int v : subset) out.push_back(predict(features[v]));
        return out;
    }

    double final_loss() const { return final_loss_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Mean cross-entropy plus (l2/2)*||W||^2 over non-bias weights; the
    /// quantity fit() minimizes, exposed for oracle comparison.
    double objective(const FeatureMatrix& features, const std::vector<int>& labels,
                     const std::vector<int>& train, const std::vector<double>& weights,
                     std::vector<double>* gradient, std::vector<double>& probs) const {
        const double n = static_cast<double>(train.size());
        if (gradient) std::fill(gradient->begin(), gradient->end(), 0.0);
        double loss = 0.0;
        for (int v : train) {
            const auto& x = features[v];
            double max_score = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < classes_; ++c) {
                probs[c] = raw_score(c, x, weights);
                max_score = std::max(max_score, probs[c]);
            }
            double total = 0.0;
            for (int c = 0; c < classes_; ++c) {
                probs[c] = std::exp(probs[c] - max_score);
                total += probs[c];
            }
            for (int c = 0; c < classes_; ++c) probs[c] /= total;
            loss -= std::log(std::max(probs[labels[v]], 1e-300));
            if (gradient) {
                for (int c = 0; c < classes_; ++c) {
                    double delta = (probs[c] - (labels[v] == c ? 1.0 : 0.0)) / n;
                    double* row = gradient->data() + static_cast<std::size_t>(c) * (dim_ + 1);
                    for (int i = 0; i < dim_; ++i) row[i] += delta * x[i];
                    row[dim_] += delta;
                }
            }
        }
        loss /= n;
        for (int c = 0; c < classes_; ++c) {
            const double* row = weights.data() + static_cast<std::size_t>(c) * (dim_ + 1);
            for (int i = 0; i < dim_; ++i) loss += 0.5 * l2_ * row[i] * row[i];
        }
        if (gradient) {
            for (int c = 0; c < classes_; ++c) {
                double* grow = gradient->data() + static_cast<std::size_t>(c) * (dim_ + 1);
                const double* wrow = weights.data() + static_cast<std::size_t>(c) * (dim_ + 1);
                for (int i = 0; i < dim_; ++i) grow[i] += l2_ * wrow[i];
            }
        }
        return loss;
    }

private:
    double raw_score(int c, const std::vector<double>& x, const std::vector<double>& w) const {
        const double* row = w.data() + static_cast<std::size_t>(c) * (dim_ + 1);
        double s = row[dim_];
        for (int i = 0; i < dim_; ++i) s += row[i] * x[i];
        return s;
    }
    double class_score(int c, const std::vector<double>& x) const {
        return raw_score(c, x, weights_);
    }

    double l2_;
    int classes_ = 0;
    int dim_ = 0;
    std::vector<double> weights_;
    double final_loss_ = 0.0;
};

/// Unweighted mean over all `classes` of per-class F1 = 2PR/(P+R); a class
/// with no predicted and no true positives contributes 0.
inline double macro_f1(const std::vector<int>& predictions, const std::vector<int>& truth,
                       int classes) {
    if (predictions.size() != truth.size() || predictions.empty())
        throw EvalError("macro_f1: prediction/truth size mismatch or empty");
    std::vector<long long> tp(classes, 0), fp(classes, 0), fn(classes, 0);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        int p = predictions[i], t = truth[i];
        if (p == t) {
            ++tp[p];
        } else {
            ++fp[p];
            ++fn[t];
        }
    }
    double sum = 0.0;
    for (int c = 0; c < classes; ++c) {
        double precision = tp[c] + fp[c] > 0 ? static_cast<double>(tp[c]) / (tp[c] + fp[c]) : 0.0;
        double recall = tp[c] + fn[c] > 0 ? static_cast<double>(tp[c]) / (tp[c] + fn[c]) : 0.0;
        sum += precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return sum / static_cast<double>(classes);
}

struct EvalRow {
    std::string model;
    double fraction = 0.0;
    double mean_macro_f1 = 0.0;
    double stderr_macro_f1 = 0.0;
    int repetitions = 0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    std::uint64_t seed = 0;

    const EvalRow* find(const std::string& model, double fraction) const {
        for (const auto& row : rows)
            if (row.model == model && std::abs(row.fraction - fraction) < 1e-12) return &row;
        return nullptr;
    }
};

/// Runs the classification protocol: for every model tag and labeled
/// fraction, fit on the stratified train split, score macro F1 on the test
/// split, and aggregate over repetitions. All tags share byte-identical
/// splits so comparisons are paired.
inline EvalReport run_protocol(const std::vector<std::pair<std::string, FeatureMatrix>>& models,
                               const LabeledGraph& graph, const std::vector<double>& fractions,
                               int repetitions = 10, std::uint64_t seed = 0, double l2 = 1e-4) {
    for (const auto& [tag, features] : models) {
        if (static_cast<int>(features.size()) != graph.vertex_count())
            throw EvalError("run_protocol: model '" + tag + "' is missing feature vectors");
    }
    const int classes = static_cast<int>(graph.label_names.size());
    SplitSet split_set = make_splits(graph, fractions, repetitions, seed);

    EvalReport report;
    report.seed = seed;
    for (const auto& [tag, features] : models) {
        for (double fraction : fractions) {
            std::vector<double> scores;
            scores.reserve(repetitions);
            for (const Split& split : split_set.splits) {
                if (std::abs(split.fraction - fraction) > 1e-12) continue;
                LogisticRegression classifier(l2);
                classifier.fit(features, graph.labels, split.train, classes);
                if (split.test.empty()) continue;
                auto predictions = classifier.predict(features, split.test);
                std::vector<int> truth;
                truth.reserve(split.test.size());
                for (int v : split.test) truth.push_back(graph.labels[v]);
                scores.push_back(macro_f1(predictions, truth, classes));
            }
            if (scores.empty())
                throw EvalError("run_protocol: no test vertices at fraction " +
                                std::to_string(fraction));
            EvalRow row;
            row.model = tag;
            row.fraction = fraction;
            row.repetitions = static_cast<int>(scores.size());
            double mean = 0.0;
            for (double s : scores) mean += s;
            mean /= static_cast<double>(scores.size());
            double variance = 0.0;
            for (double s : scores) variance += (s - mean) * (s - mean);
            if (scores.size() > 1) {
                variance /= static_cast<double>(scores.size() - 1);
                row.stderr_macro_f1 =
                    std::sqrt(variance) / std::sqrt(static_cast<double>(scores.size()));
            }
            row.mean_macro_f1 = mean;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

/// CSV form: provenance comment then `model,fraction,mean_macro_f1,stderr,reps`.
inline void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "# seed=" << report.seed << '\n';
    out << "model,fraction,mean_macro_f1,stderr,reps\n";
    for (const auto& row : report.rows) {
        out << row.model << ',' << format_double(row.fraction) << ','
            << format_double(row.mean_macro_f1) << ',' << format_double(row.stderr_macro_f1)
            << ',' << row.repetitions << '\n';
    }
}

inline nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"model", row.model},
                        {"fraction", row.fraction},
                        {"mean_macro_f1", row.mean_macro_f1},
                        {"stderr", row.stderr_macro_f1},
                        {"reps", row.repetitions}});
    }
    return nlohmann::json{{"seed", report.seed}, {"rows", std::move(rows)}};
}

}  // namespace hyperwalk

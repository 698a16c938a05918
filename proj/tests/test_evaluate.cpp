#include "hyperwalk/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "hyperwalk/graph.hpp"
#include "hyperwalk/random.hpp"

using namespace hyperwalk;

namespace {
std::string data_path(const std::string& name) {
    return std::string(HYPERWALK_DATA_DIR) + "/" + name;
}

LabeledGraph karate() {
    std::ifstream in(data_path("karate.gml"));
    return parse_gml(in);
}

// synthetic labeled graph with random features
struct Problem {
    LabeledGraph graph;
    FeatureMatrix features;
};

Problem random_problem(int n, int classes, int dim, std::uint64_t seed) {
    Problem problem;
    GraphBuilder builder;
    for (int i = 0; i < n; ++i) builder.vertex("v" + std::to_string(i));
    for (int i = 1; i < n; ++i) builder.edge(i - 1, i);
    problem.graph = builder.build();
    problem.graph.label_names.resize(classes);
    for (int c = 0; c < classes; ++c) problem.graph.label_names[c] = std::to_string(c);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        problem.graph.labels[i] = i % classes;  // balanced
        std::vector<double> row(dim);
        for (double& x : row) x = rng.uniform(-1.0, 1.0);
        problem.features.push_back(std::move(row));
    }
    return problem;
}
}  // namespace

TEST(Splits, KarateHalf) {
    LabeledGraph g = karate();
    SplitSet set = make_splits(g, {0.5}, 1, 7);
    ASSERT_EQ(set.splits.size(), 1u);
    EXPECT_EQ(set.splits[0].train.size(), 17u);
    EXPECT_EQ(set.splits[0].test.size(), 17u);
}

TEST(Splits, DisjointAndExhaustive) {
    LabeledGraph g = karate();
    SplitSet set = make_splits(g, {0.1, 0.3, 0.6, 0.9}, 5, 21);
    for (const Split& split : set.splits) {
        std::set<int> seen(split.train.begin(), split.train.end());
        for (int v : split.test) ASSERT_TRUE(seen.insert(v).second);
        ASSERT_EQ(static_cast<int>(seen.size()), g.vertex_count());
    }
}

TEST(Splits, StratificationKeepsEveryClass) {
    LabeledGraph g = karate();
    SplitSet set = make_splits(g, {0.1, 0.5}, 10, 3);
    for (const Split& split : set.splits) {
        std::set<int> classes;
        for (int v : split.train) classes.insert(g.labels[v]);
        ASSERT_EQ(classes.size(), g.label_names.size());
    }
}

TEST(Splits, DeterministicAndCounted) {
    LabeledGraph g = karate();
    std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    SplitSet a = make_splits(g, fractions, 10, 11);
    SplitSet b = make_splits(g, fractions, 10, 11);
    ASSERT_EQ(a.splits.size(), 90u);
    for (std::size_t i = 0; i < a.splits.size(); ++i) {
        ASSERT_EQ(a.splits[i].train, b.splits[i].train);
        ASSERT_EQ(a.splits[i].test, b.splits[i].test);
    }
}

TEST(Splits, TinyFractionSeedsClasses) {
    LabeledGraph g = karate();
    SplitSet set = make_splits(g, {0.01}, 1, 5);
    EXPECT_GT(set.seeded_classes, 0);
    for (const Split& split : set.splits) EXPECT_EQ(split.train.size(), 2u);  // one per class
}

TEST(Splits, RejectsUnlabeledAndBadFractions) {
    LabeledGraph g = parse_edge_list("a b");
    EXPECT_THROW(make_splits(g, {0.5}, 1, 1), EvalError);
    EXPECT_THROW(make_splits(karate(), {0.0}, 1, 1), EvalError);
    EXPECT_THROW(make_splits(karate(), {1.0}, 1, 1), EvalError);
}

TEST(LogReg, SeparableReachesPerfectTraining) {
    Problem problem = random_problem(20, 2, 2, 1);
    for (int i = 0; i < 20; ++i) {
        problem.graph.labels[i] = i < 10 ? 0 : 1;
        problem.features[i] = {i < 10 ? -1.0 : 1.0, problem.features[i][1]};
    }
    std::vector<int> train(20);
    for (int i = 0; i < 20; ++i) train[i] = i;
    LogisticRegression classifier(1e-4);
    classifier.fit(problem.features, problem.graph.labels, train, 2);
    auto predictions = classifier.predict(problem.features, train);
    for (int i = 0; i < 20; ++i) ASSERT_EQ(predictions[i], problem.graph.labels[i]);
}

TEST(LogReg, HeavyRegularizationPredictsMajority) {
    Problem problem = random_problem(20, 2, 2, 2);
    for (int i = 0; i < 20; ++i) problem.graph.labels[i] = i < 14 ? 0 : 1;  // majority class 0
    std::vector<int> train(20);
    for (int i = 0; i < 20; ++i) train[i] = i;
    LogisticRegression classifier(1e9);
    classifier.fit(problem.features, problem.graph.labels, train, 2);
    auto predictions = classifier.predict(problem.features, train);
    for (int p : predictions) ASSERT_EQ(p, 0);
}

TEST(LogReg, SingleClassTrainingYieldsConstant) {
    Problem problem = random_problem(10, 2, 2, 3);
    std::vector<int> train{0, 2, 4};
    for (int v : train) problem.graph.labels[v] = 1;
    LogisticRegression classifier(1e-4);
    classifier.fit(problem.features, problem.graph.labels, train, 2);
    std::vector<int> all(10);
    for (int i = 0; i < 10; ++i) all[i] = i;
    for (int p : classifier.predict(problem.features, all)) ASSERT_EQ(p, 1);
}

// independent optimizer oracle: plain fixed-step GD on an independently
// coded objective must land on the same optimum
TEST(LogReg, MatchesBruteForceOptimizer) {
    const int n = 50, classes = 3, dim = 2;
    Problem problem = random_problem(n, classes, dim, 4);
    std::vector<int> train(n);
    for (int i = 0; i < n; ++i) train[i] = i;
    const double l2 = 1e-4;

    LogisticRegression classifier(l2);
    classifier.fit(problem.features, problem.graph.labels, train, classes);

    // oracle: W is classes x (dim + 1), bias last, mean cross-entropy + l2/2 ||W||^2
    std::vector<double> w(classes * (dim + 1), 0.0);
    auto oracle_objective = [&](const std::vector<double>& weights, std::vector<double>* grad) {
        if (grad) std::fill(grad->begin(), grad->end(), 0.0);
        double loss = 0.0;
        for (int v : train) {
            std::vector<double> scores(classes);
            for (int c = 0; c < classes; ++c) {
                scores[c] = weights[c * (dim + 1) + dim];
                for (int i = 0; i < dim; ++i)
                    scores[c] += weights[c * (dim + 1) + i] * problem.features[v][i];
            }
            double mx = *std::max_element(scores.begin(), scores.end());
            double total = 0.0;
            for (int c = 0; c < classes; ++c) total += std::exp(scores[c] - mx);
            loss -= scores[problem.graph.labels[v]] - mx - std::log(total);
            if (grad) {
                for (int c = 0; c < classes; ++c) {
                    double p = std::exp(scores[c] - mx) / total;
                    double delta = (p - (problem.graph.labels[v] == c ? 1.0 : 0.0)) / n;
                    for (int i = 0; i < dim; ++i)
                        (*grad)[c * (dim + 1) + i] += delta * problem.features[v][i];
                    (*grad)[c * (dim + 1) + dim] += delta;
                }
            }
        }
        loss /= n;
        for (int c = 0; c < classes; ++c)
            for (int i = 0; i < dim; ++i) {
                loss += 0.5 * l2 * weights[c * (dim + 1) + i] * weights[c * (dim + 1) + i];
                if (grad) (*grad)[c * (dim + 1) + i] += l2 * weights[c * (dim + 1) + i];
            }
        return loss;
    };

    std::vector<double> grad(w.size());
    double oracle_loss = oracle_objective(w, &grad);
    for (int iter = 0; iter < 300000; ++iter) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= 0.05 * grad[i];
        oracle_loss = oracle_objective(w, &grad);
    }
    EXPECT_NEAR(classifier.final_loss(), oracle_loss, 1e-6);
}

TEST(MacroF1, Examples) {
    EXPECT_EQ(macro_f1({0, 1, 2, 1}, {0, 1, 2, 1}, 3), 1.0);
    // all predictions A over balanced A/B truth: F1_A = 2/3, F1_B = 0
    EXPECT_NEAR(macro_f1({0, 0, 0, 0}, {0, 0, 1, 1}, 2), 1.0 / 3.0, 1e-15);
    EXPECT_THROW(macro_f1({}, {}, 2), EvalError);
}

TEST(MacroF1, RelabelInvariance) {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 20 + static_cast<int>(rng.below(30));
        std::vector<int> pred(n), truth(n);
        for (int i = 0; i < n; ++i) {
            pred[i] = static_cast<int>(rng.below(3));
            truth[i] = static_cast<int>(rng.below(3));
        }
        // permutation (0 1 2) -> (2 0 1) applied to both
        auto permute = [](std::vector<int> v) {
            for (int& x : v) x = (x + 2) % 3;
            return v;
        };
        ASSERT_NEAR(macro_f1(pred, truth, 3), macro_f1(permute(pred), permute(truth), 3), 1e-15);
    }
}

// brute-force confusion-matrix oracle over random prediction vectors
TEST(MacroF1, MatchesConfusionMatrixOracle) {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        int classes = 2 + static_cast<int>(rng.below(4));
        int n = 5 + static_cast<int>(rng.below(40));
        std::vector<int> pred(n), truth(n);
        for (int i = 0; i < n; ++i) {
            pred[i] = static_cast<int>(rng.below(classes));
            truth[i] = static_cast<int>(rng.below(classes));
        }
        double expected = 0.0;
        for (int c = 0; c < classes; ++c) {
            double tp = 0, fp = 0, fn = 0;
            for (int i = 0; i < n; ++i) {
                if (pred[i] == c && truth[i] == c) ++tp;
                if (pred[i] == c && truth[i] != c) ++fp;
                if (pred[i] != c && truth[i] == c) ++fn;
            }
            double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
            double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
            expected += precision + recall > 0 ? 2 * precision * recall / (precision + recall)
                                               : 0.0;
        }
        expected /= classes;
        ASSERT_NEAR(macro_f1(pred, truth, classes), expected, 1e-12);
    }
}

TEST(Protocol, RowBookkeeping) {
    Problem problem = random_problem(60, 3, 4, 8);
    std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    EvalReport report =
        run_protocol({{"only", problem.features}}, problem.graph, fractions, 10, 3);
    ASSERT_EQ(report.rows.size(), 9u);
    for (const auto& row : report.rows) {
        EXPECT_EQ(row.repetitions, 10);
        EXPECT_GE(row.mean_macro_f1, 0.0);
        EXPECT_LE(row.mean_macro_f1, 1.0);
        EXPECT_GE(row.stderr_macro_f1, 0.0);
    }
}

TEST(Protocol, DuplicateTagsGetIdenticalRows) {
    Problem problem = random_problem(40, 2, 3, 9);
    EvalReport report = run_protocol(
        {{"a", problem.features}, {"b", problem.features}}, problem.graph, {0.3, 0.6}, 5, 4);
    ASSERT_EQ(report.rows.size(), 4u);
    EXPECT_EQ(report.rows[0].mean_macro_f1, report.rows[2].mean_macro_f1);
    EXPECT_EQ(report.rows[0].stderr_macro_f1, report.rows[2].stderr_macro_f1);
    EXPECT_EQ(report.rows[1].mean_macro_f1, report.rows[3].mean_macro_f1);
}

TEST(Protocol, NullModelNearChance) {
    // random features, random balanced 2-class labels: near-chance macro F1
    Problem problem = random_problem(50, 2, 2, 10);
    Rng rng(11);
    for (int i = 0; i < 50; ++i) problem.graph.labels[i] = static_cast<int>(rng.below(2));
    problem.graph.labels[0] = 0;
    problem.graph.labels[1] = 1;
    EvalReport report = run_protocol({{"null", problem.features}}, problem.graph, {0.5}, 10, 12);
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_NEAR(report.rows[0].mean_macro_f1, 0.5, 0.1);
}

TEST(Protocol, MissingFeaturesRejected) {
    Problem problem = random_problem(30, 2, 2, 13);
    FeatureMatrix truncated(problem.features.begin(), problem.features.end() - 1);
    EXPECT_THROW(run_protocol({{"bad", truncated}}, problem.graph, {0.5}, 2, 1), EvalError);
}

TEST(Protocol, SingleRepetitionHasZeroStderr) {
    Problem problem = random_problem(30, 2, 2, 14);
    EvalReport report = run_protocol({{"m", problem.features}}, problem.graph, {0.5}, 1, 2);
    EXPECT_EQ(report.rows[0].stderr_macro_f1, 0.0);
    EXPECT_EQ(report.rows[0].repetitions, 1);
}

TEST(Report, CsvShape) {
    EvalReport report;
    report.seed = 5;
    report.rows.push_back({"m", 0.5, 0.75, 0.01, 10});
    std::stringstream buffer;
    write_report_csv(buffer, report);
    EXPECT_EQ(buffer.str(), "# seed=5\nmodel,fraction,mean_macro_f1,stderr,reps\n"
                            "m,0.5,0.75,0.01,10\n");
    nlohmann::json j = report_to_json(report);
    EXPECT_EQ(j["seed"], 5);
    ASSERT_EQ(j["rows"].size(), 1u);
    EXPECT_EQ(j["rows"][0]["model"], "m");
}

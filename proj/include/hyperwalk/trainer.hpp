#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperwalk/geometry.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/random.hpp"
#include "hyperwalk/walks.hpp"

namespace hyperwalk {

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

/// log(sigmoid(x)) without overflow for large |x|.
inline double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

/// Prediction error eps_j = sigma(u_j) - t_j, the gradient of the loss with
/// respect to the similarity score.
inline double prediction_error(double score, bool is_positive) {
    return sigmoid(score) - (is_positive ? 1.0 : 0.0);
}

// Radius floor keeping natural coordinates away from the origin singularity.
inline constexpr double kMinRadius = 1e-3;

struct TrainConfig {
    int epochs = 5;
    int window = 5;
    int negatives = 5;
    double learning_rate = 0.1;
    double lr_floor_fraction = 1e-4;
    std::uint64_t seed = 1;
    int dimension = 2;     // euclidean mode only
    bool shuffle = false;  // reshuffle pair order each epoch

    void validate() const {
        if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
        if (window < 1) throw std::invalid_argument("window must be >= 1");
        if (negatives < 0) throw std::invalid_argument("negatives must be >= 0");
        if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be > 0");
        if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
    }
};

/// Poincare-disk geometry in natural polar coordinates. Scores are the polar
/// inner product; updates follow the coordinate partials below with the
/// 1/sinh(r) metric factor on the angular step.
class HyperbolicSpace {
public:
    using Point = NaturalPoint;

    struct Gradient {
        double radial = 0.0;   // dE/dr_I
        double angular = 0.0;  // dE/dtheta_I
    };

    static constexpr const char* mode_name() { return "hyperbolic"; }
    int dim() const { return 2; }

    // All vectors start in a thin annulus: the radial spread (0.2) is small
    // relative to the distance from the origin (1.0).
    Point sample_initial(Rng& rng) const {
        double r = rng.uniform(0.9, 1.1);
        double theta = rng.uniform(0.0, kTwoPi);
        return {r, theta};
    }

    double score(const Point& input, const Point& output) const {
        return inner(input, output);
    }

    // Raw coordinate partials of the negative-sampling loss. The angular
    // ones are pre-metric; updates divide by sinh(r) of the moving point.
    static double output_radial_partial(const Point& in, const Point& out, double err) {
        return err * in.r * std::cos(in.theta - out.theta);
    }
    static double output_angular_partial(const Point& in, const Point& out, double err) {
        return err * out.r * in.r * std::sin(in.theta - out.theta);
    }
    static double input_radial_partial(const Point& in, const Point& out, double err) {
        return err * out.r * std::cos(in.theta - out.theta);
    }
    static double input_angular_partial(const Point& in, const Point& out, double err) {
        return -err * in.r * out.r * std::sin(in.theta - out.theta);
    }

    Gradient make_gradient() const { return {}; }
    void reset(Gradient& g) const { g = {}; }

    void add_input_gradient(Gradient& g, const Point& in, const Point& out,
                            double err) const {
        g.radial += input_radial_partial(in, out, err);
        g.angular += input_angular_partial(in, out, err);
    }

    void step_output(Point& out, const Point& in, double err, double eta) const {
        const double r_pre = out.r;
        double r_next = r_pre - eta * output_radial_partial(in, out, err);
        double theta_next =
            out.theta - eta * (1.0 / std::sinh(r_pre)) * output_angular_partial(in, out, err);
        out.r = std::max(r_next, kMinRadius);
        out.theta = normalize_angle(theta_next);
    }

    void step_input(Point& in, const Gradient& g, double eta) const {
        const double r_pre = in.r;
        double r_next = r_pre - eta * g.radial;
        double theta_next = in.theta - eta * (1.0 / std::sinh(r_pre)) * g.angular;
        in.r = std::max(r_next, kMinRadius);
        in.theta = normalize_angle(theta_next);
    }

    bool finite(const Point& p) const {
        return std::isfinite(p.r) && std::isfinite(p.theta);
    }
};

/// Flat baseline sharing the training loop: dot-product scores and the
/// standard Skipgram gradient steps on d-dimensional Cartesian vectors.
class EuclideanSpace {
public:
    using Point = std::vector<double>;
    using Gradient = std::vector<double>;

    static constexpr const char* mode_name() { return "euclidean"; }

    explicit EuclideanSpace(int dim) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("EuclideanSpace: dim must be >= 1");
    }

    int dim() const { return dim_; }

    Point sample_initial(Rng& rng) const {
        Point p(dim_);
        const double half = 0.5 / static_cast<double>(dim_);
        for (double& x : p) x = rng.uniform(-half, half);
        return p;
    }

    double score(const Point& input, const Point& output) const {
        double dot = 0.0;
        for (int i = 0; i < dim_; ++i) dot += input[i] * output[i];
        return dot;
    }

    Gradient make_gradient() const { return Gradient(dim_, 0.0); }
    void reset(Gradient& g) const { std::fill(g.begin(), g.end(), 0.0); }

    void add_input_gradient(Gradient& g, const Point&, const Point& out, double err) const {
        for (int i = 0; i < dim_; ++i) g[i] += err * out[i];
    }

    void step_output(Point& out, const Point& in, double err, double eta) const {
        for (int i = 0; i < dim_; ++i) out[i] -= eta * err * in[i];
    }

    void step_input(Point& in, const Gradient& g, double eta) const {
        for (int i = 0; i < dim_; ++i) in[i] -= eta * g[i];
    }

    bool finite(const Point& p) const {
        for (double x : p)
            if (!std::isfinite(x)) return false;
        return true;
    }

private:
    int dim_;
};

/// The two coupled coordinate tables: W (input, the learned embedding) and
/// W' (output/context).
template <class Space>
struct EmbeddingModel {
    Space space;
    std::vector<typename Space::Point> input_table;
    std::vector<typename Space::Point> output_table;

    int vocab() const { return static_cast<int>(input_table.size()); }
};

namespace detail {
inline constexpr std::uint64_t kInitStream = 0xe1;
inline constexpr std::uint64_t kNegativeStream = 0xe2;
inline constexpr std::uint64_t kShuffleStream = 0xe3;
}  // namespace detail

template <class Space>
EmbeddingModel<Space> init_model(Space space, int vocab, std::uint64_t seed) {
    if (vocab < 1) throw std::invalid_argument("init_model: vocab must be >= 1");
    EmbeddingModel<Space> model{std::move(space), {}, {}};
    Rng rng(seed, detail::kInitStream);
    model.input_table.reserve(vocab);
    model.output_table.reserve(vocab);
    for (int v = 0; v < vocab; ++v) model.input_table.push_back(model.space.sample_initial(rng));
    for (int v = 0; v < vocab; ++v) model.output_table.push_back(model.space.sample_initial(rng));
    return model;
}

/// Negative-sampling loss E = -log sigma(u_O) - sum_j log sigma(-u_j).
template <class Space>
double negative_sampling_loss(const Space& space, const typename Space::Point& input,
                              const typename Space::Point& output,
                              std::span<const typename Space::Point> negatives) {
    double loss = -log_sigmoid(space.score(input, output));
    for (const auto& neg : negatives) loss -= log_sigmoid(-space.score(input, neg));
    return loss;
}

/// Full conditional softmax over the vocabulary; diagnostic only, the
/// training path never evaluates it.
template <class Space>
std::vector<double> softmax_conditional(const EmbeddingModel<Space>& model, int input_vertex) {
    const auto& input = model.input_table[input_vertex];
    std::vector<double> scores(model.output_table.size());
    double max_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.output_table.size(); ++i) {
        scores[i] = model.space.score(input, model.output_table[i]);
        max_score = std::max(max_score, scores[i]);
    }
    double total = 0.0;
    for (double& s : scores) {
        s = std::exp(s - max_score);
        total += s;
    }
    for (double& s : scores) s /= total;
    return scores;
}

class TrainError : public std::runtime_error {
public:
    TrainError(const std::string& what, int epoch, long long step, TrainingPair pair)
        : std::runtime_error("epoch " + std::to_string(epoch) + ", step " +
                             std::to_string(step) + ", pair (" + std::to_string(pair.input) +
                             ", " + std::to_string(pair.output) + "): " + what),
          epoch_(epoch),
          step_(step),
          pair_(pair) {}
    int epoch() const { return epoch_; }
    long long step() const { return step_; }
    TrainingPair pair() const { return pair_; }

private:
    int epoch_;
    long long step_;
    TrainingPair pair_;
};

struct TrainStats {
    std::vector<double> epoch_mean_loss;
    long long pairs_per_epoch = 0;
};

/// SGD over the pair stream. Per pair: scores and errors for the positive
/// output plus K negatives come from pre-step values, then the output points
/// step, then the input point. The learning rate decays linearly from
/// learning_rate to learning_rate * lr_floor_fraction over epochs * |stream|
/// scheduled pairs.
template <class Space>
TrainStats train_model(EmbeddingModel<Space>& model, const PairStream& stream,
                       const NoiseTable& noise, const TrainConfig& config) {
    config.validate();
    if (stream.empty()) throw std::invalid_argument("train_model: empty pair stream");

    Rng negative_rng(config.seed, detail::kNegativeStream);
    Rng shuffle_rng(config.seed, detail::kShuffleStream);

    std::vector<TrainingPair> order(stream.begin(), stream.end());
    const double total_pairs =
        static_cast<double>(config.epochs) * static_cast<double>(order.size());

    TrainStats stats;
    stats.pairs_per_epoch = static_cast<long long>(order.size());

    std::vector<int> candidates;
    std::vector<double> errors;
    auto gradient = model.space.make_gradient();
    long long processed = 0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) {
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[shuffle_rng.below(i)]);
        }
        double loss_sum = 0.0;
        for (std::size_t step = 0; step < order.size(); ++step) {
            const TrainingPair pair = order[step];
            const double eta =
                config.learning_rate *
                std::max(1.0 - static_cast<double>(processed) / total_pairs,
                         config.lr_floor_fraction);

            candidates.clear();
            candidates.push_back(pair.output);
            if (config.negatives > 0) {
                for (int neg : draw_negatives(noise, config.negatives, pair.output, negative_rng))
                    candidates.push_back(neg);
            }

            const auto input_pre = model.input_table[pair.input];

            errors.clear();
            double pair_loss = 0.0;
            model.space.reset(gradient);
            for (std::size_t j = 0; j < candidates.size(); ++j) {
                const auto& out = model.output_table[candidates[j]];
                const double u = model.space.score(input_pre, out);
                const bool positive = j == 0;
                errors.push_back(prediction_error(u, positive));
                pair_loss -= positive ? log_sigmoid(u) : log_sigmoid(-u);
                model.space.add_input_gradient(gradient, input_pre, out, errors[j]);
            }
            for (std::size_t j = 0; j < candidates.size(); ++j)
                model.space.step_output(model.output_table[candidates[j]], input_pre, errors[j],
                                        eta);
            model.space.step_input(model.input_table[pair.input], gradient, eta);

            if (!std::isfinite(pair_loss) || !model.space.finite(model.input_table[pair.input]))
                throw TrainError("non-finite coordinate after update", epoch,
                                 static_cast<long long>(step), pair);
            for (int c : candidates)
                if (!model.space.finite(model.output_table[c]))
                    throw TrainError("non-finite coordinate after update", epoch,
                                     static_cast<long long>(step), pair);

            loss_sum += pair_loss;
            ++processed;
        }
        stats.epoch_mean_loss.push_back(loss_sum / static_cast<double>(order.size()));
    }
    return stats;
}

template <class Space>
struct TrainRun {
    EmbeddingModel<Space> model;
    TrainStats stats;
};

/// Hyperbolic Skipgram with negative sampling over a walk corpus.
inline TrainRun<HyperbolicSpace> train_hyperbolic(const LabeledGraph& graph,
                                                  const WalkCorpus& corpus,
                                                  const TrainConfig& config) {
    PairStream stream = pairs(corpus, config.window);
    NoiseTable noise = build_noise_table(corpus, graph.vertex_count());
    auto model = init_model(HyperbolicSpace{}, graph.vertex_count(), config.seed);
    TrainStats stats = train_model(model, stream, noise, config);
    return {std::move(model), std::move(stats)};
}

/// Euclidean baseline: identical pair stream, sampler and schedule, flat
/// geometry, so comparisons isolate the geometry.
inline TrainRun<EuclideanSpace> train_euclidean(const LabeledGraph& graph,
                                                const WalkCorpus& corpus,
                                                const TrainConfig& config) {
    PairStream stream = pairs(corpus, config.window);
    NoiseTable noise = build_noise_table(corpus, graph.vertex_count());
    auto model = init_model(EuclideanSpace(config.dimension), graph.vertex_count(), config.seed);
    TrainStats stats = train_model(model, stream, noise, config);
    return {std::move(model), std::move(stats)};
}

/// Per-vertex feature rows for downstream classifiers: hyperbolic points map
/// back to Cartesian coordinates on the disk, euclidean vectors pass through.
inline std::vector<std::vector<double>> embedding_features(
    const EmbeddingModel<HyperbolicSpace>& model) {
    std::vector<std::vector<double>> rows;
    rows.reserve(model.input_table.size());
    for (const auto& p : model.input_table) {
        Cartesian2 c = cartesian(to_disk(p));
        rows.push_back({c.x, c.y});
    }
    return rows;
}

inline std::vector<std::vector<double>> embedding_features(
    const EmbeddingModel<EuclideanSpace>& model) {
    return {model.input_table.begin(), model.input_table.end()};
}

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Embedding file: provenance comment, `tag dim mode` header, then
/// `name<TAB>x_1<TAB>...<TAB>x_d` rows.
template <class Space>
void write_embeddings(std::ostream& out, const EmbeddingModel<Space>& model,
                      const std::vector<std::string>& names, const std::string& tag,
                      std::uint64_t seed) {
    auto rows = embedding_features(model);
    out << "# seed=" << seed << '\n';
    out << tag << ' ' << model.space.dim() << ' ' << Space::mode_name() << '\n';
    for (std::size_t v = 0; v < rows.size(); ++v) {
        out << names[v];
        for (double x : rows[v]) out << '\t' << format_double(x);
        out << '\n';
    }
}

struct EmbeddingFile {
    std::string tag;
    int dim = 0;
    std::string mode;
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
};

inline EmbeddingFile read_embeddings(std::istream& in) {
    EmbeddingFile file;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            std::istringstream header(line);
            if (!(header >> file.tag >> file.dim >> file.mode))
                throw ParseError("bad embedding header", line_no);
            header_seen = true;
            continue;
        }
        std::istringstream fields(line);
        std::string name;
        if (!std::getline(fields, name, '\t'))
            throw ParseError("bad embedding row", line_no);
        std::vector<double> row;
        std::string cell;
        while (std::getline(fields, cell, '\t')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != file.dim)
            throw ParseError("embedding row has wrong dimension", line_no);
        file.names.push_back(std::move(name));
        file.rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError("empty embedding file");
    return file;
}

/// Loss trace: provenance comment then CSV rows `epoch,mean_loss`.
inline void write_loss_trace(std::ostream& out, const TrainStats& stats, std::uint64_t seed) {
    out << "# seed=" << seed << '\n';
    out << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < stats.epoch_mean_loss.size(); ++e)
        out << (e + 1) << ',' << format_double(stats.epoch_mean_loss[e]) << '\n';
}

}  // namespace hyperwalk

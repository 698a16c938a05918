#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperwalk/graph.hpp"
#include "hyperwalk/random.hpp"

namespace hyperwalk {

/// Uniform random-walk corpus: one walk per origin vertex, in origin order.
struct WalkCorpus {
    std::vector<std::vector<int>> walks;
    int walk_length = 0;  // transitions per walk (walks hold up to this + 1 vertices)
    std::uint64_t seed = 0;
};

struct TrainingPair {
    int input = 0;
    int output = 0;
};

using PairStream = std::vector<TrainingPair>;

/// One walk per vertex, each `steps` uniform neighbor transitions. Every walk
/// has its own RNG stream keyed by (seed, origin), so results do not depend
/// on generation order. An isolated origin yields a length-1 walk.
inline WalkCorpus generate_walks(const LabeledGraph& graph, int steps = 10,
                                 std::uint64_t seed = 0) {
    if (graph.vertex_count() == 0)
        throw std::invalid_argument("generate_walks: empty graph");
    WalkCorpus corpus;
    corpus.walk_length = steps;
    corpus.seed = seed;
    corpus.walks.resize(graph.vertex_count());
    for (int origin = 0; origin < graph.vertex_count(); ++origin) {
        Rng rng(seed, static_cast<std::uint64_t>(origin));
        auto& walk = corpus.walks[origin];
        walk.reserve(steps + 1);
        walk.push_back(origin);
        int current = origin;
        for (int s = 0; s < steps; ++s) {
            const auto& neighbors = graph.adjacency[current];
            if (neighbors.empty()) break;
            current = neighbors[rng.below(neighbors.size())];
            walk.push_back(current);
        }
    }
    return corpus;
}

/// Sliding-window decomposition: for every position t emit (w_t, w_{t+d})
/// for 0 < |d| <= window, d ascending, walks in corpus order.
inline PairStream pairs(const WalkCorpus& corpus, int window = 5) {
    if (window < 1) throw std::invalid_argument("pairs: window must be >= 1");
    PairStream stream;
    for (const auto& walk : corpus.walks) {
        const int len = static_cast<int>(walk.size());
        for (int t = 0; t < len; ++t) {
            for (int d = -window; d <= window; ++d) {
                if (d == 0) continue;
                int ctx = t + d;
                if (ctx < 0 || ctx >= len) continue;
                stream.push_back({walk[t], walk[ctx]});
            }
        }
    }
    return stream;
}

/// Noise distribution for negative sampling: corpus occurrence counts raised
/// to `exponent` and normalized. Vertices absent from the corpus get zero
/// probability. Draws go through the cumulative table.
struct NoiseTable {
    std::vector<double> probabilities;   // per vertex, sums to 1
    std::vector<int> support_ids;        // vertices with positive probability
    std::vector<double> support_cum;     // cumulative over support_ids
    double exponent = 0.75;

    int support() const { return static_cast<int>(support_ids.size()); }

    int sample(Rng& rng) const {
        double x = rng.uniform() * support_cum.back();
        auto it = std::upper_bound(support_cum.begin(), support_cum.end(), x);
        if (it == support_cum.end()) --it;
        return support_ids[it - support_cum.begin()];
    }
};

inline NoiseTable build_noise_table(const WalkCorpus& corpus, int vocab,
                                    double exponent = 0.75) {
    std::vector<double> counts(vocab, 0.0);
    for (const auto& walk : corpus.walks)
        for (int v : walk) counts[v] += 1.0;

    NoiseTable table;
    table.exponent = exponent;
    table.probabilities.resize(vocab, 0.0);
    double total = 0.0;
    for (int v = 0; v < vocab; ++v) {
        if (counts[v] > 0.0) {
            table.probabilities[v] = std::pow(counts[v], exponent);
            total += table.probabilities[v];
        }
    }
    if (total <= 0.0)
        throw std::invalid_argument("build_noise_table: all counts are zero");
    double acc = 0.0;
    for (int v = 0; v < vocab; ++v) {
        if (table.probabilities[v] == 0.0) continue;
        table.probabilities[v] /= total;
        acc += table.probabilities[v];
        table.support_ids.push_back(v);
        table.support_cum.push_back(acc);
    }
    return table;
}

inline NoiseTable build_noise_table(const WalkCorpus& corpus, const LabeledGraph& graph,
                                    double exponent = 0.75) {
    return build_noise_table(corpus, graph.vertex_count(), exponent);
}

/// k independent draws from the noise distribution; draws equal to `exclude`
/// (the true output vertex) are redrawn. Duplicates among the k are allowed.
inline std::vector<int> draw_negatives(const NoiseTable& table, int k, int exclude,
                                       Rng& rng) {
    if (k < 1) throw std::invalid_argument("draw_negatives: k must be >= 1");
    const bool exclude_in_support =
        exclude >= 0 && exclude < static_cast<int>(table.probabilities.size()) &&
        table.probabilities[exclude] > 0.0;
    if (exclude_in_support && table.support() <= 1)
        throw std::invalid_argument("draw_negatives: noise support is only the excluded vertex");
    std::vector<int> negatives;
    negatives.reserve(k);
    while (static_cast<int>(negatives.size()) < k) {
        int v = table.sample(rng);
        if (v == exclude) continue;
        negatives.push_back(v);
    }
    return negatives;
}

/// Text persistence: one walk per line, space-separated vertex names. The
/// format doubles as a sentence corpus for external consumers.
inline void write_corpus(std::ostream& out, const WalkCorpus& corpus,
                         const LabeledGraph& graph) {
    for (const auto& walk : corpus.walks) {
        for (std::size_t i = 0; i < walk.size(); ++i) {
            if (i) out << ' ';
            out << graph.names[walk[i]];
        }
        out << '\n';
    }
}

inline WalkCorpus read_corpus(std::istream& in, const LabeledGraph& graph) {
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < graph.vertex_count(); ++i) index.emplace(graph.names[i], i);
    WalkCorpus corpus;
    std::string line;
    int line_no = 0;
    std::size_t longest = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::vector<int> walk;
        std::string name;
        while (fields >> name) {
            auto it = index.find(name);
            if (it == index.end())
                throw ParseError("walk references unknown vertex '" + name + "'", line_no);
            walk.push_back(it->second);
        }
        if (walk.empty()) continue;
        longest = std::max(longest, walk.size());
        corpus.walks.push_back(std::move(walk));
    }
    corpus.walk_length = longest > 0 ? static_cast<int>(longest) - 1 : 0;
    return corpus;
}

}  // namespace hyperwalk

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperwalk/evaluate.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/trainer.hpp"
#include "hyperwalk/walks.hpp"

namespace hyperwalk {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Declarative description of one experiment run; JSON on disk, flag
/// overrides on top. The resolved form is echoed into the output directory
/// so every run carries its own provenance.
struct RunConfig {
    std::string graph_path;
    GraphFormat format = GraphFormat::Gml;
    std::string labels_path;  // optional TSV
    bool directed = false;

    int walk_steps = 10;
    int window = 5;
    int epochs = 5;
    int negatives = 5;
    double learning_rate = 0.1;
    double lr_floor_fraction = 1e-4;
    bool hyperbolic = true;
    std::vector<int> euclidean_dims = {2, 4, 8, 16, 32, 64, 128};

    std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int repetitions = 10;
    double l2 = 1e-4;

    std::uint64_t seed = 1;
    std::string out_dir = "run";

    TrainConfig train_config(int dimension = 2) const {
        TrainConfig tc;
        tc.epochs = epochs;
        tc.window = window;
        tc.negatives = negatives;
        tc.learning_rate = learning_rate;
        tc.lr_floor_fraction = lr_floor_fraction;
        tc.seed = seed;
        tc.dimension = dimension;
        return tc;
    }

    std::vector<std::string> model_tags() const {
        std::vector<std::string> tags;
        if (hyperbolic) tags.push_back("hyperbolic-2d");
        for (int d : euclidean_dims) tags.push_back("euclidean-" + std::to_string(d) + "d");
        return tags;
    }
};

inline GraphFormat parse_format(const std::string& name) {
    if (name == "gml") return GraphFormat::Gml;
    if (name == "edgelist") return GraphFormat::EdgeList;
    throw ConfigError("unknown graph format '" + name + "' (expected gml or edgelist)");
}

inline std::string format_name(GraphFormat format) {
    return format == GraphFormat::Gml ? "gml" : "edgelist";
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    if (!j.contains("dataset") || !j["dataset"].contains("graph"))
        throw ConfigError("config requires dataset.graph");
    const auto& ds = j["dataset"];
    c.graph_path = ds["graph"].get<std::string>();
    if (ds.contains("format")) c.format = parse_format(ds["format"].get<std::string>());
    if (ds.contains("labels")) c.labels_path = ds["labels"].get<std::string>();
    if (ds.contains("directed")) c.directed = ds["directed"].get<bool>();
    if (j.contains("walks") && j["walks"].contains("steps"))
        c.walk_steps = j["walks"]["steps"].get<int>();
    if (j.contains("train")) {
        const auto& t = j["train"];
        if (t.contains("epochs")) c.epochs = t["epochs"].get<int>();
        if (t.contains("window")) c.window = t["window"].get<int>();
        if (t.contains("negatives")) c.negatives = t["negatives"].get<int>();
        if (t.contains("learning_rate")) c.learning_rate = t["learning_rate"].get<double>();
        if (t.contains("lr_floor_fraction"))
            c.lr_floor_fraction = t["lr_floor_fraction"].get<double>();
        if (t.contains("hyperbolic")) c.hyperbolic = t["hyperbolic"].get<bool>();
        if (t.contains("euclidean_dims"))
            c.euclidean_dims = t["euclidean_dims"].get<std::vector<int>>();
    }
    if (j.contains("eval")) {
        const auto& e = j["eval"];
        if (e.contains("fractions")) c.fractions = e["fractions"].get<std::vector<double>>();
        if (e.contains("repetitions")) c.repetitions = e["repetitions"].get<int>();
        if (e.contains("l2")) c.l2 = e["l2"].get<double>();
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    return c;
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config_from_json(j);
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["dataset"] = {{"graph", c.graph_path},
                    {"format", format_name(c.format)},
                    {"directed", c.directed}};
    if (!c.labels_path.empty()) j["dataset"]["labels"] = c.labels_path;
    j["walks"] = {{"steps", c.walk_steps}};
    j["train"] = {{"epochs", c.epochs},
                  {"window", c.window},
                  {"negatives", c.negatives},
                  {"learning_rate", c.learning_rate},
                  {"lr_floor_fraction", c.lr_floor_fraction},
                  {"hyperbolic", c.hyperbolic},
                  {"euclidean_dims", c.euclidean_dims}};
    j["eval"] = {{"fractions", c.fractions}, {"repetitions", c.repetitions}, {"l2", c.l2}};
    j["seed"] = c.seed;
    j["out"] = c.out_dir;
    return j;
}

/// Path checks only; --dry-run stops after this.
inline void validate_config(const RunConfig& c) {
    namespace fs = std::filesystem;
    if (!fs::exists(c.graph_path)) throw ConfigError("graph file not found: " + c.graph_path);
    if (!c.labels_path.empty() && !fs::exists(c.labels_path))
        throw ConfigError("label file not found: " + c.labels_path);
    if (c.walk_steps < 1) throw ConfigError("walks.steps must be >= 1");
    if (c.repetitions < 1) throw ConfigError("eval.repetitions must be >= 1");
    for (double f : c.fractions)
        if (f <= 0.0 || f >= 1.0) throw ConfigError("eval.fractions must lie in (0, 1)");
    c.train_config().validate();
}

inline LabeledGraph load_dataset(const RunConfig& c) {
    LabeledGraph graph = load_graph_file(c.graph_path, c.format, c.directed);
    if (!c.labels_path.empty()) graph = load_labels_file(c.labels_path, std::move(graph));
    return graph;
}

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

inline void echo_config(const RunConfig& c) {
    namespace fs = std::filesystem;
    fs::create_directories(c.out_dir);
    write_text_file(fs::path(c.out_dir) / "config.json", config_to_json(c).dump(2) + "\n");
}

}  // namespace detail

/// Stage 1: generate and persist the walk corpus.
inline WalkCorpus run_walks(const RunConfig& c, const LabeledGraph& graph,
                            std::ostream& log) {
    namespace fs = std::filesystem;
    WalkCorpus corpus = generate_walks(graph, c.walk_steps, c.seed);
    detail::echo_config(c);
    std::ostringstream text;
    text << "# seed=" << c.seed << '\n';
    write_corpus(text, corpus, graph);
    detail::write_text_file(fs::path(c.out_dir) / "walks.txt", text.str());

    DatasetStats s = stats(graph);
    log << "graph: " << s.vertex_count << " vertices, " << s.edge_count << " edges";
    if (s.class_count) log << ", " << *s.class_count << " classes";
    log << "\nwalks: " << corpus.walks.size() << " walks of up to " << (c.walk_steps + 1)
        << " vertices -> " << (fs::path(c.out_dir) / "walks.txt").string() << "\n";
    return corpus;
}

/// Stage 2: train every configured model tag from the shared corpus and
/// persist embeddings plus loss traces. Returns per-tag feature matrices.
inline std::vector<std::pair<std::string, FeatureMatrix>> run_train(
    const RunConfig& c, const LabeledGraph& graph, const WalkCorpus& corpus,
    std::ostream& log) {
    namespace fs = std::filesystem;
    detail::echo_config(c);
    fs::create_directories(fs::path(c.out_dir) / "embeddings");
    fs::create_directories(fs::path(c.out_dir) / "loss");

    std::vector<std::pair<std::string, FeatureMatrix>> features;
    auto persist = [&](const std::string& tag, const auto& model, const TrainStats& stats) {
        std::ostringstream emb;
        write_embeddings(emb, model, graph.names, tag, c.seed);
        detail::write_text_file(fs::path(c.out_dir) / "embeddings" / (tag + ".tsv"), emb.str());
        std::ostringstream trace;
        write_loss_trace(trace, stats, c.seed);
        detail::write_text_file(fs::path(c.out_dir) / "loss" / (tag + ".csv"), trace.str());
        features.emplace_back(tag, embedding_features(model));
        log << "trained " << tag << ": epoch-1 loss " << stats.epoch_mean_loss.front()
            << " -> epoch-" << stats.epoch_mean_loss.size() << " loss "
            << stats.epoch_mean_loss.back() << "\n";
    };

    if (c.hyperbolic) {
        auto run = train_hyperbolic(graph, corpus, c.train_config());
        persist("hyperbolic-2d", run.model, run.stats);
    }
    for (int d : c.euclidean_dims) {
        auto run = train_euclidean(graph, corpus, c.train_config(d));
        persist("euclidean-" + std::to_string(d) + "d", run.model, run.stats);
    }
    return features;
}

/// Stage 3: paired-split classification protocol over all tags.
inline EvalReport run_eval(const RunConfig& c, const LabeledGraph& graph,
                           const std::vector<std::pair<std::string, FeatureMatrix>>& features,
                           std::ostream& log) {
    namespace fs = std::filesystem;
    EvalReport report = run_protocol(features, graph, c.fractions, c.repetitions, c.seed, c.l2);
    detail::echo_config(c);
    std::ostringstream csv;
    write_report_csv(csv, report);
    detail::write_text_file(fs::path(c.out_dir) / "report.csv", csv.str());
    detail::write_text_file(fs::path(c.out_dir) / "report.json",
                            report_to_json(report).dump(2) + "\n");

    log << "macro F1 (mean +/- stderr over " << c.repetitions << " repetitions)\n";
    log << std::left << std::setw(16) << "fraction";
    for (const auto& [tag, unused] : features) log << std::setw(22) << tag;
    log << "\n";
    for (double fraction : c.fractions) {
        std::ostringstream frac;
        frac << std::fixed << std::setprecision(2) << fraction;
        log << std::left << std::setw(16) << frac.str();
        for (const auto& [tag, unused] : features) {
            const EvalRow* row = report.find(tag, fraction);
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(3) << row->mean_macro_f1 << " +/- "
                 << std::setprecision(3) << row->stderr_macro_f1;
            log << std::setw(22) << cell.str();
        }
        log << "\n";
    }
    return report;
}

/// Load per-tag features back from embedding files, joined to graph order.
inline std::vector<std::pair<std::string, FeatureMatrix>> load_embedding_features(
    const RunConfig& c, const LabeledGraph& graph) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::string, FeatureMatrix>> features;
    for (const std::string& tag : c.model_tags()) {
        fs::path path = fs::path(c.out_dir) / "embeddings" / (tag + ".tsv");
        std::ifstream in(path);
        if (!in) throw EvalError("embedding file not found: " + path.string());
        EmbeddingFile file = read_embeddings(in);
        FeatureMatrix rows(graph.vertex_count());
        std::vector<bool> seen(graph.vertex_count(), false);
        std::unordered_map<std::string, int> index;
        for (int v = 0; v < graph.vertex_count(); ++v) index.emplace(graph.names[v], v);
        for (std::size_t i = 0; i < file.names.size(); ++i) {
            auto it = index.find(file.names[i]);
            if (it == index.end())
                throw EvalError(path.string() + ": unknown vertex '" + file.names[i] + "'");
            rows[it->second] = file.rows[i];
            seen[it->second] = true;
        }
        for (int v = 0; v < graph.vertex_count(); ++v)
            if (!seen[v])
                throw EvalError(path.string() + ": no embedding for vertex '" + graph.names[v] +
                                "'");
        features.emplace_back(tag, std::move(rows));
    }
    return features;
}

/// walks -> train -> eval, sharing one corpus; idempotent per seed.
inline EvalReport run_pipeline(const RunConfig& c, std::ostream& log) {
    LabeledGraph graph = load_dataset(c);
    WalkCorpus corpus = run_walks(c, graph, log);
    auto features = run_train(c, graph, corpus, log);
    return run_eval(c, graph, features, log);
}

}  // namespace hyperwalk

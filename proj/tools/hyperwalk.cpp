// Command-line driver for the hyperwalk pipeline:
//   walks | train | eval | pipeline | stats
// Exit codes: 0 ok, 1 usage/config, 2 graph parsing, 3 training, 4 evaluation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyperwalk/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitParse = 2;
constexpr int kExitTrain = 3;
constexpr int kExitEval = 4;

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::string graph_path;   // stats positional
    std::string labels_path;  // stats option
    bool dry_run = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opts, bool config_required) {
    auto* config = cmd->add_option("--config", opts.config_path, "run configuration JSON");
    if (config_required) config->required();
    cmd->add_option("--seed", opts.seed, "override the master seed");
    cmd->add_option("--out", opts.out_dir, "override the output directory");
    cmd->add_option("--format", opts.format, "graph file format")
        ->check(CLI::IsMember({"edgelist", "gml"}));
    cmd->add_flag("--dry-run", opts.dry_run, "validate the configuration and exit");
}

hyperwalk::RunConfig resolve_config(const CliOptions& opts) {
    hyperwalk::RunConfig config;
    if (!opts.config_path.empty()) {
        config = hyperwalk::load_config_file(opts.config_path);
    } else if (!opts.graph_path.empty()) {
        config.graph_path = opts.graph_path;
        config.labels_path = opts.labels_path;
    } else {
        throw hyperwalk::ConfigError("no configuration: pass --config (or a dataset path)");
    }
    if (!opts.graph_path.empty()) config.graph_path = opts.graph_path;
    if (!opts.labels_path.empty()) config.labels_path = opts.labels_path;
    if (opts.seed) config.seed = *opts.seed;
    if (opts.out_dir) config.out_dir = *opts.out_dir;
    if (opts.format) config.format = hyperwalk::parse_format(*opts.format);
    return config;
}

void print_stats(const hyperwalk::RunConfig& config) {
    hyperwalk::LabeledGraph graph = hyperwalk::load_dataset(config);
    hyperwalk::DatasetStats s = hyperwalk::stats(graph);
    std::cout << "dataset: " << config.graph_path << "\n";
    std::cout << "vertices: " << s.vertex_count << "\n";
    std::cout << "edges: " << s.edge_count << "\n";
    if (s.class_count) {
        std::cout << "classes: " << *s.class_count << "\n";
        std::cout << "largest class fraction: " << *s.largest_class_fraction << "\n";
    } else {
        std::cout << "classes: none\n";
    }
    if (graph.self_loops_dropped || graph.duplicate_edges_dropped)
        std::cout << "normalization: dropped " << graph.self_loops_dropped << " self-loops, "
                  << graph.duplicate_edges_dropped << " duplicate edges\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperwalk: graph embeddings in the Poincare disk with a Euclidean baseline"};
    app.require_subcommand(1);

    CliOptions opts;
    CLI::App* cmd_walks = app.add_subcommand("walks", "generate the random-walk corpus");
    CLI::App* cmd_train = app.add_subcommand("train", "train embeddings from the corpus");
    CLI::App* cmd_eval = app.add_subcommand("eval", "run the classification protocol");
    CLI::App* cmd_pipeline = app.add_subcommand("pipeline", "walks, train and eval in one go");
    CLI::App* cmd_stats = app.add_subcommand("stats", "print dataset statistics");
    for (CLI::App* cmd : {cmd_walks, cmd_train, cmd_eval, cmd_pipeline})
        add_common_options(cmd, opts, /*config_required=*/true);
    add_common_options(cmd_stats, opts, /*config_required=*/false);
    cmd_stats->add_option("dataset", opts.graph_path, "graph file (overrides config)");
    cmd_stats->add_option("--labels", opts.labels_path, "label TSV file");

    CLI11_PARSE(app, argc, argv);

    try {
        hyperwalk::RunConfig config = resolve_config(opts);
        hyperwalk::validate_config(config);
        if (opts.dry_run) {
            std::cout << "config OK: " << hyperwalk::config_to_json(config).dump() << "\n";
            return kExitOk;
        }

        if (cmd_stats->parsed()) {
            print_stats(config);
            return kExitOk;
        }

        hyperwalk::LabeledGraph graph = hyperwalk::load_dataset(config);
        if (cmd_walks->parsed()) {
            hyperwalk::run_walks(config, graph, std::cout);
            return kExitOk;
        }

        // train and pipeline share corpus acquisition; eval needs none
        if (cmd_train->parsed() || cmd_pipeline->parsed()) {
            namespace fs = std::filesystem;
            hyperwalk::WalkCorpus corpus;
            fs::path corpus_path = fs::path(config.out_dir) / "walks.txt";
            if (cmd_train->parsed() && fs::exists(corpus_path)) {
                std::ifstream in(corpus_path);
                corpus = hyperwalk::read_corpus(in, graph);
                std::cout << "reusing corpus " << corpus_path.string() << "\n";
            } else {
                corpus = hyperwalk::run_walks(config, graph, std::cout);
            }
            auto features = hyperwalk::run_train(config, graph, corpus, std::cout);
            if (cmd_pipeline->parsed()) hyperwalk::run_eval(config, graph, features, std::cout);
            return kExitOk;
        }

        if (cmd_eval->parsed()) {
            auto features = hyperwalk::load_embedding_features(config, graph);
            hyperwalk::run_eval(config, graph, features, std::cout);
            return kExitOk;
        }
        return kExitConfig;
    } catch (const hyperwalk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hyperwalk::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const hyperwalk::TrainError& e) {
        std::cerr << "train error: " << e.what() << "\n";
        return kExitTrain;
    } catch (const hyperwalk::EvalError& e) {
        std::cerr << "eval error: " << e.what() << "\n";
        return kExitEval;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hyperwalk {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                      : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Undirected graph with dense vertex indices, external string names and
/// optional categorical vertex labels. Immutable once built; safe to share
/// across threads.
struct LabeledGraph {
    std::vector<std::string> names;
    std::vector<std::vector<int>> adjacency;   // sorted, deduplicated, symmetric
    std::vector<int> labels;                   // class id per vertex, -1 = unlabeled
    std::vector<std::string> label_names;      // class id -> external class name
    int self_loops_dropped = 0;
    int duplicate_edges_dropped = 0;

    int vertex_count() const { return static_cast<int>(names.size()); }

    long long edge_count() const {
        long long degree_sum = 0;
        for (const auto& adj : adjacency) degree_sum += static_cast<long long>(adj.size());
        return degree_sum / 2;
    }

    bool has_labels() const {
        return std::any_of(labels.begin(), labels.end(), [](int l) { return l >= 0; });
    }

    bool edge_exists(int u, int v) const {
        const auto& adj = adjacency[u];
        return std::binary_search(adj.begin(), adj.end(), v);
    }

    int index_of(const std::string& name) const {
        for (int i = 0; i < vertex_count(); ++i)
            if (names[i] == name) return i;
        return -1;
    }
};

/// Accumulates raw edges by vertex name and normalizes on build: indices by
/// first appearance, self-loops and duplicate edges dropped with counts.
class GraphBuilder {
public:
    int vertex(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(names_.size());
        index_.emplace(name, id);
        names_.push_back(name);
        return id;
    }

    bool has_vertex(const std::string& name) const { return index_.count(name) > 0; }

    void edge(int u, int v) { raw_edges_.emplace_back(u, v); }

    void edge(const std::string& u, const std::string& v) {
        int iu = vertex(u);
        int iv = vertex(v);
        raw_edges_.emplace_back(iu, iv);
    }

    std::size_t vertex_total() const { return names_.size(); }

    LabeledGraph build() {
        LabeledGraph g;
        g.names = names_;
        g.adjacency.resize(names_.size());
        g.labels.assign(names_.size(), -1);
        for (auto [u, v] : raw_edges_) {
            if (u == v) {
                ++g.self_loops_dropped;
                continue;
            }
            g.adjacency[u].push_back(v);
            g.adjacency[v].push_back(u);
        }
        for (auto& adj : g.adjacency) {
            std::sort(adj.begin(), adj.end());
            auto last = std::unique(adj.begin(), adj.end());
            g.duplicate_edges_dropped += static_cast<int>(adj.end() - last);
            adj.erase(last, adj.end());
        }
        g.duplicate_edges_dropped /= 2;  // counted from both endpoints
        return g;
    }

private:
    std::unordered_map<std::string, int> index_;
    std::vector<std::string> names_;
    std::vector<std::pair<int, int>> raw_edges_;
};

/// Parse a line-oriented edge list: `#` comments, blank lines skipped, two
/// whitespace-separated vertex names per line. The directed hint only
/// affects duplicate accounting; the result is always symmetrized.
inline LabeledGraph parse_edge_list(std::istream& in, bool directed_hint = false) {
    GraphBuilder builder;
    std::unordered_map<long long, int> seen;
    std::string line;
    int line_no = 0;
    int repeated_lines = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream fields(line);
        std::string u, v, extra;
        if (!(fields >> u >> v) || (fields >> extra)) {
            throw ParseError("expected two vertex names, got '" + line + "'", line_no);
        }
        long long iu = builder.vertex(u);
        long long iv = builder.vertex(v);
        builder.edge(static_cast<int>(iu), static_cast<int>(iv));
        // For directed input a reciprocal pair is structure, not a repeat, so
        // the key keeps its orientation.
        if (iu != iv) {
            if (!directed_hint && iu > iv) std::swap(iu, iv);
            if (++seen[(iu << 32) | iv] > 1) ++repeated_lines;
        }
    }
    if (builder.vertex_total() == 0) throw ParseError("empty edge list input");
    LabeledGraph g = builder.build();
    g.duplicate_edges_dropped = repeated_lines;
    return g;
}

inline LabeledGraph parse_edge_list(const std::string& text, bool directed_hint = false) {
    std::istringstream in(text);
    return parse_edge_list(in, directed_hint);
}

namespace detail {

struct GmlToken {
    enum Kind { Key, Number, String, Open, Close, End } kind = End;
    std::string text;
    int line = 1;
};

class GmlLexer {
public:
    explicit GmlLexer(std::istream& in) : in_(in) {}

    GmlToken next() {
        skip_space();
        GmlToken tok;
        tok.line = line_;
        int c = in_.peek();
        if (c == EOF) return tok;
        if (c == '[') {
            in_.get();
            tok.kind = GmlToken::Open;
            return tok;
        }
        if (c == ']') {
            in_.get();
            tok.kind = GmlToken::Close;
            return tok;
        }
        if (c == '"') {
            in_.get();
            tok.kind = GmlToken::String;
            while ((c = in_.get()) != EOF && c != '"') {
                if (c == '\n') ++line_;
                tok.text.push_back(static_cast<char>(c));
            }
            if (c == EOF) throw ParseError("unterminated string", tok.line);
            return tok;
        }
        std::string word;
        while ((c = in_.peek()) != EOF && !std::isspace(c) && c != '[' && c != ']') {
            word.push_back(static_cast<char>(in_.get()));
        }
        tok.text = word;
        tok.kind = looks_numeric(word) ? GmlToken::Number : GmlToken::Key;
        return tok;
    }

private:
    static bool looks_numeric(const std::string& w) {
        if (w.empty()) return false;
        std::size_t i = (w[0] == '+' || w[0] == '-') ? 1 : 0;
        if (i >= w.size()) return false;
        return std::isdigit(static_cast<unsigned char>(w[i])) || w[i] == '.';
    }

    void skip_space() {
        int c;
        while ((c = in_.peek()) != EOF) {
            if (c == '\n') ++line_;
            if (!std::isspace(c)) break;
            in_.get();
        }
    }

    std::istream& in_;
    int line_ = 1;
};

}  // namespace detail

/// Parse the GML subset used by the classic network datasets: a `graph`
/// block of `node`/`edge` records with id/label/value and source/target
/// keys. Unknown keys, scalar or block-valued, are skipped.
inline LabeledGraph parse_gml(std::istream& in) {
    using detail::GmlToken;
    detail::GmlLexer lexer(in);

    struct NodeRec {
        long long id = 0;
        bool has_id = false;
        std::string label;
        bool has_label = false;
        std::string value;
        bool has_value = false;
    };
    std::vector<NodeRec> nodes;
    std::vector<std::pair<long long, long long>> edges;
    bool saw_graph = false;

    // Skips a value we do not care about: a scalar or a bracketed block.
    auto skip_value = [&](GmlToken tok) {
        if (tok.kind != GmlToken::Open) {
            if (tok.kind == GmlToken::Close || tok.kind == GmlToken::End)
                throw ParseError("key without value", tok.line);
            return;
        }
        int depth = 1;
        while (depth > 0) {
            GmlToken t = lexer.next();
            if (t.kind == GmlToken::End) throw ParseError("unbalanced brackets", t.line);
            if (t.kind == GmlToken::Open) ++depth;
            if (t.kind == GmlToken::Close) --depth;
        }
    };

    auto parse_record = [&](bool is_node, int open_line) {
        NodeRec node;
        long long source = 0, target = 0;
        bool has_source = false, has_target = false;
        while (true) {
            GmlToken tok = lexer.next();
            if (tok.kind == GmlToken::Close) break;
            if (tok.kind == GmlToken::End) throw ParseError("unbalanced brackets", open_line);
            if (tok.kind != GmlToken::Key) throw ParseError("expected key in record", tok.line);
            GmlToken val = lexer.next();
            if (is_node) {
                if (tok.text == "id" && val.kind == GmlToken::Number) {
                    node.id = std::stoll(val.text);
                    node.has_id = true;
                } else if (tok.text == "label" &&
                           (val.kind == GmlToken::String || val.kind == GmlToken::Number)) {
                    node.label = val.text;
                    node.has_label = true;
                } else if (tok.text == "value" &&
                           (val.kind == GmlToken::String || val.kind == GmlToken::Number)) {
                    node.value = val.text;
                    node.has_value = true;
                } else {
                    skip_value(val);
                }
            } else {
                if (tok.text == "source" && val.kind == GmlToken::Number) {
                    source = std::stoll(val.text);
                    has_source = true;
                } else if (tok.text == "target" && val.kind == GmlToken::Number) {
                    target = std::stoll(val.text);
                    has_target = true;
                } else {
                    skip_value(val);
                }
            }
        }
        if (is_node) {
            if (!node.has_id) throw ParseError("node record without id", open_line);
            nodes.push_back(node);
        } else {
            if (!has_source || !has_target)
                throw ParseError("edge record without source/target", open_line);
            edges.emplace_back(source, target);
        }
    };

    while (true) {
        GmlToken tok = lexer.next();
        if (tok.kind == GmlToken::End) break;
        if (tok.kind == GmlToken::Close) throw ParseError("unbalanced brackets", tok.line);
        if (tok.kind != GmlToken::Key) throw ParseError("expected key", tok.line);
        if (tok.text != "graph") {
            skip_value(lexer.next());
            continue;
        }
        GmlToken open = lexer.next();
        if (open.kind != GmlToken::Open) throw ParseError("graph key without block", open.line);
        saw_graph = true;
        while (true) {
            GmlToken key = lexer.next();
            if (key.kind == GmlToken::Close) break;
            if (key.kind == GmlToken::End) throw ParseError("unbalanced brackets", open.line);
            if (key.kind != GmlToken::Key) throw ParseError("expected key in graph", key.line);
            if (key.text == "node" || key.text == "edge") {
                GmlToken o = lexer.next();
                if (o.kind != GmlToken::Open)
                    throw ParseError(key.text + " without block", o.line);
                parse_record(key.text == "node", o.line);
            } else {
                skip_value(lexer.next());
            }
        }
    }
    if (!saw_graph) throw ParseError("no graph block found");

    GraphBuilder builder;
    std::unordered_map<long long, int> by_gml_id;
    std::vector<std::string> node_values(nodes.size());
    std::vector<bool> node_has_value(nodes.size(), false);
    for (const auto& node : nodes) {
        if (by_gml_id.count(node.id))
            throw ParseError("duplicate node id " + std::to_string(node.id));
        std::string name = node.has_label ? node.label : std::to_string(node.id);
        if (builder.has_vertex(name)) name += "#" + std::to_string(node.id);
        int idx = builder.vertex(name);
        by_gml_id.emplace(node.id, idx);
        node_values[idx] = node.value;
        node_has_value[idx] = node.has_value;
    }
    for (auto [s, t] : edges) {
        auto is = by_gml_id.find(s);
        auto it = by_gml_id.find(t);
        if (is == by_gml_id.end())
            throw ParseError("edge references unknown node id " + std::to_string(s));
        if (it == by_gml_id.end())
            throw ParseError("edge references unknown node id " + std::to_string(t));
        builder.edge(is->second, it->second);
    }

    LabeledGraph g = builder.build();
    std::unordered_map<std::string, int> class_ids;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (!node_has_value[v]) continue;
        auto [it, inserted] = class_ids.emplace(node_values[v],
                                                static_cast<int>(g.label_names.size()));
        if (inserted) g.label_names.push_back(node_values[v]);
        g.labels[v] = it->second;
    }
    return g;
}

inline LabeledGraph parse_gml(const std::string& text) {
    std::istringstream in(text);
    return parse_gml(in);
}

/// Attach labels from a `vertex_name<TAB>class_name` file; class ids are
/// assigned by first appearance. Existing labels are replaced wholesale.
inline LabeledGraph load_labels(std::istream& in, LabeledGraph graph) {
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < graph.vertex_count(); ++i) index.emplace(graph.names[i], i);

    std::vector<int> labels(graph.names.size(), -1);
    std::vector<std::string> label_names;
    std::unordered_map<std::string, int> class_ids;

    std::string line;
    int line_no = 0;
    bool any = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("expected name<TAB>class", line_no);
        std::string name = line.substr(0, tab);
        std::string cls = line.substr(tab + 1);
        auto vi = index.find(name);
        if (vi == index.end()) throw ParseError("unknown vertex '" + name + "'", line_no);
        auto [ci, inserted] = class_ids.emplace(cls, static_cast<int>(label_names.size()));
        if (inserted) label_names.push_back(cls);
        int v = vi->second;
        if (labels[v] >= 0 && labels[v] != ci->second)
            throw ParseError("vertex '" + name + "' labeled twice with conflicting classes",
                             line_no);
        labels[v] = ci->second;
        any = true;
    }
    if (any) {
        graph.labels = std::move(labels);
        graph.label_names = std::move(label_names);
    }
    return graph;
}

inline LabeledGraph load_labels(const std::string& text, LabeledGraph graph) {
    std::istringstream in(text);
    return load_labels(in, std::move(graph));
}

struct DatasetStats {
    int vertex_count = 0;
    long long edge_count = 0;
    std::optional<int> class_count;
    std::optional<double> largest_class_fraction;
};

inline DatasetStats stats(const LabeledGraph& g) {
    DatasetStats s;
    s.vertex_count = g.vertex_count();
    s.edge_count = g.edge_count();
    if (g.has_labels()) {
        std::vector<long long> counts(g.label_names.size(), 0);
        long long labeled = 0;
        for (int label : g.labels) {
            if (label >= 0) {
                ++counts[label];
                ++labeled;
            }
        }
        s.class_count = static_cast<int>(counts.size());
        long long largest = *std::max_element(counts.begin(), counts.end());
        s.largest_class_fraction = static_cast<double>(largest) / static_cast<double>(labeled);
    }
    return s;
}

/// Edge-list serialization, one `u v` line per undirected edge (i < j).
inline std::string serialize_edge_list(const LabeledGraph& g) {
    std::ostringstream out;
    for (int u = 0; u < g.vertex_count(); ++u)
        for (int v : g.adjacency[u])
            if (u < v) out << g.names[u] << ' ' << g.names[v] << '\n';
    return out.str();
}

/// Canonical JSON export: {nodes:[{id,name,label}], edges:[[i,j],...]}.
inline nlohmann::json to_json(const LabeledGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
        nlohmann::json node{{"id", v}, {"name", g.names[v]}};
        if (g.labels[v] >= 0)
            node["label"] = g.labels[v];
        else
            node["label"] = nullptr;
        nodes.push_back(std::move(node));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (int u = 0; u < g.vertex_count(); ++u)
        for (int v : g.adjacency[u])
            if (u < v) edges.push_back(nlohmann::json::array({u, v}));
    return nlohmann::json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

enum class GraphFormat { EdgeList, Gml };

inline LabeledGraph load_graph_file(const std::string& path, GraphFormat format,
                                    bool directed_hint = false) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    try {
        return format == GraphFormat::Gml ? parse_gml(in) : parse_edge_list(in, directed_hint);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline LabeledGraph load_labels_file(const std::string& path, LabeledGraph graph) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open label file: " + path);
    try {
        return load_labels(in, std::move(graph));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace hyperwalk

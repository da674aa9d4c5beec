#ifndef ESPR_GRAPH_IO_HPP
#define ESPR_GRAPH_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "espr/graph.hpp"

namespace espr {

/// Edge-list text format: one edge per line "u v"; isolated nodes are
/// declared on lines "node u". Blank lines and '#' comments are
/// ignored. Self-loops and duplicate edges are rejected.
inline Graph parse_edge_list(std::istream& in) {
    std::set<int> labels;
    std::vector<Graph::Edge> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": " + why);
        };
        auto parse_label = [&](const std::string& tok) {
            std::size_t pos = 0;
            int value = 0;
            try {
                value = std::stoi(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok.size()) fail("expected integer label, got '" + tok + "'");
            return value;
        };
        if (first == "node") {
            std::string tok;
            if (!(ls >> tok)) fail("expected 'node <label>'");
            labels.insert(parse_label(tok));
        } else {
            const int u = parse_label(first);
            std::string tok;
            if (!(ls >> tok)) fail("expected 'u v'");
            const int v = parse_label(tok);
            if (u == v) fail("self-loop at node " + std::to_string(u));
            labels.insert(u);
            labels.insert(v);
            Graph::Edge e{std::min(u, v), std::max(u, v)};
            if (std::find(edges.begin(), edges.end(), e) != edges.end())
                fail("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
            edges.push_back(e);
        }
        std::string trailing;
        if (ls >> trailing) fail("trailing token '" + trailing + "'");
    }
    if (labels.empty()) throw std::invalid_argument("edge list declares no nodes");
    return Graph(std::vector<int>(labels.begin(), labels.end()), std::move(edges));
}

inline Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

inline Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return parse_edge_list(in);
}

inline std::string format_edge_list(const Graph& g) {
    std::ostringstream out;
    std::set<int> covered;
    for (const auto& e : g.edges()) {
        covered.insert(e.first);
        covered.insert(e.second);
        out << e.first << " " << e.second << "\n";
    }
    for (int v : g.labels())
        if (!covered.count(v)) out << "node " << v << "\n";
    return out.str();
}

} // namespace espr

#endif // ESPR_GRAPH_IO_HPP

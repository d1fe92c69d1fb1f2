#ifndef WDPO_IO_HPP
#define WDPO_IO_HPP

#include <string>
#include <vector>

#include "wdpo/rewriting.hpp"

namespace wdpo {

// A rule system as read from a file: rules plus an optional host graph.
struct SystemSpec {
    SignaturePtr signature;
    Algebra algebra;
    std::vector<RulePtr> rules;
    AttrGraphPtr host;  // null when the file has none

    RulePtr rule(std::string_view name) const;
};

// JSON layout:
//   sorts:   {"nodes": [...], "edges": {"name": [src, tgt], ...}}  (default: node/edge)
//   algebra: "nat" | {"enum": [...]} | {"terms": [...]}
//   rules:   [{name, variables, L, K, I, R, l, i, r}]  (maps default to equal ids)
//   host:    {nodes: [{id, sort, label}], edges: [{id, sort, src, tgt, label}]}
// Rules over "nat" use the term algebra on their variables; rules over an
// enumeration use the enumeration itself. Throws ParseError with context.
SystemSpec parse_system(std::string_view text);
SystemSpec load_system(const std::string& path);

// A single graph: the host of a system file, or a file written by save_graph.
AttrGraphPtr parse_graph(std::string_view text);
AttrGraphPtr load_graph(const std::string& path);

std::string graph_to_text(const AttributedGraph& g);
void save_graph(const AttributedGraph& g, const std::string& path);

// Graphviz rendering: label sets as node text, edge sorts (and non-empty
// edge labels) on edges, elements in id order.
std::string to_dot(const AttributedGraph& g, const std::string& name = "G");
void export_dot(const AttributedGraph& g, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

} // namespace wdpo

#endif // WDPO_IO_HPP

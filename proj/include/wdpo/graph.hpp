#ifndef WDPO_GRAPH_HPP
#define WDPO_GRAPH_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wdpo {

struct EdgeSort {
    std::string source;
    std::string target;

    friend bool operator==(const EdgeSort&, const EdgeSort&) = default;
};

// Node sorts and edge sorts (each edge sort fixes its endpoint node sorts).
class SortSignature {
public:
    SortSignature& add_node_sort(const std::string& name);
    SortSignature& add_edge_sort(const std::string& name, const std::string& source,
                                 const std::string& target);

    bool has_node_sort(std::string_view name) const;
    bool has_edge_sort(std::string_view name) const;
    const EdgeSort& edge_sort(std::string_view name) const;

    const std::set<std::string, std::less<>>& node_sorts() const { return node_sorts_; }
    const std::map<std::string, EdgeSort, std::less<>>& edge_sorts() const { return edge_sorts_; }

    // One node sort "node" and one edge sort "edge" between them: plain graphs.
    static std::shared_ptr<const SortSignature> plain();

    friend bool operator==(const SortSignature&, const SortSignature&) = default;

private:
    std::set<std::string, std::less<>> node_sorts_;
    std::map<std::string, EdgeSort, std::less<>> edge_sorts_;
};

using SignaturePtr = std::shared_ptr<const SortSignature>;

struct Edge {
    std::string sort;
    std::string source;
    std::string target;

    friend bool operator==(const Edge&, const Edge&) = default;
};

using IdMap = std::map<std::string, std::string, std::less<>>;

// A finite sorted directed multigraph. Node ids and edge ids share one
// namespace so that an id names exactly one element.
class Graph {
public:
    explicit Graph(SignaturePtr signature);

    Graph& add_node(const std::string& id, const std::string& sort);
    Graph& add_edge(const std::string& id, const std::string& sort, const std::string& source,
                    const std::string& target);

    const SortSignature& signature() const { return *signature_; }
    const SignaturePtr& signature_ptr() const { return signature_; }

    const std::map<std::string, std::string, std::less<>>& nodes() const { return nodes_; }
    const std::map<std::string, Edge, std::less<>>& edges() const { return edges_; }

    bool has_node(std::string_view id) const { return nodes_.contains(id); }
    bool has_edge(std::string_view id) const { return edges_.contains(id); }
    bool has_element(std::string_view id) const { return has_node(id) || has_edge(id); }
    const std::string& node_sort(std::string_view id) const;
    const Edge& edge(std::string_view id) const;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t element_count() const { return nodes_.size() + edges_.size(); }

    // All element ids: nodes first, then edges, each in id order.
    std::vector<std::string> elements() const;

    friend bool operator==(const Graph& a, const Graph& b);

private:
    SignaturePtr signature_;
    std::map<std::string, std::string, std::less<>> nodes_;
    std::map<std::string, Edge, std::less<>> edges_;
};

using GraphPtr = std::shared_ptr<const Graph>;

inline GraphPtr freeze(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

// True when both pointers denote the same graph value.
bool same_graph(const GraphPtr& a, const GraphPtr& b);

// Sort- and incidence-preserving total map between two graphs. Always valid
// once constructed.
class GraphMorphism {
public:
    GraphMorphism(GraphPtr source, GraphPtr target, IdMap node_map, IdMap edge_map);

    static GraphMorphism identity(const GraphPtr& graph);

    const GraphPtr& source() const { return source_; }
    const GraphPtr& target() const { return target_; }
    const IdMap& node_map() const { return node_map_; }
    const IdMap& edge_map() const { return edge_map_; }

    // Image of a node or edge id.
    const std::string& operator()(std::string_view element) const;

    bool is_injective() const;
    bool is_surjective() const;

    // Elements of the source mapped onto `element`.
    std::vector<std::string> preimage(std::string_view element) const;

    friend bool operator==(const GraphMorphism& a, const GraphMorphism& b);

private:
    GraphPtr source_;
    GraphPtr target_;
    IdMap node_map_;
    IdMap edge_map_;
};

// g after f. Throws StructureError when f's target is not g's source.
GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f);

bool is_mono(const GraphMorphism& f);

// Per-element filter consulted during the search: (pattern element, host element).
using ElementFilter = std::function<bool(const std::string&, const std::string&)>;

struct SearchOptions {
    bool injective = false;
    ElementFilter accept;
};

// Backtracking morphism search. `visit` returns false to stop early.
void search_morphisms(const GraphPtr& pattern, const GraphPtr& host, const SearchOptions& options,
                      const std::function<bool(const GraphMorphism&)>& visit);

// Every morphism pattern -> host, sorted by node map then edge map.
std::vector<GraphMorphism> enumerate_morphisms(const GraphPtr& pattern, const GraphPtr& host,
                                               bool injective_only);

std::optional<GraphMorphism> is_isomorphic(const GraphPtr& a, const GraphPtr& b,
                                           const ElementFilter& accept = {});

struct GraphCoproduct {
    GraphPtr graph;
    GraphMorphism in_first;
    GraphMorphism in_second;
};

// Copies of a and b with ids "in1:<id>" and "in2:<id>".
GraphCoproduct disjoint_union(const GraphPtr& a, const GraphPtr& b);

} // namespace wdpo

#endif // WDPO_GRAPH_HPP

#include "wdpo/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "wdpo/error.hpp"

namespace wdpo {

// ---------------------------------------------------------------------------
// SortSignature

SortSignature& SortSignature::add_node_sort(const std::string& name) {
    if (name.empty()) throw SignatureError("empty node sort name");
    if (node_sorts_.contains(name) || edge_sorts_.contains(name))
        throw SignatureError("duplicate sort name '" + name + "'");
    node_sorts_.insert(name);
    return *this;
}

SortSignature& SortSignature::add_edge_sort(const std::string& name, const std::string& source,
                                            const std::string& target) {
    if (name.empty()) throw SignatureError("empty edge sort name");
    if (node_sorts_.contains(name) || edge_sorts_.contains(name))
        throw SignatureError("duplicate sort name '" + name + "'");
    if (!node_sorts_.contains(source) || !node_sorts_.contains(target))
        throw SignatureError("edge sort '" + name + "' references an undeclared node sort");
    edge_sorts_.emplace(name, EdgeSort{source, target});
    return *this;
}

bool SortSignature::has_node_sort(std::string_view name) const { return node_sorts_.contains(name); }

bool SortSignature::has_edge_sort(std::string_view name) const { return edge_sorts_.contains(name); }

const EdgeSort& SortSignature::edge_sort(std::string_view name) const {
    auto it = edge_sorts_.find(name);
    if (it == edge_sorts_.end())
        throw SignatureError("unknown edge sort '" + std::string(name) + "'");
    return it->second;
}

SignaturePtr SortSignature::plain() {
    static const SignaturePtr instance = [] {
        SortSignature s;
        s.add_node_sort("node");
        s.add_edge_sort("edge", "node", "node");
        return std::make_shared<const SortSignature>(std::move(s));
    }();
    return instance;
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(SignaturePtr signature) : signature_(std::move(signature)) {
    if (!signature_) throw SignatureError("graph without a sort signature");
}

Graph& Graph::add_node(const std::string& id, const std::string& sort) {
    if (id.empty()) throw StructureError("empty node id");
    if (has_element(id)) throw StructureError("duplicate element id '" + id + "'");
    if (!signature_->has_node_sort(sort))
        throw SignatureError("node '" + id + "' has undeclared sort '" + sort + "'");
    nodes_.emplace(id, sort);
    return *this;
}

Graph& Graph::add_edge(const std::string& id, const std::string& sort, const std::string& source,
                       const std::string& target) {
    if (id.empty()) throw StructureError("empty edge id");
    if (has_element(id)) throw StructureError("duplicate element id '" + id + "'");
    if (!signature_->has_edge_sort(sort))
        throw SignatureError("edge '" + id + "' has undeclared sort '" + sort + "'");
    const EdgeSort& es = signature_->edge_sort(sort);
    auto src = nodes_.find(source);
    auto tgt = nodes_.find(target);
    if (src == nodes_.end() || tgt == nodes_.end())
        throw StructureError("edge '" + id + "' has a missing endpoint");
    if (src->second != es.source || tgt->second != es.target)
        throw StructureError("edge '" + id + "' endpoints do not match sort '" + sort + "'");
    edges_.emplace(id, Edge{sort, source, target});
    return *this;
}

const std::string& Graph::node_sort(std::string_view id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw StructureError("no node '" + std::string(id) + "'");
    return it->second;
}

const Edge& Graph::edge(std::string_view id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw StructureError("no edge '" + std::string(id) + "'");
    return it->second;
}

std::vector<std::string> Graph::elements() const {
    std::vector<std::string> out;
    out.reserve(element_count());
    for (const auto& [id, sort] : nodes_) out.push_back(id);
    for (const auto& [id, e] : edges_) out.push_back(id);
    return out;
}

bool operator==(const Graph& a, const Graph& b) {
    if (&a == &b) return true;
    return (a.signature_ == b.signature_ || *a.signature_ == *b.signature_) && a.nodes_ == b.nodes_ &&
           a.edges_ == b.edges_;
}

bool same_graph(const GraphPtr& a, const GraphPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

// ---------------------------------------------------------------------------
// GraphMorphism

GraphMorphism::GraphMorphism(GraphPtr source, GraphPtr target, IdMap node_map, IdMap edge_map)
    : source_(std::move(source)),
      target_(std::move(target)),
      node_map_(std::move(node_map)),
      edge_map_(std::move(edge_map)) {
    if (!source_ || !target_) throw StructureError("morphism with a null graph");
    if (node_map_.size() != source_->node_count() || edge_map_.size() != source_->edge_count())
        throw StructureError("morphism is not total on its source");
    for (const auto& [from, to] : node_map_) {
        auto s = source_->nodes().find(from);
        if (s == source_->nodes().end())
            throw StructureError("morphism maps unknown node '" + from + "'");
        auto t = target_->nodes().find(to);
        if (t == target_->nodes().end())
            throw StructureError("node '" + from + "' mapped to missing node '" + to + "'");
        if (s->second != t->second)
            throw StructureError("node '" + from + "' mapped across sorts");
    }
    for (const auto& [from, to] : edge_map_) {
        auto s = source_->edges().find(from);
        if (s == source_->edges().end())
            throw StructureError("morphism maps unknown edge '" + from + "'");
        auto t = target_->edges().find(to);
        if (t == target_->edges().end())
            throw StructureError("edge '" + from + "' mapped to missing edge '" + to + "'");
        const Edge& se = s->second;
        const Edge& te = t->second;
        if (se.sort != te.sort) throw StructureError("edge '" + from + "' mapped across sorts");
        if (node_map_.at(se.source) != te.source || node_map_.at(se.target) != te.target)
            throw StructureError("edge '" + from + "' incidence not preserved");
    }
}

GraphMorphism GraphMorphism::identity(const GraphPtr& graph) {
    IdMap nodes, edges;
    for (const auto& [id, sort] : graph->nodes()) nodes.emplace_hint(nodes.end(), id, id);
    for (const auto& [id, e] : graph->edges()) edges.emplace_hint(edges.end(), id, id);
    return GraphMorphism(graph, graph, std::move(nodes), std::move(edges));
}

const std::string& GraphMorphism::operator()(std::string_view element) const {
    if (auto it = node_map_.find(element); it != node_map_.end()) return it->second;
    if (auto it = edge_map_.find(element); it != edge_map_.end()) return it->second;
    throw StructureError("element '" + std::string(element) + "' not in morphism domain");
}

bool GraphMorphism::is_injective() const {
    std::set<std::string_view> seen;
    for (const auto& [from, to] : node_map_)
        if (!seen.insert(to).second) return false;
    seen.clear();
    for (const auto& [from, to] : edge_map_)
        if (!seen.insert(to).second) return false;
    return true;
}

bool GraphMorphism::is_surjective() const {
    std::set<std::string_view> nodes, edges;
    for (const auto& [from, to] : node_map_) nodes.insert(to);
    for (const auto& [from, to] : edge_map_) edges.insert(to);
    return nodes.size() == target_->node_count() && edges.size() == target_->edge_count();
}

std::vector<std::string> GraphMorphism::preimage(std::string_view element) const {
    std::vector<std::string> out;
    const IdMap& m = target_->has_node(element) ? node_map_ : edge_map_;
    for (const auto& [from, to] : m)
        if (to == element) out.push_back(from);
    return out;
}

bool operator==(const GraphMorphism& a, const GraphMorphism& b) {
    return same_graph(a.source_, b.source_) && same_graph(a.target_, b.target_) &&
           a.node_map_ == b.node_map_ && a.edge_map_ == b.edge_map_;
}

GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f) {
    if (!same_graph(f.target(), g.source()))
        throw StructureError("cannot compose: target of first morphism is not source of second");
    IdMap nodes, edges;
    for (const auto& [x, y] : f.node_map()) nodes.emplace_hint(nodes.end(), x, g.node_map().at(y));
    for (const auto& [x, y] : f.edge_map()) edges.emplace_hint(edges.end(), x, g.edge_map().at(y));
    return GraphMorphism(f.source(), g.target(), std::move(nodes), std::move(edges));
}

bool is_mono(const GraphMorphism& f) { return f.is_injective(); }

// ---------------------------------------------------------------------------
// Morphism search

namespace {

// Graph flattened to indices for the backtracking search.
struct IndexedGraph {
    std::vector<const std::string*> node_ids;
    std::vector<const std::string*> node_sorts;
    std::vector<const std::string*> edge_ids;
    std::vector<const std::string*> edge_sorts;
    std::vector<int> edge_src;
    std::vector<int> edge_tgt;
    std::vector<std::vector<int>> out_edges;
    std::vector<std::vector<int>> in_edges;

    explicit IndexedGraph(const Graph& g) {
        std::unordered_map<std::string_view, int> index;
        for (const auto& [id, sort] : g.nodes()) {
            index.emplace(id, static_cast<int>(node_ids.size()));
            node_ids.push_back(&id);
            node_sorts.push_back(&sort);
        }
        out_edges.resize(node_ids.size());
        in_edges.resize(node_ids.size());
        for (const auto& [id, e] : g.edges()) {
            int k = static_cast<int>(edge_ids.size());
            edge_ids.push_back(&id);
            edge_sorts.push_back(&e.sort);
            edge_src.push_back(index.at(e.source));
            edge_tgt.push_back(index.at(e.target));
            out_edges[edge_src.back()].push_back(k);
            in_edges[edge_tgt.back()].push_back(k);
        }
    }
};

class Searcher {
public:
    Searcher(const GraphPtr& pattern, const GraphPtr& host, const SearchOptions& options,
             const std::function<bool(const GraphMorphism&)>& visit)
        : pattern_ptr_(pattern),
          host_ptr_(host),
          p_(*pattern),
          h_(*host),
          options_(options),
          visit_(visit) {
        plan();
    }

    void run() {
        node_assign_.assign(p_.node_ids.size(), -1);
        edge_assign_.assign(p_.edge_ids.size(), -1);
        host_node_used_.assign(h_.node_ids.size(), 0);
        host_edge_used_.assign(h_.edge_ids.size(), 0);
        assign_node(0);
    }

private:
    struct Anchor {
        int edge = -1;
        bool outgoing = false;  // pattern node is the edge target when true
    };

    void plan() {
        const std::size_t n = p_.node_ids.size();
        std::vector<char> seen(n, 0);
        std::vector<int> position(n, -1);
        for (std::size_t start = 0; start < n; ++start) {
            if (seen[start]) continue;
            std::deque<int> queue{static_cast<int>(start)};
            seen[start] = 1;
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                position[v] = static_cast<int>(order_.size());
                order_.push_back(v);
                std::vector<int> next;
                for (int e : p_.out_edges[v]) next.push_back(p_.edge_tgt[e]);
                for (int e : p_.in_edges[v]) next.push_back(p_.edge_src[e]);
                std::sort(next.begin(), next.end());
                for (int w : next)
                    if (!seen[w]) {
                        seen[w] = 1;
                        queue.push_back(w);
                    }
            }
        }
        anchors_.resize(n);
        edges_at_.resize(n);
        for (std::size_t pos = 0; pos < n; ++pos) {
            int v = order_[pos];
            for (int e : p_.in_edges[v]) {
                int other = p_.edge_src[e];
                if (position[other] < static_cast<int>(pos) && anchors_[pos].edge < 0)
                    anchors_[pos] = Anchor{e, true};
            }
            for (int e : p_.out_edges[v]) {
                int other = p_.edge_tgt[e];
                if (position[other] < static_cast<int>(pos) && anchors_[pos].edge < 0)
                    anchors_[pos] = Anchor{e, false};
            }
        }
        for (std::size_t e = 0; e < p_.edge_ids.size(); ++e) {
            int last = std::max(position[p_.edge_src[e]], position[p_.edge_tgt[e]]);
            edges_at_[last].push_back(static_cast<int>(e));
        }
    }

    bool accept(const std::string* p, const std::string* h) const {
        return !options_.accept || options_.accept(*p, *h);
    }

    void assign_node(std::size_t pos) {
        if (stopped_) return;
        if (pos == order_.size()) {
            emit();
            return;
        }
        const int v = order_[pos];
        std::vector<int> candidates;
        const Anchor& anchor = anchors_[pos];
        if (anchor.edge >= 0) {
            const std::string& sort = *p_.edge_sorts[anchor.edge];
            if (anchor.outgoing) {
                int from = node_assign_[p_.edge_src[anchor.edge]];
                for (int he : h_.out_edges[from])
                    if (*h_.edge_sorts[he] == sort) candidates.push_back(h_.edge_tgt[he]);
            } else {
                int to = node_assign_[p_.edge_tgt[anchor.edge]];
                for (int he : h_.in_edges[to])
                    if (*h_.edge_sorts[he] == sort) candidates.push_back(h_.edge_src[he]);
            }
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        } else {
            candidates.resize(h_.node_ids.size());
            for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = static_cast<int>(i);
        }
        for (int c : candidates) {
            if (stopped_) return;
            if (*h_.node_sorts[c] != *p_.node_sorts[v]) continue;
            if (options_.injective && host_node_used_[c]) continue;
            if (!accept(p_.node_ids[v], h_.node_ids[c])) continue;
            node_assign_[v] = c;
            host_node_used_[c]++;
            assign_edges(pos, 0);
            host_node_used_[c]--;
            node_assign_[v] = -1;
        }
    }

    void assign_edges(std::size_t pos, std::size_t k) {
        if (stopped_) return;
        if (k == edges_at_[pos].size()) {
            assign_node(pos + 1);
            return;
        }
        const int e = edges_at_[pos][k];
        const int from = node_assign_[p_.edge_src[e]];
        const int to = node_assign_[p_.edge_tgt[e]];
        for (int he : h_.out_edges[from]) {
            if (stopped_) return;
            if (h_.edge_tgt[he] != to || *h_.edge_sorts[he] != *p_.edge_sorts[e]) continue;
            if (options_.injective && host_edge_used_[he]) continue;
            if (!accept(p_.edge_ids[e], h_.edge_ids[he])) continue;
            edge_assign_[e] = he;
            host_edge_used_[he]++;
            assign_edges(pos, k + 1);
            host_edge_used_[he]--;
            edge_assign_[e] = -1;
        }
    }

    void emit() {
        IdMap nodes, edges;
        for (std::size_t v = 0; v < node_assign_.size(); ++v)
            nodes.emplace_hint(nodes.end(), *p_.node_ids[v], *h_.node_ids[node_assign_[v]]);
        for (std::size_t e = 0; e < edge_assign_.size(); ++e)
            edges.emplace_hint(edges.end(), *p_.edge_ids[e], *h_.edge_ids[edge_assign_[e]]);
        if (!visit_(GraphMorphism(pattern_ptr_, host_ptr_, std::move(nodes), std::move(edges))))
            stopped_ = true;
    }

    GraphPtr pattern_ptr_;
    GraphPtr host_ptr_;
    IndexedGraph p_;
    IndexedGraph h_;
    const SearchOptions& options_;
    const std::function<bool(const GraphMorphism&)>& visit_;

    std::vector<int> order_;
    std::vector<Anchor> anchors_;
    std::vector<std::vector<int>> edges_at_;
    std::vector<int> node_assign_;
    std::vector<int> edge_assign_;
    std::vector<int> host_node_used_;
    std::vector<int> host_edge_used_;
    bool stopped_ = false;
};

void require_same_signature(const Graph& a, const Graph& b) {
    if (a.signature_ptr() != b.signature_ptr() && !(a.signature() == b.signature()))
        throw SignatureError("graphs are built over different sort signatures");
}

} // namespace

void search_morphisms(const GraphPtr& pattern, const GraphPtr& host, const SearchOptions& options,
                      const std::function<bool(const GraphMorphism&)>& visit) {
    require_same_signature(*pattern, *host);
    Searcher(pattern, host, options, visit).run();
}

std::vector<GraphMorphism> enumerate_morphisms(const GraphPtr& pattern, const GraphPtr& host,
                                               bool injective_only) {
    std::vector<GraphMorphism> out;
    SearchOptions options;
    options.injective = injective_only;
    search_morphisms(pattern, host, options, [&](const GraphMorphism& m) {
        out.push_back(m);
        return true;
    });
    std::sort(out.begin(), out.end(), [](const GraphMorphism& a, const GraphMorphism& b) {
        if (a.node_map() != b.node_map()) return a.node_map() < b.node_map();
        return a.edge_map() < b.edge_map();
    });
    return out;
}

std::optional<GraphMorphism> is_isomorphic(const GraphPtr& a, const GraphPtr& b,
                                           const ElementFilter& accept) {
    if (a->signature_ptr() != b->signature_ptr() && !(a->signature() == b->signature()))
        return std::nullopt;
    if (a->node_count() != b->node_count() || a->edge_count() != b->edge_count()) return std::nullopt;
    std::map<std::string, std::ptrdiff_t> balance;
    for (const auto& [id, sort] : a->nodes()) balance[sort]++;
    for (const auto& [id, sort] : b->nodes()) balance[sort]--;
    for (const auto& [id, e] : a->edges()) balance[e.sort]++;
    for (const auto& [id, e] : b->edges()) balance[e.sort]--;
    for (const auto& [sort, n] : balance)
        if (n != 0) return std::nullopt;

    std::optional<GraphMorphism> found;
    SearchOptions options;
    options.injective = true;
    options.accept = accept;
    search_morphisms(a, b, options, [&](const GraphMorphism& m) {
        found.emplace(m);
        return false;
    });
    return found;
}

GraphCoproduct disjoint_union(const GraphPtr& a, const GraphPtr& b) {
    require_same_signature(*a, *b);
    Graph out(a->signature_ptr());
    IdMap n1, e1, n2, e2;
    for (const auto& [id, sort] : a->nodes()) {
        out.add_node("in1:" + id, sort);
        n1.emplace(id, "in1:" + id);
    }
    for (const auto& [id, sort] : b->nodes()) {
        out.add_node("in2:" + id, sort);
        n2.emplace(id, "in2:" + id);
    }
    for (const auto& [id, e] : a->edges()) {
        out.add_edge("in1:" + id, e.sort, "in1:" + e.source, "in1:" + e.target);
        e1.emplace(id, "in1:" + id);
    }
    for (const auto& [id, e] : b->edges()) {
        out.add_edge("in2:" + id, e.sort, "in2:" + e.source, "in2:" + e.target);
        e2.emplace(id, "in2:" + id);
    }
    GraphPtr g = freeze(std::move(out));
    return GraphCoproduct{g, GraphMorphism(a, g, std::move(n1), std::move(e1)),
                          GraphMorphism(b, g, std::move(n2), std::move(e2))};
}

} // namespace wdpo

#include "wdpo/fin_attr.hpp"

#include <sstream>

#include "wdpo/error.hpp"

namespace wdpo {

AttributedGraph::AttributedGraph(GraphPtr graph, Algebra algebra, Labeling labels)
    : graph_(std::move(graph)), algebra_(std::move(algebra)), labels_(std::move(labels)) {
    if (!graph_) throw StructureError("attributed graph without a graph");
    for (const auto& [id, set] : labels_) {
        if (!graph_->has_element(id))
            throw StructureError("label on unknown element '" + id + "'");
        for (const Term& t : set)
            if (!algebra_.contains(t))
                throw StructureError("label " + t.to_string() + " of '" + id + "' is not in " +
                                     algebra_.describe());
    }
    for (const auto& [id, sort] : graph_->nodes()) labels_.try_emplace(id);
    for (const auto& [id, e] : graph_->edges()) labels_.try_emplace(id);
}

const LabelSet& AttributedGraph::label(std::string_view element) const {
    auto it = labels_.find(element);
    if (it == labels_.end())
        throw StructureError("no element '" + std::string(element) + "'");
    return it->second;
}

std::string AttributedGraph::to_string() const {
    std::ostringstream out;
    out << "[" << algebra_.describe() << "]";
    for (const auto& [id, sort] : graph_->nodes())
        out << " " << id << ":" << wdpo::to_string(label(id));
    for (const auto& [id, e] : graph_->edges()) {
        out << " " << id << "(" << e.source << "->" << e.target << ")";
        if (!label(id).empty()) out << ":" << wdpo::to_string(label(id));
    }
    return out.str();
}

bool operator==(const AttributedGraph& a, const AttributedGraph& b) {
    if (&a == &b) return true;
    return same_graph(a.graph_, b.graph_) && a.algebra_ == b.algebra_ && a.labels_ == b.labels_;
}

bool same_attr_graph(const AttrGraphPtr& a, const AttrGraphPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

// ---------------------------------------------------------------------------
// Builder

AttrGraphBuilder::AttrGraphBuilder(SignaturePtr signature, Algebra algebra)
    : signature_(signature), algebra_(std::move(algebra)), graph_(std::move(signature)) {}

namespace {

template <typename Range>
LabelSet parse_labels(const Algebra& algebra, const Range& texts) {
    LabelSet out;
    for (const auto& t : texts) out.insert(algebra.parse_value(t));
    return out;
}

} // namespace

AttrGraphBuilder& AttrGraphBuilder::node(const std::string& id,
                                         std::initializer_list<std::string_view> labels) {
    const std::string& sort = *signature_->node_sorts().begin();
    graph_.add_node(id, sort);
    labels_[id] = parse_labels(algebra_, labels);
    return *this;
}

AttrGraphBuilder& AttrGraphBuilder::node(const std::string& id, const std::string& sort,
                                         const std::vector<std::string>& labels) {
    graph_.add_node(id, sort);
    labels_[id] = parse_labels(algebra_, labels);
    return *this;
}

AttrGraphBuilder& AttrGraphBuilder::edge(const std::string& id, const std::string& source,
                                         const std::string& target,
                                         std::initializer_list<std::string_view> labels) {
    const std::string& sort = signature_->edge_sorts().begin()->first;
    graph_.add_edge(id, sort, source, target);
    labels_[id] = parse_labels(algebra_, labels);
    return *this;
}

AttrGraphBuilder& AttrGraphBuilder::edge(const std::string& id, const std::string& sort,
                                         const std::string& source, const std::string& target,
                                         const std::vector<std::string>& labels) {
    graph_.add_edge(id, sort, source, target);
    labels_[id] = parse_labels(algebra_, labels);
    return *this;
}

AttrGraphPtr AttrGraphBuilder::build() const {
    return freeze(AttributedGraph(freeze(graph_), algebra_, labels_));
}

// ---------------------------------------------------------------------------
// AttrMorphism

AttrMorphism::AttrMorphism(AttrGraphPtr source, AttrGraphPtr target, GraphMorphism sigma,
                           AlgebraMorphism alpha)
    : source_(std::move(source)),
      target_(std::move(target)),
      sigma_(std::move(sigma)),
      alpha_(std::move(alpha)) {
    if (!source_ || !target_) throw StructureError("attributed morphism with a null object");
    if (!same_graph(sigma_.source(), source_->graph()) ||
        !same_graph(sigma_.target(), target_->graph()))
        throw StructureError("graph component does not connect the underlying graphs");
    if (!(alpha_.source() == source_->algebra()) || !(alpha_.target() == target_->algebra()))
        throw StructureError("algebra component does not connect the algebras (" +
                             alpha_.source().describe() + " -> " + alpha_.target().describe() +
                             " vs " + source_->algebra().describe() + " -> " +
                             target_->algebra().describe() + ")");
}

AttrMorphism AttrMorphism::identity(const AttrGraphPtr& object) {
    return AttrMorphism(object, object, GraphMorphism::identity(object->graph()),
                        AlgebraMorphism::identity(object->algebra()));
}

AttrMorphism AttrMorphism::neutral(const AttrGraphPtr& source, const AttrGraphPtr& target,
                                   GraphMorphism sigma) {
    if (!(source->algebra() == target->algebra()))
        throw StructureError("neutral morphism between different algebras");
    return AttrMorphism(source, target, std::move(sigma),
                        AlgebraMorphism::identity(source->algebra()));
}

AttrMorphism AttrMorphism::inclusion(const AttrGraphPtr& source, const AttrGraphPtr& target) {
    IdMap nodes, edges;
    for (const auto& [id, sort] : source->graph()->nodes()) nodes.emplace(id, id);
    for (const auto& [id, e] : source->graph()->edges()) edges.emplace(id, id);
    return neutral(source, target,
                   GraphMorphism(source->graph(), target->graph(), std::move(nodes), std::move(edges)));
}

bool AttrMorphism::is_neutral() const {
    return alpha_.is_identity() && source_->algebra() == target_->algebra();
}

bool operator==(const AttrMorphism& a, const AttrMorphism& b) {
    return same_attr_graph(a.source_, b.source_) && same_attr_graph(a.target_, b.target_) &&
           a.sigma_.node_map() == b.sigma_.node_map() &&
           a.sigma_.edge_map() == b.sigma_.edge_map() && a.alpha_ == b.alpha_;
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const std::string& s : structural) out << s << "; ";
    for (const LabelViolation& v : labels)
        out << "element '" << v.element << "': " << to_string(v.image) << " not included in "
            << to_string(v.target_label) << "; ";
    std::string s = out.str();
    if (s.size() >= 2) s.resize(s.size() - 2);
    return s;
}

ValidationReport validate_attr_morphism(const AttrMorphism& m) {
    ValidationReport report;
    const AttributedGraph& src = *m.source();
    const AttributedGraph& tgt = *m.target();
    for (const std::string& u : src.graph()->elements()) {
        LabelSet image;
        try {
            image = apply_to_labelset(m.alpha(), src.label(u));
        } catch (const EvaluationError& e) {
            report.structural.push_back("element '" + u + "': " + e.what());
            continue;
        }
        const LabelSet& have = tgt.label(m(u));
        bool included = true;
        for (const Term& t : image)
            if (!have.contains(t)) {
                included = false;
                break;
            }
        if (!included) report.labels.push_back(LabelViolation{u, std::move(image), have});
    }
    return report;
}

const AttrMorphism& require_valid(const AttrMorphism& m) {
    ValidationReport r = validate_attr_morphism(m);
    if (!r.ok()) throw StructureError("invalid attributed morphism: " + r.summary());
    return m;
}

AttrMorphism compose(const AttrMorphism& g, const AttrMorphism& f) {
    if (!same_attr_graph(f.target(), g.source()))
        throw StructureError("cannot compose: target of first morphism is not source of second");
    AttrMorphism out(f.source(), g.target(), compose(g.sigma(), f.sigma()),
                     compose(g.alpha(), f.alpha()));
    return require_valid(out);
}

std::optional<AttrMorphism> is_attr_isomorphic(const AttrGraphPtr& a, const AttrGraphPtr& b) {
    if (!(a->algebra() == b->algebra())) return std::nullopt;
    // Cheap necessary condition: label multisets agree.
    std::map<LabelSet, std::ptrdiff_t> balance;
    for (const auto& [id, set] : a->labels()) balance[set]++;
    for (const auto& [id, set] : b->labels()) balance[set]--;
    for (const auto& [set, n] : balance)
        if (n != 0) return std::nullopt;
    auto iso = is_isomorphic(a->graph(), b->graph(), [&](const std::string& x, const std::string& y) {
        return a->label(x) == b->label(y);
    });
    if (!iso) return std::nullopt;
    return AttrMorphism(a, b, std::move(*iso), AlgebraMorphism::identity(a->algebra()));
}

} // namespace wdpo

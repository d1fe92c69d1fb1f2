#ifndef WDPO_FIN_ATTR_HPP
#define WDPO_FIN_ATTR_HPP

#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wdpo/attributes.hpp"
#include "wdpo/graph.hpp"

namespace wdpo {

// Element id -> finite label set.
using Labeling = std::map<std::string, LabelSet, std::less<>>;

// A graph, an attribute algebra, and a finite label set on every node and edge.
class AttributedGraph {
public:
    // Elements missing from `labels` get the empty set; unknown ids and labels
    // outside the algebra's carrier are rejected.
    AttributedGraph(GraphPtr graph, Algebra algebra, Labeling labels = {});

    const GraphPtr& graph() const { return graph_; }
    const Algebra& algebra() const { return algebra_; }
    const Labeling& labels() const { return labels_; }
    const LabelSet& label(std::string_view element) const;

    std::string to_string() const;

    friend bool operator==(const AttributedGraph& a, const AttributedGraph& b);

private:
    GraphPtr graph_;
    Algebra algebra_;
    Labeling labels_;
};

using AttrGraphPtr = std::shared_ptr<const AttributedGraph>;

inline AttrGraphPtr freeze(AttributedGraph g) {
    return std::make_shared<const AttributedGraph>(std::move(g));
}

bool same_attr_graph(const AttrGraphPtr& a, const AttrGraphPtr& b);

// Incremental construction for tests, presets and the file loader.
class AttrGraphBuilder {
public:
    AttrGraphBuilder(SignaturePtr signature, Algebra algebra);

    AttrGraphBuilder& node(const std::string& id, std::initializer_list<std::string_view> labels = {});
    AttrGraphBuilder& node(const std::string& id, const std::string& sort,
                           const std::vector<std::string>& labels);
    AttrGraphBuilder& edge(const std::string& id, const std::string& source,
                           const std::string& target,
                           std::initializer_list<std::string_view> labels = {});
    AttrGraphBuilder& edge(const std::string& id, const std::string& sort, const std::string& source,
                           const std::string& target, const std::vector<std::string>& labels);

    AttrGraphPtr build() const;

private:
    SignaturePtr signature_;
    Algebra algebra_;
    Graph graph_;
    Labeling labels_;
};

// A pair (graph morphism, algebra morphism). Construction checks only that
// the components connect the right objects; the lax label condition is
// reported by validate_attr_morphism.
class AttrMorphism {
public:
    AttrMorphism(AttrGraphPtr source, AttrGraphPtr target, GraphMorphism sigma,
                 AlgebraMorphism alpha);

    static AttrMorphism identity(const AttrGraphPtr& object);
    // Neutral morphism over the shared algebra of source and target.
    static AttrMorphism neutral(const AttrGraphPtr& source, const AttrGraphPtr& target,
                                GraphMorphism sigma);
    // Neutral inclusion identifying elements by equal ids.
    static AttrMorphism inclusion(const AttrGraphPtr& source, const AttrGraphPtr& target);

    const AttrGraphPtr& source() const { return source_; }
    const AttrGraphPtr& target() const { return target_; }
    const GraphMorphism& sigma() const { return sigma_; }
    const AlgebraMorphism& alpha() const { return alpha_; }

    bool is_neutral() const;
    bool is_mono() const { return sigma_.is_injective(); }

    const std::string& operator()(std::string_view element) const { return sigma_(element); }

    friend bool operator==(const AttrMorphism& a, const AttrMorphism& b);

private:
    AttrGraphPtr source_;
    AttrGraphPtr target_;
    GraphMorphism sigma_;
    AlgebraMorphism alpha_;
};

struct LabelViolation {
    std::string element;
    LabelSet image;         // alpha applied to the source label
    LabelSet target_label;  // label of the image element
};

struct ValidationReport {
    std::vector<std::string> structural;
    std::vector<LabelViolation> labels;

    bool ok() const { return structural.empty() && labels.empty(); }
    std::string summary() const;
};

ValidationReport validate_attr_morphism(const AttrMorphism& m);

// Throws StructureError carrying the report when `m` is invalid.
const AttrMorphism& require_valid(const AttrMorphism& m);

// Componentwise composite g after f, re-validated.
AttrMorphism compose(const AttrMorphism& g, const AttrMorphism& f);

// Bijective graph isomorphism with equal labels on corresponding elements.
std::optional<AttrMorphism> is_attr_isomorphic(const AttrGraphPtr& a, const AttrGraphPtr& b);

} // namespace wdpo

#endif // WDPO_FIN_ATTR_HPP

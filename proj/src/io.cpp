#include "wdpo/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wdpo/error.hpp"

namespace wdpo {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing '") + key + "'");
    return j.at(key);
}

std::string string_field(const json& j, const char* key, const std::string& where) {
    const json& v = member(j, key, where);
    if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

SignaturePtr parse_sorts(const json& root) {
    if (!root.contains("sorts")) return SortSignature::plain();
    const json& s = root.at("sorts");
    auto sig = std::make_shared<SortSignature>();
    try {
        for (const json& n : member(s, "nodes", "sorts")) sig->add_node_sort(n.get<std::string>());
        for (const auto& [name, ends] : member(s, "edges", "sorts").items()) {
            if (!ends.is_array() || ends.size() != 2)
                fail("sorts.edges." + name, "expected [source sort, target sort]");
            sig->add_edge_sort(name, ends[0].get<std::string>(), ends[1].get<std::string>());
        }
    } catch (const json::exception& e) {
        fail("sorts", e.what());
    } catch (const SignatureError& e) {
        fail("sorts", e.what());
    }
    return sig;
}

Algebra parse_algebra(const json& root) {
    if (!root.contains("algebra")) return Algebra::naturals();
    const json& a = root.at("algebra");
    if (a.is_string() && a.get<std::string>() == "nat") return Algebra::naturals();
    if (a.is_object() && a.contains("enum")) {
        std::set<std::string> values;
        for (const json& v : a.at("enum")) values.insert(v.is_string() ? v.get<std::string>() : v.dump());
        return Algebra::enumeration(std::move(values));
    }
    if (a.is_object() && a.contains("terms")) {
        std::set<std::string> vars;
        for (const json& v : a.at("terms")) vars.insert(v.get<std::string>());
        return Algebra::terms(OpSignature::plus(), std::move(vars));
    }
    fail("algebra", "expected \"nat\", {\"enum\": [...]} or {\"terms\": [...]}");
}

json algebra_to_json(const Algebra& a) {
    switch (a.kind()) {
    case Algebra::Kind::Naturals:
        return "nat";
    case Algebra::Kind::Enumeration:
        return json{{"enum", a.values()}};
    case Algebra::Kind::Terms:
        return json{{"terms", a.variables()}};
    }
    return nullptr;
}

LabelSet parse_label(const json& j, const Algebra& algebra, const std::string& where) {
    LabelSet out;
    if (j.is_null()) return out;
    if (!j.is_array()) fail(where, "label must be a list");
    for (const json& v : j) {
        try {
            if (v.is_number_unsigned() && algebra.kind() != Algebra::Kind::Enumeration)
                out.insert(Term::nat(v.get<std::uint64_t>()));
            else if (v.is_string())
                out.insert(algebra.parse_value(v.get<std::string>()));
            else if (v.is_number_integer() && algebra.kind() == Algebra::Kind::Enumeration)
                out.insert(algebra.parse_value(v.dump()));
            else
                fail(where, "unsupported label value " + v.dump());
        } catch (const Error& e) {
            fail(where, e.what());
        }
    }
    return out;
}

AttrGraphPtr parse_graph_body(const json& j, const SignaturePtr& sig, const Algebra& algebra,
                              const std::string& where) {
    if (!j.is_object()) fail(where, "graph must be an object");
    Graph g(sig);
    Labeling labels;
    const std::string default_node = sig->node_sorts().empty() ? "" : *sig->node_sorts().begin();
    const std::string default_edge = sig->edge_sorts().empty() ? "" : sig->edge_sorts().begin()->first;
    if (j.contains("nodes")) {
        std::size_t k = 0;
        for (const json& n : j.at("nodes")) {
            std::string at = where + ".nodes[" + std::to_string(k++) + "]";
            std::string id = string_field(n, "id", at);
            at += " '" + id + "'";
            std::string sort = n.contains("sort") ? string_field(n, "sort", at) : default_node;
            try {
                g.add_node(id, sort);
            } catch (const Error& e) {
                fail(at, e.what());
            }
            labels[id] = parse_label(n.value("label", json()), algebra, at);
        }
    }
    if (j.contains("edges")) {
        std::size_t k = 0;
        for (const json& e : j.at("edges")) {
            std::string at = where + ".edges[" + std::to_string(k++) + "]";
            std::string id = string_field(e, "id", at);
            at += " '" + id + "'";
            std::string sort = e.contains("sort") ? string_field(e, "sort", at) : default_edge;
            std::string src = string_field(e, "src", at);
            std::string tgt = string_field(e, "tgt", at);
            try {
                g.add_edge(id, sort, src, tgt);
            } catch (const Error& ex) {
                fail(at, ex.what());
            }
            labels[id] = parse_label(e.value("label", json()), algebra, at);
        }
    }
    try {
        return freeze(AttributedGraph(freeze(std::move(g)), algebra, std::move(labels)));
    } catch (const Error& e) {
        fail(where, e.what());
    }
}

AttrMorphism parse_map(const json& rule, const char* key, const AttrGraphPtr& from,
                       const AttrGraphPtr& to, const std::string& where) {
    std::map<std::string, std::string> given;
    if (rule.contains(key)) {
        for (const auto& [x, y] : rule.at(key).items()) {
            if (!y.is_string()) fail(where + "." + key, "image of '" + x + "' must be a string");
            given.emplace(x, y.get<std::string>());
        }
    }
    IdMap nodes, edges;
    for (const std::string& x : from->graph()->elements()) {
        auto it = given.find(x);
        std::string y = it == given.end() ? x : it->second;
        (from->graph()->has_node(x) ? nodes : edges).emplace(x, std::move(y));
    }
    for (const auto& [x, y] : given)
        if (!from->graph()->has_element(x))
            fail(where + "." + key, "maps unknown element '" + x + "'");
    try {
        return AttrMorphism::neutral(from, to,
                                     GraphMorphism(from->graph(), to->graph(), std::move(nodes),
                                                   std::move(edges)));
    } catch (const Error& e) {
        fail(where + "." + key, e.what());
    }
}

RulePtr parse_rule(const json& r, std::size_t index, const SignaturePtr& sig,
                   const Algebra& system_algebra) {
    std::string where = "rules[" + std::to_string(index) + "]";
    std::string name = string_field(r, "name", where);
    where += " '" + name + "'";
    std::set<std::string> vars;
    if (r.contains("variables"))
        for (const json& v : r.at("variables")) vars.insert(v.get<std::string>());
    Algebra algebra = system_algebra;
    if (system_algebra.kind() != Algebra::Kind::Enumeration)
        algebra = Algebra::terms(OpSignature::plus(), vars);
    else if (!vars.empty())
        fail(where, "rules over an enumeration take no variables");

    AttrGraphPtr L = parse_graph_body(member(r, "L", where), sig, algebra, where + ".L");
    AttrGraphPtr K = parse_graph_body(member(r, "K", where), sig, algebra, where + ".K");
    AttrGraphPtr I = r.contains("I") ? parse_graph_body(r.at("I"), sig, algebra, where + ".I") : K;
    AttrGraphPtr R = parse_graph_body(member(r, "R", where), sig, algebra, where + ".R");
    AttrMorphism l = parse_map(r, "l", K, L, where);
    AttrMorphism i = parse_map(r, "i", I, K, where);
    AttrMorphism rr = parse_map(r, "r", I, R, where);
    try {
        return make_rule(name, std::move(l), std::move(i), std::move(rr));
    } catch (const RuleError& e) {
        fail(where, e.what());
    }
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

json labels_to_json(const LabelSet& s, const Algebra& a) {
    json out = json::array();
    for (const Term& t : s) {
        if (a.kind() == Algebra::Kind::Naturals && t.kind() == Term::Kind::Nat)
            out.push_back(t.value());
        else
            out.push_back(t.to_string());
    }
    return out;
}

json sorts_to_json(const SortSignature& s) {
    json edges = json::object();
    for (const auto& [name, ends] : s.edge_sorts()) edges[name] = {ends.source, ends.target};
    return json{{"nodes", s.node_sorts()}, {"edges", edges}};
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

RulePtr SystemSpec::rule(std::string_view name) const {
    for (const RulePtr& r : rules)
        if (r->name == name) return r;
    throw ParseError("no rule named '" + std::string(name) + "'");
}

SystemSpec parse_system(std::string_view text) {
    json root = parse_json(text);
    if (!root.is_object()) throw ParseError("system file must be a JSON object");
    SystemSpec spec{parse_sorts(root), parse_algebra(root), {}, nullptr};
    if (root.contains("rules")) {
        std::size_t k = 0;
        std::set<std::string> names;
        for (const json& r : root.at("rules")) {
            RulePtr rule = parse_rule(r, k++, spec.signature, spec.algebra);
            if (!names.insert(rule->name).second)
                throw ParseError("duplicate rule name '" + rule->name + "'");
            spec.rules.push_back(std::move(rule));
        }
    }
    if (root.contains("host"))
        spec.host = parse_graph_body(root.at("host"), spec.signature, spec.algebra, "host");
    return spec;
}

SystemSpec load_system(const std::string& path) { return parse_system(read_file(path)); }

AttrGraphPtr parse_graph(std::string_view text) {
    json root = parse_json(text);
    if (!root.is_object()) throw ParseError("graph file must be a JSON object");
    SignaturePtr sig = parse_sorts(root);
    Algebra algebra = parse_algebra(root);
    if (root.contains("host")) return parse_graph_body(root.at("host"), sig, algebra, "host");
    return parse_graph_body(root, sig, algebra, "graph");
}

AttrGraphPtr load_graph(const std::string& path) { return parse_graph(read_file(path)); }

std::string graph_to_text(const AttributedGraph& g) {
    const Graph& graph = *g.graph();
    json nodes = json::array(), edges = json::array();
    for (const auto& [id, sort] : graph.nodes())
        nodes.push_back({{"id", id}, {"sort", sort}, {"label", labels_to_json(g.label(id), g.algebra())}});
    for (const auto& [id, e] : graph.edges())
        edges.push_back({{"id", id},
                         {"sort", e.sort},
                         {"src", e.source},
                         {"tgt", e.target},
                         {"label", labels_to_json(g.label(id), g.algebra())}});
    json root{{"sorts", sorts_to_json(graph.signature())},
              {"algebra", algebra_to_json(g.algebra())},
              {"nodes", nodes},
              {"edges", edges}};
    return root.dump(2) + "\n";
}

void save_graph(const AttributedGraph& g, const std::string& path) {
    write_file(path, graph_to_text(g));
}

std::string to_dot(const AttributedGraph& g, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << dot_quote(name) << " {\n";
    for (const auto& [id, sort] : g.graph()->nodes())
        out << "  " << dot_quote(id) << " [label=" << dot_quote(id + "\n" + to_string(g.label(id)))
            << "];\n";
    for (const auto& [id, e] : g.graph()->edges()) {
        std::string text = e.sort;
        if (!g.label(id).empty()) text += " " + to_string(g.label(id));
        out << "  " << dot_quote(e.source) << " -> " << dot_quote(e.target)
            << " [label=" << dot_quote(text) << "];\n";
    }
    out << "}\n";
    return out.str();
}

void export_dot(const AttributedGraph& g, const std::string& path) { write_file(path, to_dot(g)); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << contents;
}

} // namespace wdpo

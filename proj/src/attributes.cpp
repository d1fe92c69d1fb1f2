#include "wdpo/attributes.hpp"

#include <cctype>
#include <limits>

#include "wdpo/error.hpp"

namespace wdpo {

// ---------------------------------------------------------------------------
// Term

Term Term::nat(std::uint64_t value) {
    Term t;
    t.kind_ = Kind::Nat;
    t.value_ = value;
    return t;
}

Term Term::symbol(std::string name) {
    Term t;
    t.kind_ = Kind::Symbol;
    t.name_ = std::move(name);
    return t;
}

Term Term::variable(std::string name) {
    Term t;
    t.kind_ = Kind::Variable;
    t.name_ = std::move(name);
    return t;
}

Term Term::apply(std::string op, std::vector<Term> args) {
    Term t;
    t.kind_ = Kind::Apply;
    t.name_ = std::move(op);
    t.args_ = std::move(args);
    return t;
}

bool Term::is_ground() const {
    switch (kind_) {
    case Kind::Variable:
        return false;
    case Kind::Apply:
        for (const Term& a : args_)
            if (!a.is_ground()) return false;
        return true;
    default:
        return true;
    }
}

void Term::collect_variables(std::set<std::string>& out) const {
    if (kind_ == Kind::Variable) out.insert(name_);
    for (const Term& a : args_) a.collect_variables(out);
}

std::set<std::string> Term::variables() const {
    std::set<std::string> out;
    collect_variables(out);
    return out;
}

std::size_t Term::depth() const {
    std::size_t d = 0;
    for (const Term& a : args_) d = std::max(d, a.depth());
    return kind_ == Kind::Apply ? d + 1 : 0;
}

std::string Term::to_string() const {
    switch (kind_) {
    case Kind::Nat:
        return std::to_string(value_);
    case Kind::Symbol:
    case Kind::Variable:
        return name_;
    case Kind::Apply:
        break;
    }
    if (name_ == "+" && args_.size() == 2) {
        std::string rhs = args_[1].to_string();
        if (args_[1].kind() == Kind::Apply && args_[1].name() == "+") rhs = "(" + rhs + ")";
        return args_[0].to_string() + "+" + rhs;
    }
    std::string out = name_ + "(";
    for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out += ",";
        out += args_[i].to_string();
    }
    return out + ")";
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.value_ <=> b.value_; c != 0) return c;
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    const std::size_t n = std::min(a.args_.size(), b.args_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
    return a.args_.size() <=> b.args_.size();
}

std::string to_string(const LabelSet& labels) {
    std::string out = "{";
    bool first = true;
    for (const Term& t : labels) {
        if (!first) out += ",";
        first = false;
        out += t.to_string();
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class TermParser {
public:
    explicit TermParser(std::string_view text) : text_(text) {}

    Term parse() {
        Term t = sum();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("term '" + std::string(text_) + "' at offset " + std::to_string(pos_) +
                         ": " + msg);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Term sum() {
        Term lhs = atom();
        while (eat('+')) lhs = Term::apply("+", {std::move(lhs), atom()});
        return lhs;
    }

    Term atom() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Term inner = sum();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::uint64_t v = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                const std::uint64_t digit = static_cast<std::uint64_t>(text_[pos_] - '0');
                if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
                    fail("numeral out of range");
                v = v * 10 + digit;
                ++pos_;
            }
            return Term::nat(v);
        }
        if (std::islower(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_' || text_[pos_] == '\''))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (eat('(')) {
                std::vector<Term> args;
                if (!eat(')')) {
                    do {
                        args.push_back(sum());
                    } while (eat(','));
                    if (!eat(')')) fail("expected ')'");
                }
                return Term::apply(std::move(name), std::move(args));
            }
            return Term::variable(std::move(name));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Term parse_term(std::string_view text) { return TermParser(text).parse(); }

// ---------------------------------------------------------------------------
// Algebra

OpSignature OpSignature::plus() { return OpSignature{{{"+", 2}}}; }

Algebra Algebra::terms(OpSignature signature, std::set<std::string> variables) {
    Algebra a;
    a.kind_ = Kind::Terms;
    a.signature_ = std::move(signature);
    a.variables_ = std::move(variables);
    return a;
}

Algebra Algebra::naturals() {
    Algebra a;
    a.kind_ = Kind::Naturals;
    a.signature_ = OpSignature::plus();
    return a;
}

Algebra Algebra::enumeration(std::set<std::string> values) {
    Algebra a;
    a.kind_ = Kind::Enumeration;
    a.values_ = std::move(values);
    return a;
}

bool Algebra::contains(const Term& t) const {
    switch (kind_) {
    case Kind::Naturals:
        return t.kind() == Term::Kind::Nat;
    case Kind::Enumeration:
        return t.kind() == Term::Kind::Symbol && values_.contains(t.name());
    case Kind::Terms:
        break;
    }
    switch (t.kind()) {
    case Term::Kind::Nat:
        return true;
    case Term::Kind::Symbol:
        return false;
    case Term::Kind::Variable:
        return variables_.contains(t.name());
    case Term::Kind::Apply: {
        auto it = signature_.arities.find(t.name());
        if (it == signature_.arities.end() || it->second != static_cast<int>(t.args().size()))
            return false;
        for (const Term& a : t.args())
            if (!contains(a)) return false;
        return true;
    }
    }
    return false;
}

Term Algebra::apply_op(const std::string& op, const std::vector<Term>& args) const {
    switch (kind_) {
    case Kind::Terms: {
        auto it = signature_.arities.find(op);
        if (it == signature_.arities.end() || it->second != static_cast<int>(args.size()))
            throw EvaluationError("operation '" + op + "' not in the term signature");
        return Term::apply(op, args);
    }
    case Kind::Naturals: {
        if (op != "+" || args.size() != 2)
            throw EvaluationError("operation '" + op + "' is not interpreted in the naturals");
        if (args[0].kind() != Term::Kind::Nat || args[1].kind() != Term::Kind::Nat)
            throw EvaluationError("'+' applied to a non-natural");
        std::uint64_t sum = 0;
        if (__builtin_add_overflow(args[0].value(), args[1].value(), &sum))
            throw OverflowError("natural-number overflow in " + args[0].to_string() + "+" +
                                args[1].to_string());
        return Term::nat(sum);
    }
    case Kind::Enumeration:
        break;
    }
    throw EvaluationError("operation '" + op + "' applied in an enumeration algebra");
}

Term Algebra::parse_value(std::string_view text) const {
    const std::string_view s = trim(text);
    if (kind_ == Kind::Enumeration) {
        if (!values_.contains(std::string(s)))
            throw ParseError("'" + std::string(s) + "' is not a value of " + describe());
        return Term::symbol(std::string(s));
    }
    Term t = parse_term(s);
    if (!contains(t)) throw ParseError("'" + std::string(s) + "' is not in " + describe());
    return t;
}

std::string Algebra::describe() const {
    std::string out;
    switch (kind_) {
    case Kind::Naturals:
        return "nat";
    case Kind::Enumeration:
        out = "enum{";
        for (const std::string& v : values_) out += (out.size() > 5 ? "," : "") + v;
        return out + "}";
    case Kind::Terms:
        out = "terms{";
        for (const std::string& v : variables_) out += (out.size() > 6 ? "," : "") + v;
        return out + "}";
    }
    return out;
}

// ---------------------------------------------------------------------------
// AlgebraMorphism

AlgebraMorphism AlgebraMorphism::identity(const Algebra& algebra) {
    AlgebraMorphism h;
    h.source_ = algebra;
    h.target_ = algebra;
    h.identity_ = true;
    return h;
}

AlgebraMorphism AlgebraMorphism::assignment(const Algebra& source, const Algebra& target,
                                            std::map<std::string, Term> values) {
    if (source.kind() != Algebra::Kind::Terms) {
        if (source == target && values.empty()) return identity(source);
        throw StructureError("only term algebras admit non-identity morphisms here (" +
                             source.describe() + " -> " + target.describe() + ")");
    }
    for (const std::string& x : source.variables())
        if (!values.contains(x)) throw StructureError("assignment misses variable '" + x + "'");
    for (const auto& [x, v] : values) {
        if (!source.variables().contains(x))
            throw StructureError("assignment binds unknown variable '" + x + "'");
        if (!target.contains(v))
            throw StructureError("assignment " + x + "->" + v.to_string() + " leaves " +
                                 target.describe());
    }
    if (source == target) {
        bool trivial = true;
        for (const auto& [x, v] : values)
            trivial = trivial && v.kind() == Term::Kind::Variable && v.name() == x;
        if (trivial) return identity(source);
    }
    AlgebraMorphism h;
    h.source_ = source;
    h.target_ = target;
    h.values_ = std::move(values);
    return h;
}

std::string AlgebraMorphism::describe() const {
    if (identity_) return "id";
    std::string out = "{";
    bool first = true;
    for (const auto& [x, v] : values_) {
        if (!first) out += ",";
        first = false;
        out += x + "->" + v.to_string();
    }
    return out + "}";
}

Term evaluate_term(const Term& t, const AlgebraMorphism& h) {
    const Algebra& target = h.target();
    switch (t.kind()) {
    case Term::Kind::Variable: {
        if (h.is_identity()) {
            if (target.kind() != Algebra::Kind::Terms || !target.variables().contains(t.name()))
                throw EvaluationError("unassigned variable '" + t.name() + "'");
            return t;
        }
        auto it = h.values().find(t.name());
        if (it == h.values().end()) throw EvaluationError("unassigned variable '" + t.name() + "'");
        return it->second;
    }
    case Term::Kind::Nat:
        if (target.kind() == Algebra::Kind::Enumeration)
            throw EvaluationError("numeral " + t.to_string() + " has no value in " +
                                  target.describe());
        return t;
    case Term::Kind::Symbol:
        if (!target.contains(t))
            throw EvaluationError("constant '" + t.name() + "' has no value in " +
                                  target.describe());
        return t;
    case Term::Kind::Apply:
        break;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(evaluate_term(a, h));
    return target.apply_op(t.name(), args);
}

LabelSet apply_to_labelset(const AlgebraMorphism& h, const LabelSet& labels) {
    if (h.is_identity()) return labels;
    LabelSet out;
    for (const Term& t : labels) out.insert(evaluate_term(t, h));
    return out;
}

AlgebraMorphism compose(const AlgebraMorphism& g, const AlgebraMorphism& f) {
    if (!(f.target() == g.source()))
        throw StructureError("cannot compose algebra morphisms: " + f.target().describe() +
                             " vs " + g.source().describe());
    if (f.is_identity()) return g;
    if (g.is_identity()) return f;
    std::map<std::string, Term> values;
    for (const auto& [x, v] : f.values()) values.emplace(x, evaluate_term(v, g));
    return AlgebraMorphism::assignment(f.source(), g.target(), std::move(values));
}

} // namespace wdpo

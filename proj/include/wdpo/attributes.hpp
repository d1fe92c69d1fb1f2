#ifndef WDPO_ATTRIBUTES_HPP
#define WDPO_ATTRIBUTES_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wdpo {

// A term over variables, natural-number literals, enumeration constants and
// operation symbols. Ground terms double as carrier values: a natural is a
// Nat leaf, an enumeration value a Symbol leaf.
class Term {
public:
    enum class Kind { Nat, Symbol, Variable, Apply };

    static Term nat(std::uint64_t value);
    static Term symbol(std::string name);
    static Term variable(std::string name);
    static Term apply(std::string op, std::vector<Term> args);

    Kind kind() const { return kind_; }
    std::uint64_t value() const { return value_; }
    const std::string& name() const { return name_; }
    const std::vector<Term>& args() const { return args_; }

    bool is_ground() const;
    void collect_variables(std::set<std::string>& out) const;
    std::set<std::string> variables() const;
    std::size_t depth() const;

    // Infix for binary "+", prefix call syntax otherwise.
    std::string to_string() const;

    friend std::strong_ordering operator<=>(const Term& a, const Term& b);
    friend bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

private:
    Kind kind_ = Kind::Nat;
    std::uint64_t value_ = 0;
    std::string name_;
    std::vector<Term> args_;
};

// Concrete syntax: sum := atom ('+' atom)*, atom := number | ident | ident '(' args ')' | '(' sum ')'.
// Identifiers parse as variables; throws ParseError.
Term parse_term(std::string_view text);

using LabelSet = std::set<Term>;

std::string to_string(const LabelSet& labels);

struct OpSignature {
    std::map<std::string, int> arities;

    static OpSignature plus();
    friend bool operator==(const OpSignature&, const OpSignature&) = default;
};

class Algebra {
public:
    enum class Kind { Terms, Naturals, Enumeration };

    // Terms over `signature` with the given variables; natural literals are constants.
    static Algebra terms(OpSignature signature, std::set<std::string> variables);
    // Unbounded naturals with "+"; 64-bit overflow is an error, never a wrap.
    static Algebra naturals();
    // A finite set of constants and no operations.
    static Algebra enumeration(std::set<std::string> values);

    Kind kind() const { return kind_; }
    const OpSignature& signature() const { return signature_; }
    const std::set<std::string>& variables() const { return variables_; }
    const std::set<std::string>& values() const { return values_; }

    bool contains(const Term& t) const;
    // Applies an operation symbol to carrier values.
    Term apply_op(const std::string& op, const std::vector<Term>& args) const;
    // Reads one label value: terms parse, naturals are decimal, enumerations exact.
    Term parse_value(std::string_view text) const;

    std::string describe() const;

    friend bool operator==(const Algebra&, const Algebra&) = default;

private:
    Kind kind_ = Kind::Naturals;
    OpSignature signature_;
    std::set<std::string> variables_;
    std::set<std::string> values_;
};

// Homomorphism determined by a variable assignment (term-algebra source) or
// the identity. Identity substitutions are normalized to the identity.
class AlgebraMorphism {
public:
    static AlgebraMorphism identity(const Algebra& algebra);
    static AlgebraMorphism assignment(const Algebra& source, const Algebra& target,
                                      std::map<std::string, Term> values);

    const Algebra& source() const { return source_; }
    const Algebra& target() const { return target_; }
    const std::map<std::string, Term>& values() const { return values_; }
    bool is_identity() const { return identity_; }

    std::string describe() const;

    friend bool operator==(const AlgebraMorphism&, const AlgebraMorphism&) = default;

private:
    Algebra source_;
    Algebra target_;
    std::map<std::string, Term> values_;
    bool identity_ = false;
};

Term evaluate_term(const Term& t, const AlgebraMorphism& h);
LabelSet apply_to_labelset(const AlgebraMorphism& h, const LabelSet& labels);

// g after f.
AlgebraMorphism compose(const AlgebraMorphism& g, const AlgebraMorphism& f);

} // namespace wdpo

#endif // WDPO_ATTRIBUTES_HPP

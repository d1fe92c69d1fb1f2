#ifndef WDPO_ERROR_HPP
#define WDPO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wdpo {

// Base of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ill-formed graph, bad morphism, or composition of non-matching morphisms.
class StructureError : public Error {
public:
    using Error::Error;
};

// Graphs built over different sort signatures.
class SignatureError : public Error {
public:
    using Error::Error;
};

// Term evaluation failure: unassigned variable or uninterpreted symbol.
class EvaluationError : public Error {
public:
    using Error::Error;
};

// Natural-number arithmetic left the 64-bit range.
class OverflowError : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

// A construction was called outside its precondition.
class ConstructionError : public Error {
public:
    using Error::Error;
};

// No pushout complement: dangling edge, identification, or label dangling.
class GluingError : public Error {
public:
    GluingError(const std::string& what, std::string element)
        : Error(what), element_(std::move(element)) {}
    const std::string& element() const { return element_; }

private:
    std::string element_;
};

// A rule violating the weak-span invariants.
class RuleError : public Error {
public:
    using Error::Error;
};

// A set of direct transformations that is not parallel coherent.
class IncoherentError : public Error {
public:
    IncoherentError(const std::string& what, std::size_t first, std::size_t second,
                    std::string element)
        : Error(what), first_(first), second_(second), element_(std::move(element)) {}
    std::size_t first() const { return first_; }
    std::size_t second() const { return second_; }
    const std::string& element() const { return element_; }

private:
    std::size_t first_;
    std::size_t second_;
    std::string element_;
};

// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace wdpo

#endif // WDPO_ERROR_HPP

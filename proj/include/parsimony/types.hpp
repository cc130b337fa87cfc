#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace parsimony {

using Label = std::int32_t;
using LabelSubset = std::vector<Label>;  // sorted, duplicate-free

/// Raised for malformed or inconsistent inputs (bad dimensions, negative
/// weights, unknown labels, parse failures).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a diversity or metric fails one of its defining axioms.
class AxiomViolation : public InvalidInput {
public:
    AxiomViolation(std::string axiom, const std::string& what)
        : InvalidInput(what), axiom_(std::move(axiom)) {}
    const std::string& axiom() const noexcept { return axiom_; }

private:
    std::string axiom_;
};

/// Raised when an exhaustive routine is asked to enumerate too much.
class SizeLimitExceeded : public std::runtime_error {
public:
    explicit SizeLimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on API misuse that depends on object state (e.g. querying a cut
/// before the flow was computed).
class StateError : public std::logic_error {
public:
    explicit StateError(const std::string& what) : std::logic_error(what) {}
};

inline constexpr double kAxiomTolerance = 1e-9;

struct LabelSet {
    std::int32_t size = 1;
};

}  // namespace parsimony

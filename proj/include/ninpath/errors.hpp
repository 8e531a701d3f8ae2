#pragma once

#include <stdexcept>
#include <string>

namespace ninpath {

/// Precondition on numeric inputs violated (bad angle ordering, load factor <= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Instance exceeds the size a bounded exact method can handle.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// No finite-cost tour exists, or a tour uses a forbidden edge.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A tour or solution handed to a routine does not satisfy its contract.
class InvalidSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent scenario / solution document.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ninpath

#ifndef COHPAIR_ERRORS_HPP
#define COHPAIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cohpair {

// Thrown when an operation needs more moments than a functional carries.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Regularity breakdown (Hankel-singular moments / vanishing norm h_n).
struct regularity_error : std::runtime_error {
    int index;
    regularity_error(const std::string& what, int idx)
        : std::runtime_error(what), index(idx) {}
};

// A theorem hypothesis failed (A(x) or B(x) identically zero, bad case routing).
struct hypothesis_error : std::runtime_error {
    explicit hypothesis_error(const std::string& what) : std::runtime_error(what) {}
};

// Parameter gate violated (a <= 0, c <= -1, non-positive gamma, M < 0, ...).
struct gate_error : std::runtime_error {
    explicit gate_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cohpair

#endif

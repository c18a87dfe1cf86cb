#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bistoch {

// Precondition violated by an argument (bad range, mismatched dimension).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Structurally unusable input, e.g. an affinity row that sums to zero.
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Overflow, NaN or a vanishing denominator during an iteration.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, std::size_t iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

}  // namespace bistoch

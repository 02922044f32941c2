#pragma once

#include <stdexcept>
#include <string>

namespace bmk {

/// A numerical routine failed to meet its accuracy contract: a matrix that
/// must be symmetric positive definite is not, quadrature did not converge,
/// a Newton inversion stalled, or a variance argument came out non-positive.
/// Failures are reported, never papered over by regularisation.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent user-facing configuration: unknown keys,
/// missing required fields, unparsable values, grids too coarse for the
/// requested scheme.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// The model admits no risky opportunity: R(0, b0) <= 0, so the mean
/// variance trade-off degenerates and no finite risk budget is attainable.
class degenerate_model_error : public std::domain_error {
public:
    explicit degenerate_model_error(const std::string& what) : std::domain_error(what) {}
};

} // namespace bmk

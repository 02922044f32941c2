#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bmk/errors.hpp"

namespace bmk {

/**
 * @brief Adaptive Gauss-Legendre quadrature on a finite interval.
 *
 * A fixed-order Gauss-Legendre rule is applied per panel; a panel is
 * accepted when the rule agrees with its two-half refinement within the
 * panel's share of the absolute tolerance, otherwise the panel is bisected.
 * Works for scalar and Eigen matrix valued integrands.  Exceeding the
 * recursion depth raises numerical_error: accuracy is part of the contract.
 */
struct QuadratureOptions {
    double abs_tol = 1e-10;
    int panel_order = 15;
    int max_depth = 40;
};

/// Nodes and weights of the order-n Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence and cached.
const std::pair<std::vector<double>, std::vector<double>>&
gauss_legendre_rule(int order);

namespace detail {

inline double quad_norm(double v) { return std::abs(v); }

template <typename Derived>
double quad_norm(const Eigen::MatrixBase<Derived>& v) {
    return v.cwiseAbs().maxCoeff();
}

template <typename F>
auto panel_estimate(F&& f, double a, double b, const std::vector<double>& x,
                    const std::vector<double>& w) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto acc = f(mid + half * x[0]);
    acc *= w[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        auto term = f(mid + half * x[i]);
        term *= w[i];
        acc += term;
    }
    acc *= half;
    return acc;
}

} // namespace detail

template <typename F>
auto adaptive_integrate(F&& f, double a, double b,
                        const QuadratureOptions& opt = {}) {
    using Value = std::decay_t<decltype(detail::panel_estimate(
        f, a, b, std::declval<const std::vector<double>&>(),
        std::declval<const std::vector<double>&>()))>;

    const auto& [x, w] = gauss_legendre_rule(opt.panel_order);
    if (a == b) {
        Value zero = detail::panel_estimate(f, a, b + 1.0, x, w);
        zero *= 0.0;
        return zero;
    }

    struct Panel {
        double a, b, tol;
        int depth;
    };
    std::vector<Panel> stack{{a, b, opt.abs_tol, 0}};
    bool first = true;
    Value total{};
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        Value coarse = detail::panel_estimate(f, p.a, p.b, x, w);
        Value fine = detail::panel_estimate(f, p.a, mid, x, w);
        fine += detail::panel_estimate(f, mid, p.b, x, w);
        Value diff = coarse;
        diff -= fine;
        if (detail::quad_norm(diff) <= p.tol || p.depth >= opt.max_depth) {
            if (p.depth >= opt.max_depth && detail::quad_norm(diff) > p.tol)
                throw numerical_error(
                    "adaptive_integrate: panel tolerance not met at maximum depth");
            if (first) {
                total = fine;
                first = false;
            } else {
                total += fine;
            }
        } else {
            stack.push_back({p.a, mid, 0.5 * p.tol, p.depth + 1});
            stack.push_back({mid, p.b, 0.5 * p.tol, p.depth + 1});
        }
    }
    return total;
}

} // namespace bmk

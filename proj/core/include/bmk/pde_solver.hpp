#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bmk/market_model.hpp"
#include "bmk/prior.hpp"
#include "bmk/risk_premium.hpp"

namespace bmk {

/**
 * @brief Finite-difference solver for the one-asset risk premium PDE
 *
 *   -dR/dt - psi^2 R_bb / 2 + 2 psi (b / sigma) R_b - psi^2 R_b^2 / 2
 *       - (b / sigma)^2 = 0,        R(T, b) = 0,
 *
 * marched backward from T on a uniform space-time grid.  The diffusion and
 * advection terms are implicit (tridiagonal solve); the quadratic gradient
 * term is taken from the known later time level, optionally corrected to
 * second order.  Boundary rows close the stencil by quadratic
 * extrapolation, one-sided and second order, which is exact whenever the
 * solution is quadratic in b.
 *
 * Space domain: mean +/- domain_pad prior standard deviations for a
 * Gaussian prior; the support interval shrunk by hull_inset (relative to
 * its span) for a discrete prior, where psi degenerates at the faces.
 */
enum class TimeScheme {
    backward_euler, ///< first order, quadratic term lagged
    crank_nicolson  ///< second order, predictor-corrector on the quadratic term
};

enum class AdvectionScheme {
    upwind,   ///< first order, one-sided by the sign of the coefficient
    central,  ///< second order; may lose monotonicity past the mesh Peclet bound
    hybrid,   ///< central where |a| db <= psi^2, upwind elsewhere
    automatic ///< central for Gaussian priors (psi is constant in b and the
              ///< solution quadratic, so central rows are nodally exact at any
              ///< Peclet number), hybrid for discrete priors (psi degenerates
              ///< at the support faces and upwinding keeps the rows monotone)
};

struct PdeGridSpec {
    int n_space = 400;
    int n_time = 2000;
    double domain_pad = 6.0;
    double hull_inset = 1e-3;
    TimeScheme time_scheme = TimeScheme::crank_nicolson;
    AdvectionScheme advection = AdvectionScheme::automatic;
};

/// Solved risk premium table on a uniform grid.  Value queries interpolate
/// with a cubic in b (so off-node queries keep the accuracy of the marching
/// solution, which is exact on quadratics) and linearly in t; the gradient
/// is a fourth-order (interior) finite-difference table, bilinearly
/// interpolated.
class PdeGrid1d {
public:
    PdeGrid1d() = default;

    double b_min() const { return b_.front(); }
    double b_max() const { return b_.back(); }
    double horizon() const { return t_.back(); }
    int n_space() const { return static_cast<int>(b_.size()); }
    int n_time() const { return static_cast<int>(t_.size()) - 1; }
    double sigma() const { return sigma_; }

    const std::vector<double>& space_nodes() const { return b_; }
    const std::vector<double>& time_nodes() const { return t_; }

    /// R at a node (k-th time level, i-th space node).
    double at(int k, int i) const { return r_[static_cast<std::size_t>(k) * b_.size() + i]; }
    /// psi at a node.
    double psi_at_node(int k, int i) const {
        return psi_[static_cast<std::size_t>(k) * b_.size() + i];
    }

    /// R interpolated with a cubic in b and linearly in t; throws
    /// std::domain_error outside the grid rectangle.
    double value(double t, double b) const;
    /// dR/db, fourth-order central differences at interior nodes,
    /// second-order one-sided at the edges, bilinearly interpolated.
    double gradient(double t, double b) const;
    /// psi, bilinearly interpolated from the stored node values.
    double psi_value(double t, double b) const;

    /// Plain text round trip of the full table.
    void save(const std::string& path) const;
    static PdeGrid1d load(const std::string& path);

private:
    friend PdeGrid1d solve_pde_1d(const MarketModel&, const Prior&, const PdeGridSpec&);

    void rebuild_gradient();
    void locate(double t, double b, int& k, int& i, double& wt, double& wb) const;

    std::vector<double> b_;    ///< space nodes, uniform ascending
    std::vector<double> t_;    ///< time levels 0..T, uniform ascending
    std::vector<double> r_;    ///< R values, row k * n_space + i
    std::vector<double> psi_;  ///< psi values on the same layout
    std::vector<double> grad_; ///< node gradients dR/db on the same layout
    double sigma_ = 0.0;
};

/// Solves the premium PDE for a one-asset model.  Dirac priors have a
/// closed form and are rejected; grids too coarse for the boundary stencil
/// raise config_error.
PdeGrid1d solve_pde_1d(const MarketModel& model, const Prior& prior,
                       const PdeGridSpec& spec = {});

/// Residual of the PDE at the grid node nearest to (t, b), evaluated with
/// central differences independent of the marching scheme.  Requires the
/// node to be interior (two nodes from every edge).
double pde_residual(const PdeGrid1d& grid, double t, double b);

/// Risk premium backed by a solved grid; psi comes from the exact filter.
class PdeRiskPremium : public RiskPremium {
public:
    PdeRiskPremium(MarketModel model, Prior prior, const PdeGridSpec& spec = {});

    double value(double t, const Eigen::VectorXd& b) const override;
    Eigen::VectorXd gradient(double t, const Eigen::VectorXd& b) const override;
    Eigen::MatrixXd psi(double t, const Eigen::VectorXd& b) const override;

    const PdeGrid1d& grid() const { return grid_; }

private:
    MarketModel model_;
    Prior prior_;
    PdeGrid1d grid_;
};

} // namespace bmk

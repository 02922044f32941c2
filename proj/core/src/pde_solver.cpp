#include "bmk/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bmk/errors.hpp"
#include "bmk/filter.hpp"

namespace bmk {

namespace {

struct Tridiagonal {
    std::vector<double> sub, diag, super, rhs;
    // Boundary rows carry one extra entry two columns in, produced by the
    // one-sided second-order stencils; they are eliminated against the
    // neighbouring row before the Thomas sweep.
    double corner_lo = 0.0; // row 0, column 2
    double corner_hi = 0.0; // row n-1, column n-3
};

void solve_tridiagonal(Tridiagonal& m, std::vector<double>& out) {
    const int n = static_cast<int>(m.diag.size());
    // A corner that is negligible against its own row (a degenerate
    // boundary row, psi ~ 0 there) is dropped rather than divided out.
    const double lo_scale = std::abs(m.diag[0]) + std::abs(m.super[0]);
    if (std::abs(m.corner_lo) > 1e-13 * lo_scale) {
        const double f = m.corner_lo / m.super[1];
        m.diag[0] -= f * m.sub[1];
        m.super[0] -= f * m.diag[1];
        m.rhs[0] -= f * m.rhs[1];
    }
    const double hi_scale = std::abs(m.diag[n - 1]) + std::abs(m.sub[n - 1]);
    if (std::abs(m.corner_hi) > 1e-13 * hi_scale) {
        const double f = m.corner_hi / m.sub[n - 2];
        m.diag[n - 1] -= f * m.super[n - 2];
        m.sub[n - 1] -= f * m.diag[n - 2];
        m.rhs[n - 1] -= f * m.rhs[n - 2];
    }
    // Thomas sweep.
    for (int i = 1; i < n; ++i) {
        const double w = m.sub[i] / m.diag[i - 1];
        m.diag[i] -= w * m.super[i - 1];
        m.rhs[i] -= w * m.rhs[i - 1];
    }
    out[n - 1] = m.rhs[n - 1] / m.diag[n - 1];
    for (int i = n - 2; i >= 0; --i)
        out[i] = (m.rhs[i] - m.super[i] * out[i + 1]) / m.diag[i];
}

/// dR/db with second-order one-sided edges and central interior.
void numeric_gradient(const std::vector<double>& r, double db,
                      std::vector<double>& g) {
    const int n = static_cast<int>(r.size());
    g[0] = (-3.0 * r[0] + 4.0 * r[1] - r[2]) / (2.0 * db);
    for (int i = 1; i < n - 1; ++i) g[i] = (r[i + 1] - r[i - 1]) / (2.0 * db);
    g[n - 1] = (3.0 * r[n - 1] - 4.0 * r[n - 2] + r[n - 3]) / (2.0 * db);
}

class PsiEvaluator {
public:
    PsiEvaluator(const MarketModel& model, const Prior& prior)
        : model_(model), prior_(prior),
          gaussian_(std::holds_alternative<GaussianPrior>(prior)) {}

    /// Fills psi(t, b_i) for all nodes; Gaussian psi does not depend on b.
    void fill(double t, const std::vector<double>& b, std::vector<double>& out) const {
        if (gaussian_) {
            const auto& p = std::get<GaussianPrior>(prior_);
            const double s2 = model_.covariance()(0, 0);
            const double s02 = p.covariance()(0, 0);
            const double v = s02 * model_.sigma()(0, 0) / (s2 + s02 * t);
            std::fill(out.begin(), out.end(), v);
            return;
        }
        Eigen::VectorXd point(1);
        for (std::size_t i = 0; i < b.size(); ++i) {
            point(0) = b[i];
            out[i] = psi(prior_, model_, t, point)(0, 0);
        }
    }

private:
    const MarketModel& model_;
    const Prior& prior_;
    bool gaussian_;
};

} // namespace

void PdeGrid1d::rebuild_gradient() {
    const int ns = n_space();
    const double db = b_[1] - b_[0];
    grad_.assign(r_.size(), 0.0);
    for (int k = 0; k <= n_time(); ++k) {
        const double* r = &r_[static_cast<std::size_t>(k) * ns];
        double* g = &grad_[static_cast<std::size_t>(k) * ns];
        g[0] = (-3.0 * r[0] + 4.0 * r[1] - r[2]) / (2.0 * db);
        g[1] = (r[2] - r[0]) / (2.0 * db);
        for (int i = 2; i < ns - 2; ++i)
            g[i] = (r[i - 2] - 8.0 * r[i - 1] + 8.0 * r[i + 1] - r[i + 2]) /
                   (12.0 * db);
        g[ns - 2] = (r[ns - 1] - r[ns - 3]) / (2.0 * db);
        g[ns - 1] = (3.0 * r[ns - 1] - 4.0 * r[ns - 2] + r[ns - 3]) / (2.0 * db);
    }
}

void PdeGrid1d::locate(double t, double b, int& k, int& i, double& wt,
                       double& wb) const {
    const double T = t_.back();
    if (!(t >= 0.0) || !(t <= T))
        throw std::out_of_range("PdeGrid1d: time outside [0, T]");
    if (!(b >= b_.front()) || !(b <= b_.back()))
        throw std::domain_error("PdeGrid1d: drift value outside the grid domain [" +
                                std::to_string(b_.front()) + ", " +
                                std::to_string(b_.back()) + "]");
    const double dt = t_[1] - t_[0];
    const double db = b_[1] - b_[0];
    k = std::min(static_cast<int>(t / dt), n_time() - 1);
    i = std::min(static_cast<int>((b - b_.front()) / db), n_space() - 2);
    wt = (t - t_[k]) / dt;
    wb = (b - b_[i]) / db;
}

double PdeGrid1d::value(double t, double b) const {
    int k, i;
    double wt, wb;
    locate(t, b, k, i, wt, wb);
    // Cubic in b: off-node queries would otherwise floor the accuracy at
    // the linear-interpolation error, db^2 R_bb / 8, which dominates the
    // marching error everywhere the solution is smooth.
    const int ns = n_space();
    const int j0 = std::clamp(i - 1, 0, ns - 4);
    const double db = b_[1] - b_[0];
    const double s = (b - b_[j0]) / db;
    const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    const auto row = [&](int kk) {
        const double* r = &r_[static_cast<std::size_t>(kk) * ns + j0];
        return w0 * r[0] + w1 * r[1] + w2 * r[2] + w3 * r[3];
    };
    return (1.0 - wt) * row(k) + wt * row(k + 1);
}

double PdeGrid1d::gradient(double t, double b) const {
    int k, i;
    double wt, wb;
    locate(t, b, k, i, wt, wb);
    const auto g = [&](int kk, int ii) {
        return grad_[static_cast<std::size_t>(kk) * b_.size() + ii];
    };
    return (1.0 - wt) * ((1.0 - wb) * g(k, i) + wb * g(k, i + 1)) +
           wt * ((1.0 - wb) * g(k + 1, i) + wb * g(k + 1, i + 1));
}

double PdeGrid1d::psi_value(double t, double b) const {
    int k, i;
    double wt, wb;
    locate(t, b, k, i, wt, wb);
    const auto p = [&](int kk, int ii) { return psi_at_node(kk, ii); };
    return (1.0 - wt) * ((1.0 - wb) * p(k, i) + wb * p(k, i + 1)) +
           wt * ((1.0 - wb) * p(k + 1, i) + wb * p(k + 1, i + 1));
}

void PdeGrid1d::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("PdeGrid1d::save: cannot open " + path);
    out.precision(17);
    out << "pde-grid-1d 1\n";
    out << n_space() << ' ' << n_time() << ' ' << sigma_ << '\n';
    out << b_.front() << ' ' << b_.back() << ' ' << t_.back() << '\n';
    for (std::size_t j = 0; j < r_.size(); ++j)
        out << r_[j] << (j + 1 == r_.size() ? '\n' : ' ');
    for (std::size_t j = 0; j < psi_.size(); ++j)
        out << psi_[j] << (j + 1 == psi_.size() ? '\n' : ' ');
    if (!out) throw std::runtime_error("PdeGrid1d::save: write failed for " + path);
}

PdeGrid1d PdeGrid1d::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("PdeGrid1d::load: cannot open " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "pde-grid-1d" || version != 1)
        throw std::runtime_error("PdeGrid1d::load: unrecognised file format");
    PdeGrid1d g;
    int ns = 0, nt = 0;
    double blo = 0, bhi = 0, T = 0;
    in >> ns >> nt >> g.sigma_ >> blo >> bhi >> T;
    if (!in || ns < 4 || nt < 1)
        throw std::runtime_error("PdeGrid1d::load: corrupt header");
    g.b_.resize(ns);
    for (int i = 0; i < ns; ++i)
        g.b_[i] = blo + (bhi - blo) * i / static_cast<double>(ns - 1);
    g.t_.resize(nt + 1);
    for (int k = 0; k <= nt; ++k) g.t_[k] = T * k / static_cast<double>(nt);
    g.r_.resize(static_cast<std::size_t>(ns) * (nt + 1));
    g.psi_.resize(g.r_.size());
    for (auto& v : g.r_) in >> v;
    for (auto& v : g.psi_) in >> v;
    if (!in) throw std::runtime_error("PdeGrid1d::load: truncated table");
    g.rebuild_gradient();
    return g;
}

PdeGrid1d solve_pde_1d(const MarketModel& model, const Prior& prior,
                       const PdeGridSpec& spec) {
    if (model.n() != 1)
        throw std::invalid_argument("solve_pde_1d: only one-asset models are supported");
    require_dimension(prior, 1);
    if (std::holds_alternative<DiracPrior>(prior))
        throw std::invalid_argument(
            "solve_pde_1d: a Dirac prior has the closed form R = (b0/sigma)^2 (T - t)");
    if (spec.n_space < 8 || spec.n_time < 8)
        throw config_error("solve_pde_1d: grid must be at least 8 x 8");

    double b_lo = 0.0, b_hi = 0.0;
    if (const auto* g = std::get_if<GaussianPrior>(&prior)) {
        const double sd = std::sqrt(g->covariance()(0, 0));
        b_lo = g->mean()(0) - spec.domain_pad * sd;
        b_hi = g->mean()(0) + spec.domain_pad * sd;
    } else {
        const auto& d = std::get<DiscretePrior>(prior);
        const double lo = d.support().row(0).minCoeff();
        const double hi = d.support().row(0).maxCoeff();
        const double span = hi - lo;
        if (!(span > 0.0))
            throw std::invalid_argument("solve_pde_1d: discrete support has no interior");
        b_lo = lo + spec.hull_inset * span;
        b_hi = hi - spec.hull_inset * span;
    }

    PdeGrid1d grid;
    const int ns = spec.n_space;
    const int nt = spec.n_time;
    const double T = model.horizon();
    const double sigma = model.sigma()(0, 0);
    grid.sigma_ = sigma;
    grid.b_.resize(ns);
    for (int i = 0; i < ns; ++i)
        grid.b_[i] = b_lo + (b_hi - b_lo) * i / static_cast<double>(ns - 1);
    grid.t_.resize(nt + 1);
    for (int k = 0; k <= nt; ++k) grid.t_[k] = T * k / static_cast<double>(nt);
    grid.r_.assign(static_cast<std::size_t>(ns) * (nt + 1), 0.0);
    grid.psi_.resize(grid.r_.size());

    const double db = grid.b_[1] - grid.b_[0];
    const double dt = T / nt;

    PsiEvaluator psi_eval(model, prior);
    std::vector<double> psi_node(ns), psi_coef(ns);

    std::vector<double> src(ns);
    for (int i = 0; i < ns; ++i) {
        const double q = grid.b_[i] / sigma;
        src[i] = q * q;
    }

    const bool cn = spec.time_scheme == TimeScheme::crank_nicolson;
    AdvectionScheme adv = spec.advection;
    if (adv == AdvectionScheme::automatic)
        adv = std::holds_alternative<GaussianPrior>(prior)
                  ? AdvectionScheme::central
                  : AdvectionScheme::hybrid;

    // Stability guard for the one-sided boundary rows: the advection
    // Courant number there must stay moderate.
    {
        psi_eval.fill(0.0, grid.b_, psi_coef);
        const double a_lo = std::abs(2.0 * psi_coef[0] * grid.b_[0] / sigma);
        const double a_hi = std::abs(2.0 * psi_coef[ns - 1] * grid.b_[ns - 1] / sigma);
        if (std::max(a_lo, a_hi) * dt / db > 2.0)
            throw config_error(
                "solve_pde_1d: time grid too coarse for the boundary stencil "
                "(advection Courant number exceeds 2)");
    }

    std::vector<double> r_old(ns), r_new(ns), r_star(ns), grad_old(ns),
        grad_star(ns), quad(ns);

    const auto assemble = [&](double weight, const std::vector<double>& psi_c,
                              Tridiagonal& m) {
        // (I + weight * L) with L = -psi^2/2 d_bb + a d_b, a = 2 psi b / sigma.
        m.sub.assign(ns, 0.0);
        m.diag.assign(ns, 0.0);
        m.super.assign(ns, 0.0);
        m.corner_lo = m.corner_hi = 0.0;
        for (int i = 1; i < ns - 1; ++i) {
            const double p2 = psi_c[i] * psi_c[i];
            const double a = 2.0 * psi_c[i] * grid.b_[i] / sigma;
            double c_sub = -0.5 * p2 / (db * db);
            double c_diag = p2 / (db * db);
            double c_super = -0.5 * p2 / (db * db);
            bool central = adv == AdvectionScheme::central ||
                           (adv == AdvectionScheme::hybrid &&
                            std::abs(a) * db <= p2);
            // Rows 1 and ns-2 are the pivots the corner elimination divides
            // by; near a db = psi^2 the central coefficient on that side
            // passes through zero, so fall back to upwind there.
            if (central && i == 1 && a > 0.0 && std::abs(a * db - p2) < 0.1 * p2)
                central = false;
            if (central && i == ns - 2 && a < 0.0 &&
                std::abs(-a * db - p2) < 0.1 * p2)
                central = false;
            if (central) {
                c_sub -= a / (2.0 * db);
                c_super += a / (2.0 * db);
            } else if (a >= 0.0) {
                c_diag += a / db;
                c_sub -= a / db;
            } else {
                c_diag -= a / db;
                c_super += a / db;
            }
            m.sub[i] = weight * c_sub;
            m.diag[i] = 1.0 + weight * c_diag;
            m.super[i] = weight * c_super;
        }
        {
            // Row 0: d_bb -> (r0 - 2 r1 + r2)/db^2, d_b -> (-3 r0 + 4 r1 - r2)/(2 db).
            const double p2 = psi_c[0] * psi_c[0];
            const double a = 2.0 * psi_c[0] * grid.b_[0] / sigma;
            m.diag[0] = 1.0 + weight * (-0.5 * p2 / (db * db) - 1.5 * a / db);
            m.super[0] = weight * (p2 / (db * db) + 2.0 * a / db);
            m.corner_lo = weight * (-0.5 * p2 / (db * db) - 0.5 * a / db);
        }
        {
            const double p2 = psi_c[ns - 1] * psi_c[ns - 1];
            const double a = 2.0 * psi_c[ns - 1] * grid.b_[ns - 1] / sigma;
            m.diag[ns - 1] = 1.0 + weight * (-0.5 * p2 / (db * db) + 1.5 * a / db);
            m.sub[ns - 1] = weight * (p2 / (db * db) - 2.0 * a / db);
            m.corner_hi = weight * (-0.5 * p2 / (db * db) + 0.5 * a / db);
        }
    };

    Tridiagonal m;
    m.rhs.assign(ns, 0.0);

    // Terminal level R(T, .) = 0 is already in place.
    psi_eval.fill(T, grid.b_, psi_node);
    std::copy(psi_node.begin(), psi_node.end(),
              grid.psi_.begin() + static_cast<std::size_t>(nt) * ns);

    for (int k = nt - 1; k >= 0; --k) {
        const double t_new = grid.t_[k];
        const double t_old = grid.t_[k + 1];
        const double t_coef = cn ? 0.5 * (t_new + t_old) : t_new;
        psi_eval.fill(t_coef, grid.b_, psi_coef);

        double* r_next = &grid.r_[static_cast<std::size_t>(k + 1) * ns];
        std::copy(r_next, r_next + ns, r_old.begin());
        numeric_gradient(r_old, db, grad_old);

        if (!cn) {
            assemble(dt, psi_coef, m);
            for (int i = 0; i < ns; ++i) {
                const double p2 = psi_coef[i] * psi_coef[i];
                m.rhs[i] = r_old[i] +
                           dt * (0.5 * p2 * grad_old[i] * grad_old[i] + src[i]);
            }
            solve_tridiagonal(m, r_new);
        } else {
            // Predictor: implicit linear part, lagged quadratic term.
            assemble(dt, psi_coef, m);
            for (int i = 0; i < ns; ++i) {
                const double p2 = psi_coef[i] * psi_coef[i];
                m.rhs[i] = r_old[i] +
                           dt * (0.5 * p2 * grad_old[i] * grad_old[i] + src[i]);
            }
            solve_tridiagonal(m, r_star);
            numeric_gradient(r_star, db, grad_star);

            // Corrector: trapezoidal linear part, quadratic term at the
            // midpoint gradient (average of old and predicted).
            assemble(0.5 * dt, psi_coef, m);
            Tridiagonal rhs_op;
            assemble(-0.5 * dt, psi_coef, rhs_op);
            for (int i = 0; i < ns; ++i) {
                const double p2 = psi_coef[i] * psi_coef[i];
                const double gm = 0.5 * (grad_old[i] + grad_star[i]);
                double lin = rhs_op.diag[i] * r_old[i];
                if (i > 0) lin += rhs_op.sub[i] * r_old[i - 1];
                if (i + 1 < ns) lin += rhs_op.super[i] * r_old[i + 1];
                if (i == 0) lin += rhs_op.corner_lo * r_old[2];
                if (i == ns - 1) lin += rhs_op.corner_hi * r_old[ns - 3];
                m.rhs[i] = lin + dt * (0.5 * p2 * gm * gm + src[i]);
            }
            solve_tridiagonal(m, r_new);
        }

        std::copy(r_new.begin(), r_new.end(),
                  grid.r_.begin() + static_cast<std::size_t>(k) * ns);
        psi_eval.fill(t_new, grid.b_, psi_node);
        std::copy(psi_node.begin(), psi_node.end(),
                  grid.psi_.begin() + static_cast<std::size_t>(k) * ns);
    }

    grid.rebuild_gradient();
    return grid;
}

double pde_residual(const PdeGrid1d& grid, double t, double b) {
    const int ns = grid.n_space();
    const int nt = grid.n_time();
    const double dt = grid.time_nodes()[1] - grid.time_nodes()[0];
    const double db = grid.space_nodes()[1] - grid.space_nodes()[0];

    int k = static_cast<int>(std::lround(t / dt));
    int i = static_cast<int>(
        std::lround((b - grid.b_min()) / db));
    if (k < 1 || k > nt - 1 || i < 2 || i > ns - 3)
        throw std::domain_error("pde_residual: nearest node is not interior");

    const double r_t = (grid.at(k + 1, i) - grid.at(k - 1, i)) / (2.0 * dt);
    const double r_b = (grid.at(k, i - 2) - 8.0 * grid.at(k, i - 1) +
                        8.0 * grid.at(k, i + 1) - grid.at(k, i + 2)) /
                       (12.0 * db);
    const double r_bb =
        (grid.at(k, i + 1) - 2.0 * grid.at(k, i) + grid.at(k, i - 1)) / (db * db);
    const double p = grid.psi_at_node(k, i);
    const double q = grid.space_nodes()[i] / grid.sigma();
    return -r_t - 0.5 * p * p * r_bb + 2.0 * p * q * r_b - 0.5 * p * p * r_b * r_b -
           q * q;
}

PdeRiskPremium::PdeRiskPremium(MarketModel model, Prior prior,
                               const PdeGridSpec& spec)
    : model_(std::move(model)), prior_(std::move(prior)),
      grid_(solve_pde_1d(model_, prior_, spec)) {}

double PdeRiskPremium::value(double t, const Eigen::VectorXd& b) const {
    if (b.size() != 1)
        throw std::invalid_argument("PdeRiskPremium: one-asset evaluator");
    return grid_.value(t, b(0));
}

Eigen::VectorXd PdeRiskPremium::gradient(double t, const Eigen::VectorXd& b) const {
    if (b.size() != 1)
        throw std::invalid_argument("PdeRiskPremium: one-asset evaluator");
    return Eigen::VectorXd::Constant(1, grid_.gradient(t, b(0)));
}

Eigen::MatrixXd PdeRiskPremium::psi(double t, const Eigen::VectorXd& b) const {
    return bmk::psi(prior_, model_, t, b);
}

} // namespace bmk

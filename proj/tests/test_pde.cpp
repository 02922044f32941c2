#include <doctest.h>

#include <bmk/errors.hpp>
#include <bmk/market_model.hpp>
#include <bmk/pde_solver.hpp>
#include <bmk/prior.hpp>
#include <bmk/risk_premium.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

using namespace bmk;

namespace {

Eigen::VectorXd scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

PdeGridSpec small_spec() {
    PdeGridSpec spec;
    spec.n_space = 200;
    spec.n_time = 600;
    return spec;
}

DiscretePrior two_point() {
    Eigen::MatrixXd support(1, 2);
    support << -0.1, 0.1;
    Eigen::VectorXd w(2);
    w << 0.5, 0.5;
    return DiscretePrior(support, w);
}

} // namespace

TEST_SUITE("pde") {

TEST_CASE("gaussian solution matches the closed form off the nodes") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    PdeGrid1d grid = solve_pde_1d(model, Prior{prior}, small_spec());

    const double span = grid.b_max() - grid.b_min();
    const double lo = grid.b_min() + 0.1 * span;
    const double hi = grid.b_max() - 0.1 * span;
    double maxrel = 0.0;
    for (double t : {0.0, 0.25, 0.5, 0.75}) {
        for (int j = 0; j <= 100; ++j) {
            const double b = lo + (hi - lo) * j / 100.0;
            const double ref = gaussian_R(model, prior, t, scalar(b));
            const double err = std::abs(grid.value(t, b) - ref) / std::max(1.0, std::abs(ref));
            maxrel = std::max(maxrel, err);
        }
    }
    CHECK(maxrel < 1e-4); // measures 2.4e-5 on this grid
}

TEST_CASE("gradient and psi agree with the analytic expressions") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    PdeGrid1d grid = solve_pde_1d(model, Prior{prior}, small_spec());
    for (double t : {0.0, 0.3, 0.7}) {
        for (double b : {-0.3, 0.05, 0.4}) {
            const double grad_ref = 2.0 * gaussian_M(model, prior, t)(0, 0) * b;
            CHECK(grid.gradient(t, b) == doctest::Approx(grad_ref).epsilon(1e-3));
            const double psi_ref = 0.16 / (0.04 + 0.16 * t) * 0.2;
            CHECK(grid.psi_value(t, b) == doctest::Approx(psi_ref).epsilon(1e-6));
        }
    }
}

TEST_CASE("interior residual is small and the terminal row is exactly zero") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    PdeGrid1d grid = solve_pde_1d(model, Prior{prior}, small_spec());
    for (double t : {0.1, 0.5, 0.9}) {
        for (double b : {-0.5, 0.05, 0.6}) {
            CHECK(std::abs(pde_residual(grid, t, b)) < 1e-3);
        }
    }
    for (int i = 0; i < grid.n_space(); ++i) {
        CHECK(grid.at(grid.n_time(), i) == 0.0);
    }
    CHECK_THROWS_AS(pde_residual(grid, 0.5, grid.b_min()), std::domain_error);
}

TEST_CASE("queries outside the grid are rejected") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    PdeGridSpec spec = small_spec();
    spec.n_space = 32;
    spec.n_time = 160;
    PdeGrid1d grid = solve_pde_1d(model, Prior{prior}, spec);
    CHECK_THROWS_AS(grid.value(0.5, grid.b_max() + 0.1), std::domain_error);
    CHECK_THROWS_AS(grid.value(-0.1, 0.05), std::out_of_range);
    CHECK_THROWS_AS(grid.value(1.1, 0.05), std::out_of_range);
}

TEST_CASE("error halves again under simultaneous refinement") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    PdeGridSpec coarse;
    coarse.n_space = 100;
    coarse.n_time = 300;
    PdeGridSpec fine;
    fine.n_space = 200;
    fine.n_time = 600;
    auto max_err = [&](const PdeGrid1d& grid) {
        const double span = grid.b_max() - grid.b_min();
        double worst = 0.0;
        for (double t : {0.0, 0.5}) {
            for (int j = 0; j <= 60; ++j) {
                const double b = grid.b_min() + span * (0.1 + 0.8 * j / 60.0);
                const double ref = gaussian_R(model, prior, t, scalar(b));
                worst = std::max(worst, std::abs(grid.value(t, b) - ref) /
                                            std::max(1.0, std::abs(ref)));
            }
        }
        return worst;
    };
    const double e_coarse = max_err(solve_pde_1d(model, Prior{prior}, coarse));
    const double e_fine = max_err(solve_pde_1d(model, Prior{prior}, fine));
    CHECK(e_fine < 0.5 * e_coarse); // second order: expect about a quarter
}

TEST_CASE("discrete two point prior solves cleanly") {
    MarketModel model(1.0, 0.2, 1.0);
    Prior prior = two_point();
    PdeGrid1d grid = solve_pde_1d(model, prior, small_spec());

    const int ns = grid.n_space();
    const int nt = grid.n_time();
    double min_value = 1e300;
    double asymmetry = 0.0;
    for (int k = 0; k <= nt; ++k) {
        for (int i = 0; i < ns; ++i) {
            const double v = grid.at(k, i);
            REQUIRE(std::isfinite(v));
            min_value = std::min(min_value, v);
            asymmetry = std::max(asymmetry, std::abs(v - grid.at(k, ns - 1 - i)));
        }
    }
    CHECK(min_value >= 0.0);       // premium of a nonnegative payoff
    CHECK(asymmetry < 1e-12);      // symmetric prior, symmetric solution
    for (double t : {0.1, 0.5}) {
        for (double b : {-0.05, 0.0, 0.05}) {
            CHECK(std::abs(pde_residual(grid, t, b)) < 1e-4);
        }
    }
    // grid-converged reference value from a 400 x 2000 run
    CHECK(grid.value(0.0, 0.0) == doctest::Approx(0.021776).epsilon(1e-3));
}

TEST_CASE("discrete value is stable under refinement") {
    MarketModel model(1.0, 0.2, 1.0);
    Prior prior = two_point();
    PdeGridSpec coarse;
    coarse.n_space = 100;
    coarse.n_time = 300;
    const double v_coarse = solve_pde_1d(model, prior, coarse).value(0.0, 0.05);
    const double v_fine = solve_pde_1d(model, prior, small_spec()).value(0.0, 0.05);
    CHECK(v_coarse == doctest::Approx(v_fine).epsilon(1e-3));
}

TEST_CASE("save and load round trip bit exactly") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);
    PdeGridSpec spec = small_spec();
    spec.n_space = 40;
    spec.n_time = 200;
    PdeGrid1d grid = solve_pde_1d(model, Prior{prior}, spec);

    const std::string path = "pde_roundtrip.bin";
    grid.save(path);
    PdeGrid1d back = PdeGrid1d::load(path);
    std::remove(path.c_str());

    REQUIRE(back.n_space() == grid.n_space());
    REQUIRE(back.n_time() == grid.n_time());
    CHECK(back.b_min() == grid.b_min());
    CHECK(back.b_max() == grid.b_max());
    CHECK(back.horizon() == grid.horizon());
    for (int k = 0; k <= grid.n_time(); ++k)
        for (int i = 0; i < grid.n_space(); ++i)
            REQUIRE(back.at(k, i) == grid.at(k, i));
}

TEST_CASE("load rejects malformed files") {
    const std::string path = "pde_bogus.bin";
    {
        FILE* f = std::fopen(path.c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fputs("not a grid file", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(PdeGrid1d::load(path), std::runtime_error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(PdeGrid1d::load("does_not_exist.bin"), std::runtime_error);
}

TEST_CASE("solver validates model, prior and grid spec") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior prior(0.05, 0.4);

    Eigen::MatrixXd sigma2 = Eigen::MatrixXd::Identity(2, 2) * 0.2;
    MarketModel model2(1.0, sigma2, 1.0, Eigen::VectorXd::Ones(2));
    Eigen::VectorXd b2(2);
    b2 << 0.05, 0.05;
    GaussianPrior prior2(b2, Eigen::MatrixXd::Identity(2, 2) * 0.16);
    CHECK_THROWS_AS(solve_pde_1d(model2, Prior{prior2}, small_spec()), std::invalid_argument);

    CHECK_THROWS_AS(solve_pde_1d(model, Prior{DiracPrior(0.05)}, small_spec()),
                    std::invalid_argument);

    PdeGridSpec tiny;
    tiny.n_space = 4;
    tiny.n_time = 4;
    CHECK_THROWS_AS(solve_pde_1d(model, Prior{prior}, tiny), config_error);

    // coarse time axis versus steep boundary advection trips the guard
    PdeGridSpec unstable;
    unstable.n_space = 4000;
    unstable.n_time = 8;
    CHECK_THROWS_AS(solve_pde_1d(model, Prior{prior}, unstable), config_error);
}

TEST_CASE("premium adapter exposes the grid solution") {
    MarketModel model(1.0, 0.2, 1.0);
    GaussianPrior gp(0.05, 0.4);
    PdeRiskPremium rp(model, Prior{gp}, small_spec());
    CHECK(rp.value(0.0, scalar(0.05)) ==
          doctest::Approx(gaussian_R(model, gp, 0.0, scalar(0.05))).epsilon(1e-4));
    CHECK(rp.gradient(0.3, scalar(0.1))(0) ==
          doctest::Approx(2.0 * gaussian_M(model, gp, 0.3)(0, 0) * 0.1).epsilon(1e-3));
    CHECK(rp.psi(0.3, scalar(0.1))(0, 0) ==
          doctest::Approx(0.16 / (0.04 + 0.16 * 0.3) * 0.2).epsilon(1e-6));
    CHECK(rp.grid().n_space() == 200);
    Eigen::VectorXd wide(2);
    wide << 0.05, 0.05;
    CHECK_THROWS_AS(rp.value(0.0, wide), std::invalid_argument);
}

} // TEST_SUITE

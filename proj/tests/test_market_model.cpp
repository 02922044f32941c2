#include <doctest.h>

#include <bmk/market_model.hpp>

#include <Eigen/Dense>
#include <stdexcept>

using namespace bmk;

TEST_SUITE("market_model") {

TEST_CASE("scalar constructor wires through accessors") {
    MarketModel m(1.0, 0.2, 1.5);
    CHECK(m.n() == 1);
    CHECK(m.horizon() == doctest::Approx(1.0));
    CHECK(m.initial_capital() == doctest::Approx(1.5));
    CHECK(m.sigma()(0, 0) == doctest::Approx(0.2));
    CHECK(m.sigma_inv()(0, 0) == doctest::Approx(5.0));
    CHECK(m.covariance()(0, 0) == doctest::Approx(0.04));
    CHECK(m.covariance_inv()(0, 0) == doctest::Approx(25.0));
    CHECK(m.initial_prices()(0) == doctest::Approx(1.0));
}

TEST_CASE("squared risk price is |sigma^-1 b|^2") {
    MarketModel m(1.0, 0.2, 1.0);
    Eigen::VectorXd b = Eigen::VectorXd::Constant(1, 0.05);
    CHECK(m.squared_risk_price(b) == doctest::Approx(0.0625)); // (0.05/0.2)^2
    CHECK(m.squared_row_norms()(0) == doctest::Approx(0.04));
}

TEST_CASE("matrix constructor handles correlated assets") {
    Eigen::MatrixXd sigma(2, 2);
    sigma << 0.2, 0.0,
             0.05, 0.1;
    Eigen::VectorXd s0 = Eigen::VectorXd::Ones(2);
    MarketModel m(2.0, sigma, 1.0, s0);
    CHECK(m.n() == 2);
    Eigen::MatrixXd cov = sigma * sigma.transpose();
    CHECK((m.covariance() - cov).norm() == doctest::Approx(0.0).epsilon(1e-14));
    Eigen::MatrixXd id = m.sigma() * m.sigma_inv();
    CHECK((id - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("rejects non invertible volatility") {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2, 2);
    sigma(0, 0) = 0.2; // second row zero: singular
    Eigen::VectorXd s0 = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(MarketModel(1.0, sigma, 1.0, s0), std::invalid_argument);
}

TEST_CASE("rejects bad horizon, capital and prices") {
    CHECK_THROWS_AS(MarketModel(0.0, 0.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(MarketModel(-1.0, 0.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(MarketModel(1.0, 0.0, 1.0), std::invalid_argument);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(1, 1) * 0.2;
    Eigen::VectorXd bad_s0 = Eigen::VectorXd::Constant(1, 0.0);
    CHECK_THROWS_AS(MarketModel(1.0, sigma, 1.0, bad_s0), std::invalid_argument);
}

TEST_CASE("require_time flags times outside the horizon") {
    MarketModel m(2.0, 0.2, 1.0);
    CHECK_NOTHROW(m.require_time(0.0));
    CHECK_NOTHROW(m.require_time(2.0));
    CHECK_THROWS_AS(m.require_time(-0.1), std::out_of_range);
    CHECK_THROWS_AS(m.require_time(2.1), std::out_of_range);
}

} // TEST_SUITE

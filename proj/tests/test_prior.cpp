#include <doctest.h>

#include <bmk/prior.hpp>

#include <Eigen/Dense>
#include <stdexcept>

using namespace bmk;

TEST_SUITE("prior") {

TEST_CASE("gaussian scalar constructor") {
    GaussianPrior g(0.05, 0.4);
    CHECK(g.mean()(0) == doctest::Approx(0.05));
    CHECK(g.covariance()(0, 0) == doctest::Approx(0.16));
    CHECK(g.covariance_inv()(0, 0) == doctest::Approx(6.25));
}

TEST_CASE("gaussian rejects non positive definite covariance") {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = 0.1; // rank 1
    CHECK_THROWS_AS(GaussianPrior(mean, cov), std::invalid_argument);

    Eigen::MatrixXd asym(2, 2);
    asym << 0.1, 0.02,
            0.05, 0.1; // not symmetric
    CHECK_THROWS_AS(GaussianPrior(mean, asym), std::invalid_argument);

    CHECK_THROWS_AS(GaussianPrior(0.05, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(GaussianPrior(0.05, -0.1), std::invalid_argument);
}

TEST_CASE("discrete moments match hand computation") {
    Eigen::MatrixXd support(1, 2);
    support << -0.1, 0.1;
    Eigen::VectorXd weights(2);
    weights << 0.25, 0.75;
    DiscretePrior d(support, weights);
    CHECK(d.size() == 2);
    CHECK(d.mean()(0) == doctest::Approx(0.05));
    // E[B^2] - mean^2 = 0.01 - 0.0025
    CHECK(d.covariance()(0, 0) == doctest::Approx(0.0075));
}

TEST_CASE("discrete validates weights and support") {
    Eigen::MatrixXd support(1, 2);
    support << -0.1, 0.1;
    Eigen::VectorXd bad_count(3);
    bad_count << 0.2, 0.3, 0.5;
    CHECK_THROWS_AS(DiscretePrior(support, bad_count), std::invalid_argument);

    Eigen::VectorXd zero_weight(2);
    zero_weight << 0.0, 1.0;
    CHECK_THROWS_AS(DiscretePrior(support, zero_weight), std::invalid_argument);

    Eigen::VectorXd not_normalized(2);
    not_normalized << 0.5, 0.6;
    CHECK_THROWS_AS(DiscretePrior(support, not_normalized), std::invalid_argument);

    // single point cannot span the drift space
    Eigen::MatrixXd degenerate(1, 1);
    degenerate << 0.1;
    Eigen::VectorXd one(1);
    one << 1.0;
    CHECK_THROWS_AS(DiscretePrior(degenerate, one), std::invalid_argument);

    // two-asset support living on a line: covariance is singular
    Eigen::MatrixXd collinear(2, 2);
    collinear << -0.1, 0.1,
                 -0.1, 0.1;
    Eigen::VectorXd half(2);
    half << 0.5, 0.5;
    CHECK_THROWS_AS(DiscretePrior(collinear, half), std::invalid_argument);
}

TEST_CASE("dirac prior stores its point mass") {
    DiracPrior p(0.07);
    CHECK(p.mean()(0) == doctest::Approx(0.07));
}

TEST_CASE("variant helpers agree across prior kinds") {
    Prior g = GaussianPrior(0.05, 0.4);
    Prior p = DiracPrior(0.05);
    Eigen::MatrixXd support(1, 2);
    support << -0.1, 0.2;
    Eigen::VectorXd weights(2);
    weights << 0.5, 0.5;
    Prior d = DiscretePrior(support, weights);

    CHECK(prior_dimension(g) == 1);
    CHECK(prior_dimension(p) == 1);
    CHECK(prior_dimension(d) == 1);
    CHECK(prior_mean(g)(0) == doctest::Approx(0.05));
    CHECK(prior_mean(p)(0) == doctest::Approx(0.05));
    CHECK(prior_mean(d)(0) == doctest::Approx(0.05));
    CHECK(prior_covariance(g)(0, 0) == doctest::Approx(0.16));
    CHECK(prior_covariance(p)(0, 0) == doctest::Approx(0.0));
    CHECK(prior_covariance(d)(0, 0) == doctest::Approx(0.0225));
    CHECK_NOTHROW(require_dimension(g, 1));
    CHECK_THROWS_AS(require_dimension(g, 2), std::invalid_argument);
}

} // TEST_SUITE

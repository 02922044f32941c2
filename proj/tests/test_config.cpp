#include <doctest.h>

#include <bmk/errors.hpp>
#include <bmk/prior.hpp>
#include <bmk/scenario_config.hpp>

#include <sstream>
#include <string>
#include <variant>

using namespace bmk;

namespace {

ScenarioConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario_config(in);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const config_error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("full scenario parses with every section") {
    ScenarioConfig cfg = parse(
        "# sample\n"
        "[asset growth]\n"
        "b0 = 0.05\n"
        "sigma = 0.2\n"
        "prior = gaussian\n"
        "sigma0 = 0.4\n"
        "horizon = 2.0\n"
        "x0 = 1.5\n"
        "s0 = 2.0\n"
        "theta = 0.02\n"
        "[sweep]\n"
        "points = 50\n"
        "min = 0.1\n"
        "max = 0.9\n"
        "[mc]\n"
        "paths = 1234\n"
        "steps = 77\n"
        "seed = 99\n"
        "workers = 3\n"
        "stride = 11\n"
        "[output]\n"
        "dir = results\n"
        "svg = true\n"
        "write_paths = true\n");

    REQUIRE(cfg.assets.size() == 1);
    const AssetConfig& a = cfg.assets[0];
    CHECK(a.label == "growth");
    CHECK(a.b0 == doctest::Approx(0.05));
    CHECK(a.sigma == doctest::Approx(0.2));
    CHECK(a.kind == PriorKind::gaussian);
    CHECK(a.sigma0 == doctest::Approx(0.4));
    CHECK(a.horizon == doctest::Approx(2.0));
    CHECK(a.x0 == doctest::Approx(1.5));
    CHECK(a.s0 == doctest::Approx(2.0));
    CHECK(a.theta == doctest::Approx(0.02));
    CHECK(cfg.sweep.points == 50);
    CHECK(cfg.sweep.min == doctest::Approx(0.1));
    CHECK(cfg.sweep.max == doctest::Approx(0.9));
    CHECK(cfg.sweep.has_min);
    CHECK(cfg.sweep.has_max);
    CHECK(cfg.mc.paths == 1234);
    CHECK(cfg.mc.steps == 77);
    CHECK(cfg.mc.seed == 99);
    CHECK(cfg.mc.workers == 3);
    CHECK(cfg.mc.stride == 11);
    CHECK(cfg.output.dir == "results");
    CHECK(cfg.output.svg);
    CHECK(cfg.output.write_paths);

    MarketModel model = a.make_model();
    CHECK(model.horizon() == doctest::Approx(2.0));
    CHECK(model.sigma()(0, 0) == doctest::Approx(0.2));
    CHECK(model.initial_capital() == doctest::Approx(1.5));
    MarketModel overridden = a.make_model(7.0);
    CHECK(overridden.horizon() == doctest::Approx(7.0));
    Prior prior = a.make_prior();
    CHECK(std::holds_alternative<GaussianPrior>(prior));
}

TEST_CASE("defaults fill everything except the asset essentials") {
    ScenarioConfig cfg = parse(
        "[asset a]\n"
        "b0 = 0.05\n"
        "sigma = 0.2\n"
        "sigma0 = 0.4\n");
    CHECK(cfg.sweep.points == 200);
    CHECK_FALSE(cfg.sweep.has_min);
    CHECK_FALSE(cfg.sweep.has_max);
    CHECK(cfg.mc.paths == 100000);
    CHECK(cfg.mc.steps == 250);
    CHECK(cfg.mc.workers == 1);
    CHECK(cfg.output.dir == ".");
    CHECK_FALSE(cfg.output.svg);
    CHECK(cfg.assets[0].horizon == doctest::Approx(1.0));
    CHECK(cfg.assets[0].theta == doctest::Approx(0.01));
}

TEST_CASE("discrete and point priors are constructed from the section") {
    ScenarioConfig cfg = parse(
        "[asset two_point]\n"
        "b0 = 0.0\n"
        "sigma = 0.2\n"
        "prior = discrete\n"
        "support = -0.1 0.1\n"
        "weights = 0.5 0.5\n"
        "[asset fixed]\n"
        "b0 = 0.07\n"
        "sigma = 0.1\n"
        "prior = point\n");
    REQUIRE(cfg.assets.size() == 2);
    Prior d = cfg.assets[0].make_prior();
    REQUIRE(std::holds_alternative<DiscretePrior>(d));
    CHECK(std::get<DiscretePrior>(d).size() == 2);
    Prior p = cfg.assets[1].make_prior();
    REQUIRE(std::holds_alternative<DiracPrior>(p));
    CHECK(std::get<DiracPrior>(p).mean()(0) == doctest::Approx(0.07));
}

TEST_CASE("single_asset accepts exactly one asset") {
    ScenarioConfig one = parse(
        "[asset a]\nb0 = 0.05\nsigma = 0.2\nsigma0 = 0.4\n");
    CHECK(one.single_asset("sweep-sigma0").label == "a");

    ScenarioConfig two = parse(
        "[asset a]\nb0 = 0.05\nsigma = 0.2\nsigma0 = 0.4\n"
        "[asset b]\nb0 = 0.05\nsigma = 0.1\nsigma0 = 0.4\n");
    CHECK_THROWS_AS(two.single_asset("sweep-sigma0"), config_error);

    ScenarioConfig none = parse("[sweep]\npoints = 10\n");
    CHECK_THROWS_AS(none.single_asset("sweep-sigma0"), config_error);
}

TEST_CASE("errors carry the offending line number") {
    CHECK(error_of("[asset a]\nb0 = 0.05\nwat = 1\n").find("line 3") != std::string::npos);
    CHECK(error_of("[nonsense]\n").find("line 1") != std::string::npos);
    CHECK(error_of("[asset a]\nb0 = not_a_number\n").find("line 2") != std::string::npos);
    CHECK(error_of("b0 = 0.05\n").find("line 1") != std::string::npos); // key before section
    CHECK(error_of("[sweep]\npoints = 0\n").find("line 2") != std::string::npos);
    CHECK(error_of("[asset a]\nb0 = 0.05\nsigma = 0.2\n[sweep]\nmax 1.0\n")
              .find("line 5") != std::string::npos);
}

TEST_CASE("missing model essentials surface when the model is built") {
    ScenarioConfig cfg = parse("[asset a]\nb0 = 0.05\n");
    CHECK_THROWS_AS(cfg.assets[0].make_model(), config_error);
    CHECK_THROWS_AS(cfg.assets[0].make_prior(), config_error);

    // gaussian prior requires sigma0
    ScenarioConfig no_s0 = parse("[asset a]\nb0 = 0.05\nsigma = 0.2\n");
    CHECK_NOTHROW(no_s0.assets[0].make_model());
    CHECK_THROWS_AS(no_s0.assets[0].make_prior(), config_error);

    // discrete prior requires support and weights already at parse time
    CHECK_THROWS_AS(parse("[asset a]\nb0 = 0.0\nsigma = 0.2\nprior = discrete\n"),
                    config_error);
    CHECK_THROWS_AS(parse("[asset a]\nb0 = 0.0\nsigma = 0.2\nprior = discrete\n"
                          "support = -0.1 0.1\nweights = 1.0\n"),
                    config_error);
}

TEST_CASE("degenerate or misplaced prior parameters are rejected up front") {
    CHECK_THROWS_AS(parse("[asset a]\nb0 = 0.05\nsigma = 0.2\nsigma0 = 0.0\n"),
                    config_error);
    CHECK_THROWS_AS(parse("[asset a]\nb0 = 0.05\nsigma = -0.2\nsigma0 = 0.4\n"),
                    config_error);
    CHECK_THROWS_AS(
        parse("[asset a]\nb0 = 0.05\nsigma = 0.2\nprior = point\nsigma0 = 0.4\n"),
        config_error);
    CHECK_THROWS_AS(
        parse("[asset a]\nb0 = 0.05\nsigma = 0.2\nsigma0 = 0.4\nsupport = 0 1\n"),
        config_error);
    CHECK_THROWS_AS(parse("[asset a]\nb0 = 0.05\nsigma = 0.2\nsigma0 = 0.4\ntheta = 0\n"),
                    config_error);
}

TEST_CASE("loading a missing file is a config error") {
    CHECK_THROWS_AS(load_scenario_config("no_such_file.ini"), config_error);
}

} // TEST_SUITE

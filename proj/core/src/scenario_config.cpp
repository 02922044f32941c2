#include "bmk/scenario_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bmk/errors.hpp"

namespace bmk {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw config_error("config line " + std::to_string(line) + ": " + what);
}

double parse_real(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) fail(line, key + ": trailing characters in '" + value + "'");
        if (!std::isfinite(v)) fail(line, key + ": value must be finite");
        return v;
    } catch (const std::invalid_argument&) {
        fail(line, key + ": expected a real number, got '" + value + "'");
    } catch (const std::out_of_range&) {
        fail(line, key + ": value out of range: '" + value + "'");
    }
}

long parse_integer(int line, const std::string& key, const std::string& value) {
    long v = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        fail(line, key + ": expected an integer, got '" + value + "'");
    return v;
}

std::uint64_t parse_u64(int line, const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        fail(line, key + ": expected an unsigned integer, got '" + value + "'");
    return v;
}

bool parse_bool(int line, const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    fail(line, key + ": expected true/false, got '" + value + "'");
}

std::vector<double> parse_real_list(int line, const std::string& key,
                                    const std::string& value) {
    std::vector<double> out;
    std::istringstream ss(value);
    std::string tok;
    while (ss >> tok) out.push_back(parse_real(line, key, tok));
    if (out.empty()) fail(line, key + ": expected at least one value");
    return out;
}

enum class Section { none, asset, sweep, mc, output };

} // namespace

MarketModel AssetConfig::make_model() const { return make_model(horizon); }

MarketModel AssetConfig::make_model(double horizon_override) const {
    if (!has_sigma)
        throw config_error("asset '" + label + "': missing sigma");
    return MarketModel(horizon_override, sigma, x0, s0);
}

Prior AssetConfig::make_prior() const {
    if (!has_b0) throw config_error("asset '" + label + "': missing b0");
    switch (kind) {
        case PriorKind::gaussian:
            if (!has_sigma0)
                throw config_error("asset '" + label +
                                   "': gaussian prior requires sigma0");
            return GaussianPrior(b0, sigma0);
        case PriorKind::point:
            return DiracPrior(b0);
        case PriorKind::discrete: {
            Eigen::MatrixXd v(1, static_cast<Eigen::Index>(support.size()));
            Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
            for (std::size_t i = 0; i < support.size(); ++i)
                v(0, static_cast<Eigen::Index>(i)) = support[i];
            for (std::size_t i = 0; i < weights.size(); ++i)
                w(static_cast<Eigen::Index>(i)) = weights[i];
            return DiscretePrior(v, w);
        }
    }
    throw config_error("asset '" + label + "': unknown prior kind");
}

const AssetConfig& ScenarioConfig::single_asset(const char* command) const {
    if (assets.size() != 1)
        throw config_error(std::string(command) +
                           " expects exactly one [asset] section, found " +
                           std::to_string(assets.size()));
    return assets.front();
}

ScenarioConfig parse_scenario_config(std::istream& in) {
    ScenarioConfig cfg;
    Section section = Section::none;
    AssetConfig* asset = nullptr;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto pos = line.find_first_of("#;"); pos != std::string::npos)
            line = line.substr(0, pos);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            const std::string header = trim(line.substr(1, line.size() - 2));
            if (header.rfind("asset", 0) == 0 &&
                (header.size() == 5 || std::isspace(static_cast<unsigned char>(header[5])))) {
                cfg.assets.emplace_back();
                asset = &cfg.assets.back();
                asset->label = trim(header.substr(5));
                if (asset->label.empty())
                    asset->label = "asset-" + std::to_string(cfg.assets.size());
                section = Section::asset;
            } else if (header == "sweep") {
                section = Section::sweep;
            } else if (header == "mc") {
                section = Section::mc;
            } else if (header == "output") {
                section = Section::output;
            } else {
                fail(line_no, "unknown section [" + header + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, key + ": empty value");

        switch (section) {
            case Section::none:
                fail(line_no, "key '" + key + "' outside any section");
            case Section::asset:
                if (key == "b0") {
                    asset->b0 = parse_real(line_no, key, value);
                    asset->has_b0 = true;
                } else if (key == "sigma") {
                    asset->sigma = parse_real(line_no, key, value);
                    asset->has_sigma = true;
                } else if (key == "prior") {
                    if (value == "gaussian") asset->kind = PriorKind::gaussian;
                    else if (value == "discrete") asset->kind = PriorKind::discrete;
                    else if (value == "point") asset->kind = PriorKind::point;
                    else fail(line_no, "prior: expected gaussian/discrete/point, got '" + value + "'");
                } else if (key == "sigma0") {
                    asset->sigma0 = parse_real(line_no, key, value);
                    asset->has_sigma0 = true;
                } else if (key == "support") {
                    asset->support = parse_real_list(line_no, key, value);
                } else if (key == "weights") {
                    asset->weights = parse_real_list(line_no, key, value);
                } else if (key == "horizon") {
                    asset->horizon = parse_real(line_no, key, value);
                } else if (key == "x0") {
                    asset->x0 = parse_real(line_no, key, value);
                } else if (key == "s0") {
                    asset->s0 = parse_real(line_no, key, value);
                } else if (key == "theta") {
                    asset->theta = parse_real(line_no, key, value);
                } else {
                    fail(line_no, "unknown asset key '" + key + "'");
                }
                break;
            case Section::sweep:
                if (key == "points") {
                    const long v = parse_integer(line_no, key, value);
                    if (v < 2) fail(line_no, "points: need at least 2");
                    cfg.sweep.points = static_cast<int>(v);
                } else if (key == "min") {
                    cfg.sweep.min = parse_real(line_no, key, value);
                    cfg.sweep.has_min = true;
                } else if (key == "max") {
                    cfg.sweep.max = parse_real(line_no, key, value);
                    cfg.sweep.has_max = true;
                } else {
                    fail(line_no, "unknown sweep key '" + key + "'");
                }
                break;
            case Section::mc:
                if (key == "paths") {
                    const long v = parse_integer(line_no, key, value);
                    if (v < 1) fail(line_no, "paths: must be positive");
                    cfg.mc.paths = v;
                } else if (key == "steps") {
                    const long v = parse_integer(line_no, key, value);
                    if (v < 1) fail(line_no, "steps: must be positive");
                    cfg.mc.steps = static_cast<int>(v);
                } else if (key == "seed") {
                    cfg.mc.seed = parse_u64(line_no, key, value);
                } else if (key == "workers") {
                    const long v = parse_integer(line_no, key, value);
                    if (v < 1) fail(line_no, "workers: must be positive");
                    cfg.mc.workers = static_cast<int>(v);
                } else if (key == "stride") {
                    const long v = parse_integer(line_no, key, value);
                    if (v < 0) fail(line_no, "stride: must be non-negative");
                    cfg.mc.stride = static_cast<int>(v);
                } else {
                    fail(line_no, "unknown mc key '" + key + "'");
                }
                break;
            case Section::output:
                if (key == "dir") {
                    cfg.output.dir = value;
                } else if (key == "svg") {
                    cfg.output.svg = parse_bool(line_no, key, value);
                } else if (key == "write_paths") {
                    cfg.output.write_paths = parse_bool(line_no, key, value);
                } else {
                    fail(line_no, "unknown output key '" + key + "'");
                }
                break;
        }
    }

    // Axis fields (sigma, sigma0) may be absent when a sweep supplies
    // them; requiredness is enforced by make_model / make_prior instead.
    for (const auto& a : cfg.assets) {
        const std::string who = "asset '" + a.label + "': ";
        if (!a.has_b0) throw config_error(who + "missing b0");
        if (a.has_sigma && a.sigma <= 0.0)
            throw config_error(who + "sigma must be positive");
        if (a.horizon <= 0.0) throw config_error(who + "horizon must be positive");
        if (a.s0 <= 0.0) throw config_error(who + "s0 must be positive");
        if (a.theta <= 0.0) throw config_error(who + "theta must be positive");
        switch (a.kind) {
            case PriorKind::gaussian:
                if (a.has_sigma0 && a.sigma0 <= 0.0)
                    throw config_error(who + "sigma0 must be positive");
                if (!a.support.empty() || !a.weights.empty())
                    throw config_error(who + "support/weights only apply to prior = discrete");
                break;
            case PriorKind::point:
                if (a.has_sigma0 || !a.support.empty() || !a.weights.empty())
                    throw config_error(who + "point prior takes no sigma0/support/weights");
                break;
            case PriorKind::discrete:
                if (a.has_sigma0)
                    throw config_error(who + "sigma0 only applies to prior = gaussian");
                if (a.support.empty() || a.weights.empty())
                    throw config_error(who + "discrete prior requires support and weights");
                if (a.support.size() != a.weights.size())
                    throw config_error(who + "support and weights must match in length");
                break;
        }
    }
    if (cfg.sweep.has_min && cfg.sweep.has_max && !(cfg.sweep.min < cfg.sweep.max))
        throw config_error("sweep: min must be strictly below max");
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    try {
        return parse_scenario_config(in);
    } catch (const config_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

} // namespace bmk

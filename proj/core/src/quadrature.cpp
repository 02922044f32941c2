#include "bmk/quadrature.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace bmk {

namespace {

std::pair<std::vector<double>, std::vector<double>> compute_rule(int n) {
    // Newton iteration on P_n with the three-term recurrence; roots are
    // symmetric, so only the upper half is solved for.
    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return {std::move(x), std::move(w)};
}

} // namespace

const std::pair<std::vector<double>, std::vector<double>>&
gauss_legendre_rule(int order) {
    if (order < 1 || order > 128)
        throw std::invalid_argument("gauss_legendre_rule: order must be in [1, 128]");
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

} // namespace bmk

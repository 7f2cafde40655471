#include "sparsedom/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sparsedom {

namespace {

double modular_of(std::span<const double> v, double total_cells, double beta, double lambda) {
    double s = 0.0;
    for (double x : v) {
        if (x == 0.0) continue;
        const double t = x / lambda;
        s += beta == 0.0 ? t : t * std::pow(std::log(std::numbers::e + t), beta);
    }
    return s / total_cells;
}

std::vector<double> abs_samples(const GridFunction& g, const Cube& q) {
    std::vector<double> out;
    const auto v = g.values();
    for_each_cell(g.domain(), q, [&](std::size_t k) { out.push_back(std::abs(v[k])); });
    return out;
}

}  // namespace

double modular(const GridFunction& g, const Cube& q, double beta, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("modular needs lambda > 0");
    const auto v = abs_samples(g, q);
    return modular_of(v, double(q.cells()), beta, lambda);
}

LuxemburgResult luxemburg_solve(std::span<const double> abs_values, double total_cells,
                                const OrliczParams& params) {
    if (params.beta < 0.0) throw std::invalid_argument("beta must be non-negative");
    if (!(params.tolerance > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
    double sum = 0.0;
    double top = 0.0;
    for (double x : abs_values) {
        sum += x;
        top = std::max(top, x);
    }
    LuxemburgResult res;
    if (top == 0.0) return res;
    const double mean = sum / total_cells;
    if (params.beta == 0.0) {
        // The modular is linear in 1/lambda: the root is the mean itself.
        res.norm = mean;
        res.modular = modular_of(abs_values, total_cells, 0.0, mean);
        return res;
    }
    // log(e + t) >= 1 gives modular(mean) >= 1; bounding the log by its value at
    // max/mean gives modular(hi) <= 1.
    double lo = mean;
    double hi = mean * std::pow(std::log(std::numbers::e + top / mean), params.beta);
    double m_hi = modular_of(abs_values, total_cells, params.beta, hi);
    int it = 0;
    while (hi - lo > params.tolerance * hi && it < params.max_iterations) {
        const double mid = 0.5 * (lo + hi);
        const double m = modular_of(abs_values, total_cells, params.beta, mid);
        if (m <= 1.0) {
            hi = mid;
            m_hi = m;
        } else {
            lo = mid;
        }
        ++it;
    }
    res.norm = hi;
    res.modular = m_hi;
    res.iterations = it;
    return res;
}

LuxemburgResult luxemburg_solve(const GridFunction& g, const Cube& q, const OrliczParams& params) {
    const auto v = abs_samples(g, q);
    return luxemburg_solve(v, double(q.cells()), params);
}

double luxemburg_norm(const GridFunction& g, const Cube& q, double beta) {
    OrliczParams p;
    p.beta = beta;
    return luxemburg_solve(g, q, p).norm;
}

double mean_r(const GridFunction& g, const Cube& q, double r) {
    if (r < 1.0) throw std::invalid_argument("mean_r needs r >= 1");
    const auto v = abs_samples(g, q);
    double top = 0.0;
    for (double x : v) top = std::max(top, x);
    if (top == 0.0) return 0.0;
    double s = 0.0;
    if (r == 1.0) {
        for (double x : v) s += x;
        return s / double(q.cells());
    }
    for (double x : v) s += std::pow(x / top, r);
    return top * std::pow(s / double(q.cells()), 1.0 / r);
}

}  // namespace sparsedom

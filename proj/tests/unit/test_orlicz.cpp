#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "sparsedom/orlicz.hpp"

using namespace sparsedom;

namespace {

// u with u log^beta(e + u) = 1, by plain bisection.
double unit_level(double beta) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::pow(std::log(M_E + mid), beta) > 1.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

GridFunction random_function(const Domain& dom, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    GridFunction f(dom);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = g(rng);
    return f;
}

}  // namespace

TEST_CASE("beta = 0 is the average of |g|") {
    for (int dim : {1, 2}) {
        const Domain dom(dim, 1.0, dim == 1 ? 6 : 4);
        const GridFunction f = random_function(dom, 3);
        for (const Cube q : {root_cube(dom), Cube{dim, {2, dim == 1 ? 0 : 3}, 5, 0}}) {
            const double mean = integral(f.abs(), q) / (double(q.cells()) * dom.cell_volume());
            CHECK(std::abs(luxemburg_norm(f, q, 0.0) - mean) <= 1e-12 * mean);
        }
    }
}

TEST_CASE("constant functions have the closed-form norm") {
    const Domain dom(1, 1.0, 5);
    const GridFunction f(dom, 2.5);
    for (double beta : {0.5, 1.0, 2.0}) {
        const double expect = 2.5 / unit_level(beta);
        CHECK(luxemburg_norm(f, root_cube(dom), beta) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("cells of Q outside the domain count as zero") {
    const Domain dom(1, 1.0, 3);
    const GridFunction f(dom, 1.0);
    // Q has 16 cells, 8 in the domain: the average of |f| over Q is 1/2.
    const Cube q{1, {0, 0}, 16, 0};
    CHECK(luxemburg_norm(f, q, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mean_r(f, q, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("Luxemburg norm is homogeneous and solves the modular equation") {
    const Domain dom(2, 1.0, 4);
    const GridFunction f = random_function(dom, 11);
    const Cube q{2, {1, 2}, 8, 0};
    for (double beta : {0.5, 1.0, 2.0}) {
        const double base = luxemburg_norm(f, q, beta);
        REQUIRE(base > 0.0);
        CHECK(std::abs(modular(f, q, beta, base) - 1.0) <= 1e-8);
        for (double c : {1e-3, 0.37, 10.0, 1e3}) {
            GridFunction g = f;
            g *= c;
            CHECK(std::abs(luxemburg_norm(g, q, beta) - c * base) <= 1e-9 * c * base);
        }
    }
}

TEST_CASE("Luxemburg norm dominates the mean and grows with beta") {
    const Domain dom(1, 1.0, 6);
    const GridFunction f = random_function(dom, 5);
    const Cube q = root_cube(dom);
    const double n0 = luxemburg_norm(f, q, 0.0);
    const double n1 = luxemburg_norm(f, q, 1.0);
    const double n2 = luxemburg_norm(f, q, 2.0);
    CHECK(n0 < n1);
    CHECK(n1 < n2);
}

TEST_CASE("zero function and local L^r means") {
    const Domain dom(1, 1.0, 4);
    CHECK(luxemburg_norm(GridFunction(dom), root_cube(dom), 1.0) == 0.0);
    GridFunction f(dom);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = double(k) - 7.5;
    const Cube q{1, {2, 0}, 6, 0};
    double s = 0.0;
    for (int i = 2; i < 8; ++i) s += std::pow(std::abs(f[i]), 3.0);
    CHECK(mean_r(f, q, 3.0) == doctest::Approx(std::cbrt(s / 6.0)).epsilon(1e-12));
}

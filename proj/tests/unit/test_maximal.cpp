#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>

#include "sparsedom/maximal.hpp"
#include "sparsedom/orlicz.hpp"
#include "sparsedom/singular.hpp"

using namespace sparsedom;

namespace {

GridFunction random_function(const Domain& dom, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    GridFunction f(dom);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = g(rng);
    return f;
}

// sup over intervals [a, b) inside the domain containing x of the mean of |f|^s, to the 1/s.
std::vector<double> brute_maximal_1d(const GridFunction& f, double s, int max_side) {
    const int n = f.domain().n();
    std::vector<double> out(n, 0.0);
    for (int a = 0; a < n; ++a) {
        double acc = 0.0;
        for (int b = a + 1; b <= n && b - a <= max_side; ++b) {
            acc += std::pow(std::abs(f[b - 1]), s);
            const double v = std::pow(acc / (b - a), 1.0 / s);
            for (int x = a; x < b; ++x) out[x] = std::max(out[x], v);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("Hardy-Littlewood maximal function against brute force (d = 1, all intervals)") {
    const Domain dom(1, 1.0, 5);
    const GridFunction f = random_function(dom, 1);
    const auto brute = brute_maximal_1d(f, 1.0, dom.n());
    const GridFunction m = hl_maximal(f, default_policy(dom));
    for (int i = 0; i < dom.n(); ++i) CHECK(m[i] == doctest::Approx(brute[i]).epsilon(1e-12));
    const auto brute3 = brute_maximal_1d(f, 3.0, dom.n());
    const GridFunction m3 = m_beta(f, 3.0, default_policy(dom));
    for (int i = 0; i < dom.n(); ++i) CHECK(m3[i] == doctest::Approx(brute3[i]).epsilon(1e-12));
}

TEST_CASE("dyadic maximal function against brute force (d = 2)") {
    const Domain dom(2, 1.0, 3);
    const GridFunction f = random_function(dom, 2);
    MaximalPolicy pol{{CubePolicy::dyadic, 1, 0}, false};
    const GridFunction m = hl_maximal(f, pol);
    for (std::size_t k = 0; k < dom.cell_count(); ++k) {
        const Index x = dom.index(k);
        double best = 0.0;
        for (int s = 1; s <= dom.n(); s *= 2) {
            const int c0 = x[0] / s * s, c1 = x[1] / s * s;
            double acc = 0.0;
            for (int i = c0; i < c0 + s; ++i)
                for (int j = c1; j < c1 + s; ++j) acc += std::abs(f.at({i, j}));
            best = std::max(best, acc / (s * s));
        }
        CHECK(m[k] == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("maximal function basic properties") {
    const Domain dom(1, 1.0, 6);
    const GridFunction f = random_function(dom, 4);
    const GridFunction g = random_function(dom, 5);
    const auto pol = default_policy(dom);
    const GridFunction mf = hl_maximal(f, pol), mg = hl_maximal(g, pol), mfg = hl_maximal(f + g, pol);
    const GridFunction m0 = m_llogl(f, 0.0, pol), m1 = m_llogl(f, 1.0, pol);
    const GridFunction ps = power_maximal(f, 0.5, pol);
    for (std::size_t k = 0; k < f.size(); ++k) {
        CHECK(mf[k] >= std::abs(f[k]) - 1e-12);
        CHECK(mfg[k] <= mf[k] + mg[k] + 1e-12);
        CHECK(m0[k] == doctest::Approx(mf[k]).epsilon(1e-10));
        CHECK(m1[k] >= mf[k] - 1e-12);
        CHECK(ps[k] <= mf[k] + 1e-12);
    }
}

TEST_CASE("stopping cubes are maximal and disjoint") {
    const Domain dom(1, 1.0, 6);
    GridFunction f(dom, 0.1);
    for (int i = 10; i < 14; ++i) f[i] = 2.0;
    f[40] = 8.0;
    const Cube root = root_cube(dom);
    const StoppingCubes st = stopping_cubes(f, 1.0, root, 1.0);
    REQUIRE_FALSE(st.cubes.empty());
    for (std::size_t i = 0; i < st.cubes.size(); ++i) {
        CHECK(st.norms[i] > 1.0);
        CHECK(luxemburg_norm(f, st.cubes[i], 1.0) == doctest::Approx(st.norms[i]));
        const Cube parent{1, {st.cubes[i].corner[0] / (2 * st.cubes[i].side) * 2 * st.cubes[i].side, 0},
                          2 * st.cubes[i].side, 1};
        CHECK(luxemburg_norm(f, parent, 1.0) <= 1.0);
        for (std::size_t j = i + 1; j < st.cubes.size(); ++j) CHECK_FALSE(st.cubes[i].intersects(st.cubes[j]));
    }
    CHECK(st.stop_constant <= 1.0);
    GridFunction big(dom, 5.0);
    CHECK_THROWS_AS(stopping_cubes(big, 1.0, root, 1.0), std::domain_error);
}

TEST_CASE("grand maximal operator against a direct double sum") {
    const Domain dom(1, 1.0, 5);
    const GridFunction f = random_function(dom, 8);
    const KernelOmega hilbert = riesz_kernel(1);
    const ConvolutionOperator t(dom, hilbert);
    const double r = 1.5;
    const GridFunction gm = grand_maximal(t, f, r, default_policy(dom));
    const int n = dom.n(), cap = grand_maximal_side_cap(dom);
    CHECK(cap == n / 4);
    std::vector<double> brute(n, 0.0);
    for (int s = 1; s <= cap; ++s) {
        for (int a = 0; a + s <= n; ++a) {
            double acc = 0.0;
            for (int x = a; x < a + s; ++x) {
                double v = 0.0;
                for (int y = 0; y < n; ++y) {
                    if (y >= a - s && y < a + 2 * s) continue;  // y in 3Q
                    v += double(x > y ? 1 : -1) / std::abs(x - y) * f[y];
                }
                acc += std::pow(std::abs(v), r);
            }
            const double val = std::pow(acc / s, 1.0 / r);
            for (int x = a; x < a + s; ++x) brute[x] = std::max(brute[x], val);
        }
    }
    for (int i = 0; i < n; ++i) CHECK(gm[i] == doctest::Approx(brute[i]).epsilon(1e-10));
}

TEST_CASE("local grand maximal operator vanishes outside its cube") {
    const Domain dom(1, 1.0, 5);
    const GridFunction f = random_function(dom, 9);
    const ConvolutionOperator t(dom, riesz_kernel(1));
    const Cube q0{1, {8, 0}, 8, 1};
    const GridFunction lg = local_grand_maximal(t, f, 1.25, q0);
    for (int i = 0; i < dom.n(); ++i) {
        if (!q0.contains(Index{i, 0})) CHECK(lg[i] == 0.0);
    }
    CHECK(lg.sup_norm() > 0.0);
    CHECK(local_lr({1.0, 1.0, 1.0, 1.0}, Cube{1, {0, 0}, 4, 0}, 2.0) == doctest::Approx(1.0));
}

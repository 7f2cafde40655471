#include <doctest.h>

#include <stdexcept>

#include <random>
#include <set>

#include "sparsedom/grid.hpp"

using namespace sparsedom;

namespace {

GridFunction random_function(const Domain& dom, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction f(dom);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = u(rng);
    return f;
}

}  // namespace

TEST_CASE("domain indexing round-trips") {
    for (int dim : {1, 2}) {
        const Domain dom = Domain::centered(dim, 2.0, 3);
        CHECK(dom.n() == 8);
        CHECK(dom.h() == doctest::Approx(0.25));
        for (std::size_t k = 0; k < dom.cell_count(); ++k) CHECK(dom.linear(dom.index(k)) == k);
        CHECK(dom.center({0, 0})[0] == doctest::Approx(-1.0 + 0.125));
    }
}

TEST_CASE("dyadic children tile their parent") {
    const Cube q{2, {4, 8}, 4, 1};
    const auto kids = dyadic_children(q);
    REQUIRE(kids.size() == 4);
    std::int64_t cells = 0;
    for (std::size_t i = 0; i < kids.size(); ++i) {
        CHECK(q.contains(kids[i]));
        CHECK(kids[i].side == 2);
        cells += kids[i].cells();
        for (std::size_t j = i + 1; j < kids.size(); ++j) CHECK_FALSE(kids[i].intersects(kids[j]));
    }
    CHECK(cells == q.cells());
    CHECK_THROWS_AS(dyadic_children(Cube{1, {3, 0}, 1, 1}), std::invalid_argument);
}

TEST_CASE("odd dilations keep the centre") {
    const Cube q{2, {5, 7}, 2, 0};
    for (int lambda : {1, 3, 9}) {
        const Cube d = dilate(q, lambda);
        CHECK(d.side == lambda * q.side);
        CHECK(d.doubled_center() == q.doubled_center());
    }
    const Dilation e = dilate_outward(Cube{1, {4, 0}, 2, 0}, 2.0);
    CHECK(e.exact);
    CHECK(e.cube.side == 4);
    const Dilation f = dilate_outward(Cube{1, {4, 0}, 2, 0}, 1.5);
    CHECK(f.cube.contains(Cube{1, {4, 0}, 2, 0}));
    CHECK(f.cube.side >= 3);
}

TEST_CASE("dyadic level of unshifted grid cubes") {
    const Domain dom(1, 1.0, 4);
    CHECK(dyadic_level(dom, root_cube(dom)) == 0);
    CHECK(dyadic_level(dom, Cube{1, {8, 0}, 4, 1}) == 2);
    CHECK_FALSE(dyadic_level(dom, Cube{1, {2, 0}, 4, 1}).has_value());
    CHECK_FALSE(dyadic_level(dom, Cube{1, {0, 0}, 3, 0}).has_value());
}

TEST_CASE("prefix sums agree with direct summation") {
    const Domain dom(2, 1.0, 4);
    const GridFunction f = random_function(dom, 7);
    const PrefixSums ps(f);
    for (const Cube q : {Cube{2, {0, 0}, 16, 0}, Cube{2, {3, 5}, 7, 0}, Cube{2, {-4, 10}, 9, 0}, Cube{2, {15, 15}, 5, 0}}) {
        double brute = 0.0;
        for (int i = q.corner[0]; i < q.corner[0] + q.side; ++i)
            for (int j = q.corner[1]; j < q.corner[1] + q.side; ++j) brute += f.at({i, j});
        CHECK(ps.sum(q) == doctest::Approx(brute).epsilon(1e-12));
        CHECK(integral(f, q) == doctest::Approx(brute * dom.cell_volume()).epsilon(1e-12));
    }
}

TEST_CASE("norms of grid functions") {
    const Domain dom(1, 2.0, 3);
    GridFunction f(dom, 0.0);
    f[1] = 3.0;
    f[5] = -4.0;
    CHECK(f.integral() == doctest::Approx(-0.25));
    CHECK(f.sup_norm() == 4.0);
    CHECK(f.lp_norm(2.0) == doctest::Approx(std::sqrt(25.0 * 0.25)));
    CHECK(f.restricted(Cube{1, {0, 0}, 4, 0}).sup_norm() == 3.0);
    CHECK(f.without(Cube{1, {4, 0}, 4, 0}).integral() == doctest::Approx(0.75));
    CHECK(integral_abs_pow(f, Cube{1, {0, 0}, 8, 0}, 2.0) == doctest::Approx(25.0 * 0.25));
}

TEST_CASE("shifted grids cover every interior cube within a bounded factor") {
    for (int dim : {1, 2}) {
        const Domain dom(dim, 1.0, dim == 1 ? 6 : 4);
        const auto grids = shifted_grids(dom);
        CHECK(grids.size() == (dim == 1 ? 3u : 9u));
        const int n = dom.n();
        int checked = 0;
        for (int s = 1; s <= n / 4; ++s) {
            for (int c0 = 0; c0 + s <= n; ++c0) {
                for (int c1 = 0; c1 + s <= (dim == 1 ? 1 : n); c1 += (dim == 1 ? 1 : 3)) {
                    const Cube q{dim, {c0, dim == 1 ? 0 : c1}, s, 0};
                    const auto cover = covering_cube(grids, q);
                    REQUIRE(cover.has_value());
                    CHECK(cover->contains(q));
                    CHECK(cover->side <= 6 * s);
                    ++checked;
                }
            }
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("grid membership and nesting of a shifted grid") {
    const Domain dom(1, 1.0, 5);
    const auto grids = shifted_grids(dom);
    for (const auto& g : grids) {
        for (int s = 2; s <= dom.n(); s *= 2) {
            for (const Cube& q : g.cubes_of_side(s)) {
                CHECK(g.is_member(q));
                for (const Cube& k : dyadic_children(q)) CHECK(g.is_member(k));
            }
        }
    }
}

TEST_CASE("cube enumeration") {
    const Domain dom(1, 1.0, 4);
    const auto all = enumerate_cubes(dom, {CubePolicy::all_cubes, 1, 0});
    CHECK(all.size() == std::size_t(16 * 17 / 2));
    const auto dy = enumerate_cubes(dom, {CubePolicy::dyadic, 1, 0});
    CHECK(dy.size() == 31u);
    const auto capped = enumerate_cubes(dom, {CubePolicy::dyadic, 1, 4});
    CHECK(capped.size() == 16u + 8u + 4u);
    const auto sub = dyadic_subcubes(Cube{2, {0, 0}, 4, 1});
    CHECK(sub.size() == 1u + 4u + 16u);
    CHECK(sub.front().side == 4);
    CHECK(sub.back().side == 1);
}

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "sparsedom/bounds.hpp"

using namespace sparsedom;

namespace {

WeightConstants unit_constants(double p) {
    WeightConstants c;
    c.p = p;
    return c;
}

}  // namespace

TEST_CASE("closed-form constants at the unit weight") {
    CHECK(strong_bound(unit_constants(2.0)) == 4.0);
    CHECK(single_strong_bound(unit_constants(2.0)) == 2.0);
    CHECK(weak_bound(1.0, 1.0) == doctest::Approx(std::log(std::numbers::e + 1.0)));
    CHECK(sparse_form_constant(2.0, 1.0, 2.0, 0.0) == doctest::Approx(4.0 * std::sqrt(2.0)));
    CHECK(a1_weak_bound(1.0, 1.0, 2.0, 1.0) == doctest::Approx(std::pow(std::log(std::numbers::e + 1.0), 2.0)));
    CHECK(weak_sparse_constant(2.0, 2.0, 1.0, 2.0, 0.0) == doctest::Approx(1.0 + 128.0));
    CHECK(conjugate(2.0) == 2.0);
    CHECK(conjugate(1.5) == doctest::Approx(3.0));
    CHECK(std::isinf(conjugate(1.0)));
}

TEST_CASE("bound parameters reject invalid input") {
    CHECK_THROWS_AS(sparse_form_constant(2.0, 2.5, 2.0, 0.0), std::invalid_argument);  // r >= p'
    CHECK_THROWS_AS(sparse_form_constant(1.0, 1.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("parameter choices derived from the constants") {
    WeightConstants c = unit_constants(3.0);
    c.ainfty_w = 2.0;
    c.ainfty_sigma = 1.5;
    const BoundFormulas b = BoundFormulas::from(1, c);
    CHECK(b.pp == doctest::Approx(1.5));
    CHECK(b.tau_w == doctest::Approx(4096.0 * 2.0));
    CHECK(b.eps1 == doctest::Approx(2.0 / (6.0 * 4096.0 * 1.5 + 1.0)));
    CHECK(b.eps2 == doctest::Approx(0.5 / (3.0 * 4096.0 * 2.0 + 1.0)));
    CHECK(b.t == doctest::Approx(1.0 + 1.0 / 8192.0));
    CHECK(b.r == doctest::Approx((1.0 + b.t) / 2.0));
    CHECK(b.p1 == doctest::Approx(1.0 + 1.0 / std::log(std::numbers::e + 2.0)));
    CHECK(b.r < b.t);
    CHECK(b.p1 > 1.0);
}

TEST_CASE("conjugate ratio at the unit weight exceeds five") {
    const BoundFormulas b = BoundFormulas::from(1, unit_constants(2.0));
    const double x = b.p1 / (b.p1 - 1.0);
    const double inner = b.t * (x / b.r - 1.0) / (x - 1.0);
    const double expect = (inner / (inner - 1.0)) / (b.t / (b.t - 1.0));
    CHECK(a1_conjugate_ratio(b) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(a1_conjugate_ratio(b) > 5.0);
}

TEST_CASE("comparison inequalities between the strong bounds") {
    for (double aw : {1.0, 1.3, 4.0}) {
        for (double as : {1.0, 2.0}) {
            WeightConstants c = unit_constants(2.0);
            c.ap = std::max(aw, as);
            c.ainfty_w = aw;
            c.ainfty_sigma = as;
            const BoundComparison rc = compare_bounds(c);
            CHECK(rc.max_ok);
            CHECK(rc.product_ok);
            CHECK(rc.strong == doctest::Approx(strong_bound(c)));
        }
    }
}

TEST_CASE("level sets, modulars and ratios") {
    const Domain dom(1, 1.0, 2);
    const GridFunction u(dom, std::vector<double>{1.0, -2.0, 3.0, 0.0});
    const GridFunction w(dom, std::vector<double>{1.0, 2.0, 4.0, 8.0});
    CHECK(weighted_level_set(u, w, 2.0) == doctest::Approx(4.0 * 0.25));
    CHECK(weighted_level_set(u, w, 0.5) == doctest::Approx(7.0 * 0.25));
    const GridFunction f(dom, std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(llogl_modular(f, w, 1.0, 1.0) == doctest::Approx(0.25 * std::log(std::numbers::e + 1.0)));
    CHECK(llogl_modular(f, w, 0.0, 0.5) == doctest::Approx(0.5));
    const GridFunction zero(dom);
    CHECK(weak_type_modular_ratio(zero, zero, w, 1.0, {0.1, 1.0}, 1.0).ratio == 0.0);
    CHECK(strong_type_ratio(zero, f, w, 2.0, 1.0) == 0.0);
    CHECK(strong_type_ratio(u, u, w, 2.0, 2.0) == doctest::Approx(0.5));
    CHECK(pairing(u, w) == doctest::Approx((1.0 - 4.0 + 12.0) * 0.25));
    const auto g = log_grid(1e-3, 1.0, 4);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == doctest::Approx(1e-3));
    CHECK(g[1] == doctest::Approx(1e-2));
    CHECK(g.back() == doctest::Approx(1.0));
}

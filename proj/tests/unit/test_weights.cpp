#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>

#include "sparsedom/weights.hpp"

using namespace sparsedom;

namespace {

double avg(const GridFunction& w, int a, int b, double power = 1.0) {
    double s = 0.0;
    for (int i = a; i < b; ++i) s += std::pow(w[i], power);
    return s / (b - a);
}

}  // namespace

TEST_CASE("weights must be positive") {
    const Domain dom(1, 1.0, 3);
    GridFunction w(dom, 1.0);
    w[2] = 0.0;
    CHECK_THROWS_AS(Weight{w}, std::invalid_argument);
    w[2] = -1.0;
    CHECK_THROWS_AS(Weight{w}, std::invalid_argument);
}

TEST_CASE("unit weight has all constants equal to one") {
    for (int dim : {1, 2}) {
        const Domain dom(dim, 1.0, dim == 1 ? 6 : 4);
        const Weight w(GridFunction(dom, 1.0));
        const auto c = weight_constants(w, 2.0, default_collection(dom));
        CHECK(c.ap == doctest::Approx(1.0));
        CHECK(c.a1 == doctest::Approx(1.0));
        CHECK(c.ainfty_w == doctest::Approx(1.0));
        CHECK(c.ainfty_sigma == doctest::Approx(1.0));
    }
}

TEST_CASE("A_p, A_1 and A_infinity of a power weight against brute force") {
    const Domain dom = Domain::centered(1, 1.0, 5);
    const int n = dom.n();
    const Weight w = power_weight(dom, -0.5);
    const GridFunction& v = w.values();
    const double p = 3.0;
    double ap = 0.0;
    std::vector<double> mw(n, 0.0);
    double ainf = 0.0;
    std::vector<double> prefix(n + 1, 0.0);
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            const double wq = avg(v, a, b);
            ap = std::max(ap, wq * std::pow(avg(v, a, b, -1.0 / (p - 1.0)), p - 1.0));
            for (int x = a; x < b; ++x) mw[x] = std::max(mw[x], wq);
            // M(w chi_Q) on Q over intervals: averages of w over J ∩ Q, divided by |J|.
            double integral_m = 0.0;
            for (int x = a; x < b; ++x) {
                double best = 0.0;
                for (int c = 0; c <= x; ++c) {
                    for (int d = x + 1; d <= n; ++d) {
                        const int lo = std::max(c, a), hi = std::min(d, b);
                        best = std::max(best, (prefix[hi] - prefix[lo]) / double(d - c));
                    }
                }
                integral_m += best;
            }
            ainf = std::max(ainf, integral_m / (wq * (b - a)));
        }
    }
    double a1 = 0.0;
    for (int x = 0; x < n; ++x) a1 = std::max(a1, mw[x] / v[x]);
    CHECK(ap_constant(w, p) == doctest::Approx(ap).epsilon(1e-10));
    CHECK(a1_constant(w) == doctest::Approx(a1).epsilon(1e-10));
    CHECK(ainfty_constant(w) == doctest::Approx(ainf).epsilon(1e-10));
}

TEST_CASE("A_p duality") {
    const Domain dom = Domain::centered(1, 1.0, 6);
    for (double a : {-0.5, 0.5, 1.0}) {
        const Weight w = power_weight(dom, a);
        for (double p : {1.5, 2.0, 3.0}) {
            const double pp = p / (p - 1.0);
            const double lhs = ap_constant(w.dual(p), pp);
            const double rhs = std::pow(ap_constant(w, p), 1.0 / (p - 1.0));
            CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
        }
    }
}

TEST_CASE("power weight constants grow with |a|") {
    const Domain dom = Domain::centered(1, 1.0, 6);
    double prev = 0.0;
    for (double a : {0.0, 0.25, 0.5, 0.75}) {
        const double c = ap_constant(power_weight(dom, a), 2.0);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }
    CHECK(power_weight(dom, 0.0).values().sup_norm() == doctest::Approx(1.0));
}

TEST_CASE("reverse Hoelder at the derived exponent") {
    const Domain dom = Domain::centered(1, 1.0, 6);
    for (double a : {-0.5, 0.0, 0.5, 1.0}) {
        const Weight w = power_weight(dom, a);
        const double delta = reverse_holder_exponent(1, ainfty_constant(w));
        CHECK(delta > 1.0);
        for (const Cube& q : dyadic_subcubes(root_cube(dom))) {
            const auto rep = reverse_holder_check(w, q, delta);
            CHECK(rep.pass);
            CHECK(rep.lhs <= rep.rhs);
        }
    }
    CHECK(reverse_holder_exponent(2, 1.0) == doctest::Approx(1.0 + 1.0 / 8192.0));
}

TEST_CASE("Rubio de Francia algorithm") {
    const Domain dom = Domain::centered(1, 1.0, 6);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GridFunction h(dom);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = u(rng);
    for (double a : {-0.5, 0.0, 0.5}) {
        const Weight v = power_weight(dom, a);
        const double p = 2.0;
        const RubioResult res = rubio_de_francia(h, v, p);
        for (std::size_t k = 0; k < h.size(); ++k) CHECK(res.r[k] >= h[k]);
        const double ratio = res.r.lp_norm(p, v.values()) / h.lp_norm(p, v.values());
        CHECK(ratio <= 2.0 * (1.0 + 1e-6));
        CHECK(res.s_norm >= res.power_estimate);
    }
    GridFunction neg(dom, 1.0);
    neg[0] = -1.0;
    CHECK_THROWS_AS(rubio_de_francia(neg, power_weight(dom, 0.0), 2.0), std::invalid_argument);
}

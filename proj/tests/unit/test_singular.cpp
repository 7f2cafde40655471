#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "sparsedom/ensemble.hpp"
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

double dot(const GridFunction& a, const GridFunction& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s * a.domain().cell_volume();
}

}  // namespace

TEST_CASE("kernels are mean zero and bounded") {
    for (int dim : {1, 2}) {
        for (KernelKind kind : {KernelKind::riesz, KernelKind::odd_harmonic, KernelKind::random_mean_zero}) {
            KernelSpec spec;
            spec.kind = kind;
            spec.harmonic = 3;
            spec.seed = 17;
            const KernelOmega om = make_kernel(dim, spec);
            CHECK(std::abs(om.sphere_mean()) <= 1e-12);
            if (kind == KernelKind::random_mean_zero) CHECK(om.sup_norm() == doctest::Approx(1.0));
        }
    }
    const KernelOmega r2 = riesz_kernel(2, 1);
    CHECK(r2(0.0, 2.0) == doctest::Approx(1.0));
    CHECK(r2(3.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r2(1.0, 1.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-2));
    const KernelOmega h = riesz_kernel(1);
    CHECK(h(2.0) == 1.0);
    CHECK(h(-0.5) == -1.0);
}

TEST_CASE("Hilbert quadrature against a direct double sum") {
    const Domain dom(1, 2.0, 5);
    const GridFunction f = random_function(dom, 1);
    const GridFunction tf = t_omega(riesz_kernel(1), f);
    const int n = dom.n();
    for (int x = 0; x < n; ++x) {
        double v = 0.0;
        for (int y = 0; y < n; ++y)
            if (y != x) v += (x > y ? 1.0 : -1.0) / std::abs(x - y) * f[y];
        CHECK(tf[x] == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("Riesz quadrature against a direct double sum (d = 2)") {
    const Domain dom(2, 1.0, 3);
    const GridFunction f = random_function(dom, 2);
    const KernelOmega om = riesz_kernel(2, 0);
    const GridFunction tf = t_omega(om, f);
    const double h = dom.h();
    for (std::size_t k = 0; k < dom.cell_count(); ++k) {
        const Index x = dom.index(k);
        double v = 0.0;
        for (std::size_t l = 0; l < dom.cell_count(); ++l) {
            if (l == k) continue;
            const Index y = dom.index(l);
            const double d0 = (x[0] - y[0]) * h, d1 = (x[1] - y[1]) * h;
            const double rr = std::hypot(d0, d1);
            v += h * h * om(d0, d1) / (rr * rr) * f[l];
            CHECK(std::abs(om(d0, d1) - d0 / rr) <= 1e-3);
        }
        CHECK(tf[k] == doctest::Approx(v).epsilon(1e-10));
    }
}

TEST_CASE("odd kernels give antisymmetric operators") {
    for (int dim : {1, 2}) {
        const Domain dom(dim, 1.0, dim == 1 ? 7 : 4);
        const GridFunction f = random_function(dom, 3), g = random_function(dom, 4);
        KernelSpec spec;
        spec.kind = KernelKind::odd_harmonic;
        spec.harmonic = 3;
        for (const KernelOmega& om : {riesz_kernel(dim), make_kernel(dim, spec)}) {
            const double a = dot(t_omega(om, f), g), b = dot(f, t_omega(om, g));
            CHECK(std::abs(a + b) <= 1e-10 * (std::abs(a) + 1.0));
        }
    }
}

TEST_CASE("restricted application and composition are consistent") {
    const Domain dom(2, 1.0, 4);
    const GridFunction f = random_function(dom, 5);
    KernelSpec spec;
    spec.kind = KernelKind::random_mean_zero;
    spec.seed = 9;
    const KernelOmega om = make_kernel(2, spec);
    const ConvolutionOperator t(dom, om);
    const GridFunction tf = t.apply(f);
    const Cube q{2, {3, 6}, 5, 0};
    const auto part = t.apply_on(f, q);
    const auto slice = gather(tf, q);
    REQUIRE(part.size() == slice.size());
    for (std::size_t i = 0; i < part.size(); ++i) CHECK(part[i] == doctest::Approx(slice[i]).epsilon(1e-12));
    const GridFunction c = compose(riesz_kernel(2, 1), om, f);
    const GridFunction c2 = t_omega(riesz_kernel(2, 1), tf);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(c[k] == doctest::Approx(c2[k]).epsilon(1e-12));
}

TEST_CASE("Hilbert quadrature reproduces a known transform") {
    // p.v. int 1/(1+y^2) / (x - y) dy = pi x / (1 + x^2).
    const Domain dom = Domain::centered(1, 64.0, 11);
    GridFunction f(dom);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double x = dom.center(dom.index(k))[0];
        f[k] = 1.0 / (1.0 + x * x);
    }
    const GridFunction tf = t_omega(riesz_kernel(1), f);
    const GridFunction sp = spectral_oracle(riesz_kernel(1), f);
    CHECK(riesz_normalization(1) == doctest::Approx(M_PI));
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double x = dom.center(dom.index(k))[0];
        if (std::abs(x) > 4.0) continue;
        const double exact = M_PI * x / (1.0 + x * x);
        CHECK(std::abs(tf[k] - exact) <= 0.03);
        CHECK(std::abs(sp[k] - exact) <= 0.03);
    }
}

TEST_CASE("quadrature approaches the spectral oracle as N grows") {
    double prev = 1e300;
    for (int m : {6, 7, 8}) {
        const Domain dom = Domain::centered(1, 1.0, m);
        const GridFunction f = centered_bump(dom, 0.125);
        const GridFunction q = t_omega(riesz_kernel(1), f);
        const GridFunction s = spectral_oracle(riesz_kernel(1), f);
        const double err = (q - s).lp_norm(2.0) / s.lp_norm(2.0);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev <= 0.10);
    KernelSpec spec;
    spec.kind = KernelKind::random_mean_zero;
    const Domain dom(1, 1.0, 4);
    CHECK_THROWS_AS(spectral_oracle(make_kernel(1, spec), GridFunction(dom)), std::invalid_argument);
}

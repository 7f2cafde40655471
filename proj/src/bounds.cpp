#include "sparsedom/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sparsedom {

double conjugate(double x) {
    if (x == 1.0) return std::numeric_limits<double>::infinity();
    return x / (x - 1.0);
}

BoundFormulas BoundFormulas::from(int dim, const WeightConstants& c) {
    BoundFormulas b;
    b.dim = dim;
    b.p = c.p;
    b.pp = conjugate(c.p);
    b.ap = c.ap;
    b.a1 = c.a1;
    b.ainfty_w = c.ainfty_w;
    b.ainfty_sigma = c.ainfty_sigma;
    const double scale = std::ldexp(1.0, 11 + dim);
    b.tau_w = scale * c.ainfty_w;
    b.tau_sigma = scale * c.ainfty_sigma;
    b.eps1 = (b.p - 1.0) / (2.0 * b.p * b.tau_sigma + 1.0);
    b.eps2 = (b.pp - 1.0) / (2.0 * b.pp * b.tau_w + 1.0);
    b.t = 1.0 + 1.0 / (scale * c.ainfty_w);
    b.r = (1.0 + b.t) / 2.0;
    b.p1 = 1.0 + 1.0 / std::log(std::numbers::e + c.ainfty_w);
    return b;
}

double mixed_factor(const WeightConstants& c) {
    const double pp = conjugate(c.p);
    return std::pow(c.ap, 1.0 / c.p) * (std::pow(c.ainfty_w, 1.0 / pp) + std::pow(c.ainfty_sigma, 1.0 / c.p));
}

double strong_bound(const WeightConstants& c) {
    return mixed_factor(c) * (c.ainfty_sigma + c.ainfty_w) * std::min(c.ainfty_sigma, c.ainfty_w);
}

double single_strong_bound(const WeightConstants& c) { return mixed_factor(c) * std::min(c.ainfty_sigma, c.ainfty_w); }

double weak_bound(double a1, double ainfty) {
    return a1 * ainfty * ainfty * std::log(std::numbers::e + ainfty);
}

double sparse_form_constant(double p, double r, double t, double beta) {
    if (!(r >= 1.0) || !(t > 1.0) || beta < 0.0) throw std::invalid_argument("sparse form constant: bad parameters");
    if (!(p > 1.0) || !(p < conjugate(r))) throw std::invalid_argument("sparse form constant: p must lie in (1, r')");
    const double pp = conjugate(p);
    const double inner = t * (pp / r - 1.0) / (pp - 1.0);
    if (!(inner > 1.0)) throw std::invalid_argument("sparse form constant: t (p'/r - 1)/(p' - 1) must exceed 1");
    return std::pow(pp, 1.0 + beta) * conjugate(pp / r) * std::pow(conjugate(inner), 1.0 / pp);
}

double a1_weak_bound(double ainfty, double a1, double alpha, double beta) {
    return std::pow(ainfty, alpha) * std::pow(std::log(std::numbers::e + ainfty), 1.0 + beta) * a1;
}

double weak_sparse_constant(double d, double p1, double r, double t, double beta) {
    return 1.0 + std::pow(d * sparse_form_constant(p1, r, t, beta), p1);
}

double a1_conjugate_ratio(const BoundFormulas& b) {
    const double p1p = conjugate(b.p1);
    const double inner = b.t * (p1p / b.r - 1.0) / (p1p - 1.0);
    return conjugate(inner) / conjugate(b.t);
}

BoundComparison compare_bounds(const WeightConstants& c) {
    BoundComparison rc;
    rc.max_ainfty = std::max(c.ainfty_w, c.ainfty_sigma);
    rc.mixed = mixed_factor(c);
    rc.max_ok = rc.max_ainfty <= rc.mixed;
    rc.strong = strong_bound(c);
    const double e13 = single_strong_bound(c);
    rc.single_squared = e13 * e13;
    rc.product_ok = rc.strong <= rc.single_squared;
    return rc;
}

double weighted_level_set(const GridFunction& u, const GridFunction& w, double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (std::abs(u[k]) > lambda) s += w[k];
    }
    return s * u.domain().cell_volume();
}

double llogl_modular(const GridFunction& f, const GridFunction& w, double beta, double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double x = std::abs(f[k]) / lambda;
        if (x == 0.0) continue;
        s += x * (beta == 0.0 ? 1.0 : std::pow(std::log(std::numbers::e + x), beta)) * w[k];
    }
    return s * f.domain().cell_volume();
}

WeakTypeResult weak_type_modular_ratio(const GridFunction& uf, const GridFunction& f, const GridFunction& w,
                                       double beta, const std::vector<double>& lambdas, double bound) {
    WeakTypeResult res;
    if (f.is_zero()) return res;
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) throw std::invalid_argument("lambda grid must be positive");
        const double den = bound * llogl_modular(f, w, beta, lambda);
        const double ratio = weighted_level_set(uf, w, lambda) / den;
        if (ratio > res.ratio) {
            res.ratio = ratio;
            res.argmax_lambda = lambda;
        }
    }
    return res;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> out;
    if (points == 1) return {lo};
    for (int i = 0; i < points; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / double(points - 1)));
    return out;
}

double strong_type_ratio(const GridFunction& t1t2f, const GridFunction& f, const GridFunction& w, double p,
                         double bound) {
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    if (f.is_zero()) return 0.0;
    return t1t2f.lp_norm(p, w) / (bound * f.lp_norm(p, w));
}

double pairing(const GridFunction& u, const GridFunction& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
    return s * u.domain().cell_volume();
}

DominationRatios sparse_domination_ratio(const CompositionSplit& split, const GridFunction& f, const GridFunction& g,
                                         double r) {
    if (!(r > 1.0 && r <= 1.5)) throw std::invalid_argument("r outside (1, 3/2]");
    DominationRatios d;
    const double rp = conjugate(r);
    const auto& family = split.decomposition.family.cubes;
    d.pairing1 = std::abs(pairing(split.j1, g));
    d.pairing2 = std::abs(pairing(split.j2, g));
    d.form1 = bilinear_form_orlicz(family, f, g, 1.0, r);
    d.form2 = bilinear_form_lr(family, f, g, 1.0, r);
    auto ratio = [&](double num, double form, double scale) {
        if (form == 0.0) {
            if (num != 0.0) d.anomaly = true;
            return 0.0;
        }
        return num / (scale * form);
    };
    d.ratio1 = ratio(d.pairing1, d.form1, rp);
    d.ratio2 = ratio(d.pairing2, d.form2, rp * rp);
    return d;
}

}  // namespace sparsedom

#include "sparsedom/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sparsedom/parallel.hpp"

namespace sparsedom {

namespace {

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

// M(w chi_Q) on the cells of Q for d = 1 with every interval of the domain
// available. The best interval through x can be taken inside Q, so the
// supremum is over sub-intervals [a, b) of Q: suffix maxima in b for each a,
// then a running maximum in a.
double wilson_interval(const PrefixSums& ps, int lo, int hi) {
    const int s = hi - lo;
    std::vector<double> best(std::size_t(s), 0.0);
    std::vector<double> suffix(std::size_t(s) + 1);
    for (int a = lo; a < hi; ++a) {
        // suffix[x - lo] = max over b > x of avg(a, b)
        suffix[std::size_t(s)] = 0.0;
        for (int b = hi; b > a; --b) {
            const double avg = ps.sum(CellRange{{a, 0}, {b, 1}}) / double(b - a);
            suffix[std::size_t(b - 1 - lo)] = std::max(suffix[std::size_t(b - lo)], avg);
        }
        for (int x = a; x < hi; ++x) best[std::size_t(x - lo)] = std::max(best[std::size_t(x - lo)], suffix[std::size_t(x - lo)]);
    }
    double total = 0.0;
    for (double v : best) total += v;
    return total;
}

CellRange intersect(const CellRange& a, const CellRange& b) {
    CellRange r;
    for (int k = 0; k < 2; ++k) {
        r.lo[k] = std::max(a.lo[k], b.lo[k]);
        r.hi[k] = std::min(a.hi[k], b.hi[k]);
    }
    return r;
}

// Calls fn(P) for every cube of the collection that meets the clipped range r.
template <class Fn>
void for_each_meeting(const Domain& dom, const CubeCollection& coll, const std::vector<DyadicGrid>& grids,
                      const CellRange& r, Fn&& fn) {
    const int n = dom.n();
    const int max_side = coll.max_side > 0 ? std::min(coll.max_side, n) : n;
    const int d = dom.dim();
    if (coll.policy == CubePolicy::all_cubes) {
        for (int t = 1; t <= max_side; ++t) {
            const int a0 = std::max(0, r.lo[0] - t + 1), a1 = std::min(n - t, r.hi[0] - 1);
            if (d == 1) {
                for (int a = a0; a <= a1; ++a) fn(Cube{1, {a, 0}, t, 0});
                continue;
            }
            const int b0 = std::max(0, r.lo[1] - t + 1), b1 = std::min(n - t, r.hi[1] - 1);
            for (int a = a0; a <= a1; ++a)
                for (int b = b0; b <= b1; ++b) fn(Cube{2, {a, b}, t, 0});
        }
        return;
    }
    for (const auto& g : grids) {
        if (coll.policy == CubePolicy::dyadic && g.id() != coll.grid) continue;
        for (int t = 1; t <= max_side; t *= 2) {
            const Cube first = g.cube_containing(r.lo, t);
            const Cube last = g.cube_containing({r.hi[0] - 1, d == 1 ? 0 : r.hi[1] - 1}, t);
            for (int a = first.corner[0]; a <= last.corner[0]; a += t) {
                if (d == 1) {
                    fn(Cube{1, {a, 0}, t, g.id()});
                    continue;
                }
                for (int b = first.corner[1]; b <= last.corner[1]; b += t) fn(Cube{2, {a, b}, t, g.id()});
            }
        }
    }
}

}  // namespace

Weight::Weight(GridFunction w) : w_(std::move(w)) {
    for (double v : w_.values()) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("non-positive weight");
    }
}

double Weight::min() const {
    const auto v = w_.values();
    return *std::min_element(v.begin(), v.end());
}

Weight Weight::dual(double p) const {
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    return power(-1.0 / (p - 1.0));
}

Weight Weight::power(double s) const {
    GridFunction out = w_;
    for (double& v : out.values()) v = std::pow(v, s);
    return Weight(std::move(out));
}

MaximalPolicy weight_policy(const Domain& dom) { return MaximalPolicy{default_collection(dom), true}; }
MaximalPolicy weight_policy(const CubeCollection& cubes) { return MaximalPolicy{cubes, true}; }

double ap_constant(const Weight& w, double p, const CubeCollection& cubes) {
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    const Domain& dom = w.domain();
    const PrefixSums sw(w.values());
    const PrefixSums ss(w.dual(p).values());
    const auto qs = enumerate_cubes(dom, cubes);
    std::vector<double> vals(qs.size(), 0.0);
    parallel_for(qs.size(), [&](std::size_t i) {
        const CellRange r = clip(dom, qs[i]);
        const double m = double(r.cells());
        if (m == 0.0) return;
        vals[i] = (sw.sum(r) / m) * std::pow(ss.sum(r) / m, p - 1.0);
    });
    return max_of(vals);
}

double ap_constant(const Weight& w, double p) { return ap_constant(w, p, default_collection(w.domain())); }

double a1_constant(const Weight& w, const CubeCollection& cubes) {
    const GridFunction mw = hl_maximal(w.values(), weight_policy(cubes));
    double best = 0.0;
    for (std::size_t k = 0; k < mw.size(); ++k) best = std::max(best, mw[k] / w.values()[k]);
    return best;
}

double a1_constant(const Weight& w) { return a1_constant(w, default_collection(w.domain())); }

double ainfty_constant(const Weight& w, const CubeCollection& cubes) {
    const Domain& dom = w.domain();
    const PrefixSums sw(w.values());
    const auto qs = enumerate_cubes(dom, cubes);
    std::vector<double> vals(qs.size(), 0.0);
    if (dom.dim() == 1 && cubes.policy == CubePolicy::all_cubes && cubes.max_side == 0) {
        parallel_for(qs.size(), [&](std::size_t i) {
            const CellRange r = clip(dom, qs[i]);
            vals[i] = wilson_interval(sw, r.lo[0], r.hi[0]) / sw.sum(r);
        });
        return max_of(vals);
    }
    const auto grids = shifted_grids(dom);
    parallel_for(qs.size(), [&](std::size_t i) {
        const CellRange rq = clip(dom, qs[i]);
        if (rq.empty()) return;
        const int w1 = rq.hi[1] - rq.lo[1];
        std::vector<double> best(std::size_t(rq.cells()), 0.0);
        for_each_meeting(dom, cubes, grids, rq, [&](const Cube& pc) {
            const CellRange rp = clip(dom, pc);
            const CellRange both = intersect(rp, rq);
            if (both.empty()) return;
            const double v = sw.sum(both) / double(rp.cells());
            for (int a = both.lo[0]; a < both.hi[0]; ++a)
                for (int b = both.lo[1]; b < both.hi[1]; ++b) {
                    double& slot = best[std::size_t(a - rq.lo[0]) * std::size_t(w1) + std::size_t(b - rq.lo[1])];
                    slot = std::max(slot, v);
                }
        });
        double total = 0.0;
        for (double v : best) total += v;
        vals[i] = total / sw.sum(rq);
    });
    return max_of(vals);
}

double ainfty_constant(const Weight& w) { return ainfty_constant(w, default_collection(w.domain())); }

WeightConstants weight_constants(const Weight& w, double p, const CubeCollection& cubes) {
    WeightConstants c;
    c.p = p;
    c.ap = ap_constant(w, p, cubes);
    c.a1 = a1_constant(w, cubes);
    c.ainfty_w = ainfty_constant(w, cubes);
    c.ainfty_sigma = ainfty_constant(w.dual(p), cubes);
    c.policy = cubes.describe();
    return c;
}

double reverse_holder_exponent(int dim, double ainfty) {
    return 1.0 + 1.0 / (std::ldexp(1.0, 11 + dim) * ainfty);
}

ReverseHolderReport reverse_holder_check(const Weight& w, const Cube& q, double delta) {
    const Domain& dom = w.domain();
    ReverseHolderReport rep;
    rep.delta = delta;
    const double m = double(clip(dom, q).cells());
    if (m == 0.0) return rep;
    const auto v = w.values().values();
    // Scale by the local maximum so w^delta cannot overflow.
    double top = 0.0, s1 = 0.0;
    for_each_cell(dom, q, [&](std::size_t k) { top = std::max(top, v[k]); });
    double sd = 0.0;
    for_each_cell(dom, q, [&](std::size_t k) {
        s1 += v[k];
        sd += std::pow(v[k] / top, delta);
    });
    rep.lhs = top * std::pow(sd / m, 1.0 / delta);
    rep.rhs = 2.0 * s1 / m;
    rep.pass = rep.lhs <= rep.rhs;
    return rep;
}

ReverseHolderReport reverse_holder_check(const Weight& w, const Cube& q) {
    return reverse_holder_check(w, q, reverse_holder_exponent(w.domain().dim(), ainfty_constant(w)));
}

GridFunction rubio_step(const GridFunction& h, const Weight& v, double p, const MaximalPolicy& policy) {
    GridFunction g = h;
    const auto vv = v.values().values();
    for (std::size_t k = 0; k < g.size(); ++k) g[k] *= std::pow(vv[k], 1.0 / p);
    GridFunction out = hl_maximal(g, policy);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::pow(vv[k], -1.0 / p);
    return out;
}

double rubio_operator_norm(const Weight& v, double p, const MaximalPolicy& policy, int iterations,
                           std::uint64_t seed) {
    const Domain& dom = v.domain();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    GridFunction h(dom);
    for (double& x : h.values()) x = u(rng);
    const GridFunction& vw = v.values();
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double nh = h.lp_norm(p, vw);
        GridFunction sh = rubio_step(h, v, p, policy);
        const double ns = sh.lp_norm(p, vw);
        estimate = std::max(estimate, ns / nh);
        h = (1.0 / ns) * std::move(sh);
    }
    return estimate;
}

RubioResult rubio_de_francia(const GridFunction& h, const Weight& v, double p, const RubioParams& params,
                             const MaximalPolicy& policy) {
    for (double x : h.values()) {
        if (x < 0.0) throw std::invalid_argument("Rubio de Francia input must be non-negative");
    }
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    RubioResult res;
    res.power_estimate = rubio_operator_norm(v, p, policy, params.power_iterations, params.seed);
    res.s_norm = res.power_estimate * params.safety;
    const GridFunction& vw = v.values();
    for (;;) {
        res.r = h;
        GridFunction term = h;  // S^k h / ||S||^k
        double prev = h.lp_norm(p, vw);
        double coef = 1.0;
        bool raised = false;
        for (int k = 1; k <= params.terms && prev > 0.0; ++k) {
            GridFunction next = rubio_step(term, v, p, policy);
            const double nn = next.lp_norm(p, vw);
            if (nn / prev > res.s_norm) {
                res.s_norm = (nn / prev) * params.safety;
                ++res.restarts;
                raised = true;
                break;
            }
            next *= 1.0 / res.s_norm;
            coef *= 0.5;
            term = std::move(next);
            prev = nn / res.s_norm;
            res.r += coef * term;
        }
        if (!raised) break;
    }
    return res;
}

RubioResult rubio_de_francia(const GridFunction& h, const Weight& v, double p, const RubioParams& params) {
    return rubio_de_francia(h, v, p, params, default_policy(v.domain()));
}

Weight power_weight(const Domain& dom, double a, std::array<double, 2> center) {
    GridFunction w(dom);
    const double floor_r = dom.h() / 2.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const auto x = dom.center(dom.index(k));
        const double r = dom.dim() == 1 ? std::abs(x[0] - center[0]) : std::hypot(x[0] - center[0], x[1] - center[1]);
        w[k] = a == 0.0 ? 1.0 : std::pow(std::max(r, floor_r), a);
    }
    return Weight(std::move(w));
}

}  // namespace sparsedom

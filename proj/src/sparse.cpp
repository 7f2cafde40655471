#include "sparsedom/sparse.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sparsedom/maximal.hpp"
#include "sparsedom/orlicz.hpp"

namespace sparsedom {

namespace {

// Bitmap over the bounding box of a set of lattice cubes.
class LatticeBox {
public:
    LatticeBox(int dim, const std::vector<Cube>& cubes) : dim_(dim) {
        lo_ = {INT_MAX, INT_MAX};
        Index hi{INT_MIN, INT_MIN};
        for (const auto& q : cubes) {
            for (int a = 0; a < dim; ++a) {
                lo_[a] = std::min(lo_[a], q.corner[a]);
                hi[a] = std::max(hi[a], q.corner[a] + q.side);
            }
        }
        if (cubes.empty()) lo_ = hi = {0, 0};
        ext_ = {hi[0] - lo_[0], dim == 1 ? 1 : hi[1] - lo_[1]};
        if (dim == 1) lo_[1] = 0;
    }
    std::size_t size() const { return std::size_t(ext_[0]) * std::size_t(ext_[1]); }
    bool inside(const Index& c) const {
        return c[0] >= lo_[0] && c[0] < lo_[0] + ext_[0] && (dim_ == 1 || (c[1] >= lo_[1] && c[1] < lo_[1] + ext_[1]));
    }
    std::size_t at(const Index& c) const {
        return std::size_t(c[0] - lo_[0]) * std::size_t(ext_[1]) + std::size_t(dim_ == 1 ? 0 : c[1] - lo_[1]);
    }

    Index cell(std::size_t k) const {
        return {lo_[0] + int(k / std::size_t(ext_[1])), dim_ == 1 ? 0 : lo_[1] + int(k % std::size_t(ext_[1]))};
    }

    // fn(Index) over the cells of q, row-major.
    template <class Fn>
    void cells(const Cube& q, Fn&& fn) const {
        if (dim_ == 1) {
            for (int i = q.corner[0]; i < q.corner[0] + q.side; ++i) fn(Index{i, 0});
            return;
        }
        for (int i = q.corner[0]; i < q.corner[0] + q.side; ++i)
            for (int j = q.corner[1]; j < q.corner[1] + q.side; ++j) fn(Index{i, j});
    }

private:
    int dim_;
    Index lo_;
    Index ext_;
};

// Appends a cell to a span list, extending the last run when contiguous along the last axis.
void push_cell(std::vector<Span>& spans, int dim, const Index& c) {
    const int ax = dim - 1;
    if (!spans.empty()) {
        Span& s = spans.back();
        Index next = s.start;
        next[ax] += s.length;
        if (next[0] == c[0] && (dim == 1 || next[1] == c[1])) {
            ++s.length;
            return;
        }
    }
    spans.push_back(Span{c, 1});
}

template <class Fn>
void span_cells(const Span& s, int dim, Fn&& fn) {
    for (int k = 0; k < s.length; ++k) {
        Index c = s.start;
        c[dim - 1] += k;
        fn(c);
    }
}

void add_on(GridFunction& target, const Cube& q, const std::vector<double>& values) {
    std::size_t i = 0;
    for_each_cell(target.domain(), q, [&](std::size_t k) { target[k] += values[i++]; });
}

}  // namespace

std::int64_t count(const CellSet& e) {
    std::int64_t c = 0;
    for (auto v : e) c += v ? 1 : 0;
    return c;
}

std::int64_t count_in(const Domain& dom, const CellSet& e, const Cube& q) {
    std::int64_t c = 0;
    for_each_cell(dom, q, [&](std::size_t k) { c += e[k] ? 1 : 0; });
    return c;
}

std::string Density::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Density Density::from_double(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("density must be positive");
    // Continued-fraction convergents.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = v;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(x);
        if (a > 1e12) break;
        const auto ai = std::int64_t(a);
        const std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > 1000000000) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (std::abs(double(p1) / double(q1) - v) <= 1e-15 * v) break;
        const double frac = x - a;
        if (frac <= 0.0) break;
        x = 1.0 / frac;
    }
    const std::int64_t g = std::gcd(p1, q1);
    return Density{p1 / g, q1 / g};
}

Density Density::parse(const std::string& text) {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("bad density: " + text);
        return from_double(v);
    }
    const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    const long long n = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument("bad density: " + text);
    const long long d = std::stoll(b, &used);
    if (used != b.size() || n <= 0 || d <= 0) throw std::invalid_argument("bad density: " + text);
    const std::int64_t g = std::gcd(std::int64_t(n), std::int64_t(d));
    return Density{n / g, d / g};
}

Density global_density(int dim) { return Density{1, dim == 1 ? 18 : 162}; }

std::int64_t certificate_cells(const std::vector<Span>& spans) {
    std::int64_t c = 0;
    for (const auto& s : spans) c += s.length;
    return c;
}

CertifyResult certify_greedy(const std::vector<Cube>& cubes, Density eta, int dim) {
    CertifyResult res;
    res.family.dim = dim;
    res.family.cubes = cubes;
    res.family.eta = eta;
    res.family.certificate.assign(cubes.size(), {});
    res.method = "greedy";
    const LatticeBox box(dim, cubes);
    std::vector<int> min_side(box.size(), INT_MAX);
    for (const auto& q : cubes) {
        box.cells(q, [&](const Index& c) {
            int& m = min_side[box.at(c)];
            m = std::min(m, q.side);
        });
    }
    std::vector<std::size_t> order(cubes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cubes[a].side > cubes[b].side; });
    std::vector<std::uint8_t> claimed(box.size(), 0);
    for (std::size_t idx : order) {
        const Cube& q = cubes[idx];
        auto& spans = res.family.certificate[idx];
        std::int64_t got = 0;
        box.cells(q, [&](const Index& c) {
            const std::size_t k = box.at(c);
            if (claimed[k] || min_side[k] < q.side) return;
            claimed[k] = 1;
            push_cell(spans, dim, c);
            ++got;
        });
        if (!eta.admits(got, q.cells())) {
            res.violating = idx;
            res.message = "cube " + std::to_string(idx) + " " + q.str() + ": |E_Q| = " + std::to_string(got) +
                          " < " + eta.str() + " * " + std::to_string(q.cells());
            return res;
        }
    }
    res.ok = true;
    return res;
}

CertifyResult certify_matching(const std::vector<Cube>& cubes, Density eta, int dim) {
    CertifyResult res;
    res.family.dim = dim;
    res.family.cubes = cubes;
    res.family.eta = eta;
    res.family.certificate.assign(cubes.size(), {});
    res.method = "matching";
    const LatticeBox box(dim, cubes);
    const std::size_t m = cubes.size();
    std::vector<int> owner(box.size(), -1);
    std::vector<std::int64_t> need(m), got(m, 0);
    for (std::size_t i = 0; i < m; ++i) need[i] = (eta.num * cubes[i].cells() + eta.den - 1) / eta.den;

    // Smallest cubes first; each takes free cells directly, then augments along
    // cube -> owned cell -> other cube paths (breadth first) for what is missing.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cubes[a].side < cubes[b].side; });
    for (std::size_t idx : order) {
        box.cells(cubes[idx], [&](const Index& c) {
            if (got[idx] >= need[idx]) return;
            int& o = owner[box.at(c)];
            if (o < 0) {
                o = int(idx);
                ++got[idx];
            }
        });
        while (got[idx] < need[idx]) {
            std::vector<int> via_cube(m, -1);
            std::vector<std::size_t> via_cell(m, 0);
            std::vector<std::size_t> frontier{idx};
            via_cube[idx] = int(idx);
            std::size_t found = SIZE_MAX, end_cube = 0;
            for (std::size_t h = 0; h < frontier.size() && found == SIZE_MAX; ++h) {
                const std::size_t c = frontier[h];
                box.cells(cubes[c], [&](const Index& x) {
                    if (found != SIZE_MAX) return;
                    const std::size_t k = box.at(x);
                    const int o = owner[k];
                    if (o < 0) {
                        found = k;
                        end_cube = c;
                    } else if (via_cube[std::size_t(o)] < 0) {
                        via_cube[std::size_t(o)] = int(c);
                        via_cell[std::size_t(o)] = k;
                        frontier.push_back(std::size_t(o));
                    }
                });
            }
            if (found == SIZE_MAX) break;
            // Shift ownership back along the path: end_cube takes the free cell, and each
            // cube on the way hands its via cell to its predecessor.
            std::size_t c = end_cube;
            owner[found] = int(c);
            while (c != idx) {
                const std::size_t prev = std::size_t(via_cube[c]);
                owner[via_cell[c]] = int(prev);
                c = prev;
            }
            ++got[idx];
        }
        if (got[idx] < need[idx]) {
            res.violating = idx;
            res.message = "cube " + std::to_string(idx) + " " + cubes[idx].str() + ": no certificate with |E_Q| >= " +
                          eta.str() + " * " + std::to_string(cubes[idx].cells()) + " exists";
            return res;
        }
    }
    for (std::size_t k = 0; k < owner.size(); ++k) {
        if (owner[k] >= 0) push_cell(res.family.certificate[std::size_t(owner[k])], dim, box.cell(k));
    }
    res.ok = true;
    return res;
}

CertifyResult certify_sparsity(const std::vector<Cube>& cubes, Density eta, int dim) {
    CertifyResult greedy = certify_greedy(cubes, eta, dim);
    if (greedy.ok) return greedy;
    CertifyResult exact = certify_matching(cubes, eta, dim);
    if (!exact.ok) exact.message += " (greedy: " + greedy.message + ")";
    return exact;
}

CertifyResult verify_certificate(const SparseFamily& family) {
    CertifyResult res;
    res.family = family;
    if (family.certificate.size() != family.cubes.size()) {
        res.message = "certificate size does not match the family";
        return res;
    }
    const int dim = family.dim;
    const LatticeBox box(dim, family.cubes);
    std::vector<std::uint8_t> claimed(box.size(), 0);
    for (std::size_t i = 0; i < family.cubes.size(); ++i) {
        const Cube& q = family.cubes[i];
        bool inside = true, disjoint = true;
        for (const auto& s : family.certificate[i]) {
            span_cells(s, dim, [&](const Index& c) {
                if (!q.contains(c)) {
                    inside = false;
                    return;
                }
                auto& slot = claimed[box.at(c)];
                if (slot) disjoint = false;
                slot = 1;
            });
        }
        std::string why;
        if (!inside) why = "certificate leaves the cube";
        else if (!disjoint) why = "certificate overlaps an earlier one";
        else if (!family.eta.admits(certificate_cells(family.certificate[i]), q.cells()))
            why = "|E_Q| = " + std::to_string(certificate_cells(family.certificate[i])) + " < " + family.eta.str() +
                  " * " + std::to_string(q.cells());
        if (!why.empty()) {
            res.violating = i;
            res.message = "cube " + std::to_string(i) + " " + q.str() + ": " + why;
            return res;
        }
    }
    res.ok = true;
    return res;
}

std::vector<Cube> cz_decompose_set(const Domain& dom, const CellSet& e, const Cube& q0, double level) {
    if (double(count_in(dom, e, q0)) > level * double(q0.cells())) throw std::domain_error("exceptional set too large");
    std::vector<Cube> out;
    if (q0.side <= 1) return out;
    std::vector<Cube> stack;
    auto push_children = [&](const Cube& q) {
        auto kids = dyadic_children(q);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    };
    push_children(q0);
    while (!stack.empty()) {
        const Cube q = stack.back();
        stack.pop_back();
        const std::int64_t c = count_in(dom, e, q);
        if (c == 0) continue;
        if (double(c) > level * double(q.cells())) {
            out.push_back(q);
        } else if (q.side > 1) {
            push_children(q);
        }
    }
    return out;
}

ExceptionalProfile exceptional_profile(const LinearOperator& t1, const LinearOperator& t2, const GridFunction& f,
                                       const Cube& q0, const DecomposeParams& params) {
    if (!(params.r > 1.0)) throw std::invalid_argument("r must exceed 1");
    const double rp = params.r / (params.r - 1.0);
    ExceptionalProfile p;
    p.q0 = q0;
    const Cube q9 = dilate(q0, 9);
    const GridFunction fn = f.restricted(q9);
    if (fn.is_zero()) {
        const std::size_t n = std::size_t(clip(f.domain(), q0).cells());
        p.v.assign(n, 0.0);
        p.m2.assign(n, 0.0);
        p.m3.assign(n, 0.0);
        return p;
    }
    p.v = t1.apply_on(t2.apply(fn), q0);
    p.m2 = gather(local_grand_maximal(t2, fn, rp, q0), q0);
    p.m3 = gather(local_grand_maximal_composite(t1, t2, fn, rp, q0), q0);
    p.norm1 = luxemburg_norm(f, q9, params.beta1);
    p.norm2 = luxemburg_norm(f, q9, params.beta2);
    return p;
}

ExceptionalSets exceptional_sets(const Domain& dom, const ExceptionalProfile& profile, double d) {
    ExceptionalSets s;
    s.e1.assign(dom.cell_count(), 0);
    s.e2 = s.e1;
    s.e3 = s.e1;
    s.e = s.e1;
    std::size_t i = 0;
    for_each_cell(dom, profile.q0, [&](std::size_t k) {
        s.e1[k] = std::abs(profile.v[i]) > d * profile.norm1;
        s.e2[k] = profile.m2[i] > d * profile.norm2;
        s.e3[k] = profile.m3[i] > d * profile.norm1;
        s.e[k] = s.e1[k] | s.e2[k] | s.e3[k];
        ++i;
    });
    return s;
}

ExceptionalSets exceptional_sets(const LinearOperator& t1, const LinearOperator& t2, const GridFunction& f,
                                 const Cube& q0, double r, double d) {
    DecomposeParams params;
    params.r = r;
    return exceptional_sets(f.domain(), exceptional_profile(t1, t2, f, q0, params), d);
}

double calibrate_threshold(const Domain& dom, const ExceptionalProfile& profile, const DecomposeParams& params) {
    const int dim = dom.dim();
    const std::int64_t cells = profile.q0.cells();
    const double cap = std::ldexp(1.0, params.max_doublings);
    auto fits = [&](double d) {
        return count(exceptional_sets(dom, profile, d).e) * (std::int64_t(1) << (dim + 2)) <= cells;
    };
    if (params.calibration == Calibration::doubling) {
        double d = 1.0;
        for (int k = 0; k <= params.max_doublings; ++k, d *= 2.0) {
            if (fits(d)) return d;
        }
        throw std::runtime_error("calibration divergence");
    }
    // A cell is exceptional at D iff its largest ratio exceeds D, so the least
    // admissible D is the (K+1)-th largest ratio, K = |Q0| / 2^{d+2}.
    std::vector<double> ratio(profile.v.size(), 0.0);
    for (std::size_t i = 0; i < ratio.size(); ++i) {
        double x = 0.0;
        if (profile.norm1 > 0.0) x = std::max({x, std::abs(profile.v[i]) / profile.norm1, profile.m3[i] / profile.norm1});
        if (profile.norm2 > 0.0) x = std::max(x, profile.m2[i] / profile.norm2);
        ratio[i] = x;
    }
    const std::size_t budget = std::size_t(cells >> (dim + 2));
    double d = 0.0;
    if (budget < ratio.size()) {
        std::nth_element(ratio.begin(), ratio.begin() + std::ptrdiff_t(budget), ratio.end(), std::greater<>());
        d = ratio[budget];
    }
    if (d == 0.0) d = std::numeric_limits<double>::min();  // keep D > 0; the same cells are exceptional
    // Rounding in the ratio can leave one cell on the wrong side; step up until the count fits.
    while (!fits(d)) d = std::nextafter(d, cap * 2.0);
    if (d > cap) throw std::runtime_error("calibration divergence");
    return d;
}

DecompositionResult sparse_decompose(const LinearOperator& t1, const LinearOperator& t2, const GridFunction& f,
                                     const DecomposeParams& params) {
    const Domain& dom = f.domain();
    const int dim = dom.dim();
    DecompositionResult res;
    res.h1 = GridFunction(dom);
    res.h2 = GridFunction(dom);
    res.tree_family.dim = dim;
    res.tree_family.eta = Density{1, 2};
    res.family.dim = dim;
    res.family.eta = global_density(dim);
    if (f.is_zero()) return res;

    struct Pending {
        Cube q;
        int parent;
        int depth;
    };
    std::deque<Pending> queue{{root_cube(dom), -1, 0}};
    std::vector<std::vector<Cube>> children_of;
    const double level = 1.0 / double(1 << (dim + 1));
    while (!queue.empty()) {
        const Pending node = queue.front();
        queue.pop_front();
        const int id = int(res.tree.size());
        res.tree.push_back(node.q);
        res.parent.push_back(node.parent);
        res.calibrated_d.push_back(0.0);
        res.exceptional_cells.push_back(0);
        children_of.emplace_back();
        res.depth = std::max(res.depth, node.depth);
        if (int(res.level_counts.size()) <= node.depth) res.level_counts.resize(std::size_t(node.depth) + 1, 0);
        ++res.level_counts[std::size_t(node.depth)];

        const GridFunction fn = f.restricted(dilate(node.q, 9));
        if (fn.is_zero()) continue;
        if (node.q.side == 1) {
            add_on(res.h1, node.q, t1.apply_on(t2.apply(fn), node.q));
            continue;
        }
        const ExceptionalProfile profile = exceptional_profile(t1, t2, f, node.q, params);
        const double d = calibrate_threshold(dom, profile, params);
        const ExceptionalSets sets = exceptional_sets(dom, profile, d);
        res.calibrated_d[std::size_t(id)] = d;
        res.exceptional_cells[std::size_t(id)] = count(sets.e);

        const auto kids = cz_decompose_set(dom, sets.e, node.q, level);
        children_of[std::size_t(id)] = kids;

        // V on Q0 minus the selected cubes.
        std::vector<double> v = profile.v;
        {
            CellSet covered(dom.cell_count(), 0);
            for (const auto& p : kids) for_each_cell(dom, p, [&](std::size_t k) { covered[k] = 1; });
            std::size_t i = 0;
            for_each_cell(dom, node.q, [&](std::size_t k) {
                if (covered[k]) v[i] = 0.0;
                ++i;
            });
        }
        add_on(res.h1, node.q, v);
        for (const auto& p : kids) {
            // u = T2(f chi_{9Q0 \ 9P})
            const GridFunction u = t2.apply(fn.without(dilate(p, 9)));
            const Cube p3 = dilate(p, 3);
            add_on(res.h1, p, t1.apply_on(u.without(p3), p));
            add_on(res.h2, p, t1.apply_on(u.restricted(p3), p));
            queue.push_back({p, id, node.depth + 1});
        }
    }

    for (std::size_t i = 0; i < res.tree.size(); ++i) {
        const Cube& q = res.tree[i];
        CellSet in_child(std::size_t(q.cells()), 0);
        for (const auto& p : children_of[i]) {
            for (int a = 0; a < p.side; ++a) {
                for (int b = 0; b < (dim == 1 ? 1 : p.side); ++b) {
                    const int x = p.corner[0] - q.corner[0] + a;
                    const int y = dim == 1 ? 0 : p.corner[1] - q.corner[1] + b;
                    in_child[std::size_t(x) * std::size_t(dim == 1 ? 1 : q.side) + std::size_t(y)] = 1;
                }
            }
        }
        std::vector<Span> spans;
        for (int a = 0; a < q.side; ++a) {
            for (int b = 0; b < (dim == 1 ? 1 : q.side); ++b) {
                if (in_child[std::size_t(a) * std::size_t(dim == 1 ? 1 : q.side) + std::size_t(b)]) continue;
                push_cell(spans, dim, Index{q.corner[0] + a, dim == 1 ? 0 : q.corner[1] + b});
            }
        }
        res.tree_family.cubes.push_back(q);
        res.tree_family.certificate.push_back(spans);
        res.family.cubes.push_back(dilate(q, 9));
        res.family.certificate.push_back(std::move(spans));
    }
    return res;
}

double bilinear_form_orlicz(const std::vector<Cube>& family, const GridFunction& f, const GridFunction& g,
                            double beta, double r) {
    const double hd = f.domain().cell_volume();
    double total = 0.0;
    for (const auto& q : family) {
        const double nf = luxemburg_norm(f, q, beta);
        if (nf == 0.0) continue;
        total += double(q.cells()) * hd * nf * mean_r(g, q, r);
    }
    return total;
}

double bilinear_form_lr(const std::vector<Cube>& family, const GridFunction& f, const GridFunction& g, double r1,
                        double r2) {
    if (r1 < 1.0 || r2 < 1.0) throw std::invalid_argument("exponents must be >= 1");
    const double hd = f.domain().cell_volume();
    double total = 0.0;
    for (const auto& q : family) {
        const double mf = mean_r(f, q, r1);
        if (mf == 0.0) continue;
        total += double(q.cells()) * hd * mf * mean_r(g, q, r2);
    }
    return total;
}

CompositionSplit split_composition(const KernelOmega& omega1, const KernelOmega& omega2, const GridFunction& f,
                                   double r, const PvParams& pv, Calibration calibration) {
    if (!(r > 1.0 && r <= 1.5)) throw std::invalid_argument("r outside (1, 3/2]");
    const ConvolutionOperator t1(f.domain(), omega1, pv);
    const ConvolutionOperator t2(f.domain(), omega2, pv);
    DecomposeParams params;
    params.r = r;
    params.beta1 = 1.0;
    params.beta2 = 0.0;
    params.calibration = calibration;
    CompositionSplit out;
    out.decomposition = sparse_decompose(t1, t2, f, params);
    out.j1 = out.decomposition.h1;
    out.j2 = out.decomposition.h2;
    return out;
}

}  // namespace sparsedom

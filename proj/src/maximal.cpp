#include "sparsedom/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sparsedom/orlicz.hpp"
#include "sparsedom/parallel.hpp"

namespace sparsedom {

namespace {

double measure_cells(const Domain& dom, const Cube& q, bool clip_to_domain) {
    return clip_to_domain ? double(clip(dom, q).cells()) : double(q.cells());
}

std::vector<double> abs_values_in(const GridFunction& f, const Cube& q) {
    std::vector<double> out;
    const auto v = f.values();
    for_each_cell(f.domain(), q, [&](std::size_t k) { out.push_back(std::abs(v[k])); });
    return out;
}

// Writes values given on the cells of q (row-major) into a domain-sized function.
GridFunction scatter(const Domain& dom, const Cube& q, const std::vector<double>& values) {
    GridFunction out(dom);
    std::size_t i = 0;
    for_each_cell(dom, q, [&](std::size_t k) { out[k] = values[i++]; });
    return out;
}

}  // namespace

std::vector<double> LinearOperator::apply_on(const GridFunction& f, const Cube& target) const {
    return gather(apply(f), target);
}

std::vector<double> IdentityOperator::apply_on(const GridFunction& f, const Cube& target) const {
    return gather(f, target);
}

std::vector<double> gather(const GridFunction& g, const Cube& q) {
    std::vector<double> out;
    out.reserve(std::size_t(clip(g.domain(), q).cells()));
    const auto v = g.values();
    for_each_cell(g.domain(), q, [&](std::size_t k) { out.push_back(v[k]); });
    return out;
}

MaximalPolicy default_policy(const Domain& dom) { return MaximalPolicy{default_collection(dom), false}; }

GridFunction sup_over_cubes(const Domain& dom, const std::vector<Cube>& cubes,
                            const std::vector<double>& cube_values) {
    GridFunction out(dom);
    auto v = out.values();
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        const double c = cube_values[i];
        for_each_cell(dom, cubes[i], [&](std::size_t k) {
            if (c > v[k]) v[k] = c;
        });
    }
    return out;
}

GridFunction sup_of_functional(const Domain& dom, const std::vector<Cube>& cubes,
                               const std::function<double(const Cube&)>& value) {
    std::vector<double> vals(cubes.size());
    parallel_for(cubes.size(), [&](std::size_t i) { vals[i] = value(cubes[i]); });
    return sup_over_cubes(dom, cubes, vals);
}

GridFunction hl_maximal(const GridFunction& f, const MaximalPolicy& policy) {
    return power_maximal(f, 1.0, policy);
}

GridFunction power_maximal(const GridFunction& f, double s, const MaximalPolicy& policy) {
    if (!(s > 0.0)) throw std::invalid_argument("maximal exponent must be positive");
    const Domain& dom = f.domain();
    const auto cubes = enumerate_cubes(dom, policy.cubes);
    const double hd = dom.cell_volume();
    GridFunction out = sup_of_functional(dom, cubes, [&](const Cube& q) {
        const double m = measure_cells(dom, q, policy.clip_to_domain);
        if (m == 0.0) return 0.0;
        return integral_abs_pow(f, q, s) / (m * hd);
    });
    if (s != 1.0) {
        for (double& v : out.values()) v = std::pow(v, 1.0 / s);
    }
    return out;
}

GridFunction m_beta(const GridFunction& f, double beta, const MaximalPolicy& policy) {
    if (beta < 1.0) throw std::invalid_argument("M_beta needs beta >= 1");
    return power_maximal(f, beta, policy);
}

GridFunction m_llogl(const GridFunction& f, double beta, const MaximalPolicy& policy) {
    if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
    const Domain& dom = f.domain();
    const auto cubes = enumerate_cubes(dom, policy.cubes);
    OrliczParams params;
    params.beta = beta;
    return sup_of_functional(dom, cubes, [&](const Cube& q) {
        const double m = measure_cells(dom, q, policy.clip_to_domain);
        if (m == 0.0) return 0.0;
        const auto v = abs_values_in(f, q);
        return luxemburg_solve(v, m, params).norm;
    });
}

StoppingCubes stopping_cubes(const GridFunction& f, double beta, const Cube& root, double threshold) {
    if (luxemburg_norm(f, root, beta) > threshold) throw std::domain_error("decomposition saturated");
    StoppingCubes out;
    std::vector<Cube> stack;
    auto push_children = [&](const Cube& q) {
        if (q.side <= 1) return;
        auto kids = dyadic_children(q);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    };
    push_children(root);
    while (!stack.empty()) {
        const Cube q = stack.back();
        stack.pop_back();
        const double nq = luxemburg_norm(f, q, beta);
        if (nq > threshold) {
            out.cubes.push_back(q);
            out.norms.push_back(nq);
            out.stop_constant = std::max(out.stop_constant, nq / double(1 << root.dim));
        } else if (nq > 0.0) {
            push_children(q);
        }
    }
    return out;
}

double local_lr(const std::vector<double>& values_on_q, const Cube& q, double r) {
    double top = 0.0;
    for (double x : values_on_q) top = std::max(top, std::abs(x));
    if (top == 0.0) return 0.0;
    double s = 0.0;
    for (double x : values_on_q) s += std::pow(std::abs(x) / top, r);
    return top * std::pow(s / double(q.cells()), 1.0 / r);
}

int grand_maximal_side_cap(const Domain& dom) { return std::max(1, dom.n() / 4); }

GridFunction grand_maximal(const LinearOperator& t, const GridFunction& f, double r,
                           const MaximalPolicy& policy) {
    if (!(r >= 1.0)) throw std::invalid_argument("grand maximal exponent must be >= 1");
    const Domain& dom = f.domain();
    CubeCollection coll = policy.cubes;
    const int cap = grand_maximal_side_cap(dom);
    coll.max_side = coll.max_side > 0 ? std::min(coll.max_side, cap) : cap;
    const auto cubes = enumerate_cubes(dom, coll);
    if (f.is_zero()) return GridFunction(dom);
    const GridFunction tf = t.apply(f);
    return sup_of_functional(dom, cubes, [&](const Cube& q) {
        // T(f chi_{R^d \ 3Q}) = Tf - T(f chi_{3Q}) on Q.
        auto near = t.apply_on(f.restricted(dilate(q, 3)), q);
        auto full = gather(tf, q);
        for (std::size_t i = 0; i < full.size(); ++i) full[i] -= near[i];
        return local_lr(full, q, r);
    });
}

GridFunction grand_maximal_composite(const LinearOperator& t1, const LinearOperator& t2,
                                     const GridFunction& f, double r, const MaximalPolicy& policy) {
    if (!(r >= 1.0)) throw std::invalid_argument("grand maximal exponent must be >= 1");
    const Domain& dom = f.domain();
    CubeCollection coll = policy.cubes;
    const int cap = grand_maximal_side_cap(dom);
    coll.max_side = coll.max_side > 0 ? std::min(coll.max_side, cap) : cap;
    const auto cubes = enumerate_cubes(dom, coll);
    if (f.is_zero()) return GridFunction(dom);
    const GridFunction u0 = t2.apply(f);
    return sup_of_functional(dom, cubes, [&](const Cube& q) {
        const GridFunction near = f.restricted(dilate(q, 9));
        GridFunction u = near.is_zero() ? u0 : u0 - t2.apply(near);
        u = u.without(dilate(q, 3));
        return local_lr(t1.apply_on(u, q), q, r);
    });
}

GridFunction local_grand_maximal(const LinearOperator& t, const GridFunction& f, double r, const Cube& q0) {
    if (!(r >= 1.0)) throw std::invalid_argument("grand maximal exponent must be >= 1");
    const Domain& dom = f.domain();
    const GridFunction f3 = f.restricted(dilate(q0, 3));
    if (f3.is_zero() || q0.side <= 1) return GridFunction(dom);
    const GridFunction w = scatter(dom, q0, t.apply_on(f3, q0));
    auto cubes = dyadic_subcubes(q0);
    cubes.erase(cubes.begin());  // Q = Q0 has an empty cut-off
    return sup_of_functional(dom, cubes, [&](const Cube& q) {
        // T(f chi_{3Q0 \ 3Q}) = T(f chi_{3Q0}) - T(f chi_{3Q}) since 3Q lies in 3Q0.
        auto vals = gather(w, q);
        const GridFunction near = f3.restricted(dilate(q, 3));
        if (!near.is_zero()) {
            const auto sub = t.apply_on(near, q);
            for (std::size_t i = 0; i < vals.size(); ++i) vals[i] -= sub[i];
        }
        return local_lr(vals, q, r);
    });
}

GridFunction local_grand_maximal_composite(const LinearOperator& t1, const LinearOperator& t2,
                                           const GridFunction& f, double r, const Cube& q0) {
    if (!(r >= 1.0)) throw std::invalid_argument("grand maximal exponent must be >= 1");
    const Domain& dom = f.domain();
    const int d = dom.dim();
    const GridFunction f9 = f.restricted(dilate(q0, 9));
    if (f9.is_zero() || q0.side <= 1) return GridFunction(dom);
    const GridFunction u0 = t2.apply(f9);
    auto cubes = dyadic_subcubes(q0);
    cubes.erase(cubes.begin());
    GridFunction out(dom);
    std::vector<double> vals(cubes.size(), 0.0);
    // T2(f chi_{9Q}) is the sum of T2(f chi_B) over the 9^d lattice blocks B of
    // side s tiling 9Q; the block fields are computed once per level.
    std::size_t begin = 0;
    while (begin < cubes.size()) {
        const int s = cubes[begin].side;
        std::size_t end = begin;
        while (end < cubes.size() && cubes[end].side == s) ++end;
        const auto floor_div = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
        std::map<std::pair<int, int>, GridFunction> blocks;
        {
            std::map<std::pair<int, int>, GridFunction> pieces;
            const auto v = f9.values();
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (v[k] == 0.0) continue;
                const Index c = dom.index(k);
                const std::pair<int, int> key{floor_div(c[0] - q0.corner[0], s),
                                              d == 1 ? 0 : floor_div(c[1] - q0.corner[1], s)};
                auto it = pieces.find(key);
                if (it == pieces.end()) it = pieces.emplace(key, GridFunction(dom)).first;
                it->second[k] = v[k];
            }
            std::vector<std::pair<std::pair<int, int>, const GridFunction*>> todo;
            for (const auto& [key, g] : pieces) todo.emplace_back(key, &g);
            std::vector<GridFunction> fields(todo.size());
            for (std::size_t i = 0; i < todo.size(); ++i) fields[i] = t2.apply(*todo[i].second);
            for (std::size_t i = 0; i < todo.size(); ++i) blocks.emplace(todo[i].first, std::move(fields[i]));
        }
        parallel_for(end - begin, [&](std::size_t i) {
            const Cube& q = cubes[begin + i];
            const int b0 = (q.corner[0] - q0.corner[0]) / s;
            const int b1 = d == 1 ? 0 : (q.corner[1] - q0.corner[1]) / s;
            GridFunction u = u0;
            for (int a = b0 - 4; a <= b0 + 4; ++a) {
                for (int b = (d == 1 ? 0 : b1 - 4); b <= (d == 1 ? 0 : b1 + 4); ++b) {
                    auto it = blocks.find({a, b});
                    if (it != blocks.end()) u -= it->second;
                }
            }
            u = u.without(dilate(q, 3));
            vals[begin + i] = local_lr(t1.apply_on(u, q), q, r);
        });
        begin = end;
    }
    return sup_over_cubes(dom, cubes, vals);
}

}  // namespace sparsedom

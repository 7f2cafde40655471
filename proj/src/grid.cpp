#include "sparsedom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sparsedom {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Domain::Domain(int dim, double side, int depth, std::array<double, 2> origin)
    : dim_(dim), side_(side), depth_(depth), n_(0), origin_(origin) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
    if (!(side > 0.0) || !std::isfinite(side)) throw std::invalid_argument("domain side must be positive");
    if (depth < 0 || depth > (dim == 1 ? 20 : 12))
        throw std::invalid_argument("refinement depth out of range");
    n_ = 1 << depth;
    if (dim == 1) origin_[1] = 0.0;
}

Domain Domain::centered(int dim, double side, int depth) {
    return Domain(dim, side, depth, {-side / 2, dim == 1 ? 0.0 : -side / 2});
}

bool Cube::contains(const Cube& q) const {
    for (int a = 0; a < dim; ++a) {
        if (q.corner[a] < corner[a] || q.corner[a] + q.side > corner[a] + side) return false;
    }
    return true;
}

bool Cube::intersects(const Cube& q) const {
    for (int a = 0; a < dim; ++a) {
        if (q.corner[a] >= corner[a] + side || corner[a] >= q.corner[a] + q.side) return false;
    }
    return true;
}

std::string Cube::str() const {
    std::ostringstream os;
    os << "grid " << grid << " corner (" << corner[0];
    if (dim == 2) os << ", " << corner[1];
    os << ") side " << side;
    return os.str();
}

CellRange clip(const Domain& dom, const Cube& q) {
    CellRange r;
    r.lo[0] = std::max(q.corner[0], 0);
    r.hi[0] = std::min(q.corner[0] + q.side, dom.n());
    if (dom.dim() == 2) {
        r.lo[1] = std::max(q.corner[1], 0);
        r.hi[1] = std::min(q.corner[1] + q.side, dom.n());
    }
    return r;
}

Cube root_cube(const Domain& dom) { return Cube{dom.dim(), {0, 0}, dom.n(), 1}; }

std::optional<int> dyadic_level(const Domain& dom, const Cube& q) {
    if (!is_power_of_two(q.side) || q.side > dom.n()) return std::nullopt;
    for (int a = 0; a < dom.dim(); ++a) {
        if (q.corner[a] < 0 || q.corner[a] % q.side != 0 || q.corner[a] + q.side > dom.n())
            return std::nullopt;
    }
    int level = 0;
    for (int s = dom.n(); s > q.side; s /= 2) ++level;
    return level;
}

std::vector<Cube> dyadic_children(const Cube& q) {
    if (q.side <= 1) throw std::invalid_argument("atomic cube");
    if (q.side % 2 != 0) throw std::invalid_argument("cube side is not even");
    const int half = q.side / 2;
    std::vector<Cube> out;
    if (q.dim == 1) {
        out.push_back({1, {q.corner[0], 0}, half, q.grid});
        out.push_back({1, {q.corner[0] + half, 0}, half, q.grid});
        return out;
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            out.push_back({2, {q.corner[0] + a * half, q.corner[1] + b * half}, half, q.grid});
    return out;
}

Cube dilate(const Cube& q, int lambda) {
    if (lambda < 1 || lambda % 2 == 0) throw std::invalid_argument("lattice dilation needs an odd factor");
    const int grow = (lambda - 1) / 2 * q.side;
    Cube out{q.dim, {q.corner[0] - grow, q.dim == 1 ? 0 : q.corner[1] - grow}, q.side * lambda, 0};
    if (lambda == 1) out.grid = q.grid;
    return out;
}

Dilation dilate_outward(const Cube& q, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dilation factor must be positive");
    const double rounded = std::round(lambda);
    if (rounded == lambda && int(rounded) % 2 == 1) return {dilate(q, int(rounded)), true};
    // Work in doubled coordinates, where the centre is an integer.
    const Index c2 = q.doubled_center();
    const double half2 = lambda * q.side;  // half side, doubled
    Cube out{q.dim, {0, 0}, 0, 0};
    int side = 0;
    for (int a = 0; a < q.dim; ++a) {
        const int lo = int(std::floor((c2[a] - half2) / 2.0));
        const int hi = int(std::ceil((c2[a] + half2) / 2.0));
        out.corner[a] = lo;
        side = std::max(side, hi - lo);
    }
    out.side = side;
    const bool exact = std::abs(double(side) - lambda * q.side) < 1e-12;
    return {out, exact};
}

GridFunction::GridFunction(const Domain& dom, double fill) : dom_(dom), values_(dom.cell_count(), fill) {}

GridFunction::GridFunction(const Domain& dom, std::vector<double> values)
    : dom_(dom), values_(std::move(values)) {
    if (values_.size() != dom_.cell_count()) throw std::invalid_argument("value count does not match domain");
}

double GridFunction::integral() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * dom_.cell_volume();
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::lp_norm(double p) const {
    double s = 0.0;
    for (double v : values_) s += std::pow(std::abs(v), p);
    return std::pow(s * dom_.cell_volume(), 1.0 / p);
}

double GridFunction::lp_norm(double p, const GridFunction& weight) const {
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) s += std::pow(std::abs(values_[k]), p) * weight[k];
    return std::pow(s * dom_.cell_volume(), 1.0 / p);
}

bool GridFunction::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GridFunction GridFunction::abs() const {
    GridFunction out(*this);
    for (double& v : out.values_) v = std::abs(v);
    return out;
}

GridFunction GridFunction::restricted(const Cube& q) const {
    GridFunction out(dom_);
    for_each_cell(dom_, q, [&](std::size_t k) { out.values_[k] = values_[k]; });
    return out;
}

GridFunction GridFunction::without(const Cube& q) const {
    GridFunction out(*this);
    for_each_cell(dom_, q, [&](std::size_t k) { out.values_[k] = 0.0; });
    return out;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    if (o.values_.size() != values_.size()) throw std::invalid_argument("domain mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    if (o.values_.size() != values_.size()) throw std::invalid_argument("domain mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

double integral(const GridFunction& f, const Cube& q) {
    double s = 0.0;
    const auto v = f.values();
    for_each_cell(f.domain(), q, [&](std::size_t k) { s += v[k]; });
    return s * f.domain().cell_volume();
}

double integral_abs_pow(const GridFunction& f, const Cube& q, double power) {
    double s = 0.0;
    const auto v = f.values();
    if (power == 1.0) {
        for_each_cell(f.domain(), q, [&](std::size_t k) { s += std::abs(v[k]); });
    } else {
        for_each_cell(f.domain(), q, [&](std::size_t k) { s += std::pow(std::abs(v[k]), power); });
    }
    return s * f.domain().cell_volume();
}

DyadicGrid::DyadicGrid(const Domain& dom, std::array<int, 2> thirds, int id)
    : dom_(dom), thirds_(thirds), offset_{0, 0}, id_(id) {
    for (int a = 0; a < dom.dim(); ++a) {
        if (thirds[a] < 0 || thirds[a] > 2) throw std::invalid_argument("shift must be 0, 1/3 or 2/3");
        offset_[a] = int(std::lround(thirds[a] * dom.n() / 3.0));
    }
    if (dom.dim() == 1) thirds_[1] = 0;
}

Cube DyadicGrid::cube_containing(const Index& cell, int side) const {
    if (!is_power_of_two(side)) throw std::invalid_argument("grid cube side must be a power of two");
    Cube q{dom_.dim(), {0, 0}, side, id_};
    for (int a = 0; a < dom_.dim(); ++a)
        q.corner[a] = offset_[a] + side * floor_div(cell[a] - offset_[a], side);
    return q;
}

std::vector<Cube> DyadicGrid::cubes_of_side(int side) const {
    std::vector<Cube> out;
    const Cube first = cube_containing({0, 0}, side);
    const Cube last = cube_containing({dom_.n() - 1, dom_.n() - 1}, side);
    if (dom_.dim() == 1) {
        for (int c = first.corner[0]; c <= last.corner[0]; c += side) out.push_back({1, {c, 0}, side, id_});
        return out;
    }
    for (int c0 = first.corner[0]; c0 <= last.corner[0]; c0 += side)
        for (int c1 = first.corner[1]; c1 <= last.corner[1]; c1 += side)
            out.push_back({2, {c0, c1}, side, id_});
    return out;
}

bool DyadicGrid::is_member(const Cube& q) const {
    if (!is_power_of_two(q.side) || q.dim != dom_.dim()) return false;
    for (int a = 0; a < q.dim; ++a) {
        if (floor_div(q.corner[a] - offset_[a], q.side) * q.side != q.corner[a] - offset_[a]) return false;
    }
    return true;
}

std::vector<DyadicGrid> shifted_grids(const Domain& dom) {
    std::vector<DyadicGrid> out;
    int id = 1;
    if (dom.dim() == 1) {
        for (int t = 0; t < 3; ++t) out.emplace_back(dom, std::array<int, 2>{t, 0}, id++);
        return out;
    }
    for (int t0 = 0; t0 < 3; ++t0)
        for (int t1 = 0; t1 < 3; ++t1) out.emplace_back(dom, std::array<int, 2>{t0, t1}, id++);
    return out;
}

std::optional<Cube> covering_cube(const std::vector<DyadicGrid>& grids, const Cube& q, int max_ratio) {
    std::optional<Cube> best;
    for (int side = 1; side <= max_ratio * q.side; side *= 2) {
        if (side < q.side) continue;
        for (const auto& g : grids) {
            const Cube c = g.cube_containing(q.corner, side);
            if (c.contains(q)) {
                best = c;
                return best;
            }
        }
    }
    return best;
}

std::string CubeCollection::describe() const {
    std::ostringstream os;
    switch (policy) {
        case CubePolicy::all_cubes: os << "all grid-aligned cubes"; break;
        case CubePolicy::dyadic: os << "dyadic cubes of grid " << grid; break;
        case CubePolicy::shifted_dyadic: os << "dyadic cubes of all shifted grids"; break;
    }
    if (max_side > 0) os << " (side <= " << max_side << " cells)";
    return os.str();
}

CubeCollection default_collection(const Domain& dom) {
    CubeCollection c;
    c.policy = dom.dim() == 1 ? CubePolicy::all_cubes : CubePolicy::shifted_dyadic;
    return c;
}

std::vector<Cube> enumerate_cubes(const Domain& dom, const CubeCollection& collection) {
    const int n = dom.n();
    const int max_side = collection.max_side > 0 ? std::min(collection.max_side, n) : n;
    std::vector<Cube> out;
    switch (collection.policy) {
        case CubePolicy::all_cubes:
            for (int s = 1; s <= max_side; ++s) {
                if (dom.dim() == 1) {
                    for (int c = 0; c + s <= n; ++c) out.push_back({1, {c, 0}, s, 0});
                } else {
                    for (int c0 = 0; c0 + s <= n; ++c0)
                        for (int c1 = 0; c1 + s <= n; ++c1) out.push_back({2, {c0, c1}, s, 0});
                }
            }
            break;
        case CubePolicy::dyadic: {
            const auto grids = shifted_grids(dom);
            if (collection.grid < 1 || collection.grid > int(grids.size()))
                throw std::invalid_argument("unknown grid id");
            const DyadicGrid& g = grids[collection.grid - 1];
            for (int s = 1; s <= max_side; s *= 2) {
                auto level = g.cubes_of_side(s);
                out.insert(out.end(), level.begin(), level.end());
            }
            break;
        }
        case CubePolicy::shifted_dyadic:
            for (const auto& g : shifted_grids(dom)) {
                for (int s = 1; s <= max_side; s *= 2) {
                    auto level = g.cubes_of_side(s);
                    out.insert(out.end(), level.begin(), level.end());
                }
            }
            break;
    }
    return out;
}

std::vector<Cube> dyadic_subcubes(const Cube& q0) {
    std::vector<Cube> out{q0};
    std::size_t begin = 0;
    while (begin < out.size() && out[begin].side > 1) {
        const std::size_t end = out.size();
        for (std::size_t k = begin; k < end; ++k) {
            auto kids = dyadic_children(out[k]);
            out.insert(out.end(), kids.begin(), kids.end());
        }
        begin = end;
    }
    return out;
}

}  // namespace sparsedom

namespace sparsedom {

PrefixSums::PrefixSums(const GridFunction& f) : dom_(f.domain()) {
    const std::size_t n = std::size_t(dom_.n());
    const auto v = f.values();
    if (dom_.dim() == 1) {
        table_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) table_[i + 1] = table_[i] + v[i];
        return;
    }
    const std::size_t w = n + 1;
    table_.assign(w * w, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += v[i * n + j];
            table_[(i + 1) * w + j + 1] = table_[i * w + j + 1] + row;
        }
    }
}

double PrefixSums::sum(const CellRange& r) const {
    if (r.empty()) return 0.0;
    if (dom_.dim() == 1) return table_[std::size_t(r.hi[0])] - table_[std::size_t(r.lo[0])];
    const std::size_t w = std::size_t(dom_.n()) + 1;
    auto at = [&](int i, int j) { return table_[std::size_t(i) * w + std::size_t(j)]; };
    return at(r.hi[0], r.hi[1]) - at(r.lo[0], r.hi[1]) - at(r.hi[0], r.lo[1]) + at(r.lo[0], r.lo[1]);
}

}  // namespace sparsedom

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sparsedom {

/// Integer lattice position (cell index per axis). Axis 1 is unused when d = 1.
using Index = std::array<int, 2>;

/**
 * Domain: uniform grid on the root cube [x0, x0 + L)^d with N = 2^m cells per side.
 *
 * Cells are addressed either by Index or by their row-major linear position
 * (axis 0 slowest). Everything in the toolkit lives on one Domain; functions are
 * extended by zero outside of it.
 */
class Domain {
public:
    Domain(int dim, double side, int depth, std::array<double, 2> origin = {0.0, 0.0});

    /// Domain centred at the origin, [-L/2, L/2)^d.
    static Domain centered(int dim, double side, int depth);

    int dim() const { return dim_; }
    double side() const { return side_; }
    int depth() const { return depth_; }
    int n() const { return n_; }
    double h() const { return side_ / n_; }
    double cell_volume() const { return dim_ == 1 ? h() : h() * h(); }
    std::size_t cell_count() const { return dim_ == 1 ? std::size_t(n_) : std::size_t(n_) * n_; }
    std::array<double, 2> origin() const { return origin_; }

    bool inside(const Index& i) const {
        return i[0] >= 0 && i[0] < n_ && (dim_ == 1 || (i[1] >= 0 && i[1] < n_));
    }
    std::size_t linear(const Index& i) const {
        return dim_ == 1 ? std::size_t(i[0]) : std::size_t(i[0]) * n_ + std::size_t(i[1]);
    }
    Index index(std::size_t k) const {
        if (dim_ == 1) return {int(k), 0};
        return {int(k / std::size_t(n_)), int(k % std::size_t(n_))};
    }
    /// Physical coordinates of a cell centre.
    std::array<double, 2> center(const Index& i) const {
        return {origin_[0] + (i[0] + 0.5) * h(), dim_ == 1 ? 0.0 : origin_[1] + (i[1] + 0.5) * h()};
    }

    bool operator==(const Domain& o) const = default;

private:
    int dim_;
    double side_;
    int depth_;
    int n_;
    std::array<double, 2> origin_;
};

/**
 * Cube: axis-parallel lattice cube [corner, corner + side)^d measured in cells.
 *
 * grid tags the dyadic grid a cube was drawn from (1 is the unshifted grid of
 * the domain, 2..3^d the shifted ones, 0 an untagged lattice cube such as a
 * dilation).
 */
struct Cube {
    int dim = 1;
    Index corner{0, 0};
    int side = 1;
    int grid = 0;

    std::int64_t cells() const { return dim == 1 ? side : std::int64_t(side) * side; }
    bool contains(const Index& i) const {
        return i[0] >= corner[0] && i[0] < corner[0] + side &&
               (dim == 1 || (i[1] >= corner[1] && i[1] < corner[1] + side));
    }
    bool contains(const Cube& q) const;
    bool intersects(const Cube& q) const;
    /// Twice the centre, which is always an integer.
    Index doubled_center() const {
        return {2 * corner[0] + side, dim == 1 ? 0 : 2 * corner[1] + side};
    }
    bool operator==(const Cube& o) const {
        return dim == o.dim && corner[0] == o.corner[0] && (dim == 1 || corner[1] == o.corner[1]) &&
               side == o.side;
    }
    std::string str() const;
};

/// Intersection of a cube with the domain as half-open index ranges.
struct CellRange {
    Index lo{0, 0};
    Index hi{0, 1};
    bool empty() const { return hi[0] <= lo[0] || hi[1] <= lo[1]; }
    std::int64_t cells() const {
        return empty() ? 0 : std::int64_t(hi[0] - lo[0]) * (hi[1] - lo[1]);
    }
};

CellRange clip(const Domain& dom, const Cube& q);

/// Calls fn(linear_index) for every cell of q inside the domain, row-major.
template <class Fn>
void for_each_cell(const Domain& dom, const Cube& q, Fn&& fn) {
    const CellRange r = clip(dom, q);
    if (r.empty()) return;
    if (dom.dim() == 1) {
        for (int i = r.lo[0]; i < r.hi[0]; ++i) fn(std::size_t(i));
        return;
    }
    const std::size_t n = std::size_t(dom.n());
    for (int i = r.lo[0]; i < r.hi[0]; ++i) {
        const std::size_t row = std::size_t(i) * n;
        for (int j = r.lo[1]; j < r.hi[1]; ++j) fn(row + std::size_t(j));
    }
}

/// Root cube of the domain (grid 1, level 0).
Cube root_cube(const Domain& dom);

/// log2(N / side) when q is a cube of the domain's unshifted dyadic grid, otherwise nullopt.
std::optional<int> dyadic_level(const Domain& dom, const Cube& q);

/// The 2^d congruent children of q. Throws std::invalid_argument("atomic cube") for side 1.
std::vector<Cube> dyadic_children(const Cube& q);

/// Cube with the same centre and side lambda * side; lambda must be odd so the result stays on the lattice.
Cube dilate(const Cube& q, int lambda);

struct Dilation {
    Cube cube;
    bool exact = true;
};

/// Dilation by an arbitrary factor, rounded outward to the lattice when not representable.
Dilation dilate_outward(const Cube& q, double lambda);

/**
 * A dense table of cell values on a Domain. Evaluation outside the domain is 0.
 */
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const Domain& dom, double fill = 0.0);
    GridFunction(const Domain& dom, std::vector<double> values);

    const Domain& domain() const { return dom_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double at(const Index& i) const { return dom_.inside(i) ? values_[dom_.linear(i)] : 0.0; }

    /// h^d times the sum of all values.
    double integral() const;
    double sup_norm() const;
    /// (h^d sum |f|^p)^{1/p}.
    double lp_norm(double p) const;
    /// (h^d sum |f|^p w)^{1/p}.
    double lp_norm(double p, const GridFunction& weight) const;
    bool is_zero() const;

    GridFunction abs() const;
    /// f restricted to q (zero elsewhere).
    GridFunction restricted(const Cube& q) const;
    /// f with the cells of q zeroed.
    GridFunction without(const Cube& q) const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double c);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(double c, GridFunction a) { return a *= c; }

private:
    Domain dom_{1, 1.0, 0};
    std::vector<double> values_;
};

/// h^d * sum of f over the cells of q inside the domain (cells outside contribute 0).
double integral(const GridFunction& f, const Cube& q);

/// Same as integral() but of |f|^power.
double integral_abs_pow(const GridFunction& f, const Cube& q, double power);

/// Summed-area table of a GridFunction: O(1) integrals over cube/domain intersections.
class PrefixSums {
public:
    explicit PrefixSums(const GridFunction& f);
    /// Sum of the values (not multiplied by h^d) over a clipped range.
    double sum(const CellRange& r) const;
    double sum(const Cube& q) const { return sum(clip(dom_, q)); }

private:
    Domain dom_;
    std::vector<double> table_;  // (N+1)^d entries
};

/**
 * A dyadic grid translated by a fixed lattice vector.
 *
 * Translating the standard grid by round(t * N) cells with t in {0, 1/3, 2/3}^d
 * places, at every level, the cube boundaries of the three grids (per axis) at
 * offsets close to 0, s/3 and 2s/3 modulo the side s; that is what the covering
 * argument needs. Nesting is exact since all levels share one translation.
 */
class DyadicGrid {
public:
    DyadicGrid(const Domain& dom, std::array<int, 2> thirds, int id);

    int id() const { return id_; }
    std::array<int, 2> thirds() const { return thirds_; }
    Index offset() const { return offset_; }
    const Domain& domain() const { return dom_; }

    /// The grid cube of the given side (power of two) containing a cell.
    Cube cube_containing(const Index& cell, int side) const;
    /// All grid cubes of the given side meeting the domain.
    std::vector<Cube> cubes_of_side(int side) const;
    bool is_member(const Cube& q) const;

private:
    Domain dom_;
    std::array<int, 2> thirds_;
    Index offset_;
    int id_;
};

/// The 3^d shifted grids; grid 1 is the unshifted one.
std::vector<DyadicGrid> shifted_grids(const Domain& dom);

/// Smallest grid cube (over all grids) that contains q and has side at most max_ratio * side(q).
std::optional<Cube> covering_cube(const std::vector<DyadicGrid>& grids, const Cube& q, int max_ratio = 6);

enum class CubePolicy { all_cubes, dyadic, shifted_dyadic };

/// Finite stand-in for "all cubes" in a supremum.
struct CubeCollection {
    CubePolicy policy = CubePolicy::all_cubes;
    int grid = 1;       // which grid for CubePolicy::dyadic
    int max_side = 0;   // 0 = up to N

    std::string describe() const;
};

/// All grid-aligned cubes for d = 1, dyadic cubes of the 3^d shifted grids for d = 2.
CubeCollection default_collection(const Domain& dom);

/// Deterministic enumeration of the cubes of a collection that meet the domain.
std::vector<Cube> enumerate_cubes(const Domain& dom, const CubeCollection& collection);

/// Dyadic subcubes of q0 (q0 included), coarse to fine.
std::vector<Cube> dyadic_subcubes(const Cube& q0);

}  // namespace sparsedom

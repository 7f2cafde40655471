#pragma once

#include <functional>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/operator.hpp"

namespace sparsedom {

/**
 * Which cubes a maximal supremum runs over.
 *
 * A cell belongs to a cube when its centre does, i.e. when its index lies in the
 * cube. With clip_to_domain the averages are taken over Q intersected with the
 * domain (used for weights, which do not vanish outside); otherwise over all of Q
 * with the function extended by zero.
 */
struct MaximalPolicy {
    CubeCollection cubes;
    bool clip_to_domain = false;
};

MaximalPolicy default_policy(const Domain& dom);

/// out(cell) = max over the cubes containing the cell of cube_values[i] (0 if none).
GridFunction sup_over_cubes(const Domain& dom, const std::vector<Cube>& cubes,
                            const std::vector<double>& cube_values);

/// Evaluates value(Q) for every policy cube and takes pointwise suprema.
GridFunction sup_of_functional(const Domain& dom, const std::vector<Cube>& cubes,
                               const std::function<double(const Cube&)>& value);

GridFunction hl_maximal(const GridFunction& f, const MaximalPolicy& policy);

/// [M(|f|^s)]^{1/s} for any s > 0.
GridFunction power_maximal(const GridFunction& f, double s, const MaximalPolicy& policy);

/// M_beta f = [M(|f|^beta)]^{1/beta}, beta >= 1.
GridFunction m_beta(const GridFunction& f, double beta, const MaximalPolicy& policy);

/// sup over cubes containing x of ||f||_{L(log L)^beta, Q}.
GridFunction m_llogl(const GridFunction& f, double beta, const MaximalPolicy& policy);

struct StoppingCubes {
    std::vector<Cube> cubes;
    std::vector<double> norms;
    /// max norm / 2^d over the selection; at most 1 for Luxemburg norms.
    double stop_constant = 0.0;
};

/**
 * Maximal dyadic subcubes of root with ||f||_{L(log L)^beta, Q} > threshold.
 * Throws std::domain_error("decomposition saturated") when the root itself exceeds it.
 */
StoppingCubes stopping_cubes(const GridFunction& f, double beta, const Cube& root, double threshold = 1.0);

/// Local L^r functional |Q|^{-1/r} ||g chi_Q||_{L^r} for g given on the cells of Q.
double local_lr(const std::vector<double>& values_on_q, const Cube& q, double r);

/**
 * Largest side (in cells) used by the global grand maximal operators: N/4, so
 * that 3Q keeps a meaningful complement inside the truncated domain.
 */
int grand_maximal_side_cap(const Domain& dom);

/// sup_{Q containing x} |Q|^{-1/r} ||T(f chi_{R^d \ 3Q}) chi_Q||_{L^r}.
GridFunction grand_maximal(const LinearOperator& t, const GridFunction& f, double r,
                           const MaximalPolicy& policy);

/// sup_{Q containing x} (|Q|^{-1} int_Q |T1(chi_{R^d \ 3Q} T2(f chi_{R^d \ 9Q}))|^r)^{1/r}.
GridFunction grand_maximal_composite(const LinearOperator& t1, const LinearOperator& t2,
                                     const GridFunction& f, double r, const MaximalPolicy& policy);

/**
 * Localised grand maximal operator: Q ranges over the dyadic subcubes of q0 and
 * the cut-off is 3Q0 \ 3Q. Zero outside q0.
 */
GridFunction local_grand_maximal(const LinearOperator& t, const GridFunction& f, double r, const Cube& q0);

/// Localised composite form with cut-offs R^d \ 3Q (inner) and 9Q0 \ 9Q (outer). Zero outside q0.
GridFunction local_grand_maximal_composite(const LinearOperator& t1, const LinearOperator& t2,
                                           const GridFunction& f, double r, const Cube& q0);

}  // namespace sparsedom

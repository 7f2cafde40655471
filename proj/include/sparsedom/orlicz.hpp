#pragma once

#include <span>

#include "sparsedom/grid.hpp"

namespace sparsedom {

/// Local Luxemburg norms for the Young function t log^beta(e + t).
struct OrliczParams {
    double beta = 0.0;
    double tolerance = 1e-10;  // relative width of the final bisection bracket
    int max_iterations = 200;
};

struct LuxemburgResult {
    double norm = 0.0;
    double modular = 0.0;  // modular evaluated at the returned norm
    int iterations = 0;
};

/// (1/|Q|) * integral over Q of (|g|/lambda) log^beta(e + |g|/lambda).
double modular(const GridFunction& g, const Cube& q, double beta, double lambda);

/**
 * Solves for the smallest lambda with modular(lambda) <= 1 by bisection.
 *
 * abs_values are the |g| samples of the cells of Q that lie in the domain;
 * total_cells is the cell count of Q itself (cells outside the domain carry 0).
 */
LuxemburgResult luxemburg_solve(std::span<const double> abs_values, double total_cells,
                                const OrliczParams& params);

LuxemburgResult luxemburg_solve(const GridFunction& g, const Cube& q, const OrliczParams& params);

/// ||g||_{L(log L)^beta, Q}; 0 when g vanishes on Q.
double luxemburg_norm(const GridFunction& g, const Cube& q, double beta);

/// <|g|>_{Q,r} = (<|g|^r>_Q)^{1/r}, r >= 1.
double mean_r(const GridFunction& g, const Cube& q, double r);

}  // namespace sparsedom

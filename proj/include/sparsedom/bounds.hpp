#pragma once

#include <functional>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/sparse.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

/// x' = x / (x - 1); +inf at x = 1.
double conjugate(double x);

/// Parameters derived from the weight constants.
struct BoundFormulas {
    int dim = 1;
    double p = 2.0, pp = 2.0;
    double ap = 1.0, a1 = 1.0, ainfty_w = 1.0, ainfty_sigma = 1.0;
    double tau_w = 0.0, tau_sigma = 0.0;
    double eps1 = 0.0, eps2 = 0.0;
    double t = 0.0, r = 0.0, p1 = 0.0;  // choices for the A_1 weak-type bound

    static BoundFormulas from(int dim, const WeightConstants& c);
};

/// [w]_{A_p}^{1/p} ([w]_{A_inf}^{1/p'} + [sigma]_{A_inf}^{1/p}).
double mixed_factor(const WeightConstants& c);

/// Strong-type bound for the composition.
double strong_bound(const WeightConstants& c);

/// Bound for a single rough operator.
double single_strong_bound(const WeightConstants& c);

/// [w]_{A_1} [w]_{A_inf}^2 log(e + [w]_{A_inf}).
double weak_bound(double a1, double ainfty);

/// p'^{1+beta} (p'/r)' (t (p'/r - 1)/(p' - 1))'^{1/p'}; throws std::invalid_argument on bad parameters.
double sparse_form_constant(double p, double r, double t, double beta);

/// [w]_{A_inf}^alpha log^{1+beta}(e + [w]_{A_inf}) [w]_{A_1}.
double a1_weak_bound(double ainfty, double a1, double alpha, double beta);

/// 1 + {D sparse_form_constant(p1, r, t, beta)}^{p1}.
double weak_sparse_constant(double d, double p1, double r, double t, double beta);

/// (t (p1'/r - 1)/(p1' - 1))' / t' at the A_1 choices; the theory bounds it by 5.
double a1_conjugate_ratio(const BoundFormulas& b);

struct BoundComparison {
    double max_ainfty = 0.0;
    double mixed = 0.0;
    bool max_ok = false;      // max{[w]_inf, [sigma]_inf} <= mixed factor
    double strong = 0.0;
    double single_squared = 0.0;
    bool product_ok = false;  // strong <= single^2
};

BoundComparison compare_bounds(const WeightConstants& c);

/// w({|u| > lambda}) with strict inequality, weighted by w h^d.
double weighted_level_set(const GridFunction& u, const GridFunction& w, double lambda);

/// int (|f|/lambda) log^beta(e + |f|/lambda) w.
double llogl_modular(const GridFunction& f, const GridFunction& w, double beta, double lambda);

struct WeakTypeResult {
    double ratio = 0.0;     // max over the grid
    double argmax_lambda = 0.0;
};

/**
 * max over lambda of w({|Uf| > lambda}) / (bound * int (|f|/lambda) log^beta(e + |f|/lambda) w).
 * uf is Uf already evaluated; f = 0 gives 0.
 */
WeakTypeResult weak_type_modular_ratio(const GridFunction& uf, const GridFunction& f, const GridFunction& w,
                                       double beta, const std::vector<double>& lambdas, double bound);

/// points log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

/// ||T1 T2 f||_{L^p(w)} / (bound ||f||_{L^p(w)}).
double strong_type_ratio(const GridFunction& t1t2f, const GridFunction& f, const GridFunction& w, double p,
                         double bound);

struct DominationRatios {
    double pairing1 = 0.0, pairing2 = 0.0;
    double form1 = 0.0, form2 = 0.0;
    double ratio1 = 0.0, ratio2 = 0.0;
    bool anomaly = false;  // a zero form against a non-zero pairing
};

/// |int J1 g| / (r' A_{S; L log L, L^r}(f, g)) and |int J2 g| / (r'^2 A_{S; L^1, L^r}(f, g)).
DominationRatios sparse_domination_ratio(const CompositionSplit& split, const GridFunction& f, const GridFunction& g,
                                         double r);

/// h^d sum u v.
double pairing(const GridFunction& u, const GridFunction& v);

}  // namespace sparsedom

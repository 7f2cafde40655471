#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/maximal.hpp"

namespace sparsedom {

/// A strictly positive grid function. Averages of weights are clipped to the domain.
class Weight {
public:
    /// Throws std::invalid_argument("non-positive weight") unless every value is > 0 and finite.
    explicit Weight(GridFunction w);

    const GridFunction& values() const { return w_; }
    const Domain& domain() const { return w_.domain(); }
    double min() const;
    /// sigma = w^{-1/(p-1)}.
    Weight dual(double p) const;
    /// w^s (still a weight).
    Weight power(double s) const;

private:
    GridFunction w_;
};

/// The cube policy with clipped averages that weight constants use.
MaximalPolicy weight_policy(const Domain& dom);
MaximalPolicy weight_policy(const CubeCollection& cubes);

/// max over the collection of <w>_Q <w^{-1/(p-1)}>_Q^{p-1}.
double ap_constant(const Weight& w, double p, const CubeCollection& cubes);
double ap_constant(const Weight& w, double p);

/// max over cells of Mw / w.
double a1_constant(const Weight& w, const CubeCollection& cubes);
double a1_constant(const Weight& w);

/// Wilson form: max over Q of (1/w(Q)) int_Q M(w chi_Q), inner M over the same collection.
double ainfty_constant(const Weight& w, const CubeCollection& cubes);
double ainfty_constant(const Weight& w);

struct WeightConstants {
    double p = 2.0;
    double ap = 1.0;
    double a1 = 1.0;
    double ainfty_w = 1.0;
    double ainfty_sigma = 1.0;
    std::string policy;
};

/// [w]_{A_p}, [w]_{A_1}, [w]_{A_inf} and [sigma]_{A_inf} under one collection.
WeightConstants weight_constants(const Weight& w, double p, const CubeCollection& cubes);

/// The reverse Hoelder exponent 1 + 1/(2^{11+d} [w]_{A_inf}).
double reverse_holder_exponent(int dim, double ainfty);

struct ReverseHolderReport {
    double delta = 1.0;
    double lhs = 0.0;  // <w^delta>_Q^{1/delta}
    double rhs = 0.0;  // 2 <w>_Q
    bool pass = true;
};

/// Evaluates <w^delta>_Q^{1/delta} <= 2 <w>_Q at the given exponent.
ReverseHolderReport reverse_holder_check(const Weight& w, const Cube& q, double delta);

/// Same, at the exponent derived from [w]_{A_inf} (computed with the default collection).
ReverseHolderReport reverse_holder_check(const Weight& w, const Cube& q);

struct RubioParams {
    int terms = 40;             // K
    int power_iterations = 20;
    double safety = 1.5;
    std::uint64_t seed = 0;
};

struct RubioResult {
    GridFunction r;
    double s_norm = 0.0;        // the operator-norm estimate actually used
    double power_estimate = 0.0;  // raw power-iteration value before the safety factor
    int restarts = 0;           // times the estimate was raised during summation
};

/// S(h) = v^{-1/p} M(h v^{1/p}).
GridFunction rubio_step(const GridFunction& h, const Weight& v, double p, const MaximalPolicy& policy);

/// Power-iteration estimate of the L^p(v) norm of S (without safety factor).
double rubio_operator_norm(const Weight& v, double p, const MaximalPolicy& policy, int iterations,
                           std::uint64_t seed);

/**
 * R(h) = sum_{k=0}^{K} 2^{-k} S^k h / ||S||^k. If some observed ratio
 * ||S^k h|| / ||S^{k-1} h|| exceeds the estimate, the estimate is raised to that
 * ratio times the safety factor and the sum restarts. Throws std::invalid_argument
 * for h with negative values.
 */
RubioResult rubio_de_francia(const GridFunction& h, const Weight& v, double p, const RubioParams& params,
                             const MaximalPolicy& policy);
RubioResult rubio_de_francia(const GridFunction& h, const Weight& v, double p, const RubioParams& params = {});

/// w(x) = max(|x - center|, h/2)^a at cell centres.
Weight power_weight(const Domain& dom, double a, std::array<double, 2> center = {0.0, 0.0});

}  // namespace sparsedom

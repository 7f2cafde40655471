#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/operator.hpp"
#include "sparsedom/singular.hpp"

namespace sparsedom {

/// One indicator per domain cell.
using CellSet = std::vector<std::uint8_t>;

std::int64_t count(const CellSet& e);
std::int64_t count_in(const Domain& dom, const CellSet& e, const Cube& q);

/// A sparsity constant as an exact fraction, so |E_Q| >= eta |Q| is decided in integers.
struct Density {
    std::int64_t num = 1;
    std::int64_t den = 2;

    double value() const { return double(num) / double(den); }
    bool admits(std::int64_t part, std::int64_t whole) const { return part * den >= num * whole; }
    std::string str() const;
    /// Best rational approximation with denominator <= 10^9 (recovers 1/162 from 0.5/81).
    static Density from_double(double v);
    /// Accepts "a/b" or a decimal.
    static Density parse(const std::string& text);
};

/// ½ · 9^{-d}.
Density global_density(int dim);

/// A run of cells along the last axis starting at `start`.
struct Span {
    Index start{0, 0};
    int length = 0;
};

/// Cubes with a certificate: pairwise disjoint E_Q (as spans of lattice cells, possibly outside the domain).
struct SparseFamily {
    int dim = 1;
    std::vector<Cube> cubes;
    std::vector<std::vector<Span>> certificate;
    Density eta;
};

std::int64_t certificate_cells(const std::vector<Span>& spans);

struct CertifyResult {
    bool ok = false;
    SparseFamily family;                  // certificate filled as far as it was built
    std::optional<std::size_t> violating;  // index into the input cube list
    std::string message;
    std::string method;  // "greedy" or "matching"
};

/**
 * Greedy certificate: cubes in decreasing size (input order among equals);
 * E_Q = cells of Q not covered by a strictly smaller family cube and not yet
 * claimed. Fails with the first cube whose E_Q is too small.
 */
CertifyResult certify_greedy(const std::vector<Cube>& cubes, Density eta, int dim);

/**
 * Exact cell-level decision: assigns each Q ceil(eta |Q|) cells of its own by
 * augmenting paths, so it fails only when no certificate exists at all.
 */
CertifyResult certify_matching(const std::vector<Cube>& cubes, Density eta, int dim);

/// certify_greedy, falling back to certify_matching when the greedy choice fails.
CertifyResult certify_sparsity(const std::vector<Cube>& cubes, Density eta, int dim);

/// Checks a stored certificate: spans inside their cube, pairwise disjoint, |E_Q| >= eta |Q|.
CertifyResult verify_certificate(const SparseFamily& family);

/**
 * Maximal dyadic subcubes P of q0 with |P ∩ E| > level |P|. Throws
 * std::domain_error("exceptional set too large") when |E ∩ q0| > level |q0|.
 */
std::vector<Cube> cz_decompose_set(const Domain& dom, const CellSet& e, const Cube& q0, double level);

/**
 * How the threshold D of a node is chosen. doubling: the first D = 2^k, k >= 0,
 * with |E| <= |Q0|/2^{d+2}. minimal: the least D with that property, read off the
 * sorted threshold ratios of the node; it is still capped at 2^{max_doublings}.
 */
enum class Calibration { doubling, minimal };

struct DecomposeParams {
    double r = 1.25;          // exponent of the g side; the maximal operators use r'
    double beta1 = 1.0;
    double beta2 = 0.0;
    int max_doublings = 40;
    Calibration calibration = Calibration::minimal;
};


/// Everything about one node that the threshold D does not change.
struct ExceptionalProfile {
    Cube q0;
    std::vector<double> v;   // T1 T2 (f chi_{9Q0}) on q0, row-major over q0 ∩ domain
    std::vector<double> m2;  // local M_{T2, r'; Q0} f on q0
    std::vector<double> m3;  // local M*_{T1 T2, r'; Q0} f on q0
    double norm1 = 0.0;      // ||f||_{L(log L)^{beta1}, 9Q0}
    double norm2 = 0.0;      // ||f||_{L(log L)^{beta2}, 9Q0}
};

ExceptionalProfile exceptional_profile(const LinearOperator& t1, const LinearOperator& t2, const GridFunction& f,
                                       const Cube& q0, const DecomposeParams& params);

struct ExceptionalSets {
    CellSet e1, e2, e3, e;
};

ExceptionalSets exceptional_sets(const Domain& dom, const ExceptionalProfile& profile, double d);

/// The threshold D chosen for a node profile; throws std::runtime_error("calibration divergence").
double calibrate_threshold(const Domain& dom, const ExceptionalProfile& profile, const DecomposeParams& params);

ExceptionalSets exceptional_sets(const LinearOperator& t1, const LinearOperator& t2, const GridFunction& f,
                                 const Cube& q0, double r, double d);

struct DecompositionResult {
    std::vector<Cube> tree;            // the stopping family F inside the root, parents before children
    std::vector<int> parent;           // -1 for the root
    std::vector<double> calibrated_d;  // per node (0 where f chi_{9Q} vanished)
    std::vector<std::int64_t> exceptional_cells;
    SparseFamily tree_family;          // F with E_Q = Q minus its children, eta = 1/2
    SparseFamily family;               // {9Q : Q in F} with E_{9Q} = E_Q, eta = ½·9^{-d}
    GridFunction h1, h2;
    int depth = 0;
    std::vector<int> level_counts;     // tree nodes per recursion depth
};

/**
 * The recursive decomposition T1 T2 f = H1 + H2 over the root cube of the domain.
 * Throws std::runtime_error("calibration divergence") if no D <= 2^{max_doublings}
 * gives |E| <= |Q0| / 2^{d+2}.
 */
DecompositionResult sparse_decompose(const LinearOperator& t1, const LinearOperator& t2, const GridFunction& f,
                                     const DecomposeParams& params = {});

/// sum over the family of |Q| ||f||_{L(log L)^beta, Q} <|g|>_{Q,r}.
double bilinear_form_orlicz(const std::vector<Cube>& family, const GridFunction& f, const GridFunction& g,
                            double beta, double r);

/// sum over the family of |Q| <|f|>_{Q,r1} <|g|>_{Q,r2}.
double bilinear_form_lr(const std::vector<Cube>& family, const GridFunction& f, const GridFunction& g, double r1,
                        double r2);

struct CompositionSplit {
    GridFunction j1, j2;
    DecompositionResult decomposition;
};

/// sparse_decompose with T1 = T_{Omega1}, T2 = T_{Omega2}, beta1 = 1, beta2 = 0. Requires r in (1, 3/2].
CompositionSplit split_composition(const KernelOmega& omega1, const KernelOmega& omega2, const GridFunction& f,
                                   double r, const PvParams& pv = {},
                                   Calibration calibration = Calibration::minimal);

}  // namespace sparsedom

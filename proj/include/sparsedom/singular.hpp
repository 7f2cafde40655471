#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/operator.hpp"

namespace sparsedom {

enum class KernelKind { riesz, odd_harmonic, random_mean_zero };

struct KernelSpec {
    KernelKind kind = KernelKind::riesz;
    int axis = 0;            // riesz
    int harmonic = 1;        // odd_harmonic: cos(k theta), k odd
    std::uint64_t seed = 0;  // random_mean_zero
    int samples = 256;       // angular samples for d = 2

    std::string describe() const;
};

/**
 * A bounded, mean-zero function on the unit sphere S^{d-1}, extended
 * homogeneously of degree zero.
 *
 * d = 1: the two values Omega(+1), Omega(-1). d = 2: samples at the angles
 * 2 pi k / n, linearly interpolated.
 */
class KernelOmega {
public:
    KernelOmega(int dim, std::vector<double> samples, KernelSpec spec);

    int dim() const { return dim_; }
    const KernelSpec& spec() const { return spec_; }
    const std::vector<double>& samples() const { return samples_; }
    double sup_norm() const { return sup_norm_; }
    /// Trapezoid mean over the sphere (the plain sample mean; for d = 1 the average of the two values).
    double sphere_mean() const;

    /// Omega(x / |x|) for x != 0.
    double operator()(double x0, double x1 = 0.0) const;

private:
    int dim_;
    std::vector<double> samples_;
    KernelSpec spec_;
    double sup_norm_;
};

/**
 * Builds a kernel and projects it to mean zero. Random kernels are additionally
 * scaled to sup norm 1. Throws std::invalid_argument for an all-zero kernel.
 */
KernelOmega make_kernel(int dim, const KernelSpec& spec);

/// Hilbert kernel for d = 1 (Omega(+1) = 1, Omega(-1) = -1), Riesz kernel x_axis/|x| otherwise.
KernelOmega riesz_kernel(int dim, int axis = 0);

struct PvParams {
    int exclusion_radius = 1;  // lattice offsets with |offset| < radius (in cells) are skipped
};

/**
 * Discrete principal-value convolution
 *   (T f)(x) = h^d sum_{y : |x - y| >= rho h} Omega(x - y) |x - y|^{-d} f(y)
 * with cell-centre abscissae and zero extension. The kernel table is built once
 * per domain; the summation order within an output cell is fixed.
 */
class ConvolutionOperator final : public LinearOperator {
public:
    ConvolutionOperator(const Domain& dom, KernelOmega omega, PvParams params = {});

    GridFunction apply(const GridFunction& f) const override;
    std::vector<double> apply_on(const GridFunction& f, const Cube& target) const override;
    std::string name() const override;

    const KernelOmega& kernel() const { return omega_; }
    const Domain& domain() const { return dom_; }
    /// Kernel weight for a lattice offset (already multiplied by h^d).
    double weight(int d0, int d1 = 0) const;

private:
    void accumulate(const GridFunction& f, const std::vector<std::size_t>& targets, std::vector<double>& out) const;

    Domain dom_;
    KernelOmega omega_;
    PvParams params_;
    int span_;  // 2N - 1
    std::vector<double> table_;
};

GridFunction t_omega(const KernelOmega& omega, const GridFunction& f, const PvParams& params = {});

/// t_omega(omega1, t_omega(omega2, f)).
GridFunction compose(const KernelOmega& omega1, const KernelOmega& omega2, const GridFunction& f,
                     const PvParams& params = {});

/// The factor relating the p.v. operator with Omega = x_j/|x| to the Riesz transform: 1/c_d.
double riesz_normalization(int dim);

/**
 * Fourier-multiplier evaluation of the Riesz/Hilbert operator with symbol
 * -i (1/c_d) xi_axis / |xi| on the periodic extension of f. The grid is
 * zero-padded by `padding` per axis before the periodic transform, so the model
 * approximates the non-periodic operator on the original window. Throws
 * std::invalid_argument("no closed-form symbol") for other kernels.
 */
GridFunction spectral_oracle(const KernelOmega& omega, const GridFunction& f, int padding = 4);

}  // namespace sparsedom

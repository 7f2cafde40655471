#include "sparsedom/singular.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sparsedom/parallel.hpp"

namespace sparsedom {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Samples of an odd function on the circle, with the second half set to the
// exact negation of the first so lattice cancellations stay clean.
std::vector<double> odd_samples(int n, const std::function<double(double)>& fn) {
    std::vector<double> s(std::size_t(n), 0.0);
    const int half = n / 2;
    for (int k = 0; k < half; ++k) {
        s[std::size_t(k)] = fn(two_pi * k / n);
        s[std::size_t(k + half)] = -s[std::size_t(k)];
    }
    return s;
}

}  // namespace

std::string KernelSpec::describe() const {
    switch (kind) {
        case KernelKind::riesz: return "riesz(" + std::to_string(axis) + ")";
        case KernelKind::odd_harmonic: return "odd_harmonic(" + std::to_string(harmonic) + ")";
        case KernelKind::random_mean_zero:
            return "random_mean_zero(" + std::to_string(seed) + "," + std::to_string(samples) + ")";
    }
    return "?";
}

KernelOmega::KernelOmega(int dim, std::vector<double> samples, KernelSpec spec)
    : dim_(dim), samples_(std::move(samples)), spec_(spec), sup_norm_(0.0) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("kernel dimension must be 1 or 2");
    if (dim_ == 1 && samples_.size() != 2) throw std::invalid_argument("d = 1 kernel needs two values");
    if (dim_ == 2 && samples_.size() < 4) throw std::invalid_argument("too few angular samples");
    for (double v : samples_) sup_norm_ = std::max(sup_norm_, std::abs(v));
}

double KernelOmega::sphere_mean() const {
    double s = 0.0;
    for (double v : samples_) s += v;
    return s / double(samples_.size());
}

double KernelOmega::operator()(double x0, double x1) const {
    if (dim_ == 1) return x0 > 0 ? samples_[0] : samples_[1];
    double theta = std::atan2(x1, x0);
    if (theta < 0) theta += two_pi;
    const double n = double(samples_.size());
    const double pos = theta / two_pi * n;
    double fl = std::floor(pos);
    const double frac = pos - fl;
    std::size_t i = std::size_t(fl) % samples_.size();
    std::size_t j = (i + 1) % samples_.size();
    if (frac == 0.0) return samples_[i];
    return (1.0 - frac) * samples_[i] + frac * samples_[j];
}

KernelOmega make_kernel(int dim, const KernelSpec& spec) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("kernel dimension must be 1 or 2");
    std::vector<double> s;
    const int n = spec.samples;
    if (dim == 2 && (n < 4 || n % 2 != 0)) throw std::invalid_argument("angular sample count must be even and >= 4");
    switch (spec.kind) {
        case KernelKind::riesz:
            if (spec.axis < 0 || spec.axis >= dim) throw std::invalid_argument("riesz axis out of range");
            if (dim == 1) {
                s = {1.0, -1.0};
            } else {
                s = odd_samples(n, [&](double t) { return spec.axis == 0 ? std::cos(t) : std::sin(t); });
            }
            break;
        case KernelKind::odd_harmonic:
            if (spec.harmonic < 1 || spec.harmonic % 2 == 0) throw std::invalid_argument("harmonic must be odd and positive");
            if (dim == 1) {
                s = {1.0, -1.0};
            } else {
                s = odd_samples(n, [&](double t) { return std::cos(spec.harmonic * t); });
            }
            break;
        case KernelKind::random_mean_zero: {
            std::mt19937_64 rng(spec.seed);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            s.resize(dim == 1 ? 2 : std::size_t(n));
            for (double& v : s) v = u(rng);
            break;
        }
    }
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= double(s.size());
    if (mean != 0.0) {
        for (double& v : s) v -= mean;
    }
    double top = 0.0;
    for (double v : s) top = std::max(top, std::abs(v));
    if (top == 0.0) throw std::invalid_argument("all-zero kernel");
    if (spec.kind == KernelKind::random_mean_zero) {
        for (double& v : s) v /= top;
        // Re-centre after scaling; the scaling can leave a last-bit residue.
        double m2 = 0.0;
        for (double v : s) m2 += v;
        m2 /= double(s.size());
        for (double& v : s) v -= m2;
    }
    return KernelOmega(dim, std::move(s), spec);
}

KernelOmega riesz_kernel(int dim, int axis) {
    KernelSpec spec;
    spec.kind = KernelKind::riesz;
    spec.axis = axis;
    return make_kernel(dim, spec);
}

ConvolutionOperator::ConvolutionOperator(const Domain& dom, KernelOmega omega, PvParams params)
    : dom_(dom), omega_(std::move(omega)), params_(params), span_(2 * dom.n() - 1) {
    if (omega_.dim() != dom.dim()) throw std::invalid_argument("kernel and domain dimensions differ");
    if (params_.exclusion_radius < 1) throw std::invalid_argument("exclusion radius must be >= 1");
    const int n = dom.n();
    const double rho2 = double(params_.exclusion_radius) * params_.exclusion_radius;
    // |x - y|^{-d} h^d with |x - y| = |offset| h: the powers of h cancel.
    if (dom.dim() == 1) {
        table_.assign(std::size_t(span_), 0.0);
        for (int a = -(n - 1); a <= n - 1; ++a) {
            if (double(a) * a < rho2) continue;
            table_[std::size_t(a + n - 1)] = omega_(double(a)) / std::abs(double(a));
        }
    } else {
        table_.assign(std::size_t(span_) * std::size_t(span_), 0.0);
        for (int a = -(n - 1); a <= n - 1; ++a) {
            for (int b = -(n - 1); b <= n - 1; ++b) {
                const double r2 = double(a) * a + double(b) * b;
                if (r2 < rho2) continue;
                table_[std::size_t(a + n - 1) * std::size_t(span_) + std::size_t(b + n - 1)] =
                    omega_(double(a), double(b)) / r2;
            }
        }
    }
}

double ConvolutionOperator::weight(int d0, int d1) const {
    const int n = dom_.n();
    if (std::abs(d0) >= n || std::abs(d1) >= n) return 0.0;
    if (dom_.dim() == 1) return table_[std::size_t(d0 + n - 1)];
    return table_[std::size_t(d0 + n - 1) * std::size_t(span_) + std::size_t(d1 + n - 1)];
}

void ConvolutionOperator::accumulate(const GridFunction& f, const std::vector<std::size_t>& targets,
                                     std::vector<double>& out) const {
    const auto v = f.values();
    std::vector<std::size_t> src;
    std::vector<double> val;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] != 0.0) {
            src.push_back(k);
            val.push_back(v[k]);
        }
    }
    out.assign(targets.size(), 0.0);
    if (src.empty()) return;
    const int n = dom_.n();
    const std::size_t span = std::size_t(span_);
    if (dom_.dim() == 1) {
        parallel_for(targets.size(), [&](std::size_t t) {
            const long x = long(targets[t]);
            double s = 0.0;
            for (std::size_t i = 0; i < src.size(); ++i)
                s += table_[std::size_t(x - long(src[i]) + n - 1)] * val[i];
            out[t] = s;
        });
        return;
    }
    std::vector<int> si(src.size()), sj(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        si[i] = int(src[i] / std::size_t(n));
        sj[i] = int(src[i] % std::size_t(n));
    }
    parallel_for(targets.size(), [&](std::size_t t) {
        const int x0 = int(targets[t] / std::size_t(n)) + n - 1;
        const int x1 = int(targets[t] % std::size_t(n)) + n - 1;
        double s = 0.0;
        for (std::size_t i = 0; i < src.size(); ++i)
            s += table_[std::size_t(x0 - si[i]) * span + std::size_t(x1 - sj[i])] * val[i];
        out[t] = s;
    });
}

GridFunction ConvolutionOperator::apply(const GridFunction& f) const {
    if (!(f.domain() == dom_)) throw std::invalid_argument("operator applied on a foreign domain");
    std::vector<std::size_t> targets(dom_.cell_count());
    for (std::size_t k = 0; k < targets.size(); ++k) targets[k] = k;
    std::vector<double> out;
    accumulate(f, targets, out);
    return GridFunction(dom_, std::move(out));
}

std::vector<double> ConvolutionOperator::apply_on(const GridFunction& f, const Cube& target) const {
    if (!(f.domain() == dom_)) throw std::invalid_argument("operator applied on a foreign domain");
    std::vector<std::size_t> targets;
    targets.reserve(std::size_t(clip(dom_, target).cells()));
    for_each_cell(dom_, target, [&](std::size_t k) { targets.push_back(k); });
    std::vector<double> out;
    accumulate(f, targets, out);
    return out;
}

std::string ConvolutionOperator::name() const { return "T[" + omega_.spec().describe() + "]"; }

GridFunction t_omega(const KernelOmega& omega, const GridFunction& f, const PvParams& params) {
    return ConvolutionOperator(f.domain(), omega, params).apply(f);
}

GridFunction compose(const KernelOmega& omega1, const KernelOmega& omega2, const GridFunction& f,
                     const PvParams& params) {
    return t_omega(omega1, t_omega(omega2, f, params), params);
}

double riesz_normalization(int dim) {
    const double d = double(dim);
    return std::pow(std::numbers::pi, (d + 1.0) / 2.0) / std::tgamma((d + 1.0) / 2.0);
}

GridFunction spectral_oracle(const KernelOmega& omega, const GridFunction& f, int padding) {
    if (omega.spec().kind != KernelKind::riesz) throw std::invalid_argument("no closed-form symbol");
    if (padding < 1) throw std::invalid_argument("padding must be >= 1");
    const Domain& dom = f.domain();
    const int n = dom.n();
    const int m = n * padding;
    const int dim = dom.dim();
    const int axis = omega.spec().axis;
    const double c = riesz_normalization(dim);
    const std::size_t real_size = dim == 1 ? std::size_t(m) : std::size_t(m) * std::size_t(m);
    const std::size_t half = std::size_t(m / 2 + 1);
    const std::size_t complex_size = dim == 1 ? half : std::size_t(m) * half;

    double* in = fftw_alloc_real(real_size);
    fftw_complex* spec = fftw_alloc_complex(complex_size);
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        if (dim == 1) {
            fwd = fftw_plan_dft_r2c_1d(m, in, spec, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_1d(m, spec, in, FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_r2c_2d(m, m, in, spec, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_2d(m, m, spec, in, FFTW_ESTIMATE);
        }
    }
    std::fill(in, in + real_size, 0.0);
    const auto v = f.values();
    if (dim == 1) {
        for (int i = 0; i < n; ++i) in[i] = v[std::size_t(i)];
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                in[std::size_t(i) * std::size_t(m) + std::size_t(j)] = v[std::size_t(i) * std::size_t(n) + std::size_t(j)];
    }
    fftw_execute(fwd);

    // Signed frequency; the Nyquist index gets a zero symbol component.
    auto freq = [m](int i) { return i < m / 2 ? i : (i == m / 2 ? 0 : i - m); };
    auto multiply = [&](std::size_t k, double xi_axis, double xi_norm) {
        if (xi_norm == 0.0) {
            spec[k][0] = spec[k][1] = 0.0;
            return;
        }
        // (a + ib) * (-i s) = s b - i s a
        const double s = c * xi_axis / xi_norm;
        const double re = spec[k][0], im = spec[k][1];
        spec[k][0] = s * im;
        spec[k][1] = -s * re;
    };
    if (dim == 1) {
        for (std::size_t k = 0; k < half; ++k) {
            const double xi = double(freq(int(k)));
            multiply(k, xi, std::abs(xi));
        }
    } else {
        for (int i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < half; ++j) {
                const double a = double(freq(i)), b = double(freq(int(j)));
                const double nyq_a = (i == m / 2) ? double(m / 2) : a;
                const double nyq_b = (int(j) == m / 2) ? double(m / 2) : b;
                multiply(std::size_t(i) * half + j, axis == 0 ? a : b, std::hypot(nyq_a, nyq_b));
            }
        }
    }
    fftw_execute(bwd);

    GridFunction out(dom);
    const double scale = 1.0 / double(real_size);
    if (dim == 1) {
        for (int i = 0; i < n; ++i) out[std::size_t(i)] = in[i] * scale;
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out[std::size_t(i) * std::size_t(n) + std::size_t(j)] =
                    in[std::size_t(i) * std::size_t(m) + std::size_t(j)] * scale;
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    fftw_free(in);
    fftw_free(spec);
    return out;
}

}  // namespace sparsedom

#include "sparsedom/ensemble.hpp"

#include <cmath>
#include <random>

namespace sparsedom {

namespace {

// Coordinates in units of the domain side, centred: u in [-1/2, 1/2)^d.
std::array<double, 2> unit_coords(const Domain& dom, std::size_t k) {
    const auto x = dom.center(dom.index(k));
    const auto o = dom.origin();
    const double l = dom.side();
    return {(x[0] - o[0]) / l - 0.5, dom.dim() == 1 ? 0.0 : (x[1] - o[1]) / l - 0.5};
}

double smooth_bump(double r2) { return r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0; }

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t salt) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(salt)};
    return std::mt19937_64(seq);
}

// Value of a piecewise-constant random field on a partition of [lo, hi)^d into
// `parts` pieces per axis; zero outside.
GridFunction coarse_signs(const Domain& dom, std::mt19937_64& rng, double lo, double hi, int parts) {
    const int cells = dom.dim() == 1 ? parts : parts * parts;
    std::vector<double> vals(std::size_t(cells), 0.0);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_real_distribution<double> mag(0.5, 1.0);
    for (double& v : vals) v = (coin(rng) ? 1.0 : -1.0) * mag(rng);
    GridFunction out(dom);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto u = unit_coords(dom, k);
        bool in = u[0] >= lo && u[0] < hi && (dom.dim() == 1 || (u[1] >= lo && u[1] < hi));
        if (!in) continue;
        const int i = std::min(parts - 1, int((u[0] - lo) / (hi - lo) * parts));
        const int j = dom.dim() == 1 ? 0 : std::min(parts - 1, int((u[1] - lo) / (hi - lo) * parts));
        out[k] = vals[std::size_t(i) * std::size_t(dom.dim() == 1 ? 1 : parts) + std::size_t(j)];
    }
    return out;
}

}  // namespace

std::string to_string(FKind k) {
    switch (k) {
        case FKind::bump: return "bump";
        case FKind::dyadic_indicator: return "dyadic_indicator";
        case FKind::random_signs: return "random_signs";
    }
    return "?";
}

std::string to_string(GKind k) { return k == GKind::random_signs ? "random_signs" : "shifted_bump"; }

FKind f_kind_for(std::uint64_t seed) { return FKind(seed % 3); }
GKind g_kind_for(std::uint64_t seed) { return GKind(seed % 2); }

GridFunction make_f(const Domain& dom, FKind kind, std::uint64_t seed) {
    auto rng = rng_for(seed, 0xf0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GridFunction out(dom);
    switch (kind) {
        case FKind::bump: {
            // Radius in [1/12, 1/8]; the centre keeps the support inside the central third.
            const double radius = 1.0 / 12.0 + unit(rng) / 24.0;
            const double slack = 1.0 / 6.0 - radius;
            const double c0 = (2.0 * unit(rng) - 1.0) * slack, c1 = (2.0 * unit(rng) - 1.0) * slack;
            const double amp = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + unit(rng));
            for (std::size_t k = 0; k < out.size(); ++k) {
                const auto u = unit_coords(dom, k);
                const double r2 = ((u[0] - c0) * (u[0] - c0) + (dom.dim() == 1 ? 0.0 : (u[1] - c1) * (u[1] - c1))) /
                                  (radius * radius);
                out[k] = amp * smooth_bump(r2);
            }
            break;
        }
        case FKind::dyadic_indicator: {
            // A dyadic piece of side 1/8: [-1/8, 0) or [0, 1/8) per axis.
            std::uniform_int_distribution<int> pick(0, 1);
            const double a0 = -0.125 + pick(rng) / 8.0, a1 = -0.125 + pick(rng) / 8.0;
            const double amp = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + unit(rng));
            for (std::size_t k = 0; k < out.size(); ++k) {
                const auto u = unit_coords(dom, k);
                const bool in = u[0] >= a0 && u[0] < a0 + 0.125 &&
                                (dom.dim() == 1 || (u[1] >= a1 && u[1] < a1 + 0.125));
                out[k] = in ? amp : 0.0;
            }
            break;
        }
        case FKind::random_signs:
            out = coarse_signs(dom, rng, -1.0 / 6.0, 1.0 / 6.0, 4);
            break;
    }
    return out;
}

GridFunction make_f(const Domain& dom, std::uint64_t seed) { return make_f(dom, f_kind_for(seed), seed); }

GridFunction make_g(const Domain& dom, GKind kind, std::uint64_t seed) {
    auto rng = rng_for(seed, 0x9a);
    if (kind == GKind::random_signs) return coarse_signs(dom, rng, -0.5, 0.5, 16);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double c0 = (unit(rng) - 0.5) * 0.5, c1 = (unit(rng) - 0.5) * 0.5;
    GridFunction out(dom);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto u = unit_coords(dom, k);
        const double r2 = ((u[0] - c0) * (u[0] - c0) + (dom.dim() == 1 ? 0.0 : (u[1] - c1) * (u[1] - c1))) / (0.125 * 0.125);
        out[k] = smooth_bump(r2);
    }
    return out;
}

GridFunction make_g(const Domain& dom, std::uint64_t seed) { return make_g(dom, g_kind_for(seed), seed); }

GridFunction centered_bump(const Domain& dom, double radius) {
    GridFunction out(dom);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto u = unit_coords(dom, k);
        out[k] = smooth_bump((u[0] * u[0] + u[1] * u[1]) / (radius * radius));
    }
    return out;
}

GridFunction make_nonnegative(const Domain& dom, std::uint64_t seed) {
    GridFunction f = make_f(dom, seed).abs();
    for (double& v : f.values()) {
        if (v > 0.0) v += 0.05;
    }
    return f;
}

}  // namespace sparsedom

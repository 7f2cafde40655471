#pragma once

#include <cstdint>
#include <string>

#include "sparsedom/grid.hpp"

namespace sparsedom {

// Test functions are defined in physical coordinates relative to the domain, so
// one seed describes the same continuum function at every resolution. The f
// family is supported in the central third of the domain.

enum class FKind { bump, dyadic_indicator, random_signs };
enum class GKind { random_signs, shifted_bump };

std::string to_string(FKind k);
std::string to_string(GKind k);

/// The kind used for a seed when none is requested: cycles through the family.
FKind f_kind_for(std::uint64_t seed);
GKind g_kind_for(std::uint64_t seed);

GridFunction make_f(const Domain& dom, FKind kind, std::uint64_t seed);
GridFunction make_f(const Domain& dom, std::uint64_t seed);
GridFunction make_g(const Domain& dom, GKind kind, std::uint64_t seed);
GridFunction make_g(const Domain& dom, std::uint64_t seed);

/// exp(1 - 1/(1 - |u/radius|^2)) at the domain centre; radius in units of the domain side.
GridFunction centered_bump(const Domain& dom, double radius);

/// Non-negative variant of make_f (absolute value plus a small floor on the support), for Rubio de Francia inputs.
GridFunction make_nonnegative(const Domain& dom, std::uint64_t seed);

}  // namespace sparsedom

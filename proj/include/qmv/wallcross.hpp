// Slope stability and the wall-crossing recursion: converts classes of
// all-representation stacks into semistable stack classes and stable moduli
// classes over a localized double quiver.
//
// Stability parameters and dimension vectors for the graded pipeline are
// keyed by graded ids ("1@0"); helpers convert to the nested graded form.

#ifndef QMV_WALLCROSS_HPP
#define QMV_WALLCROSS_HPP

#include <functional>

#include "qmv/stackmotive.hpp"

namespace qmv {

DimVector flatten_graded(const GradedDim& v);
GradedDim unflatten_graded(const DimVector& v);

// mu_theta(v) = theta.v / rho.v with rho = (1,...,1); v must be nonzero.
Rat slope(const StabilityParam& theta, const DimVector& v);

// true iff no proper nonzero subvector 0 < u < v has mu(u) = mu(v).
bool is_generic(const StabilityParam& theta, const DimVector& v);

// All ordered tuples of nonzero dimension vectors summing to v whose proper
// prefix sums all satisfy keep_prefix (pass nullptr for no constraint).
// Deterministic order; each tuple exactly once.
std::vector<std::vector<DimVector>> enumerate_decompositions(
    const DimVector& v, const std::function<bool(const DimVector&)>& keep_prefix);

// nu(u, v) = -chi(v, u) - chi(u, v^tau) with chi the Euler form of the graded
// cut subquiver.
Int nu_form(const LocalizedQuiver& g, const GradedDim& u, const GradedDim& v);

// Class of the stack of theta-semistable representations with slope mu(v):
//   [SS(v)] = Σ (-1)^{n-1} L^{Σ_{i<j} nu(v_i,v_j)} Π [Stack(v_i)]
// over ordered decompositions whose proper prefix sums have slope > mu(v).
// Requires theta to be tau-symmetric (constant along vertex fibers mod e).
// Total dimension is capped at 8.
ClassReport semistable_stack_class(const LocalizedQuiver& g, const StabilityParam& theta,
                                   const GradedDim& v);

// (L-1) * semistable_stack_class for generic theta; always reduces to a
// Laurent polynomial, and throws if theta is not v-generic.
ClassReport stable_variety_class(const LocalizedQuiver& g, const StabilityParam& theta,
                                 const GradedDim& v);

}  // namespace qmv

#endif

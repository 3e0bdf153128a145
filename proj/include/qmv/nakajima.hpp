// Motivic classes of framed moduli of mesh-algebra representations, computed
// by three independent routes that must agree:
//   1. a fixed-locus/attractor decomposition over a weight grading, with
//      component classes from the wall-crossing inversion,
//   2. the same decomposition with component classes from a Grassmannian
//      kernel-stratification recursion,
//   3. a generating series over partition tuples (fermionic form).
//
// The framed setting: base quiver Q, framing multiplicities w.  The framed
// base R has one extra vertex "*" and w_i arrows "*>i#k"; everything runs on
// the localized double of R with arrow weights r = sum(v)+1 on the cut and 1
// on the reversals, period e = r+1.  Framing stays in a single degree, which
// keeps the twisted dimension vector away from every degree shift.

#ifndef QMV_NAKAJIMA_HPP
#define QMV_NAKAJIMA_HPP

#include <optional>

#include "qmv/wallcross.hpp"

namespace qmv {

// chi(x, y) = sum_i x_i y_i - sum_{a in cut} x_{src a} y_{tgt a}.
Int cut_euler_form(const TranslationQuiver& g, const DimVector& x, const DimVector& y);

// Dimension of the framed moduli: w.(v + v^tau) - chi(v, v + v^tau).
long long dim_framed(const TranslationQuiver& g, const DimVector& v, const DimVector& w);
// Dimension of the unframed stable moduli: 1 - chi(v, v + v^tau).
long long dim_stable_moduli(const TranslationQuiver& g, const DimVector& v);

// One fixed locus piece of the weight torus action: a graded lift of the
// ambient dimension vector, normalized so the framing sits in degree 0.
struct FixedComponent {
    GradedDim lift;
    DimVector ambient;
};

// All lifts of `ambient` (framing entry must be 1) whose support is reachable
// from the framing seed through arrows of the support, one representative per
// degree-shift class, enumerated inside the window |deg| <= total*( |e|+1 ).
// Requires strictly positive arrow weights.
std::vector<FixedComponent> fixed_components(const LocalizedQuiver& g, const std::string& framing,
                                             const DimVector& ambient);

// Weight-n dimensions of the deformation space of the component `v`:
//   h1_n = [n == 0] - chi(v, v<n>) - chi(v<n>, v^tau),
// where v<n> shifts all degrees up by n.  With a framing vertex given, its
// twist leaves every shifted slice, so only the other vertices twist.
// Without one, a shift collision v^tau == v<n> is an error.  All values are
// checked nonnegative; zero entries are dropped.
std::map<long long, long long> tangent_weight_dims(const LocalizedQuiver& g, const GradedDim& v,
                                                   const std::optional<std::string>& framing);

// Class of the moduli of stable representations generated from the vertex
// `star` (stability 1 at star, 0 elsewhere), for v_star = 1 and v_{tau star})
// = 0, on an acyclic translation quiver: stratify by kernel dimensions along
// a tau-orbit and invert, with Grassmannian fiber factors.
ClassReport grassmann_recursion(const PartialTranslationQuiver& g, const DimVector& v,
                                const std::string& star);

// Attractor sums over the fixed components: the full moduli takes L^{d+} per
// component, the nilpotent (repelling core) one takes L^{d-}, where d+/d- sum
// the positive/negative tangent weight dimensions.
ClassReport framed_class_bb(const Quiver& q, const DimVector& v, const DimVector& w);
ClassReport nilpotent_class_bb(const Quiver& q, const DimVector& v, const DimVector& w);
// Same decomposition, component classes via grassmann_recursion instead of
// wall-crossing.
ClassReport framed_class_grassmann(const Quiver& q, const DimVector& v, const DimVector& w);
ClassReport nilpotent_class_grassmann(const Quiver& q, const DimVector& v, const DimVector& w);

// A collection of partitions, one per base vertex; column k (1-based) is the
// dimension vector of k-th parts.
struct PartitionTuple {
    std::map<std::string, std::vector<long long>> parts;

    void validate() const;  // weakly decreasing positive parts
    size_t rows() const;
    DimVector column(size_t k) const;
    DimVector content() const;  // per-vertex partition sizes
};

// z-power series cut off at a box: coefficients for 0 <= v <= box only.
struct TruncatedSeries {
    DimVector box;
    std::map<DimVector, MotiveClass> coefficients;

    MotiveClass coefficient(const DimVector& v) const;
    void add(const DimVector& v, const MotiveClass& c);
};

// The internal series variable q of the partition-tuple sum is bound to
// either L^{-1} (full moduli series) or L (nilpotent series).  Both bindings
// exist so the tests can pin which one matches the independent algorithms.
enum class SeriesVariable { inverse_lefschetz, lefschetz };

// sum over partition tuples of q^{-w.tau_1 + sum_k chi(tau_k,tau_k)}
//   * prod_k 1/(q)_{tau_k - tau_{k+1}} * z^{content}, divided by the same sum
// at w = 0, truncated to the box.
TruncatedSeries fermionic_quotient(const Quiver& q, const DimVector& w, const DimVector& box,
                                   SeriesVariable variable);

// Both normalized series; coefficient(v) * L^{v.w - chi(v,v)} is the class.
struct FermionicSeries {
    TruncatedSeries moduli;     // q bound to L^{-1}
    TruncatedSeries nilpotent;  // q bound to L
};
FermionicSeries fermionic_series(const Quiver& q, const DimVector& w, const DimVector& box);

// Single-class front ends for the series route.
MotiveClass fermionic_class(const Quiver& q, const DimVector& v, const DimVector& w);
MotiveClass fermionic_nilpotent_class(const Quiver& q, const DimVector& v, const DimVector& w);

}  // namespace qmv

#endif

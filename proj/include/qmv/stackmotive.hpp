// Motivic classes of graded representation varieties and mesh-algebra
// representation stacks over a localized double quiver.
//
// A graded dimension vector assigns finite data (vertex, degree) -> dim.  For
// a fixed vertex and residue class of the degree mod the total weight e, the
// degree components form a chain; chains decompose into shifted intervals
// I_{p,q}, and every class below is a sum over such decompositions of
// L^(hom dims) divided by automorphism classes.

#ifndef QMV_STACKMOTIVE_HPP
#define QMV_STACKMOTIVE_HPP

#include "qmv/oracle.hpp"
#include "qmv/translation.hpp"

namespace qmv {

// vertex -> degree -> dimension, finitely supported, entries >= 0.
using GradedDim = std::map<std::string, std::map<long long, long long>>;

// Dimension of the degree-0 Hom between chain intervals: 1 iff the target
// interval is reachable as quotient-of-sub, i.e. p <= p' <= q <= q'.
// The first call verifies the rule exhaustively against the linear-algebra
// oracle on the window [-3,3] and throws if any value disagrees.
long long hom_dim_interval(long long p, long long q, long long pp, long long qq);

// interval (p, q) -> multiplicity > 0
using IntervalMultiset = std::map<std::pair<long long, long long>, long long>;

// All ways to write a column (finitely supported m -> dim) as a multiset of
// interval indicators.  Deterministic lexicographic order.
std::vector<IntervalMultiset> enumerate_interval_multisets(const std::map<long long, long long>& column);

// [Aut M] for M = ⊕ I^{mult}: L^{dim End M} * Π pochhammer_inv(mult).
MotiveClass aut_class(const IntervalMultiset& m);
// Structural inverse 1/[Aut M] (no reduction needed).
MotiveClass aut_class_inverse(const IntervalMultiset& m);

// Provenance of a computed class: which algorithm produced it from what input.
struct ClassReport {
    MotiveClass value;
    std::string algorithm;
    std::string fingerprint;
};

// Motivic class of the graded representation variety of (q, d) with period e:
// vertices (i, n), arrows a: (i, n - d_a) -> (j, n), chain maps of degree -e.
// e != 0; e < 0 is reduced to -e by flipping the grading.  The result always
// reduces to a Laurent polynomial; failure to reduce throws.
ClassReport r_tau_class(const Quiver& q, const std::map<std::string, long long>& d, long long e,
                        const GradedDim& v);

// Motivic class of the representation variety of the mesh algebra of a
// localized double quiver (rank 1, identity tau on the base, sigma-complete
// cut).  Throws for covers outside that shape.
ClassReport mesh_rep_class(const LocalizedQuiver& g, const GradedDim& v);

// mesh_rep_class divided by Π GL(v_{i,n}): the class of the quotient stack.
ClassReport stack_class(const LocalizedQuiver& g, const GradedDim& v);

// Euler form of the graded cut subquiver on graded dimension vectors:
// Σ x_{i,n} y_{i,n} - Σ_{cut arrows} x_{i,n-d_a} y_{j,n}.
Int graded_euler_cut(const LocalizedQuiver& g, const GradedDim& x, const GradedDim& y);

// Twist of a graded dimension vector: (v^tau)_{i,n} = v_{tau(i), n-e}.
GradedDim twist_graded(const LocalizedQuiver& g, const GradedDim& v);

// Canonical one-line rendering of a graded dimension vector (fingerprints,
// error messages).
std::string render_graded(const GradedDim& v);

}  // namespace qmv

#endif

// Translation-quiver structures and constructions: cuts, twisted doubles,
// repetition and localization covers, framing, stabilized framed quivers,
// mesh relations, potentials and cyclic derivatives.
//
// Conventions.  For an arrow a: i -> j the semitranslation sigma sends a to an
// arrow sigma(a): tau(j) -> i.  A cut is a subset C of the arrows with
// Gamma_1 = C ⊔ sigma(C) and sigma^2(C) = C; epsilon(a) = +1 iff a lies in the
// cut.  Paths are stored in product notation: in the list {p0, p1, ..., pk}
// the rightmost arrow acts first, so source(p_t) = target(p_{t+1}) and the
// composite runs from source(pk) to target(p0).

#ifndef QMV_TRANSLATION_HPP
#define QMV_TRANSLATION_HPP

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qmv/quiver.hpp"

namespace qmv {

// Translation quiver whose tau/sigma may be defined on only part of the
// quiver (framed quivers, boundary of materialized windows).
struct PartialTranslationQuiver {
    Quiver base;
    std::map<std::string, std::string> tau;    // vertex -> vertex, partial
    std::map<std::string, std::string> sigma;  // arrow -> arrow, partial
    bool has_cut = false;
    std::set<std::string> cut;

    bool tau_defined(const std::string& v) const { return tau.count(v) > 0; }
    const std::string& tau_of(const std::string& v) const;
    std::optional<std::string> tau_inv_of(const std::string& v) const;
    bool sigma_defined(const std::string& a) const { return sigma.count(a) > 0; }
    const std::string& sigma_of(const std::string& a) const;
    std::optional<std::string> sigma_inv_of(const std::string& a) const;

    // +1 on the cut, -1 off it; requires a cut.
    int epsilon(const std::string& a) const;

    // Checks the sigma/tau/cut laws wherever the maps are defined.
    void validate() const;
};

// Totality on top of the partial laws: tau and sigma are bijections, and a
// cut (when present) satisfies Gamma_1 = cut ⊔ sigma(cut), sigma^2(cut) = cut.
struct TranslationQuiver : PartialTranslationQuiver {
    void validate() const;
};

// Arrow degrees for a localization cover: d_a + d_{sigma a} = total for every
// arrow, and d is constant on tau-orbits (tau acts on arrows as sigma^2).
struct WeightMap {
    std::map<std::string, long long> d;
    long long total = 0;

    long long of(const std::string& arrow) const {
        auto it = d.find(arrow);
        return it == d.end() ? 0 : it->second;
    }
    void validate(const PartialTranslationQuiver& g) const;
};

// Adds a reversed arrow a*: tau(j) -> i for every arrow a: i -> j, with
// sigma(a) = a*, sigma(a*) = tau(a) and cut Q_1.
TranslationQuiver twisted_double(const Quiver& q, const QuiverAutomorphism& tau);
TranslationQuiver double_quiver(const Quiver& q);

// Lazy Lambda-cover of a finite translation quiver: vertices (x, n) with
// n in Z^rank, arrows a@n: (source(a), n - d_a) -> (target(a), n),
// tau(x, n) = (tau x, n - e).  rank 0 is the base quiver itself.
struct LocalizedQuiver {
    PartialTranslationQuiver base;
    int rank = 0;
    std::map<std::string, std::vector<long long>> weight;  // arrow -> degree in Z^rank
    std::vector<long long> total;                          // e in Z^rank

    std::vector<long long> weight_of(const std::string& arrow) const;
};

LocalizedQuiver as_cover(const PartialTranslationQuiver& g);
LocalizedQuiver localize(const LocalizedQuiver& g, const WeightMap& d);
LocalizedQuiver localize(const TranslationQuiver& g, const WeightMap& d);
// repetition(Q) = localize(double(Q), d(a) = 0, d(a*) = 1).
LocalizedQuiver repetition(const Quiver& q);

// Inclusive degree box, one [lo, hi] pair per Lambda-component.
struct DegreeBox {
    std::vector<long long> lo, hi;
    static DegreeBox interval(long long l, long long h) { return DegreeBox{{l}, {h}}; }
    bool contains(const std::vector<long long>& n) const;
};

// "x@3", "x@3,-1"; the degree is appended after the last '@'.
std::string graded_id(const std::string& base, const std::vector<long long>& deg);
std::pair<std::string, std::vector<long long>> split_graded_id(const std::string& id);

// A finite materialized piece of a lazy quiver.  tau/sigma are left undefined
// where they would leave the window.
struct Window {
    PartialTranslationQuiver tq;
    // materialized id -> (base id, degree); for framing vertices of a stable
    // framed quiver the base id is "*" and the degree is the framing index.
    std::map<std::string, std::pair<std::string, std::vector<long long>>> vertex_origin;
    std::map<std::string, std::pair<std::string, std::vector<long long>>> arrow_origin;
};

Window materialize(const LocalizedQuiver& g, const DegreeBox& box);

// Covering projection data: fiber sums of dimension vectors and fiberwise
// constant lifts of stability parameters (slopes are preserved).
DimVector pushforward_dim(const Window& w, const DimVector& graded);
StabilityParam pullback_theta(const Window& w, const StabilityParam& theta);

// Framing: new vertex "*" with w_i arrows *->i and w_i arrows tau(i)->*;
// tau stays undefined on *; the cut grows by the arrows *->i.
PartialTranslationQuiver frame(const PartialTranslationQuiver& g, const DimVector& w);

// Stable framed quiver: framing line [n], n in Z, with w_{tau^n i} arrows
// [n]->i and tau(i)->[n]; tau[n] = [n-1]; cut grows by all [n]->i.
struct StableFramedQuiver {
    TranslationQuiver base;
    DimVector w;

    // Materializes framing indices lo..hi (all base vertices included).
    Window materialize(long long lo, long long hi) const;
};

StableFramedQuiver stabilize_framed(const TranslationQuiver& g, const DimVector& w);

// Formal Z-linear combination of composable paths (product notation).
struct PathSum {
    std::vector<std::pair<Int, std::vector<std::string>>> terms;

    // Sorts terms, merges equal words, drops zero coefficients.
    void normalize();
    bool operator==(const PathSum& o) const;
    std::string render() const;
};

// Linear combination of cyclic words of arrows, each stored rotated to its
// lexicographically minimal form.
struct Potential {
    std::vector<std::pair<Int, std::vector<std::string>>> terms;

    void add_term(const Int& coeff, std::vector<std::string> word);
    void normalize();
    // Each word must be a composable cycle in q.
    void validate(const Quiver& q) const;
};

// Per vertex j with tau(j) defined: sum over arrows a with target j of
// epsilon(a) * a * sigma(a), a formal path tau(j) -> j.
std::vector<std::pair<std::pair<std::string, std::string>, PathSum>> mesh_relation(
    const PartialTranslationQuiver& g);

// d(word)/d(a): remove each occurrence of a and read the cycle forward from
// the following arrow.
PathSum cyclic_derivative(const Potential& w, const std::string& arrow);

// Sign map relating the mesh relations of two cuts of the same quiver:
// eta(a) = -1 iff a lies in the old cut but not the new one.  Satisfies
// eta(a) * eta(sigma a) = epsilon(a) * epsilon'(a).
std::map<std::string, int> change_cut_sign(const TranslationQuiver& g, const std::set<std::string>& new_cut);

// Induced sub-(partial translation)quiver on a vertex subset.
PartialTranslationQuiver restrict_to(const PartialTranslationQuiver& g, const std::set<std::string>& vertices);

}  // namespace qmv

#endif

// Brute-force cross-checks, independent of the symbolic pipeline: point
// counts of relation varieties over small finite fields, and Hom-space
// dimensions of explicit quiver representations by linear algebra.
//
// Everything here is deliberately dumb and exact.  The point-count oracle
// enumerates every matrix tuple, so it refuses inputs where the total number
// of assignments exceeds 2^24.

#ifndef QMV_ORACLE_HPP
#define QMV_ORACLE_HPP

#include "qmv/translation.hpp"

namespace qmv::oracle {

// Number of representations of q over F_p with the given dimension vector
// satisfying every relation.  Relations are path sums in product notation;
// all terms of one relation must share source and target, and words must be
// nonempty.  p must be prime and p^(total matrix entries) <= 2^24.
Int count_points(const Quiver& q, const DimVector& dim,
                 const std::vector<PathSum>& relations, long long p);

// Representation by explicit rational matrices; mat[a] is dim(tgt) x dim(src),
// missing entries mean the zero matrix (and missing dims mean 0).
struct ExplicitRep {
    DimVector dim;
    std::map<std::string, std::vector<std::vector<Rat>>> mat;

    long long dim_of(const std::string& v) const {
        auto it = dim.find(v);
        return it == dim.end() ? 0 : it->second;
    }
    void validate(const Quiver& q) const;
};

// dim Hom(v, w): intertwiners f with f_tgt . v_a = w_a . f_src for every
// arrow, computed as (sum of f-block sizes) - rank of the constraint matrix.
long long hom_dim(const Quiver& q, const ExplicitRep& v, const ExplicitRep& w);

// Rank over Q by Gaussian elimination; rows may have different lengths only
// if the matrix is empty.
long long rational_rank(std::vector<std::vector<Rat>> m);

}  // namespace qmv::oracle

#endif

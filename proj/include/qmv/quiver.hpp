// Finite quivers with named vertices and arrows, dimension vectors, stability
// parameters, and the line-oriented text format used by the CLI.
//
// Vertices and arrows are identified by strings; ids of materialized
// Z-indexed vertices look like "x@3" (or "x@3,-1" for rank-2 gradings) but
// carry no special meaning here.

#ifndef QMV_QUIVER_HPP
#define QMV_QUIVER_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qmv/ring.hpp"

namespace qmv {

struct Arrow {
    std::string id;
    std::string src;
    std::string tgt;
    bool operator==(const Arrow& o) const { return id == o.id && src == o.src && tgt == o.tgt; }
};

class Quiver {
public:
    void add_vertex(const std::string& id);
    void add_arrow(const std::string& id, const std::string& src, const std::string& tgt);

    bool has_vertex(const std::string& id) const { return vertex_index_.count(id) > 0; }
    bool has_arrow(const std::string& id) const { return arrow_index_.count(id) > 0; }
    const Arrow& arrow(const std::string& id) const;

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    // Arrow ids with the given source / target, in declaration order.
    std::vector<std::string> arrows_from(const std::string& v) const;
    std::vector<std::string> arrows_into(const std::string& v) const;

    bool operator==(const Quiver& o) const { return vertices_ == o.vertices_ && arrows_ == o.arrows_; }

private:
    std::vector<std::string> vertices_;
    std::map<std::string, size_t> vertex_index_;
    std::vector<Arrow> arrows_;
    std::map<std::string, size_t> arrow_index_;
};

// vertex -> nonnegative dimension; missing entries mean zero.  Kept as a plain
// map so graded windows can use the same shape with composite ids.
using DimVector = std::map<std::string, long long>;

// vertex -> exact rational weight.
using StabilityParam = std::map<std::string, Rat>;

// A pair of bijections (vertices, arrows) commuting with source and target.
struct QuiverAutomorphism {
    std::map<std::string, std::string> vertex_map;
    std::map<std::string, std::string> arrow_map;

    static QuiverAutomorphism identity(const Quiver& q);
    void validate(const Quiver& q) const;
    const std::string& vertex(const std::string& v) const;
    const std::string& arrow(const std::string& a) const;
};

long long dim_total(const DimVector& v);
bool dim_is_zero(const DimVector& v);
DimVector dim_add(const DimVector& a, const DimVector& b);
// a - b; throws if the result would have a negative entry.
DimVector dim_sub(const DimVector& a, const DimVector& b);
// True if a <= b entrywise.
bool dim_leq(const DimVector& a, const DimVector& b);
void validate_dimvector(const Quiver& q, const DimVector& v, const std::string& what);

// Euler-Ringel form chi(m, n) = sum_i m_i n_i - sum_{a: i->j} m_i n_j.
Int euler_form(const Quiver& q, const DimVector& m, const DimVector& n);

// (v^tau)_i = v_{tau(i)}; support moves by tau^{-1}.
DimVector twist_dimvector(const std::map<std::string, std::string>& tau_vertex, const DimVector& v);
StabilityParam twist_stability(const std::map<std::string, std::string>& tau_vertex, const StabilityParam& th);

// Parsed contents of a quiver text file.  The base quiver is always present;
// the remaining fields are whatever directives the file carried.
struct QuiverFile {
    Quiver quiver;
    std::map<std::string, std::string> tau;    // vertex -> vertex
    std::map<std::string, std::string> sigma;  // arrow -> arrow
    std::set<std::string> cut;                 // arrow ids
    std::map<std::string, long long> weight;   // arrow -> degree
    DimVector dim;
    StabilityParam theta;
    DimVector framing;
    std::vector<std::string> constructions;    // build pipeline: "double", "repetition", ...
};

// Line-oriented format; '#' starts a comment.  Unknown directives and
// malformed lines are rejected with a ParseError carrying the line number.
QuiverFile parse_quiver(const std::string& text);
std::string render_quiver(const QuiverFile& qf);

}  // namespace qmv

#endif

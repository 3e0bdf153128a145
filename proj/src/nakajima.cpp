#include "qmv/nakajima.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

namespace qmv {

namespace {

std::string render_dim(const DimVector& v) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& [id, c] : v) {
        if (c == 0) continue;
        if (!first) out << ",";
        first = false;
        out << id << ":" << c;
    }
    out << "}";
    return out.str();
}

long long to_ll(const Int& n) { return n.convert_to<long long>(); }

GradedDim shift_graded(const GradedDim& v, long long n) {
    GradedDim out;
    for (const auto& [i, column] : v) {
        for (const auto& [m, c] : column) {
            if (c != 0) out[i][m + n] = c;
        }
    }
    return out;
}

GradedDim cleaned_graded(const GradedDim& v) {
    GradedDim out;
    for (const auto& [i, column] : v) {
        for (const auto& [m, c] : column) {
            if (c < 0) throw Error("negative entry in graded dimension vector at " + graded_id(i, {m}));
            if (c != 0) out[i][m] = c;
        }
    }
    return out;
}

}  // namespace

Int cut_euler_form(const TranslationQuiver& g, const DimVector& x, const DimVector& y) {
    if (!g.has_cut) throw Error("Euler form needs a cut");
    Int total = 0;
    auto at = [](const DimVector& v, const std::string& i) -> long long {
        auto it = v.find(i);
        return it == v.end() ? 0 : it->second;
    };
    for (const auto& [i, c] : x) total += Int(c) * at(y, i);
    for (const auto& a : g.base.arrows()) {
        if (g.cut.count(a.id)) total -= Int(at(x, a.src)) * at(y, a.tgt);
    }
    return total;
}

long long dim_framed(const TranslationQuiver& g, const DimVector& v, const DimVector& w) {
    validate_dimvector(g.base, v, "dimension vector");
    validate_dimvector(g.base, w, "framing vector");
    DimVector vt = twist_dimvector(g.tau, v);
    DimVector both = dim_add(v, vt);
    Int dot = 0;
    for (const auto& [i, c] : w) {
        auto it = both.find(i);
        if (it != both.end()) dot += Int(c) * it->second;
    }
    return to_ll(dot - cut_euler_form(g, v, both));
}

long long dim_stable_moduli(const TranslationQuiver& g, const DimVector& v) {
    validate_dimvector(g.base, v, "dimension vector");
    DimVector vt = twist_dimvector(g.tau, v);
    return to_ll(Int(1) - cut_euler_form(g, v, dim_add(v, vt)));
}

std::vector<FixedComponent> fixed_components(const LocalizedQuiver& g, const std::string& framing,
                                             const DimVector& ambient) {
    if (g.rank != 1 || g.total.empty() || g.total[0] == 0)
        throw Error("fixed components need a rank-1 grading with nonzero period");
    const Quiver& base = g.base.base;
    if (!base.has_vertex(framing)) throw Error("unknown framing vertex " + framing);
    validate_dimvector(base, ambient, "ambient dimension vector");
    for (const auto& a : base.arrows()) {
        if (g.weight_of(a.id)[0] <= 0)
            throw Error("fixed-component enumeration needs positive weights, arrow " + a.id +
                        " has " + std::to_string(g.weight_of(a.id)[0]));
    }
    auto fit = ambient.find(framing);
    if (fit == ambient.end() || fit->second != 1)
        throw Error("ambient dimension at the framing vertex must be 1");

    long long total = 0;
    for (const auto& [i, c] : ambient) {
        if (c < 0) throw Error("negative ambient dimension at " + i);
        total += c;
    }
    long long window = total * (std::abs(g.total[0]) + 1);

    std::vector<std::pair<std::string, long long>> spread;  // vertices to distribute
    for (const auto& [i, c] : ambient) {
        if (i != framing && c > 0) spread.emplace_back(i, c);
    }

    // all multisets of `count` degrees from [-window, window], as degree->mult
    std::function<void(long long, long long, std::map<long long, long long>&,
                       std::vector<std::map<long long, long long>>&)>
        multisets = [&](long long count, long long min_degree, std::map<long long, long long>& acc,
                        std::vector<std::map<long long, long long>>& out) {
            if (count == 0) {
                out.push_back(acc);
                return;
            }
            for (long long n = min_degree; n <= window; ++n) {
                ++acc[n];
                multisets(count - 1, n, acc, out);
                if (--acc[n] == 0) acc.erase(n);
            }
        };

    std::vector<std::vector<std::map<long long, long long>>> choices(spread.size());
    for (size_t t = 0; t < spread.size(); ++t) {
        std::map<long long, long long> acc;
        multisets(spread[t].second, -window, acc, choices[t]);
    }

    // directed reachability from the framing seed through the support
    auto reachable = [&](const GradedDim& lift) {
        std::set<std::pair<std::string, long long>> support;
        for (const auto& [i, column] : lift) {
            for (const auto& [n, c] : column) {
                (void)c;
                support.insert({i, n});
            }
        }
        std::set<std::pair<std::string, long long>> seen;
        std::queue<std::pair<std::string, long long>> frontier;
        seen.insert({framing, 0});
        frontier.push({framing, 0});
        while (!frontier.empty()) {
            auto [x, m] = frontier.front();
            frontier.pop();
            for (const auto& aid : base.arrows_from(x)) {
                const Arrow& a = base.arrow(aid);
                std::pair<std::string, long long> next{a.tgt, m + g.weight_of(a.id)[0]};
                if (support.count(next) && !seen.count(next)) {
                    seen.insert(next);
                    frontier.push(next);
                }
            }
        }
        return seen.size() == support.size();
    };

    std::vector<FixedComponent> out;
    std::vector<size_t> pick(spread.size(), 0);
    for (;;) {
        GradedDim lift;
        lift[framing][0] = 1;
        for (size_t t = 0; t < spread.size(); ++t) {
            for (const auto& [n, c] : choices[t][pick[t]]) lift[spread[t].first][n] = c;
        }
        if (reachable(lift)) out.push_back(FixedComponent{lift, ambient});
        size_t k = 0;
        while (k < pick.size() && pick[k] + 1 == choices[k].size()) {
            pick[k] = 0;
            ++k;
        }
        if (k == pick.size()) break;
        ++pick[k];
    }
    std::sort(out.begin(), out.end(),
              [](const FixedComponent& a, const FixedComponent& b) { return a.lift < b.lift; });
    return out;
}

std::map<long long, long long> tangent_weight_dims(const LocalizedQuiver& g, const GradedDim& v_in,
                                                   const std::optional<std::string>& framing) {
    if (g.rank != 1 || g.total.empty() || g.total[0] == 0)
        throw Error("tangent weights need a rank-1 grading with nonzero period");
    long long e = g.total[0];
    GradedDim v = cleaned_graded(v_in);
    if (v.empty()) return {};

    GradedDim vt = twist_graded(g, v);
    if (framing) {
        auto it = v.find(*framing);
        long long framed_total = 0;
        if (it != v.end()) {
            for (const auto& [n, c] : it->second) {
                (void)n;
                framed_total += c;
            }
        }
        if (framed_total != 1)
            throw Error("the framing vertex must carry a single dimension in a single degree");
        // The twisted framing line lives on its own framing copy, away from
        // every degree shift of v, so it drops out of all overlap counts.
        vt.erase(*framing);
    }

    long long lo = 0, hi = 0;
    bool first = true;
    for (const auto& [i, column] : v) {
        (void)i;
        for (const auto& [n, c] : column) {
            (void)c;
            lo = first ? n : std::min(lo, n);
            hi = first ? n : std::max(hi, n);
            first = false;
        }
    }
    long long max_weight = 0;
    for (const auto& a : g.base.base.arrows()) max_weight = std::max(max_weight, std::abs(g.weight_of(a.id)[0]));
    long long radius = (hi - lo) + std::abs(e) + max_weight + 2;

    std::map<long long, long long> h1;
    for (long long n = -radius; n <= radius; ++n) {
        GradedDim shifted = shift_graded(v, n);
        if (!framing && shifted == vt)
            throw Error("shift collision: the twisted dimension vector equals the degree shift by " +
                        std::to_string(n));
        Int h = Int(n == 0 ? 1 : 0) - graded_euler_cut(g, v, shifted) - graded_euler_cut(g, shifted, vt);
        if (h < 0)
            throw Error("negative tangent weight dimension at shift " + std::to_string(n) +
                        " for " + render_graded(v));
        if (h != 0) h1[n] = to_ll(h);
    }
    return h1;
}

ClassReport grassmann_recursion(const PartialTranslationQuiver& g, const DimVector& v_in,
                                const std::string& star) {
    const Quiver& q = g.base;
    validate_dimvector(q, v_in, "dimension vector");
    if (!q.has_vertex(star)) throw Error("unknown distinguished vertex " + star);
    DimVector v;
    for (const auto& [i, c] : v_in) {
        if (c < 0) throw Error("negative entry in dimension vector at " + i);
        if (c != 0) v[i] = c;
    }
    {
        auto it = v.find(star);
        if (it == v.end() || it->second != 1)
            throw Error("the distinguished vertex must carry dimension 1");
        if (g.tau_defined(star) && v.count(g.tau_of(star)))
            throw Error("the translate of the distinguished vertex must carry dimension 0");
    }
    {
        // acyclicity via Kahn's algorithm
        std::map<std::string, long long> indegree;
        for (const auto& x : q.vertices()) indegree[x] = 0;
        for (const auto& a : q.arrows()) ++indegree[a.tgt];
        std::queue<std::string> ready;
        for (const auto& [x, d] : indegree) {
            if (d == 0) ready.push(x);
        }
        size_t seen = 0;
        while (!ready.empty()) {
            std::string x = ready.front();
            ready.pop();
            ++seen;
            for (const auto& aid : q.arrows_from(x)) {
                const std::string& t = q.arrow(aid).tgt;
                if (--indegree[t] == 0) ready.push(t);
            }
        }
        if (seen != q.vertices().size()) throw Error("the quiver has an oriented cycle");
    }

    DimVector unit{{star, 1}};
    std::map<DimVector, LaurentPoly> star_cache;
    std::map<std::pair<std::string, DimVector>, LaurentPoly> kernel_free_cache;

    auto orbit_of = [&](const std::string& seed) {
        std::vector<std::string> orbit{seed};
        std::set<std::string> seen{seed};
        for (std::string cur = seed; g.tau_defined(cur);) {
            cur = g.tau_of(cur);
            if (!seen.insert(cur).second) break;
            orbit.push_back(cur);
        }
        for (std::string cur = seed;;) {
            auto up = g.tau_inv_of(cur);
            if (!up || !seen.insert(*up).second) break;
            cur = *up;
            orbit.push_back(cur);
        }
        std::sort(orbit.begin(), orbit.end());
        return orbit;
    };

    auto at = [](const DimVector& u, const std::string& i) -> long long {
        auto it = u.find(i);
        return it == u.end() ? 0 : it->second;
    };

    // dim Coker of the in-arrow comparison map at i after cutting r along O
    auto coker_dim = [&](const DimVector& u, const std::map<std::string, long long>& r,
                         const std::string& i) {
        long long d = 0;
        for (const auto& aid : q.arrows_into(i)) d += at(u, q.arrow(aid).src);
        if (g.tau_defined(i)) {
            const std::string& ti = g.tau_of(i);
            d -= at(u, ti);
            auto it = r.find(ti);
            if (it != r.end()) d += it->second;
        }
        return d;
    };

    std::function<LaurentPoly(const DimVector&)> star_class;

    // class of the stratum where the kernels along the orbit vanish
    std::function<LaurentPoly(const std::vector<std::string>&, const DimVector&)> kernel_free =
        [&](const std::vector<std::string>& orbit, const DimVector& u) -> LaurentPoly {
        bool star_in_orbit =
            std::binary_search(orbit.begin(), orbit.end(), star);
        if (u == unit) return star_in_orbit ? LaurentPoly::zero() : LaurentPoly::one();
        auto key = std::make_pair(orbit.front(), u);
        auto hit = kernel_free_cache.find(key);
        if (hit != kernel_free_cache.end()) return hit->second;

        LaurentPoly value = star_class(u);
        // peel off the strata with nonzero kernels: fibers are products of
        // Grassmannians of r_i-dimensional quotients
        std::vector<std::pair<std::string, long long>> room;
        for (const auto& i : orbit) {
            if (i != star && at(u, i) > 0) room.emplace_back(i, at(u, i));
        }
        std::vector<long long> r(room.size(), 0);
        for (;;) {
            size_t k = 0;
            while (k < r.size() && r[k] == room[k].second) {
                r[k] = 0;
                ++k;
            }
            if (k == r.size()) break;
            ++r[k];
            std::map<std::string, long long> rmap;
            DimVector rest = u;
            for (size_t t = 0; t < r.size(); ++t) {
                if (r[t] == 0) continue;
                rmap[room[t].first] = r[t];
                rest[room[t].first] -= r[t];
                if (rest[room[t].first] == 0) rest.erase(room[t].first);
            }
            LaurentPoly fiber = LaurentPoly::one();
            for (const auto& i : orbit) {
                auto it = rmap.find(i);
                if (it == rmap.end()) continue;
                fiber *= grassmannian_motive(coker_dim(u, rmap, i), it->second);
                if (fiber.is_zero()) break;
            }
            if (!fiber.is_zero()) value -= kernel_free(orbit, rest) * fiber;
        }
        kernel_free_cache.emplace(key, value);
        return value;
    };

    star_class = [&](const DimVector& u) -> LaurentPoly {
        if (u == unit) return LaurentPoly::one();
        auto hit = star_cache.find(u);
        if (hit != star_cache.end()) return hit->second;

        // a support vertex whose arrows all leave the support
        std::string anchor;
        for (const auto& [i, c] : u) {
            (void)c;
            bool sink = true;
            for (const auto& aid : q.arrows_from(i)) sink = sink && at(u, q.arrow(aid).tgt) == 0;
            if (sink) {
                anchor = i;
                break;
            }
        }
        if (anchor.empty()) throw Error("no support sink; the quiver has an oriented cycle");
        auto orbit = orbit_of(anchor);

        // kernel_free(orbit, u) vanishes by the choice of anchor, so the full
        // stratification reduces to the strata with a nonzero kernel vector.
        LaurentPoly value = LaurentPoly::zero();
        std::vector<std::pair<std::string, long long>> room;
        for (const auto& i : orbit) {
            if (i != star && at(u, i) > 0) room.emplace_back(i, at(u, i));
        }
        std::vector<long long> r(room.size(), 0);
        for (;;) {
            size_t k = 0;
            while (k < r.size() && r[k] == room[k].second) {
                r[k] = 0;
                ++k;
            }
            if (k == r.size()) break;
            ++r[k];
            std::map<std::string, long long> rmap;
            DimVector rest = u;
            for (size_t t = 0; t < r.size(); ++t) {
                if (r[t] == 0) continue;
                rmap[room[t].first] = r[t];
                rest[room[t].first] -= r[t];
                if (rest[room[t].first] == 0) rest.erase(room[t].first);
            }
            LaurentPoly fiber = LaurentPoly::one();
            for (const auto& i : orbit) {
                auto it = rmap.find(i);
                if (it == rmap.end()) continue;
                fiber *= grassmannian_motive(coker_dim(u, rmap, i), it->second);
                if (fiber.is_zero()) break;
            }
            if (!fiber.is_zero()) value += kernel_free(orbit, rest) * fiber;
        }
        star_cache.emplace(u, value);
        return value;
    };

    ClassReport report;
    report.value = MotiveClass(star_class(v));
    report.algorithm = "grassmannian-recursion";
    std::ostringstream fp;
    fp << "grassmann|star=" << star << "|v=" << render_dim(v);
    report.fingerprint = fp.str();
    return report;
}

namespace {

// Shared scaffolding of the attractor sums: enumerate fixed components on the
// localized double of the framed base, get each component's class from the
// selected route, and weight by the positive/negative tangent dimensions.
enum class ComponentRoute { wall_crossing, grassmannian };

std::pair<MotiveClass, MotiveClass> attractor_sums(const Quiver& q, const DimVector& v,
                                                   const DimVector& w, ComponentRoute route) {
    validate_dimvector(q, v, "dimension vector");
    validate_dimvector(q, w, "framing vector");
    long long total = 0;
    for (const auto& [i, c] : v) {
        if (c < 0) throw Error("negative entry in dimension vector at " + i);
        total += c;
    }
    for (const auto& [i, c] : w) {
        if (c < 0) throw Error("negative entry in framing vector at " + i);
    }
    if (total == 0) return {MotiveClass::one(), MotiveClass::one()};

    long long r = total + 1;
    long long e = r + 1;

    Quiver framed = q;
    framed.add_vertex("*");
    for (const auto& [i, c] : w) {
        for (long long k = 0; k < c; ++k)
            framed.add_arrow("*>" + i + "#" + std::to_string(k), "*", i);
    }
    TranslationQuiver doubled = double_quiver(framed);
    WeightMap weights;
    weights.total = e;
    for (const auto& a : doubled.base.arrows())
        weights.d[a.id] = doubled.cut.count(a.id) ? r : 1;
    LocalizedQuiver cover = localize(doubled, weights);

    DimVector ambient = v;
    ambient["*"] = 1;
    auto components = fixed_components(cover, "*", ambient);

    long long expected_dim = dim_framed(double_quiver(q), v, w);
    StabilityParam theta{{graded_id("*", {0}), Rat(1)}};

    MotiveClass full = MotiveClass::zero();
    MotiveClass core = MotiveClass::zero();
    for (const auto& comp : components) {
        MotiveClass cls;
        if (route == ComponentRoute::wall_crossing) {
            cls = stable_variety_class(cover, theta, comp.lift).value;
        } else {
            long long lo = 0, hi = 0;
            for (const auto& [i, column] : comp.lift) {
                (void)i;
                for (const auto& [n, c] : column) {
                    (void)c;
                    lo = std::min(lo, n);
                    hi = std::max(hi, n);
                }
            }
            Window win = materialize(cover, DegreeBox::interval(lo - e - r, hi + e + r));
            cls = grassmann_recursion(win.tq, flatten_graded(comp.lift), graded_id("*", {0})).value;
        }
        if (cls.is_zero()) continue;

        auto h1 = tangent_weight_dims(cover, comp.lift, "*");
        long long dplus = 0, dminus = 0, dtotal = 0;
        for (const auto& [n, h] : h1) {
            dtotal += h;
            if (n > 0) dplus += h;
            if (n < 0) dminus += h;
        }
        if (dtotal != expected_dim)
            throw Error("tangent weights of " + render_graded(comp.lift) + " sum to " +
                        std::to_string(dtotal) + ", expected " + std::to_string(expected_dim));

        full += MotiveClass::lefschetz_power(dplus) * cls;
        core += MotiveClass::lefschetz_power(dminus) * cls;
    }
    return {full, core};
}

ClassReport attractor_report(const Quiver& q, const DimVector& v, const DimVector& w,
                             ComponentRoute route, bool nilpotent) {
    auto [full, core] = attractor_sums(q, v, w, route);
    ClassReport report;
    report.value = nilpotent ? core : full;
    report.algorithm = route == ComponentRoute::wall_crossing
                           ? "fixed-point-attractor(wall-crossing)"
                           : "fixed-point-attractor(grassmannian)";
    std::ostringstream fp;
    fp << (nilpotent ? "core" : "full") << "|v=" << render_dim(v) << "|w=" << render_dim(w);
    report.fingerprint = fp.str();
    return report;
}

}  // namespace

ClassReport framed_class_bb(const Quiver& q, const DimVector& v, const DimVector& w) {
    return attractor_report(q, v, w, ComponentRoute::wall_crossing, false);
}

ClassReport nilpotent_class_bb(const Quiver& q, const DimVector& v, const DimVector& w) {
    return attractor_report(q, v, w, ComponentRoute::wall_crossing, true);
}

ClassReport framed_class_grassmann(const Quiver& q, const DimVector& v, const DimVector& w) {
    return attractor_report(q, v, w, ComponentRoute::grassmannian, false);
}

ClassReport nilpotent_class_grassmann(const Quiver& q, const DimVector& v, const DimVector& w) {
    return attractor_report(q, v, w, ComponentRoute::grassmannian, true);
}

void PartitionTuple::validate() const {
    for (const auto& [i, part] : parts) {
        for (size_t k = 0; k < part.size(); ++k) {
            if (part[k] <= 0) throw Error("partition parts must be positive at " + i);
            if (k > 0 && part[k] > part[k - 1])
                throw Error("partition parts must weakly decrease at " + i);
        }
    }
}

size_t PartitionTuple::rows() const {
    size_t n = 0;
    for (const auto& [i, part] : parts) {
        (void)i;
        n = std::max(n, part.size());
    }
    return n;
}

DimVector PartitionTuple::column(size_t k) const {
    if (k == 0) throw Error("columns are 1-based");
    DimVector out;
    for (const auto& [i, part] : parts) {
        if (k <= part.size()) out[i] = part[k - 1];
    }
    return out;
}

DimVector PartitionTuple::content() const {
    DimVector out;
    for (const auto& [i, part] : parts) {
        long long sum = 0;
        for (long long p : part) sum += p;
        if (sum != 0) out[i] = sum;
    }
    return out;
}

MotiveClass TruncatedSeries::coefficient(const DimVector& v) const {
    auto it = coefficients.find(v);
    return it == coefficients.end() ? MotiveClass::zero() : it->second;
}

void TruncatedSeries::add(const DimVector& v, const MotiveClass& c) {
    for (const auto& [i, n] : v) {
        auto it = box.find(i);
        if (n < 0 || it == box.end() || n > it->second)
            throw Error("series coefficient outside the box at " + i);
    }
    auto it = coefficients.find(v);
    if (it == coefficients.end()) {
        coefficients.emplace(v, c);
    } else {
        it->second += c;
    }
}

namespace {

std::vector<std::vector<long long>> partitions_of(long long n) {
    std::vector<std::vector<long long>> out;
    std::vector<long long> acc;
    std::function<void(long long, long long)> descend = [&](long long left, long long cap) {
        if (left == 0) {
            out.push_back(acc);
            return;
        }
        for (long long p = std::min(left, cap); p >= 1; --p) {
            acc.push_back(p);
            descend(left - p, p);
            acc.pop_back();
        }
    };
    descend(n, n);
    return out;
}

// 1/(q)_n after binding the series variable.
MotiveClass bound_pochhammer_inverse(long long n, SeriesVariable variable) {
    MotiveClass out = MotiveClass::one();
    for (long long t = 1; t <= n; ++t) {
        // q := L^{-1}: 1/(1-L^{-t}) = L^t/(L^t-1);  q := L: 1/(1-L^t) = -1/(L^t-1)
        MotiveClass factor = variable == SeriesVariable::inverse_lefschetz
                                 ? MotiveClass(LaurentPoly::monomial(t))
                                 : MotiveClass(LaurentPoly::from_int(-1));
        out *= factor * MotiveClass::inverse_factor(t);
    }
    return out;
}

MotiveClass bound_power(const Int& exponent, SeriesVariable variable) {
    long long ex = to_ll(exponent);
    return MotiveClass::lefschetz_power(variable == SeriesVariable::inverse_lefschetz ? -ex : ex);
}

TruncatedSeries raw_series(const Quiver& q, const DimVector& w, const DimVector& box,
                           SeriesVariable variable) {
    TruncatedSeries series;
    series.box = box;

    std::vector<std::pair<std::string, long long>> support;
    for (const auto& [i, c] : box) {
        if (c < 0) throw Error("negative box entry at " + i);
        if (c > 0) support.emplace_back(i, c);
    }
    std::vector<std::vector<std::vector<long long>>> menu(support.size());
    for (size_t t = 0; t < support.size(); ++t) {
        for (long long n = 0; n <= support[t].second; ++n) {
            auto ps = partitions_of(n);
            menu[t].insert(menu[t].end(), ps.begin(), ps.end());
        }
    }

    std::vector<size_t> pick(support.size(), 0);
    for (;;) {
        PartitionTuple tuple;
        for (size_t t = 0; t < support.size(); ++t) {
            if (!menu[t][pick[t]].empty()) tuple.parts[support[t].first] = menu[t][pick[t]];
        }
        size_t depth = tuple.rows();
        Int exponent = 0;
        MotiveClass term = MotiveClass::one();
        DimVector previous;
        for (size_t k = 1; k <= depth + 1; ++k) {
            DimVector col = k <= depth ? tuple.column(k) : DimVector{};
            if (k == 1) {
                for (const auto& [i, c] : w) {
                    auto it = col.find(i);
                    if (it != col.end()) exponent -= Int(c) * it->second;
                }
            }
            if (k <= depth) exponent += euler_form(q, col, col);
            if (k > 1) {
                for (const auto& [i, c] : previous) {
                    auto it = col.find(i);
                    long long drop = c - (it == col.end() ? 0 : it->second);
                    term *= bound_pochhammer_inverse(drop, variable);
                }
            }
            previous = col;
        }
        term *= bound_power(exponent, variable);
        series.add(tuple.content(), term);

        size_t k = 0;
        while (k < pick.size() && pick[k] + 1 == menu[k].size()) {
            pick[k] = 0;
            ++k;
        }
        if (k == pick.size()) break;
        ++pick[k];
    }
    return series;
}

// every 0 <= u <= box, ordered by total then lexicographically
std::vector<DimVector> box_points(const DimVector& box) {
    std::vector<std::pair<std::string, long long>> support;
    for (const auto& [i, c] : box) {
        if (c > 0) support.emplace_back(i, c);
    }
    std::vector<DimVector> out;
    std::vector<long long> digits(support.size(), 0);
    for (;;) {
        DimVector u;
        for (size_t t = 0; t < digits.size(); ++t) {
            if (digits[t] != 0) u[support[t].first] = digits[t];
        }
        out.push_back(u);
        size_t k = 0;
        while (k < digits.size() && digits[k] == support[k].second) {
            digits[k] = 0;
            ++k;
        }
        if (k == digits.size()) break;
        ++digits[k];
    }
    std::stable_sort(out.begin(), out.end(), [](const DimVector& a, const DimVector& b) {
        long long ta = 0, tb = 0;
        for (const auto& [i, c] : a) {
            (void)i;
            ta += c;
        }
        for (const auto& [i, c] : b) {
            (void)i;
            tb += c;
        }
        if (ta != tb) return ta < tb;
        return a < b;
    });
    return out;
}

TruncatedSeries series_divide(const TruncatedSeries& num, const TruncatedSeries& den) {
    if (den.coefficient(DimVector{}) != MotiveClass::one())
        throw Error("series division needs constant term 1");
    TruncatedSeries out;
    out.box = num.box;
    for (const auto& v : box_points(num.box)) {
        MotiveClass b = num.coefficient(v);
        // subtract den_u * out_{v-u} over 0 < u <= v
        std::vector<std::pair<std::string, long long>> support;
        for (const auto& [i, c] : v) support.emplace_back(i, c);
        std::vector<long long> digits(support.size(), 0);
        for (;;) {
            size_t k = 0;
            while (k < digits.size() && digits[k] == support[k].second) {
                digits[k] = 0;
                ++k;
            }
            if (k == digits.size()) break;
            ++digits[k];
            DimVector u, rest;
            for (size_t t = 0; t < digits.size(); ++t) {
                if (digits[t] != 0) u[support[t].first] = digits[t];
                if (support[t].second != digits[t]) rest[support[t].first] = support[t].second - digits[t];
            }
            b -= den.coefficient(u) * out.coefficient(rest);
        }
        out.add(v, b);
    }
    return out;
}

}  // namespace

TruncatedSeries fermionic_quotient(const Quiver& q, const DimVector& w, const DimVector& box,
                                   SeriesVariable variable) {
    validate_dimvector(q, w, "framing vector");
    validate_dimvector(q, box, "box");
    return series_divide(raw_series(q, w, box, variable), raw_series(q, DimVector{}, box, variable));
}

FermionicSeries fermionic_series(const Quiver& q, const DimVector& w, const DimVector& box) {
    return FermionicSeries{fermionic_quotient(q, w, box, SeriesVariable::inverse_lefschetz),
                           fermionic_quotient(q, w, box, SeriesVariable::lefschetz)};
}

namespace {

MotiveClass fermionic_front(const Quiver& q, const DimVector& v, const DimVector& w,
                            SeriesVariable variable) {
    validate_dimvector(q, v, "dimension vector");
    for (const auto& [i, c] : v) {
        if (c < 0) throw Error("negative entry in dimension vector at " + i);
    }
    TruncatedSeries series = fermionic_quotient(q, w, v, variable);
    Int dot = 0;
    for (const auto& [i, c] : v) {
        auto it = w.find(i);
        if (it != w.end()) dot += Int(c) * it->second;
    }
    Int half_dim = dot - euler_form(q, v, v);
    return MotiveClass::lefschetz_power(to_ll(half_dim)) * series.coefficient(v);
}

}  // namespace

MotiveClass fermionic_class(const Quiver& q, const DimVector& v, const DimVector& w) {
    return fermionic_front(q, v, w, SeriesVariable::inverse_lefschetz);
}

MotiveClass fermionic_nilpotent_class(const Quiver& q, const DimVector& v, const DimVector& w) {
    return fermionic_front(q, v, w, SeriesVariable::lefschetz);
}

}  // namespace qmv

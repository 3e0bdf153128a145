#include "qmv/stackmotive.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace qmv {

namespace {

long long hom_rule(long long p, long long q, long long pp, long long qq) {
    return (p <= pp && pp <= q && q <= qq) ? 1 : 0;
}

// One-time exhaustive check of the closed-form rule against the explicit
// linear solve on all intervals inside [-3, 3].
void gate_hom_rule() {
    Quiver line;
    for (int n = -3; n <= 3; ++n) line.add_vertex(std::to_string(n));
    for (int n = -2; n <= 3; ++n)
        line.add_arrow("t" + std::to_string(n), std::to_string(n), std::to_string(n - 1));
    auto interval = [&](int p, int q) {
        oracle::ExplicitRep r;
        for (int n = p; n <= q; ++n) r.dim[std::to_string(n)] = 1;
        for (int n = p + 1; n <= q; ++n) r.mat["t" + std::to_string(n)] = {{Rat(1)}};
        return r;
    };
    for (int p = -3; p <= 3; ++p)
        for (int q = p; q <= 3; ++q)
            for (int pp = -3; pp <= 3; ++pp)
                for (int qq = pp; qq <= 3; ++qq) {
                    long long lhs = hom_rule(p, q, pp, qq);
                    long long rhs = oracle::hom_dim(line, interval(p, q), interval(pp, qq));
                    if (lhs != rhs)
                        throw Error("interval hom rule disagrees with the linear solve at (" +
                                    std::to_string(p) + "," + std::to_string(q) + ") -> (" +
                                    std::to_string(pp) + "," + std::to_string(qq) + ")");
                }
}

std::once_flag hom_gate_flag;

}  // namespace

long long hom_dim_interval(long long p, long long q, long long pp, long long qq) {
    if (p > q || pp > qq) throw Error("malformed interval in hom_dim_interval");
    std::call_once(hom_gate_flag, gate_hom_rule);
    return hom_rule(p, q, pp, qq);
}

std::vector<IntervalMultiset> enumerate_interval_multisets(const std::map<long long, long long>& column) {
    for (const auto& [m, c] : column)
        if (c < 0) throw Error("negative column entry at position " + std::to_string(m));
    std::map<long long, long long> col;
    for (const auto& [m, c] : column)
        if (c > 0) col[m] = c;
    std::vector<IntervalMultiset> out;
    if (col.empty()) {
        out.push_back({});
        return out;
    }
    long long lo = col.begin()->first, hi = col.rbegin()->first;
    auto col_at = [&](long long m) {
        auto it = col.find(m);
        return it == col.end() ? 0LL : it->second;
    };

    // State: open intervals as start -> count; finished multiset accumulates.
    IntervalMultiset finished;
    std::map<long long, long long> open;

    // Enumerate sub-multisets of `open` that close at position m-1, then
    // start enough new intervals at m to reach col(m).
    std::function<void(long long)> step = [&](long long m) {
        if (m > hi) {
            IntervalMultiset done = finished;
            for (const auto& [p, n] : open)
                if (n > 0) done[{p, hi}] += n;
            out.push_back(std::move(done));
            return;
        }
        long long target = col_at(m);
        long long open_total = 0;
        for (const auto& [p, n] : open) open_total += n;
        std::vector<long long> starts;
        for (const auto& [p, n] : open)
            if (n > 0) starts.push_back(p);
        // choose how many intervals close at m-1 from each start
        std::vector<long long> close(starts.size(), 0);
        std::function<void(size_t, long long)> choose = [&](size_t idx, long long closed) {
            if (idx == starts.size()) {
                long long remaining = open_total - closed;
                if (remaining > target) return;  // too many survivors
                long long fresh = target - remaining;
                for (size_t t = 0; t < starts.size(); ++t) {
                    open[starts[t]] -= close[t];
                    if (close[t] > 0) finished[{starts[t], m - 1}] += close[t];
                }
                if (fresh > 0) open[m] += fresh;
                step(m + 1);
                if (fresh > 0) open[m] -= fresh;
                for (size_t t = 0; t < starts.size(); ++t) {
                    open[starts[t]] += close[t];
                    if (close[t] > 0) {
                        finished[{starts[t], m - 1}] -= close[t];
                        if (finished[{starts[t], m - 1}] == 0) finished.erase({starts[t], m - 1});
                    }
                }
                return;
            }
            for (long long c = 0; c <= open.at(starts[idx]); ++c) {
                close[idx] = c;
                choose(idx + 1, closed + c);
            }
            close[idx] = 0;
        };
        choose(0, 0);
    };
    step(lo);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

long long end_dim(const IntervalMultiset& m) {
    long long d = 0;
    for (const auto& [i, n] : m)
        for (const auto& [j, n2] : m)
            d += n * n2 * hom_dim_interval(i.first, i.second, j.first, j.second);
    return d;
}

}  // namespace

MotiveClass aut_class(const IntervalMultiset& m) {
    MotiveClass out = MotiveClass::lefschetz_power(end_dim(m));
    for (const auto& [i, n] : m) out = out * pochhammer_inv(n);
    return out;
}

MotiveClass aut_class_inverse(const IntervalMultiset& m) {
    // 1/[Aut] = L^{Σ_t t - dim End} * Π 1/(L^t - 1) over t = 1..mult per interval
    long long shift = -end_dim(m);
    MotiveClass out = MotiveClass::lefschetz_power(0);
    for (const auto& [i, n] : m) {
        (void)i;
        for (long long t = 1; t <= n; ++t) {
            shift += t;
            out = out * MotiveClass::inverse_factor(t);
        }
    }
    return out * MotiveClass::lefschetz_power(shift);
}

std::string render_graded(const GradedDim& v) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& [i, col] : v)
        for (const auto& [n, d] : col) {
            if (d == 0) continue;
            if (!first) out << ",";
            first = false;
            out << i << "@" << n << ":" << d;
        }
    out << "}";
    return out.str();
}

namespace {

GradedDim cleaned(const GradedDim& v) {
    GradedDim w;
    for (const auto& [i, col] : v)
        for (const auto& [n, d] : col) {
            if (d < 0) throw Error("negative graded dimension at " + i + "@" + std::to_string(n));
            if (d > 0) w[i][n] = d;
        }
    return w;
}

long long graded_at(const GradedDim& v, const std::string& i, long long n) {
    auto it = v.find(i);
    if (it == v.end()) return 0;
    auto jt = it->second.find(n);
    return jt == it->second.end() ? 0 : jt->second;
}

// floor division and remainder in [0, e)
std::pair<long long, long long> fdiv_euc(long long a, long long e) {
    long long m = a / e, r = a % e;
    if (r < 0) {
        r += e;
        m -= 1;
    }
    return {m, r};
}

struct Chain {
    std::string vertex;
    long long residue;  // in [0, e)
    std::vector<IntervalMultiset> options;
};

}  // namespace

ClassReport r_tau_class(const Quiver& q, const std::map<std::string, long long>& d, long long e,
                        const GradedDim& v_in) {
    if (e == 0) throw Error("period e must be nonzero");
    for (const auto& [a, da] : d) {
        (void)da;
        if (!q.has_arrow(a)) throw Error("arrow weight on unknown arrow " + a);
    }
    GradedDim v = cleaned(v_in);
    for (const auto& [i, col] : v) {
        (void)col;
        if (!q.has_vertex(i)) throw Error("graded dimension on unknown vertex " + i);
    }
    std::ostringstream fp;
    fp << "rtau|Q0=" << q.vertices().size() << "|Q1=" << q.arrows().size() << "|e=" << e << "|v=" << render_graded(v);

    if (e < 0) {
        // flip the grading: n -> -n sends weight d to -d and period e to -e
        std::map<std::string, long long> dneg;
        for (const auto& arr : q.arrows()) {
            auto it = d.find(arr.id);
            dneg[arr.id] = it == d.end() ? 0 : -it->second;
        }
        GradedDim vflip;
        for (const auto& [i, col] : v)
            for (const auto& [n, dim] : col) vflip[i][-n] = dim;
        ClassReport inner = r_tau_class(q, dneg, -e, vflip);
        return ClassReport{inner.value, "r-tau-sum(flipped)", fp.str()};
    }

    auto weight_of = [&](const std::string& a) {
        auto it = d.find(a);
        return it == d.end() ? 0LL : it->second;
    };

    // one chain per (vertex, residue) with nonzero column
    std::vector<Chain> chains;
    std::map<std::pair<std::string, long long>, size_t> chain_index;
    for (const auto& i : q.vertices())
        for (long long k = 0; k < e; ++k) {
            std::map<long long, long long> column;
            auto it = v.find(i);
            if (it != v.end())
                for (const auto& [n, dim] : it->second) {
                    auto [m, r] = fdiv_euc(n, e);
                    if (r == k) column[m] = dim;
                }
            if (column.empty()) continue;
            Chain c;
            c.vertex = i;
            c.residue = k;
            c.options = enumerate_interval_multisets(column);
            // each decomposition must reproduce the column exactly
            for (const auto& opt : c.options) {
                std::map<long long, long long> back;
                for (const auto& [pq, mult] : opt)
                    for (long long m = pq.first; m <= pq.second; ++m) back[m] += mult;
                if (back != column)
                    throw Error("interval decomposition does not match its column at vertex " + i);
            }
            chain_index[{i, k}] = chains.size();
            chains.push_back(std::move(c));
        }

    // decomposition of M^{i,K} for arbitrary K: shift the chain at the residue
    auto shifted = [&](const std::string& i, long long K,
                       const std::vector<size_t>& pick) -> IntervalMultiset {
        auto [m, r] = fdiv_euc(K, e);
        auto it = chain_index.find({i, r});
        if (it == chain_index.end()) return {};
        IntervalMultiset out;
        for (const auto& [pq, mult] : chains[it->second].options[pick[it->second]])
            out[{pq.first - m, pq.second - m}] += mult;
        return out;
    };

    MotiveClass total = MotiveClass::zero();
    std::vector<size_t> pick(chains.size(), 0);
    std::function<void(size_t)> walk = [&](size_t idx) {
        if (idx < chains.size()) {
            for (size_t t = 0; t < chains[idx].options.size(); ++t) {
                pick[idx] = t;
                walk(idx + 1);
            }
            return;
        }
        long long hom_total = 0;
        for (const auto& arr : q.arrows())
            for (long long k = 0; k < e; ++k) {
                IntervalMultiset src = shifted(arr.src, k - weight_of(arr.id), pick);
                IntervalMultiset tgt = shifted(arr.tgt, k, pick);
                for (const auto& [i1, n1] : src)
                    for (const auto& [i2, n2] : tgt)
                        hom_total += n1 * n2 * hom_dim_interval(i1.first, i1.second, i2.first, i2.second);
            }
        MotiveClass term = MotiveClass::lefschetz_power(hom_total);
        for (size_t c = 0; c < chains.size(); ++c)
            term = term * aut_class_inverse(chains[c].options[pick[c]]);
        total = total + term;
    };
    walk(0);

    // multiply back by [GL_v]
    LaurentPoly gl = LaurentPoly::one();
    for (const auto& [i, col] : v) {
        (void)i;
        for (const auto& [n, dim] : col) {
            (void)n;
            gl = gl * gl_motive(dim);
        }
    }
    MotiveClass result = total * MotiveClass(gl, {});
    LaurentPoly reduced;
    try {
        reduced = result.as_laurent();
    } catch (const Error&) {
        throw Error("graded representation-variety class failed to reduce to a Laurent polynomial");
    }
    return ClassReport{MotiveClass(reduced, {}), "r-tau-sum", fp.str()};
}

namespace {

// The supported shape: rank-1 cover of an untwisted double (identity tau,
// total sigma, cut ⊔ sigma(cut) = arrows, d_a + d_{sigma a} = e != 0).
void require_localized_double(const LocalizedQuiver& g) {
    if (g.rank != 1) throw Error("unsupported cover: rank " + std::to_string(g.rank) + ", need rank 1");
    if (g.total.empty() || g.total[0] == 0) throw Error("unsupported cover: period e must be nonzero");
    const PartialTranslationQuiver& b = g.base;
    if (!b.has_cut) throw Error("unsupported cover: base has no cut");
    if (b.tau.size() != b.base.vertices().size() || b.sigma.size() != b.base.arrows().size())
        throw Error("unsupported cover: base translation structure is not total");
    for (const auto& v : b.base.vertices())
        if (b.tau_of(v) != v) throw Error("unsupported cover: base tau is not the identity");
    TranslationQuiver t;
    static_cast<PartialTranslationQuiver&>(t) = b;
    t.validate();
    long long e = g.total[0];
    for (const auto& a : b.base.arrows())
        if (g.weight_of(a.id)[0] + g.weight_of(b.sigma_of(a.id))[0] != e)
            throw Error("unsupported cover: weights do not split the period at arrow " + a.id);
}

}  // namespace

GradedDim twist_graded(const LocalizedQuiver& g, const GradedDim& v) {
    // (v^tau)_{i,n} = v_{tau(i), n-e}
    long long e = g.total.empty() ? 0 : g.total[0];
    GradedDim w;
    for (const auto& i : g.base.base.vertices()) {
        if (!g.base.tau_defined(i)) continue;
        std::string ti = g.base.tau_of(i);
        auto it = v.find(ti);
        if (it == v.end()) continue;
        for (const auto& [n, dim] : it->second)
            if (dim != 0) w[i][n + e] = dim;
    }
    return w;
}

Int graded_euler_cut(const LocalizedQuiver& g, const GradedDim& x, const GradedDim& y) {
    Int total = 0;
    for (const auto& [i, col] : x)
        for (const auto& [n, dim] : col) total += Int(dim) * graded_at(y, i, n);
    if (g.base.has_cut)
        for (const auto& a : g.base.cut) {
            const Arrow& arr = g.base.base.arrow(a);
            long long da = g.weight_of(a)[0];
            auto it = y.find(arr.tgt);
            if (it == y.end()) continue;
            for (const auto& [n, dim] : it->second)
                total -= Int(graded_at(x, arr.src, n - da)) * dim;
        }
    return total;
}

ClassReport mesh_rep_class(const LocalizedQuiver& g, const GradedDim& v_in) {
    require_localized_double(g);
    GradedDim v = cleaned(v_in);
    long long e = g.total[0];

    // cut half of the double, with its localization weights
    Quiver cut_half;
    for (const auto& x : g.base.base.vertices()) cut_half.add_vertex(x);
    std::map<std::string, long long> d;
    for (const auto& arr : g.base.base.arrows())
        if (g.base.cut.count(arr.id)) {
            cut_half.add_arrow(arr.id, arr.src, arr.tgt);
            d[arr.id] = g.weight_of(arr.id)[0];
        }

    ClassReport rt = r_tau_class(cut_half, d, e, v);
    GradedDim vt = twist_graded(g, v);
    Int chi = graded_euler_cut(g, v, vt);
    long long chi_ll = static_cast<long long>(chi);
    MotiveClass result = MotiveClass::lefschetz_power(-chi_ll) * rt.value;
    LaurentPoly lp;
    try {
        lp = result.as_laurent();
    } catch (const Error&) {
        throw Error("mesh representation-variety class failed to reduce to a Laurent polynomial");
    }
    std::ostringstream fp;
    fp << "mesh|e=" << e << "|v=" << render_graded(v);
    return ClassReport{MotiveClass(lp, {}), "mesh-from-graded-sum", fp.str()};
}

ClassReport stack_class(const LocalizedQuiver& g, const GradedDim& v_in) {
    ClassReport mesh = mesh_rep_class(g, v_in);
    GradedDim v = cleaned(v_in);
    MotiveClass result = mesh.value;
    for (const auto& [i, col] : v) {
        (void)i;
        for (const auto& [n, dim] : col) {
            (void)n;
            // 1/GL(n) = L^{-n(n-1)/2} Π_{k=1..n} 1/(L^k - 1)
            result = result * MotiveClass::lefschetz_power(-dim * (dim - 1) / 2);
            for (long long k = 1; k <= dim; ++k) result = result * MotiveClass::inverse_factor(k);
        }
    }
    std::ostringstream fp;
    fp << "stack|e=" << g.total[0] << "|v=" << render_graded(v);
    return ClassReport{result, "mesh-over-gl", fp.str()};
}

}  // namespace qmv

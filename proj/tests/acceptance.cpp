// Acceptance gate for the library: nine end-to-end criteria, one line each.
// Every equality below is exact symbolic equality; several criteria also
// carry a wall-clock budget and fail when they exceed it.  Exit status is 0
// only when every criterion passes.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "qmv/cli.hpp"
#include "qmv/nakajima.hpp"

using namespace qmv;

namespace {

Quiver jordan_quiver() {
    Quiver q;
    q.add_vertex("1");
    q.add_arrow("l", "1", "1");
    return q;
}

Quiver a1_quiver() {
    Quiver q;
    q.add_vertex("1");
    return q;
}

Quiver a2_quiver() {
    Quiver q;
    q.add_vertex("1");
    q.add_vertex("2");
    q.add_arrow("a", "1", "2");
    return q;
}

std::vector<std::vector<long long>> partitions_of(long long n, long long max_part) {
    if (n == 0) return {{}};
    std::vector<std::vector<long long>> out;
    for (long long first = std::min(n, max_part); first >= 1; --first) {
        for (auto rest : partitions_of(n - first, first)) {
            rest.insert(rest.begin(), first);
            out.push_back(std::move(rest));
        }
    }
    return out;
}

// framed/zero-fiber classes computed once and reused by several criteria
struct Probe {
    std::string label;
    Quiver q;
    DimVector v, w;
    MotiveClass full, core;
    long long dim = 0;
};
std::vector<Probe> probes;

void add_probe(const std::string& label, const Quiver& q, const DimVector& v,
               const DimVector& w) {
    Probe p;
    p.label = label;
    p.q = q;
    p.v = v;
    p.w = w;
    p.full = framed_class_bb(q, v, w).value;
    p.core = nilpotent_class_bb(q, v, w).value;
    p.dim = dim_framed(double_quiver(q), v, w);
    probes.push_back(std::move(p));
}

// Sum over tuples of nonzero parts with strictly decreasing slopes, each part
// contributing its semistable stack class, twisted by the pairwise nu form.
// Stratifying all representations by their slope filtration must rebuild the
// class of the full representation stack.
MotiveClass slope_filtration_sum(const LocalizedQuiver& g, const StabilityParam& theta,
                                 const DimVector& v,
                                 std::map<DimVector, MotiveClass>& semistable_cache) {
    auto ss_of = [&](const DimVector& u) -> const MotiveClass& {
        auto it = semistable_cache.find(u);
        if (it == semistable_cache.end()) {
            it = semistable_cache
                     .emplace(u, semistable_stack_class(g, theta, unflatten_graded(u)).value)
                     .first;
        }
        return it->second;
    };

    std::vector<std::pair<std::string, long long>> support;
    for (const auto& [id, c] : v) {
        if (c > 0) support.emplace_back(id, c);
    }
    MotiveClass acc = MotiveClass::zero();
    std::vector<DimVector> parts;
    std::vector<long long> remaining;
    for (const auto& [id, c] : support) {
        (void)id;
        remaining.push_back(c);
    }

    std::function<void(bool, Rat)> descend = [&](bool have_bound, Rat bound) {
        bool exhausted = true;
        for (long long r : remaining) exhausted = exhausted && r == 0;
        if (exhausted) {
            Int shift = 0;
            for (size_t i = 0; i < parts.size(); ++i) {
                for (size_t j = i + 1; j < parts.size(); ++j) {
                    shift += nu_form(g, unflatten_graded(parts[i]), unflatten_graded(parts[j]));
                }
            }
            MotiveClass term = MotiveClass::lefschetz_power(shift.convert_to<long long>());
            for (const auto& part : parts) term *= ss_of(part);
            acc += term;
            return;
        }
        std::vector<long long> u(support.size(), 0);
        for (;;) {
            size_t k = 0;
            while (k < u.size() && u[k] == remaining[k]) {
                u[k] = 0;
                ++k;
            }
            if (k == u.size()) return;
            ++u[k];
            DimVector part;
            for (size_t t = 0; t < u.size(); ++t) {
                if (u[t] != 0) part[support[t].first] = u[t];
            }
            Rat mu = slope(theta, part);
            if (have_bound && mu >= bound) continue;
            parts.push_back(part);
            for (size_t t = 0; t < u.size(); ++t) remaining[t] -= u[t];
            descend(true, mu);
            for (size_t t = 0; t < u.size(); ++t) remaining[t] += u[t];
            parts.pop_back();
        }
    };
    descend(false, Rat(0));
    return acc;
}

// ---- criteria ----------------------------------------------------------

// Punctual Hilbert schemes: one loop, one-dimensional framing.  The series
// route and the attractor route must both give the independent partition
// cell count sum(L^{n + parts(lambda)}).
std::string criterion_hilbert_series() {
    Quiver q = jordan_quiver();
    for (long long n = 0; n <= 4; ++n) {
        DimVector v = n ? DimVector{{"1", n}} : DimVector{};
        DimVector w{{"1", 1}};
        LaurentPoly expected;
        for (const auto& lambda : partitions_of(n, n ? n : 1))
            expected += LaurentPoly::monomial(n + static_cast<long long>(lambda.size()));
        MotiveClass series = fermionic_class(q, v, w);
        if (series != MotiveClass(expected))
            return "n=" + std::to_string(n) + ": series gives " + series.render() +
                   ", cell count " + expected.render();
        add_probe("hilb n=" + std::to_string(n), q, v, w);
        if (probes.back().full != MotiveClass(expected))
            return "n=" + std::to_string(n) + ": attractor gives " + probes.back().full.render() +
                   ", cell count " + expected.render();
    }
    return "";
}

// Cotangent bundles of grassmannians: one vertex, framing w.  At least two of
// the three algorithms must give L^{v(w-v)} * [Gr(w,v)].
std::string criterion_cotangent_grassmannians() {
    Quiver q = a1_quiver();
    for (long long w = 0; w <= 3; ++w) {
        for (long long v = 0; v <= w; ++v) {
            DimVector dv = v ? DimVector{{"1", v}} : DimVector{};
            DimVector dw = w ? DimVector{{"1", w}} : DimVector{};
            MotiveClass expected(LaurentPoly::monomial(v * (w - v)) * grassmannian_motive(w, v));
            MotiveClass bb = framed_class_bb(q, dv, dw).value;
            MotiveClass rec = framed_class_grassmann(q, dv, dw).value;
            MotiveClass ferm = fermionic_class(q, dv, dw);
            int agree = (bb == expected) + (rec == expected) + (ferm == expected);
            if (agree < 2)
                return "v=" + std::to_string(v) + " w=" + std::to_string(w) + ": only " +
                       std::to_string(agree) + " algorithm(s) give " + expected.render();
            probes.push_back(Probe{"gr v=" + std::to_string(v) + " w=" + std::to_string(w), q, dv,
                                   dw, bb, nilpotent_class_bb(q, dv, dw).value,
                                   dim_framed(double_quiver(q), dv, dw)});
        }
    }
    return "";
}

// The zero-fiber class determines the moduli class through the motivic
// duality L -> 1/L and a twist by the moduli dimension.
std::string criterion_duality() {
    if (probes.empty()) return "no instances were collected";
    for (const auto& p : probes) {
        if (p.core.dual() != MotiveClass::lefschetz_power(-p.dim) * p.full)
            return p.label + ": dual of zero-fiber class is " + p.core.dual().render() +
                   ", expected L^-" + std::to_string(p.dim) + " * " + p.full.render();
    }
    return "";
}

// Every moduli class is a genuine polynomial in L: nonnegative coefficients,
// lowest degree >= 0, top degree exactly the moduli dimension.
std::string criterion_purity() {
    if (probes.empty()) return "no instances were collected";
    for (const auto& p : probes) {
        if (!p.full.is_laurent()) return p.label + ": class does not reduce to a polynomial";
        LaurentPoly poly = p.full.as_laurent();
        if (poly.is_zero()) return p.label + ": class vanished";
        if (poly.min_degree() < 0) return p.label + ": negative degree in " + poly.render();
        if (poly.max_degree() != p.dim)
            return p.label + ": top degree " + std::to_string(poly.max_degree()) + ", expected " +
                   std::to_string(p.dim);
        for (const auto& [deg, c] : poly.coefficients())
            if (c < 0)
                return p.label + ": negative coefficient at degree " + std::to_string(deg);
    }
    return "";
}

// Golden corpus: each instance pins a mesh representation variety on a
// repetition window; its class, evaluated at q = 2 and 3, must reproduce the
// brute-force point count over those fields.  The check subcommand runs the
// comparison; this criterion requires at least ten instances of total
// dimension <= 3 and a clean pass on each.
std::string criterion_point_counts() {
    std::string dir = std::string(QMV_DATA_DIR) + "/golden";
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    int used = 0;
    for (const auto& path : files) {
        std::ifstream in(path);
        nlohmann::json golden = nlohmann::json::parse(in);
        long long total = 0;
        std::string vspec = golden["v"].get<std::string>(), item;
        std::istringstream vs(vspec);
        while (std::getline(vs, item, ','))
            total += std::stoll(item.substr(item.find('=') + 1));
        if (total > 3) continue;

        std::string out, err;
        int code = cli::run({"check",
                             std::string(QMV_DATA_DIR) + "/" + golden["file"].get<std::string>(),
                             "--golden", path.string()},
                            out, err);
        if (code != 0)
            return path.filename().string() + " failed:\n" + out + err;
        ++used;
    }
    if (used < 10)
        return "only " + std::to_string(used) + " golden instances of total dimension <= 3";
    return "";
}

// Stratifying the full representation stack by slope filtrations rebuilds its
// class from the semistable stack classes, for every dimension vector up to
// (2,2,2,2) on a two-degree repetition window.
std::string criterion_wall_crossing_round_trip() {
    LocalizedQuiver za2 = repetition(a2_quiver());
    StabilityParam theta{{graded_id("1", {0}), 1}, {graded_id("1", {1}), 1}};
    std::vector<std::string> ids{graded_id("1", {0}), graded_id("2", {0}), graded_id("1", {1}),
                                 graded_id("2", {1})};
    std::map<DimVector, MotiveClass> cache;
    for (long long a = 0; a <= 2; ++a)
        for (long long b = 0; b <= 2; ++b)
            for (long long c = 0; c <= 2; ++c)
                for (long long d = 0; d <= 2; ++d) {
                    if (a + b + c + d == 0) continue;
                    DimVector v;
                    if (a) v[ids[0]] = a;
                    if (b) v[ids[1]] = b;
                    if (c) v[ids[2]] = c;
                    if (d) v[ids[3]] = d;
                    MotiveClass forward = slope_filtration_sum(za2, theta, v, cache);
                    MotiveClass direct = stack_class(za2, unflatten_graded(v)).value;
                    if (forward != direct) {
                        std::ostringstream msg;
                        msg << "v=(" << a << "," << b << "," << c << "," << d
                            << "): reassembled " << forward.render() << ", direct "
                            << direct.render();
                        return msg.str();
                    }
                }
    return "";
}

// The closed-form hom rule between chain intervals against the linear-algebra
// computation on an explicit chain of identity maps, exhaustively on [-3,3].
std::string criterion_interval_hom_rule() {
    Quiver chain;
    for (long long n = -3; n <= 3; ++n) chain.add_vertex(std::to_string(n));
    for (long long n = -2; n <= 3; ++n)
        chain.add_arrow("d" + std::to_string(n), std::to_string(n), std::to_string(n - 1));

    auto interval_rep = [&](long long p, long long q) {
        oracle::ExplicitRep rep;
        for (long long n = p; n <= q; ++n) rep.dim[std::to_string(n)] = 1;
        for (long long n = p + 1; n <= q; ++n)
            rep.mat["d" + std::to_string(n)] = {{Rat(1)}};
        rep.validate(chain);
        return rep;
    };

    for (long long p = -3; p <= 3; ++p)
        for (long long q = p; q <= 3; ++q)
            for (long long pp = -3; pp <= 3; ++pp)
                for (long long qq = pp; qq <= 3; ++qq) {
                    long long closed = hom_dim_interval(p, q, pp, qq);
                    long long explicit_dim =
                        oracle::hom_dim(chain, interval_rep(p, q), interval_rep(pp, qq));
                    if (closed != explicit_dim) {
                        std::ostringstream msg;
                        msg << "intervals [" << p << "," << q << "] -> [" << pp << "," << qq
                            << "]: rule " << closed << ", explicit " << explicit_dim;
                        return msg.str();
                    }
                }
    return "";
}

// Adding a loop at each vertex and differentiating the loop-decorated
// potential recovers exactly the mesh relation of that vertex.
std::string criterion_potential_mesh_identity() {
    for (const Quiver& base : {a2_quiver(), jordan_quiver()}) {
        TranslationQuiver g = double_quiver(base);
        Quiver with_loops = g.base;
        std::map<std::string, std::string> loop_at;
        for (const auto& j : g.base.vertices()) {
            std::string ell = "ell_" + j;
            with_loops.add_arrow(ell, j, j);
            loop_at[j] = ell;
        }
        Potential w;
        for (const auto& a : g.base.arrows()) {
            w.add_term(Int(g.epsilon(a.id)), {loop_at.at(a.tgt), a.id, g.sigma_of(a.id)});
        }
        w.validate(with_loops);
        w.normalize();

        for (auto& [at, relation] : mesh_relation(g)) {
            PathSum derivative = cyclic_derivative(w, loop_at.at(at.second));
            if (!(derivative == relation))
                return "vertex " + at.second + ": derivative " + derivative.render() +
                       ", mesh relation " + relation.render();
        }
    }
    return "";
}

// Automorphisms of I^n for an interval I with endomorphism ring k form a
// general linear group; the class identity is exact for n <= 3.
std::string criterion_automorphism_class() {
    for (auto [p, q] : std::vector<std::pair<long long, long long>>{{0, 0}, {-1, 2}}) {
        for (long long n = 0; n <= 3; ++n) {
            IntervalMultiset m;
            if (n) m[{p, q}] = n;
            MotiveClass got = aut_class(m);
            if (got != MotiveClass(gl_motive(n)))
                return "interval [" + std::to_string(p) + "," + std::to_string(q) + "], n=" +
                       std::to_string(n) + ": " + got.render() + " vs " +
                       MotiveClass(gl_motive(n)).render();
        }
    }
    return "";
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        std::string name;
        std::function<std::string()> body;
        double budget_seconds;  // 0 = no budget
    };
    std::vector<Criterion> criteria = {
        {1, "hilbert-scheme-series", criterion_hilbert_series, 30},
        {2, "cotangent-grassmannians", criterion_cotangent_grassmannians, 60},
        {3, "attractor-duality", criterion_duality, 0},
        {4, "purity-degree-bounds", criterion_purity, 0},
        {5, "point-count-oracle", criterion_point_counts, 120},
        {6, "wall-crossing-round-trip", criterion_wall_crossing_round_trip, 0},
        {7, "interval-hom-rule", criterion_interval_hom_rule, 5},
        {8, "potential-mesh-identity", criterion_potential_mesh_identity, 0},
        {9, "automorphism-class", criterion_automorphism_class, 0},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = c.body();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (detail.empty() && c.budget_seconds > 0 && elapsed >= c.budget_seconds) {
            std::ostringstream msg;
            msg << "exceeded the " << c.budget_seconds << "s runtime budget";
            detail = msg.str();
        }
        std::cout << (detail.empty() ? "PASS" : "FAIL") << " " << c.number << " " << c.name << " ("
                  << std::fixed << std::setprecision(2) << elapsed << "s)";
        if (!detail.empty()) {
            std::cout << "\n     " << detail;
            ++failures;
        }
        std::cout << "\n";
    }
    std::cout << "acceptance: " << (criteria.size() - failures) << "/" << criteria.size()
              << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}

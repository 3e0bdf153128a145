#include "qmv/translation.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qmv {

// ---------------------------------------------------------------------------
// PartialTranslationQuiver / TranslationQuiver

const std::string& PartialTranslationQuiver::tau_of(const std::string& v) const {
    auto it = tau.find(v);
    if (it == tau.end()) throw Error("tau undefined on vertex " + v);
    return it->second;
}

std::optional<std::string> PartialTranslationQuiver::tau_inv_of(const std::string& v) const {
    for (const auto& [x, y] : tau)
        if (y == v) return x;
    return std::nullopt;
}

const std::string& PartialTranslationQuiver::sigma_of(const std::string& a) const {
    auto it = sigma.find(a);
    if (it == sigma.end()) throw Error("sigma undefined on arrow " + a);
    return it->second;
}

std::optional<std::string> PartialTranslationQuiver::sigma_inv_of(const std::string& a) const {
    for (const auto& [x, y] : sigma)
        if (y == a) return x;
    return std::nullopt;
}

int PartialTranslationQuiver::epsilon(const std::string& a) const {
    if (!has_cut) throw Error("epsilon requested but the quiver has no cut");
    if (!base.has_arrow(a)) throw Error("unknown arrow id: " + a);
    return cut.count(a) ? +1 : -1;
}

void PartialTranslationQuiver::validate() const {
    // tau: partial injection into the vertex set.
    std::set<std::string> timg;
    for (const auto& [v, w] : tau) {
        if (!base.has_vertex(v) || !base.has_vertex(w))
            throw Error("tau references unknown vertex (" + v + " -> " + w + ")");
        if (!timg.insert(w).second) throw Error("tau is not injective at " + w);
    }
    // sigma: where defined, sigma(a: i->j) is an arrow tau(j) -> i.
    std::set<std::string> simg;
    for (const auto& [a, b] : sigma) {
        if (!base.has_arrow(a) || !base.has_arrow(b))
            throw Error("sigma references unknown arrow (" + a + " -> " + b + ")");
        if (!simg.insert(b).second) throw Error("sigma is not injective at " + b);
        const Arrow& aa = base.arrow(a);
        const Arrow& bb = base.arrow(b);
        if (bb.tgt != aa.src)
            throw Error("sigma law violated: target(sigma " + a + ") != source(" + a + ")");
        if (!tau_defined(aa.tgt) || bb.src != tau.at(aa.tgt))
            throw Error("sigma law violated: source(sigma " + a + ") != tau(target(" + a + "))");
    }
    // Per-vertex bijection at tau-defined vertices: sigma matches arrows into j
    // with arrows out of tau(j), one-to-one.
    for (const auto& [j, tj] : tau) {
        std::vector<std::string> in = base.arrows_into(j);
        std::vector<std::string> out = base.arrows_from(tj);
        std::set<std::string> images;
        for (const auto& a : in) {
            if (!sigma_defined(a))
                throw Error("sigma undefined on arrow " + a + " into tau-defined vertex " + j);
            images.insert(sigma.at(a));
        }
        for (const auto& b : out)
            if (!images.count(b))
                throw Error("sigma misses arrow " + b + " out of tau(" + j + ")");
        if (images.size() != out.size()) throw Error("sigma image mismatch at vertex " + j);
    }
    if (has_cut) {
        std::set<std::string> sigma_cut;
        for (const auto& a : cut) {
            if (!base.has_arrow(a)) throw Error("cut contains unknown arrow " + a);
            if (sigma_defined(a)) sigma_cut.insert(sigma.at(a));
        }
        for (const auto& a : cut)
            if (sigma_cut.count(a)) throw Error("cut meets its own sigma-image at arrow " + a);
    }
}

void TranslationQuiver::validate() const {
    PartialTranslationQuiver::validate();
    if (tau.size() != base.vertices().size())
        throw Error("tau is not total");
    if (sigma.size() != base.arrows().size())
        throw Error("sigma is not total");
    if (has_cut) {
        // Gamma_1 = cut ⊔ sigma(cut); sigma^2 preserves the cut.
        std::set<std::string> covered = cut;
        for (const auto& a : cut) {
            const std::string& b = sigma.at(a);
            if (!covered.insert(b).second)
                throw Error("cut and sigma(cut) overlap at arrow " + b);
        }
        if (covered.size() != base.arrows().size())
            throw Error("cut does not split the arrows: cut ⊔ sigma(cut) != all arrows");
        for (const auto& a : cut)
            if (!cut.count(sigma.at(sigma.at(a))))
                throw Error("sigma^2 does not preserve the cut at arrow " + a);
    }
}

// ---------------------------------------------------------------------------
// WeightMap

void WeightMap::validate(const PartialTranslationQuiver& g) const {
    for (const auto& [a, da] : d)
        if (!g.base.has_arrow(a)) throw Error("weight map references unknown arrow " + a);
    for (const auto& arr : g.base.arrows()) {
        if (!g.sigma_defined(arr.id)) continue;
        const std::string& b = g.sigma_of(arr.id);
        if (of(arr.id) + of(b) != total)
            throw Error("invalid weight map: d(" + arr.id + ") + d(" + b + ") != total weight");
        // tau acts on arrows as sigma^2; weights must be tau-invariant.
        if (g.sigma_defined(b) && of(g.sigma_of(b)) != of(arr.id))
            throw Error("invalid weight map: not tau-invariant at arrow " + arr.id);
    }
}

// ---------------------------------------------------------------------------
// Twisted double

TranslationQuiver twisted_double(const Quiver& q, const QuiverAutomorphism& tau) {
    tau.validate(q);
    TranslationQuiver g;
    for (const auto& v : q.vertices()) g.base.add_vertex(v);
    for (const auto& a : q.arrows()) g.base.add_arrow(a.id, a.src, a.tgt);
    for (const auto& a : q.arrows())
        g.base.add_arrow(a.id + "*", tau.vertex(a.tgt), a.src);
    g.tau = tau.vertex_map;
    for (const auto& a : q.arrows()) {
        g.sigma[a.id] = a.id + "*";
        g.sigma[a.id + "*"] = tau.arrow(a.id);
        g.cut.insert(a.id);
    }
    g.has_cut = true;
    g.validate();
    return g;
}

TranslationQuiver double_quiver(const Quiver& q) {
    return twisted_double(q, QuiverAutomorphism::identity(q));
}

// ---------------------------------------------------------------------------
// Localization covers

std::vector<long long> LocalizedQuiver::weight_of(const std::string& arrow) const {
    auto it = weight.find(arrow);
    if (it != weight.end()) return it->second;
    return std::vector<long long>(static_cast<size_t>(rank), 0);
}

LocalizedQuiver as_cover(const PartialTranslationQuiver& g) {
    g.validate();
    LocalizedQuiver c;
    c.base = g;
    return c;
}

LocalizedQuiver localize(const LocalizedQuiver& g, const WeightMap& d) {
    d.validate(g.base);
    LocalizedQuiver c;
    c.base = g.base;
    c.rank = g.rank + 1;
    for (const auto& arr : g.base.base.arrows()) {
        std::vector<long long> w = g.weight_of(arr.id);
        w.push_back(d.of(arr.id));
        c.weight[arr.id] = w;
    }
    c.total = g.total;
    c.total.push_back(d.total);
    return c;
}

LocalizedQuiver localize(const TranslationQuiver& g, const WeightMap& d) {
    return localize(as_cover(g), d);
}

LocalizedQuiver repetition(const Quiver& q) {
    TranslationQuiver g = double_quiver(q);
    WeightMap d;
    d.total = 1;
    for (const auto& a : q.arrows()) {
        d.d[a.id] = 0;
        d.d[a.id + "*"] = 1;
    }
    return localize(g, d);
}

bool DegreeBox::contains(const std::vector<long long>& n) const {
    if (n.size() != lo.size() || lo.size() != hi.size())
        throw Error("degree box rank mismatch");
    for (size_t i = 0; i < n.size(); ++i)
        if (n[i] < lo[i] || n[i] > hi[i]) return false;
    return true;
}

std::string graded_id(const std::string& base, const std::vector<long long>& deg) {
    if (deg.empty()) return base;
    std::ostringstream out;
    out << base << "@";
    for (size_t i = 0; i < deg.size(); ++i) {
        if (i) out << ",";
        out << deg[i];
    }
    return out.str();
}

std::pair<std::string, std::vector<long long>> split_graded_id(const std::string& id) {
    size_t at = id.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 == id.size())
        throw Error("not a graded id: " + id);
    std::string base = id.substr(0, at);
    std::vector<long long> deg;
    std::string rest = id.substr(at + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
        size_t comma = rest.find(',', pos);
        std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            size_t used = 0;
            deg.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error("not a graded id: " + id);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return {base, deg};
}

namespace {

void enumerate_box(const DegreeBox& box, size_t k, std::vector<long long>& cur,
                   const std::function<void(const std::vector<long long>&)>& fn) {
    if (k == box.lo.size()) {
        fn(cur);
        return;
    }
    for (long long t = box.lo[k]; t <= box.hi[k]; ++t) {
        cur.push_back(t);
        enumerate_box(box, k + 1, cur, fn);
        cur.pop_back();
    }
}

std::vector<long long> vec_sub(const std::vector<long long>& a, const std::vector<long long>& b) {
    std::vector<long long> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

}  // namespace

Window materialize(const LocalizedQuiver& g, const DegreeBox& box) {
    if (static_cast<int>(box.lo.size()) != g.rank || box.lo.size() != box.hi.size())
        throw Error("degree box rank mismatch");
    Window w;
    if (g.rank == 0) {
        w.tq = g.base;
        for (const auto& v : g.base.base.vertices()) w.vertex_origin[v] = {v, std::vector<long long>{}};
        for (const auto& a : g.base.base.arrows()) w.arrow_origin[a.id] = {a.id, std::vector<long long>{}};
        return w;
    }
    std::vector<long long> cur;
    enumerate_box(box, 0, cur, [&](const std::vector<long long>& n) {
        for (const auto& v : g.base.base.vertices()) {
            std::string id = graded_id(v, n);
            w.tq.base.add_vertex(id);
            w.vertex_origin[id] = {v, n};
        }
    });
    enumerate_box(box, 0, cur, [&](const std::vector<long long>& n) {
        for (const auto& arr : g.base.base.arrows()) {
            std::vector<long long> src_deg = vec_sub(n, g.weight_of(arr.id));
            if (!box.contains(src_deg)) continue;
            std::string id = graded_id(arr.id, n);
            w.tq.base.add_arrow(id, graded_id(arr.src, src_deg), graded_id(arr.tgt, n));
            w.arrow_origin[id] = {arr.id, n};
            if (g.base.has_cut && g.base.cut.count(arr.id)) w.tq.cut.insert(id);
        }
    });
    w.tq.has_cut = g.base.has_cut;
    // tau(x, n) = (tau x, n - e); sigma(a@n) = (sigma a)@(n - d_a).
    enumerate_box(box, 0, cur, [&](const std::vector<long long>& n) {
        for (const auto& v : g.base.base.vertices()) {
            if (!g.base.tau_defined(v)) continue;
            std::vector<long long> m = vec_sub(n, g.total);
            if (box.contains(m)) w.tq.tau[graded_id(v, n)] = graded_id(g.base.tau_of(v), m);
        }
    });
    for (const auto& [id, origin] : w.arrow_origin) {
        const auto& [a, n] = origin;
        if (!g.base.sigma_defined(a)) continue;
        std::string img = graded_id(g.base.sigma_of(a), vec_sub(n, g.weight_of(a)));
        if (w.arrow_origin.count(img)) w.tq.sigma[id] = img;
    }
    w.tq.validate();
    return w;
}

DimVector pushforward_dim(const Window& w, const DimVector& graded) {
    DimVector v;
    for (const auto& [id, d] : graded) {
        if (d == 0) continue;
        auto it = w.vertex_origin.find(id);
        if (it == w.vertex_origin.end()) throw Error("dimension entry outside the window at " + id);
        v[it->second.first] += d;
    }
    return v;
}

StabilityParam pullback_theta(const Window& w, const StabilityParam& theta) {
    StabilityParam th;
    for (const auto& [id, origin] : w.vertex_origin) {
        auto it = theta.find(origin.first);
        if (it != theta.end()) th[id] = it->second;
    }
    return th;
}

// ---------------------------------------------------------------------------
// Framing

PartialTranslationQuiver frame(const PartialTranslationQuiver& g, const DimVector& w) {
    g.validate();
    if (!g.has_cut) throw Error("framing requires a quiver with a cut");
    validate_dimvector(g.base, w, "framing vector");
    PartialTranslationQuiver f = g;
    f.base.add_vertex("*");
    for (const auto& [i, mult] : w) {
        if (mult == 0) continue;
        if (!g.tau_defined(i))
            throw Error("framing vertex " + i + " has no translate; tau undefined");
        for (long long k = 0; k < mult; ++k) {
            std::string b = "*>" + i + "#" + std::to_string(k);
            std::string c = i + ">*#" + std::to_string(k);
            f.base.add_arrow(b, "*", i);
            f.base.add_arrow(c, g.tau_of(i), "*");
            f.sigma[b] = c;  // sigma(*->i) = tau(i)->*; sigma on tau(i)->* needs tau(*)
            f.cut.insert(b);
        }
    }
    f.validate();
    return f;
}

StableFramedQuiver stabilize_framed(const TranslationQuiver& g, const DimVector& w) {
    g.validate();
    if (!g.has_cut) throw Error("stabilization requires a quiver with a cut");
    validate_dimvector(g.base, w, "framing vector");
    return StableFramedQuiver{g, w};
}

namespace {

std::string framing_id(long long n) { return "[" + std::to_string(n) + "]"; }

}  // namespace

Window StableFramedQuiver::materialize(long long lo, long long hi) const {
    if (lo > hi) throw Error("empty framing window");
    std::map<std::string, std::string> tau_inv;
    for (const auto& [x, y] : base.tau) tau_inv[y] = x;
    auto tau_pow = [&](const std::string& v, long long n) {
        std::string x = v;
        for (long long k = 0; k < (n >= 0 ? n : -n); ++k)
            x = n >= 0 ? base.tau.at(x) : tau_inv.at(x);
        return x;
    };
    Window win;
    for (const auto& v : base.base.vertices()) {
        win.tq.base.add_vertex(v);
        win.vertex_origin[v] = {v, std::vector<long long>{}};
    }
    for (long long n = lo; n <= hi; ++n) {
        win.tq.base.add_vertex(framing_id(n));
        win.vertex_origin[framing_id(n)] = {"*", {n}};
    }
    for (const auto& a : base.base.arrows()) {
        win.tq.base.add_arrow(a.id, a.src, a.tgt);
        win.arrow_origin[a.id] = {a.id, std::vector<long long>{}};
    }
    // w_{tau^n i} arrows [n] -> i (cut) and tau(i) -> [n].
    auto mult_of = [&](long long n, const std::string& i) -> long long {
        auto it = w.find(tau_pow(i, n));
        return it == w.end() ? 0 : it->second;
    };
    for (long long n = lo; n <= hi; ++n)
        for (const auto& i : base.base.vertices())
            for (long long k = 0; k < mult_of(n, i); ++k) {
                std::string b = framing_id(n) + ">" + i + "#" + std::to_string(k);
                std::string c = i + ">" + framing_id(n) + "#" + std::to_string(k);
                win.tq.base.add_arrow(b, framing_id(n), i);
                win.tq.base.add_arrow(c, base.tau_of(i), framing_id(n));
                win.arrow_origin[b] = {"*>" + i + "#" + std::to_string(k), {n}};
                win.arrow_origin[c] = {i + ">*#" + std::to_string(k), {n}};
            }
    win.tq.tau = base.tau;
    for (long long n = lo + 1; n <= hi; ++n) win.tq.tau[framing_id(n)] = framing_id(n - 1);
    win.tq.sigma = base.sigma;
    for (long long n = lo; n <= hi; ++n)
        for (const auto& i : base.base.vertices())
            for (long long k = 0; k < mult_of(n, i); ++k) {
                std::string b = framing_id(n) + ">" + i + "#" + std::to_string(k);
                std::string c = i + ">" + framing_id(n) + "#" + std::to_string(k);
                win.tq.sigma[b] = c;
                if (n - 1 >= lo) {
                    // sigma(tau(i)->[n]) = [n-1] -> tau(i); same copy index.
                    win.tq.sigma[c] =
                        framing_id(n - 1) + ">" + base.tau_of(i) + "#" + std::to_string(k);
                }
            }
    win.tq.has_cut = true;
    win.tq.cut = base.cut;
    for (const auto& [id, origin] : win.arrow_origin)
        if (origin.first.rfind("*>", 0) == 0) win.tq.cut.insert(id);
    win.tq.validate();
    return win;
}

// ---------------------------------------------------------------------------
// Path sums, potentials, mesh relations

void PathSum::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::pair<Int, std::vector<std::string>>> merged;
    for (auto& t : terms) {
        if (!merged.empty() && merged.back().second == t.second)
            merged.back().first += t.first;
        else
            merged.push_back(std::move(t));
    }
    terms.clear();
    for (auto& t : merged)
        if (t.first != 0) terms.push_back(std::move(t));
}

bool PathSum::operator==(const PathSum& o) const {
    PathSum a = *this, b = o;
    a.normalize();
    b.normalize();
    return a.terms == b.terms;
}

std::string PathSum::render() const {
    if (terms.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [c, word] : terms) {
        Int a = c < 0 ? Int(-c) : c;
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        // p0.p1...pk with the rightmost arrow acting first
        if (a != 1 || word.empty()) out << a;
        for (size_t i = 0; i < word.size(); ++i) {
            if (i > 0 || a != 1) out << (i == 0 ? "*" : ".");
            out << word[i];
        }
    }
    return out.str();
}

namespace {

std::vector<std::string> minimal_rotation(const std::vector<std::string>& word) {
    if (word.empty()) return word;
    std::vector<std::string> best = word;
    std::vector<std::string> cur = word;
    for (size_t r = 1; r < word.size(); ++r) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
    }
    return best;
}

}  // namespace

void Potential::add_term(const Int& coeff, std::vector<std::string> word) {
    terms.emplace_back(coeff, std::move(word));
}

void Potential::normalize() {
    for (auto& [c, word] : terms) word = minimal_rotation(word);
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::pair<Int, std::vector<std::string>>> merged;
    for (auto& t : terms) {
        if (!merged.empty() && merged.back().second == t.second)
            merged.back().first += t.first;
        else
            merged.push_back(std::move(t));
    }
    terms.clear();
    for (auto& t : merged)
        if (t.first != 0) terms.push_back(std::move(t));
}

void Potential::validate(const Quiver& q) const {
    for (const auto& [c, word] : terms) {
        if (word.empty()) throw Error("empty cyclic word in potential");
        for (size_t i = 0; i < word.size(); ++i) {
            const Arrow& cur = q.arrow(word[i]);
            const Arrow& next = q.arrow(word[(i + 1) % word.size()]);
            // product notation: the following list entry acts earlier.
            if (cur.src != next.tgt)
                throw Error("cyclic word is not composable at " + word[i] + "." + next.id);
        }
    }
}

std::vector<std::pair<std::pair<std::string, std::string>, PathSum>> mesh_relation(
    const PartialTranslationQuiver& g) {
    if (!g.has_cut) throw Error("mesh relation requires a cut");
    g.validate();
    std::vector<std::pair<std::pair<std::string, std::string>, PathSum>> out;
    for (const auto& j : g.base.vertices()) {
        if (!g.tau_defined(j)) continue;
        bool complete = true;
        PathSum sum;
        for (const auto& a : g.base.arrows_into(j)) {
            if (!g.sigma_defined(a)) {
                complete = false;
                break;
            }
            sum.terms.emplace_back(Int(g.epsilon(a)), std::vector<std::string>{a, g.sigma_of(a)});
        }
        if (!complete) continue;
        sum.normalize();
        out.emplace_back(std::make_pair(j, g.tau_of(j)), std::move(sum));
    }
    return out;
}

PathSum cyclic_derivative(const Potential& w, const std::string& arrow) {
    PathSum out;
    for (const auto& [c, word] : w.terms) {
        for (size_t i = 0; i < word.size(); ++i) {
            if (word[i] != arrow) continue;
            // Remove occurrence i; in product order the cycle continues with
            // the entries after i, then wraps to those before i.
            std::vector<std::string> path;
            for (size_t t = 1; t < word.size(); ++t) path.push_back(word[(i + t) % word.size()]);
            out.terms.emplace_back(c, std::move(path));
        }
    }
    out.normalize();
    return out;
}

namespace {

void validate_cut(const TranslationQuiver& g, const std::set<std::string>& cut) {
    std::set<std::string> covered = cut;
    for (const auto& a : cut) {
        if (!g.base.has_arrow(a)) throw Error("cut contains unknown arrow " + a);
        if (!covered.insert(g.sigma_of(a)).second)
            throw Error("invalid cut: overlaps its sigma-image at " + g.sigma_of(a));
    }
    if (covered.size() != g.base.arrows().size())
        throw Error("invalid cut: cut ⊔ sigma(cut) does not cover the arrows");
    for (const auto& a : cut)
        if (!cut.count(g.sigma_of(g.sigma_of(a))))
            throw Error("invalid cut: not sigma^2-stable at " + a);
}

}  // namespace

std::map<std::string, int> change_cut_sign(const TranslationQuiver& g, const std::set<std::string>& new_cut) {
    g.validate();
    if (!g.has_cut) throw Error("cut change requires a quiver with a cut");
    validate_cut(g, new_cut);
    std::map<std::string, int> eta;
    for (const auto& a : g.base.arrows())
        eta[a.id] = (g.cut.count(a.id) && !new_cut.count(a.id)) ? -1 : +1;
    // eta(a) eta(sigma a) = epsilon(a) epsilon'(a)
    for (const auto& a : g.base.arrows()) {
        int eps_old = g.epsilon(a.id);
        int eps_new = new_cut.count(a.id) ? +1 : -1;
        if (eta.at(a.id) * eta.at(g.sigma_of(a.id)) != eps_old * eps_new)
            throw Error("cut sign law failed at arrow " + a.id);
    }
    return eta;
}

PartialTranslationQuiver restrict_to(const PartialTranslationQuiver& g, const std::set<std::string>& vertices) {
    PartialTranslationQuiver r;
    for (const auto& v : g.base.vertices())
        if (vertices.count(v)) r.base.add_vertex(v);
    for (const auto& a : g.base.arrows())
        if (vertices.count(a.src) && vertices.count(a.tgt)) r.base.add_arrow(a.id, a.src, a.tgt);
    for (const auto& [v, w] : g.tau)
        if (r.base.has_vertex(v) && r.base.has_vertex(w)) r.tau[v] = w;
    for (const auto& [a, b] : g.sigma)
        if (r.base.has_arrow(a) && r.base.has_arrow(b)) r.sigma[a] = b;
    r.has_cut = g.has_cut;
    if (g.has_cut)
        for (const auto& a : g.cut)
            if (r.base.has_arrow(a)) r.cut.insert(a);
    return r;
}

}  // namespace qmv

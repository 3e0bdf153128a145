#include "qmv/quiver.hpp"

#include <algorithm>
#include <sstream>

namespace qmv {

void Quiver::add_vertex(const std::string& id) {
    if (id.empty()) throw Error("empty vertex id");
    if (vertex_index_.count(id)) throw Error("duplicate vertex id: " + id);
    vertex_index_[id] = vertices_.size();
    vertices_.push_back(id);
}

void Quiver::add_arrow(const std::string& id, const std::string& src, const std::string& tgt) {
    if (id.empty()) throw Error("empty arrow id");
    if (arrow_index_.count(id)) throw Error("duplicate arrow id: " + id);
    if (!has_vertex(src)) throw Error("arrow " + id + " has unknown source: " + src);
    if (!has_vertex(tgt)) throw Error("arrow " + id + " has unknown target: " + tgt);
    arrow_index_[id] = arrows_.size();
    arrows_.push_back(Arrow{id, src, tgt});
}

const Arrow& Quiver::arrow(const std::string& id) const {
    auto it = arrow_index_.find(id);
    if (it == arrow_index_.end()) throw Error("unknown arrow id: " + id);
    return arrows_[it->second];
}

std::vector<std::string> Quiver::arrows_from(const std::string& v) const {
    std::vector<std::string> out;
    for (const auto& a : arrows_)
        if (a.src == v) out.push_back(a.id);
    return out;
}

std::vector<std::string> Quiver::arrows_into(const std::string& v) const {
    std::vector<std::string> out;
    for (const auto& a : arrows_)
        if (a.tgt == v) out.push_back(a.id);
    return out;
}

// ---------------------------------------------------------------------------

QuiverAutomorphism QuiverAutomorphism::identity(const Quiver& q) {
    QuiverAutomorphism f;
    for (const auto& v : q.vertices()) f.vertex_map[v] = v;
    for (const auto& a : q.arrows()) f.arrow_map[a.id] = a.id;
    return f;
}

const std::string& QuiverAutomorphism::vertex(const std::string& v) const {
    auto it = vertex_map.find(v);
    if (it == vertex_map.end()) throw Error("automorphism undefined on vertex " + v);
    return it->second;
}

const std::string& QuiverAutomorphism::arrow(const std::string& a) const {
    auto it = arrow_map.find(a);
    if (it == arrow_map.end()) throw Error("automorphism undefined on arrow " + a);
    return it->second;
}

void QuiverAutomorphism::validate(const Quiver& q) const {
    std::set<std::string> vimg, aimg;
    for (const auto& v : q.vertices()) {
        const std::string& w = vertex(v);
        if (!q.has_vertex(w)) throw Error("automorphism maps vertex outside the quiver: " + w);
        if (!vimg.insert(w).second) throw Error("automorphism is not injective on vertices at " + w);
    }
    for (const auto& a : q.arrows()) {
        const std::string& b = arrow(a.id);
        if (!q.has_arrow(b)) throw Error("automorphism maps arrow outside the quiver: " + b);
        if (!aimg.insert(b).second) throw Error("automorphism is not injective on arrows at " + b);
        // Commutes with source and target.
        const Arrow& bb = q.arrow(b);
        if (bb.src != vertex(a.src) || bb.tgt != vertex(a.tgt))
            throw Error("automorphism does not commute with endpoints on arrow " + a.id);
    }
    if (vimg.size() != q.vertices().size() || aimg.size() != q.arrows().size())
        throw Error("automorphism is not a bijection");
}

// ---------------------------------------------------------------------------

long long dim_total(const DimVector& v) {
    long long t = 0;
    for (const auto& [x, d] : v) t += d;
    return t;
}

bool dim_is_zero(const DimVector& v) {
    for (const auto& [x, d] : v)
        if (d != 0) return false;
    return true;
}

DimVector dim_add(const DimVector& a, const DimVector& b) {
    DimVector r = a;
    for (const auto& [x, d] : b) {
        r[x] += d;
        if (r[x] == 0) r.erase(x);
    }
    return r;
}

DimVector dim_sub(const DimVector& a, const DimVector& b) {
    DimVector r = a;
    for (const auto& [x, d] : b) {
        r[x] -= d;
        if (r[x] < 0) throw Error("dimension vector difference is negative at " + x);
        if (r[x] == 0) r.erase(x);
    }
    return r;
}

bool dim_leq(const DimVector& a, const DimVector& b) {
    for (const auto& [x, d] : a) {
        if (d == 0) continue;
        auto it = b.find(x);
        if (it == b.end() || it->second < d) return false;
    }
    return true;
}

void validate_dimvector(const Quiver& q, const DimVector& v, const std::string& what) {
    for (const auto& [x, d] : v) {
        if (d < 0) throw Error(what + " has negative entry at " + x);
        if (d > 0 && !q.has_vertex(x)) throw Error(what + " supported outside the quiver at " + x);
    }
}

Int euler_form(const Quiver& q, const DimVector& m, const DimVector& n) {
    validate_dimvector(q, m, "dimension vector");
    validate_dimvector(q, n, "dimension vector");
    Int acc = 0;
    for (const auto& [x, d] : m) {
        auto it = n.find(x);
        if (it != n.end()) acc += Int(d) * it->second;
    }
    for (const auto& a : q.arrows()) {
        auto ms = m.find(a.src);
        auto nt = n.find(a.tgt);
        if (ms != m.end() && nt != n.end()) acc -= Int(ms->second) * nt->second;
    }
    return acc;
}

DimVector twist_dimvector(const std::map<std::string, std::string>& tau_vertex, const DimVector& v) {
    DimVector r;
    for (const auto& [x, y] : tau_vertex) {
        auto it = v.find(y);
        if (it != v.end() && it->second != 0) r[x] = it->second;
    }
    return r;
}

StabilityParam twist_stability(const std::map<std::string, std::string>& tau_vertex, const StabilityParam& th) {
    StabilityParam r;
    for (const auto& [x, y] : tau_vertex) {
        auto it = th.find(y);
        if (it != th.end()) r[x] = it->second;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

long long parse_int(const std::string& tok, int line_no) {
    try {
        size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed integer '" + tok + "'", line_no);
    }
}

}  // namespace

QuiverFile parse_quiver(const std::string& text) {
    QuiverFile qf;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto need = [&](const std::vector<std::string>& toks, size_t n, const std::string& dir) {
        if (toks.size() != n + 1)
            throw ParseError("directive '" + dir + "' expects " + std::to_string(n) + " argument(s)", line_no);
    };
    auto known_vertex = [&](const std::string& v) {
        if (!qf.quiver.has_vertex(v)) throw ParseError("unknown vertex '" + v + "'", line_no);
    };
    auto known_arrow = [&](const std::string& a) {
        if (!qf.quiver.has_arrow(a)) throw ParseError("unknown arrow '" + a + "'", line_no);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& dir = toks[0];
        try {
            if (dir == "vertex") {
                need(toks, 1, dir);
                qf.quiver.add_vertex(toks[1]);
            } else if (dir == "arrow") {
                need(toks, 3, dir);
                qf.quiver.add_arrow(toks[1], toks[2], toks[3]);
            } else if (dir == "tau") {
                need(toks, 2, dir);
                known_vertex(toks[1]);
                known_vertex(toks[2]);
                if (qf.tau.count(toks[1])) throw ParseError("tau already defined on '" + toks[1] + "'", line_no);
                qf.tau[toks[1]] = toks[2];
            } else if (dir == "sigma") {
                need(toks, 2, dir);
                known_arrow(toks[1]);
                known_arrow(toks[2]);
                if (qf.sigma.count(toks[1])) throw ParseError("sigma already defined on '" + toks[1] + "'", line_no);
                qf.sigma[toks[1]] = toks[2];
            } else if (dir == "cut") {
                need(toks, 1, dir);
                known_arrow(toks[1]);
                qf.cut.insert(toks[1]);
            } else if (dir == "weight") {
                need(toks, 2, dir);
                known_arrow(toks[1]);
                qf.weight[toks[1]] = parse_int(toks[2], line_no);
            } else if (dir == "dim") {
                need(toks, 2, dir);
                known_vertex(toks[1]);
                long long d = parse_int(toks[2], line_no);
                if (d < 0) throw ParseError("negative dimension at '" + toks[1] + "'", line_no);
                if (d > 0) qf.dim[toks[1]] = d;
            } else if (dir == "theta") {
                need(toks, 2, dir);
                known_vertex(toks[1]);
                qf.theta[toks[1]] = parse_rational(toks[2]);
            } else if (dir == "framing") {
                need(toks, 2, dir);
                known_vertex(toks[1]);
                long long d = parse_int(toks[2], line_no);
                if (d < 0) throw ParseError("negative framing at '" + toks[1] + "'", line_no);
                if (d > 0) qf.framing[toks[1]] = d;
            } else if (dir == "double" || dir == "repetition" || dir == "frame" || dir == "stabilize") {
                need(toks, 0, dir);
                qf.constructions.push_back(dir);
            } else if (dir == "localize") {
                need(toks, 1, dir);
                const std::string& arg = toks[1];
                if (arg.rfind("e=", 0) != 0)
                    throw ParseError("localize expects e=<int>", line_no);
                (void)parse_int(arg.substr(2), line_no);
                qf.constructions.push_back(dir + " " + arg);
            } else {
                throw ParseError("unknown directive '" + dir + "'", line_no);
            }
        } catch (const ParseError& e) {
            if (e.line_no > 0) throw;
            throw ParseError(e.what(), line_no);
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return qf;
}

std::string render_quiver(const QuiverFile& qf) {
    std::ostringstream out;
    for (const auto& v : qf.quiver.vertices()) out << "vertex " << v << "\n";
    for (const auto& a : qf.quiver.arrows()) out << "arrow " << a.id << " " << a.src << " " << a.tgt << "\n";
    for (const auto& [v, w] : qf.tau) out << "tau " << v << " " << w << "\n";
    for (const auto& [a, b] : qf.sigma) out << "sigma " << a << " " << b << "\n";
    for (const auto& a : qf.cut) out << "cut " << a << "\n";
    for (const auto& [a, d] : qf.weight) out << "weight " << a << " " << d << "\n";
    for (const auto& [v, d] : qf.dim) out << "dim " << v << " " << d << "\n";
    for (const auto& [v, t] : qf.theta) out << "theta " << v << " " << render_rational(t) << "\n";
    for (const auto& [v, d] : qf.framing) out << "framing " << v << " " << d << "\n";
    for (const auto& c : qf.constructions) out << c << "\n";
    return out.str();
}

}  // namespace qmv

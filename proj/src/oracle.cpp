#include "qmv/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace qmv::oracle {

namespace {

bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Flat row-major matrix over F_p.
struct ModMat {
    long long rows = 0, cols = 0;
    std::vector<long long> e;

    static ModMat zero(long long r, long long c) { return ModMat{r, c, std::vector<long long>(static_cast<size_t>(r * c), 0)}; }
    long long& at(long long r, long long c) { return e[static_cast<size_t>(r * cols + c)]; }
    long long at(long long r, long long c) const { return e[static_cast<size_t>(r * cols + c)]; }
};

ModMat mul(const ModMat& a, const ModMat& b, long long p) {
    ModMat r = ModMat::zero(a.rows, b.cols);
    for (long long i = 0; i < a.rows; ++i)
        for (long long k = 0; k < a.cols; ++k) {
            long long aik = a.at(i, k);
            if (aik == 0) continue;
            for (long long j = 0; j < b.cols; ++j)
                r.at(i, j) = (r.at(i, j) + aik * b.at(k, j)) % p;
        }
    return r;
}

struct PreparedRelation {
    // per term: coefficient mod p and arrow indices in product order
    std::vector<std::pair<long long, std::vector<size_t>>> terms;
    long long rows = 0, cols = 0;
    size_t last_arrow = 0;  // largest arrow index used; relation is checkable after it
};

}  // namespace

Int count_points(const Quiver& q, const DimVector& dim,
                 const std::vector<PathSum>& relations, long long p) {
    if (!is_prime(p)) throw Error("point-count oracle needs a prime field size, got " + std::to_string(p));
    validate_dimvector(q, dim, "dimension vector");
    auto dim_of = [&](const std::string& v) {
        auto it = dim.find(v);
        return it == dim.end() ? 0LL : it->second;
    };

    const auto& arrows = q.arrows();
    std::map<std::string, size_t> arrow_index;
    long long cells = 0;
    for (size_t i = 0; i < arrows.size(); ++i) {
        arrow_index[arrows[i].id] = i;
        cells += dim_of(arrows[i].src) * dim_of(arrows[i].tgt);
    }
    if (static_cast<double>(cells) * std::log2(static_cast<double>(p)) > 24.0 + 1e-9)
        throw CapError("point-count oracle cap exceeded: p^(matrix entries) > 2^24 at p=" +
                       std::to_string(p) + ", entries=" + std::to_string(cells));

    // Prepare relations: endpoint checks, coefficients mod p, readiness index.
    std::vector<PreparedRelation> prep;
    for (const auto& rel : relations) {
        PathSum n = rel;
        n.normalize();
        if (n.terms.empty()) continue;  // zero relation
        PreparedRelation pr;
        bool first = true;
        for (const auto& [c, word] : n.terms) {
            if (word.empty()) throw Error("point-count oracle cannot place an empty path");
            for (size_t t = 0; t + 1 < word.size(); ++t)
                if (q.arrow(word[t]).src != q.arrow(word[t + 1]).tgt)
                    throw Error("relation path is not composable at " + word[t]);
            long long r = dim_of(q.arrow(word.front()).tgt);
            long long cl = dim_of(q.arrow(word.back()).src);
            if (first) {
                pr.rows = r;
                pr.cols = cl;
                first = false;
            } else if (pr.rows != r || pr.cols != cl ||
                       q.arrow(word.front()).tgt != q.arrow(n.terms.front().second.front()).tgt ||
                       q.arrow(word.back()).src != q.arrow(n.terms.front().second.back()).src) {
                throw Error("relation mixes paths with different endpoints");
            }
            long long cm = static_cast<long long>(c % p);
            if (cm < 0) cm += p;
            std::vector<size_t> idx;
            for (const auto& a : word) {
                auto it = arrow_index.find(a);
                if (it == arrow_index.end()) throw Error("relation uses unknown arrow " + a);
                idx.push_back(it->second);
                pr.last_arrow = std::max(pr.last_arrow, it->second);
            }
            pr.terms.emplace_back(cm, std::move(idx));
        }
        if (pr.rows == 0 || pr.cols == 0) continue;  // maps to/from the zero space
        prep.push_back(std::move(pr));
    }
    // bucket by readiness
    std::vector<std::vector<size_t>> ready_after(arrows.size());
    for (size_t r = 0; r < prep.size(); ++r) ready_after[prep[r].last_arrow].push_back(r);

    std::vector<ModMat> mat(arrows.size());
    for (size_t i = 0; i < arrows.size(); ++i)
        mat[i] = ModMat::zero(dim_of(arrows[i].tgt), dim_of(arrows[i].src));

    auto relation_holds = [&](const PreparedRelation& pr) {
        ModMat acc = ModMat::zero(pr.rows, pr.cols);
        for (const auto& [c, idx] : pr.terms) {
            if (c == 0) continue;
            ModMat mprod = mat[idx.back()];
            for (size_t t = idx.size() - 1; t-- > 0;) mprod = mul(mat[idx[t]], mprod, p);
            for (size_t k = 0; k < acc.e.size(); ++k) acc.e[k] = (acc.e[k] + c * mprod.e[k]) % p;
        }
        return std::all_of(acc.e.begin(), acc.e.end(), [](long long x) { return x == 0; });
    };

    Int count = 0;
    std::function<void(size_t)> walk = [&](size_t k) {
        if (k == arrows.size()) {
            count += 1;
            return;
        }
        ModMat& m = mat[k];
        size_t n = m.e.size();
        std::fill(m.e.begin(), m.e.end(), 0);
        while (true) {
            bool ok = true;
            for (size_t r : ready_after[k])
                if (!relation_holds(prep[r])) {
                    ok = false;
                    break;
                }
            if (ok) walk(k + 1);
            // odometer step over the entries of this arrow's matrix
            size_t t = 0;
            while (t < n && m.e[t] == p - 1) m.e[t++] = 0;
            if (t == n) break;
            ++m.e[t];
        }
    };
    walk(0);
    return count;
}

void ExplicitRep::validate(const Quiver& q) const {
    validate_dimvector(q, dim, "dimension vector");
    for (const auto& [a, m] : mat) {
        if (!q.has_arrow(a)) throw Error("representation matrix on unknown arrow " + a);
        const Arrow& arr = q.arrow(a);
        if (static_cast<long long>(m.size()) != dim_of(arr.tgt))
            throw Error("matrix on " + a + " has the wrong number of rows");
        for (const auto& row : m)
            if (static_cast<long long>(row.size()) != dim_of(arr.src))
                throw Error("matrix on " + a + " has the wrong number of columns");
    }
}

long long rational_rank(std::vector<std::vector<Rat>> m) {
    long long rank = 0;
    size_t cols = m.empty() ? 0 : m[0].size();
    size_t row = 0;
    for (size_t col = 0; col < cols && row < m.size(); ++col) {
        size_t piv = row;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[row]);
        for (size_t r = row + 1; r < m.size(); ++r) {
            if (m[r][col] == 0) continue;
            Rat f = m[r][col] / m[row][col];
            for (size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

long long hom_dim(const Quiver& q, const ExplicitRep& v, const ExplicitRep& w) {
    v.validate(q);
    w.validate(q);
    // unknown blocks f_i of size wdim_i x vdim_i, flattened in vertex order
    std::map<std::string, long long> offset;
    long long total = 0;
    for (const auto& x : q.vertices()) {
        offset[x] = total;
        total += w.dim_of(x) * v.dim_of(x);
    }
    auto entry = [&](const std::string& x, long long r, long long c) {
        return offset.at(x) + r * v.dim_of(x) + c;
    };
    auto mat_of = [](const ExplicitRep& rep, const std::string& a, long long rows, long long cols) {
        auto it = rep.mat.find(a);
        if (it != rep.mat.end()) return it->second;
        return std::vector<std::vector<Rat>>(static_cast<size_t>(rows),
                                             std::vector<Rat>(static_cast<size_t>(cols), Rat(0)));
    };
    std::vector<std::vector<Rat>> rows;
    for (const auto& arr : q.arrows()) {
        long long vs = v.dim_of(arr.src), vt = v.dim_of(arr.tgt);
        long long ws = w.dim_of(arr.src), wt = w.dim_of(arr.tgt);
        auto va = mat_of(v, arr.id, vt, vs);
        auto wa = mat_of(w, arr.id, wt, ws);
        // f_tgt . v_a - w_a . f_src = 0, one equation per (wt x vs) entry
        for (long long r = 0; r < wt; ++r)
            for (long long c = 0; c < vs; ++c) {
                std::vector<Rat> eq(static_cast<size_t>(total), Rat(0));
                for (long long k = 0; k < vt; ++k)
                    eq[static_cast<size_t>(entry(arr.tgt, r, k))] += va[static_cast<size_t>(k)][static_cast<size_t>(c)];
                for (long long k = 0; k < ws; ++k)
                    eq[static_cast<size_t>(entry(arr.src, k, c))] -= wa[static_cast<size_t>(r)][static_cast<size_t>(k)];
                rows.push_back(std::move(eq));
            }
    }
    return total - rational_rank(std::move(rows));
}

}  // namespace qmv::oracle

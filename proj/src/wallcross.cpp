#include "qmv/wallcross.hpp"

#include <sstream>

namespace qmv {

namespace {

// Euclidean remainder; the divisor sign is irrelevant for fiber classes.
long long emod(long long a, long long m) {
    if (m < 0) m = -m;
    long long r = a % m;
    return r < 0 ? r + m : r;
}

long long graded_total(const GradedDim& v) {
    long long total = 0;
    for (const auto& [i, column] : v) {
        for (const auto& [n, c] : column) {
            if (c < 0) throw Error("negative entry in graded dimension vector at " + graded_id(i, {n}));
            total += c;
        }
    }
    return total;
}

// theta must be constant on every (vertex, degree mod e) class touched by
// either its own support or the dimension vector.  This is exactly invariance
// under the grading shift, which is what keeps slopes of twisted subvectors
// meaningful.
void check_theta_symmetric(const LocalizedQuiver& g, const StabilityParam& theta,
                           const DimVector& flat) {
    if (g.total.size() != 1 || g.total[0] == 0) throw Error("stability check needs a rank-1 grading with nonzero period");
    long long e = g.total[0];
    std::map<std::pair<std::string, long long>, std::pair<std::string, Rat>> seen;
    auto visit = [&](const std::string& id) {
        auto [base, deg] = split_graded_id(id);
        if (deg.size() != 1) throw Error("expected a rank-1 graded id, got " + id);
        auto it = theta.find(id);
        Rat value = it == theta.end() ? Rat(0) : it->second;
        std::pair<std::string, long long> cls{base, emod(deg[0], e)};
        auto [slot, fresh] = seen.emplace(cls, std::make_pair(id, value));
        if (!fresh && slot->second.second != value) {
            throw Error("tau-asymmetric stability parameter: " + slot->second.first + " and " + id +
                        " lie over the same vertex fiber but carry different weights");
        }
    };
    for (const auto& [id, value] : theta) {
        (void)value;
        visit(id);
    }
    for (const auto& [id, c] : flat) {
        (void)c;
        visit(id);
    }
}

std::string render_theta(const StabilityParam& theta) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& [id, value] : theta) {
        if (value == 0) continue;
        if (!first) out << ",";
        first = false;
        out << id << ":" << render_rational(value);
    }
    out << "}";
    return out.str();
}

}  // namespace

DimVector flatten_graded(const GradedDim& v) {
    DimVector flat;
    for (const auto& [i, column] : v) {
        for (const auto& [n, c] : column) {
            if (c != 0) flat[graded_id(i, {n})] += c;
        }
    }
    return flat;
}

GradedDim unflatten_graded(const DimVector& v) {
    GradedDim out;
    for (const auto& [id, c] : v) {
        if (c == 0) continue;
        auto [base, deg] = split_graded_id(id);
        if (deg.size() != 1) throw Error("expected a rank-1 graded id, got " + id);
        out[base][deg[0]] += c;
    }
    return out;
}

Rat slope(const StabilityParam& theta, const DimVector& v) {
    Rat num = 0;
    Rat den = 0;
    for (const auto& [id, c] : v) {
        if (c == 0) continue;
        auto it = theta.find(id);
        if (it != theta.end()) num += it->second * c;
        den += c;
    }
    if (den == 0) throw Error("slope of the zero dimension vector");
    return num / den;
}

bool is_generic(const StabilityParam& theta, const DimVector& v) {
    std::vector<std::pair<std::string, long long>> support;
    for (const auto& [id, c] : v) {
        if (c < 0) throw Error("negative entry in dimension vector at " + id);
        if (c > 0) support.emplace_back(id, c);
    }
    if (support.empty()) return true;
    Rat mu = slope(theta, v);
    DimVector u;
    // Odometer over all 0 <= u <= v; skip the two trivial ends.
    std::vector<long long> digits(support.size(), 0);
    for (;;) {
        size_t k = 0;
        while (k < digits.size() && digits[k] == support[k].second) {
            digits[k] = 0;
            ++k;
        }
        if (k == digits.size()) break;
        ++digits[k];
        bool proper = false;
        for (size_t t = 0; t < digits.size(); ++t) proper = proper || digits[t] < support[t].second;
        if (!proper) continue;
        u.clear();
        for (size_t t = 0; t < digits.size(); ++t) {
            if (digits[t] != 0) u[support[t].first] = digits[t];
        }
        if (slope(theta, u) == mu) return false;
    }
    return true;
}

std::vector<std::vector<DimVector>> enumerate_decompositions(
    const DimVector& v, const std::function<bool(const DimVector&)>& keep_prefix) {
    std::vector<std::pair<std::string, long long>> support;
    long long total = 0;
    for (const auto& [id, c] : v) {
        if (c < 0) throw Error("negative entry in dimension vector at " + id);
        if (c > 0) {
            support.emplace_back(id, c);
            total += c;
        }
    }
    std::vector<std::vector<DimVector>> out;
    if (total == 0) {
        out.emplace_back();  // the empty tuple decomposes zero
        return out;
    }

    std::vector<long long> remaining(support.size());
    for (size_t t = 0; t < support.size(); ++t) remaining[t] = support[t].second;
    std::vector<DimVector> parts;
    DimVector prefix;
    long long left = total;

    // At each level walk the nonzero subvectors u <= remaining in ascending
    // lexicographic order (most-significant digit last, matching map order).
    std::function<void()> descend = [&]() {
        std::vector<long long> u(support.size(), 0);
        for (;;) {
            size_t k = 0;
            while (k < u.size() && u[k] == remaining[k]) {
                u[k] = 0;
                ++k;
            }
            if (k == u.size()) return;
            ++u[k];
            long long used = 0;
            DimVector part;
            for (size_t t = 0; t < u.size(); ++t) {
                used += u[t];
                if (u[t] != 0) part[support[t].first] = u[t];
            }
            if (used == left) {
                parts.push_back(part);
                out.push_back(parts);
                parts.pop_back();
                continue;
            }
            for (const auto& [id, c] : part) prefix[id] += c;
            if (!keep_prefix || keep_prefix(prefix)) {
                parts.push_back(part);
                for (size_t t = 0; t < u.size(); ++t) remaining[t] -= u[t];
                left -= used;
                descend();
                left += used;
                for (size_t t = 0; t < u.size(); ++t) remaining[t] += u[t];
                parts.pop_back();
            }
            for (const auto& [id, c] : part) {
                prefix[id] -= c;
                if (prefix[id] == 0) prefix.erase(id);
            }
        }
    };
    descend();
    return out;
}

Int nu_form(const LocalizedQuiver& g, const GradedDim& u, const GradedDim& v) {
    return -graded_euler_cut(g, v, u) - graded_euler_cut(g, u, twist_graded(g, v));
}

ClassReport semistable_stack_class(const LocalizedQuiver& g, const StabilityParam& theta,
                                   const GradedDim& v) {
    long long total = graded_total(v);
    if (total > 8) {
        throw CapError("wall-crossing is capped at total graded dimension 8 (asked for " +
                       std::to_string(total) + ")");
    }
    DimVector flat = flatten_graded(v);
    check_theta_symmetric(g, theta, flat);

    std::ostringstream fp;
    fp << "sstack|v=" << render_graded(v) << "|theta=" << render_theta(theta);
    ClassReport report;
    report.algorithm = "wall-crossing";
    report.fingerprint = fp.str();

    if (flat.empty()) {
        report.value = MotiveClass::one();
        return report;
    }
    Rat mu = slope(theta, flat);

    std::map<DimVector, MotiveClass> stack_cache;
    auto stack_of = [&](const DimVector& u) -> const MotiveClass& {
        auto it = stack_cache.find(u);
        if (it == stack_cache.end()) {
            it = stack_cache.emplace(u, stack_class(g, unflatten_graded(u)).value).first;
        }
        return it->second;
    };

    auto tuples = enumerate_decompositions(
        flat, [&](const DimVector& prefix) { return slope(theta, prefix) > mu; });

    MotiveClass acc = MotiveClass::zero();
    std::vector<GradedDim> graded_parts;
    for (const auto& tuple : tuples) {
        graded_parts.clear();
        for (const auto& part : tuple) graded_parts.push_back(unflatten_graded(part));
        Int shift = 0;
        for (size_t i = 0; i < graded_parts.size(); ++i) {
            for (size_t j = i + 1; j < graded_parts.size(); ++j) {
                shift += nu_form(g, graded_parts[i], graded_parts[j]);
            }
        }
        MotiveClass term = MotiveClass::lefschetz_power(shift.convert_to<long long>());
        for (const auto& part : tuple) term *= stack_of(part);
        // Moebius inversion of the filtration sum: alternate on the number of parts.
        if (tuple.size() % 2 == 1) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    report.value = acc;
    return report;
}

ClassReport stable_variety_class(const LocalizedQuiver& g, const StabilityParam& theta,
                                 const GradedDim& v) {
    DimVector flat = flatten_graded(v);
    if (!is_generic(theta, flat)) {
        throw Error("stability parameter is not generic for " + render_graded(v) +
                    ": a proper subvector shares its slope");
    }
    ClassReport report = semistable_stack_class(g, theta, v);
    std::ostringstream fp;
    fp << "stable|" << report.fingerprint;
    report.fingerprint = fp.str();
    if (flat.empty()) {
        // The only representation of dimension zero is a point with trivial
        // automorphisms, so there is no (L-1) gauge factor to strip.
        report.value = MotiveClass::one();
        return report;
    }
    MotiveClass value =
        (LaurentPoly::monomial(1) - LaurentPoly::one()) * report.value;
    if (!value.is_laurent()) {
        throw Error("failed to reduce to a Laurent polynomial: " + value.render());
    }
    report.value = MotiveClass(value.as_laurent());
    return report;
}

}  // namespace qmv

#include "qmv/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

namespace qmv {

// ---------------------------------------------------------------------------
// LaurentPoly

void LaurentPoly::set(long long deg, Int c) {
    if (c == 0)
        coeff_.erase(deg);
    else
        coeff_[deg] = std::move(c);
}

LaurentPoly LaurentPoly::monomial(long long deg, Int c) {
    LaurentPoly p;
    p.set(deg, std::move(c));
    return p;
}

bool LaurentPoly::is_one() const {
    return coeff_.size() == 1 && coeff_.begin()->first == 0 && coeff_.begin()->second == 1;
}

long long LaurentPoly::max_degree() const {
    if (coeff_.empty()) throw Error("degree of zero polynomial");
    return coeff_.rbegin()->first;
}

long long LaurentPoly::min_degree() const {
    if (coeff_.empty()) throw Error("degree of zero polynomial");
    return coeff_.begin()->first;
}

Int LaurentPoly::coefficient(long long deg) const {
    auto it = coeff_.find(deg);
    return it == coeff_.end() ? Int(0) : it->second;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r;
    for (const auto& [d, c] : coeff_) r.coeff_[d] = -c;
    return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [d, c] : o.coeff_) {
        auto it = r.coeff_.find(d);
        if (it == r.coeff_.end()) {
            r.coeff_[d] = c;
        } else {
            it->second += c;
            if (it->second == 0) r.coeff_.erase(it);
        }
    }
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly r;
    for (const auto& [d1, c1] : coeff_)
        for (const auto& [d2, c2] : o.coeff_) {
            auto it = r.coeff_.find(d1 + d2);
            if (it == r.coeff_.end()) {
                Int v = c1 * c2;
                if (v != 0) r.coeff_[d1 + d2] = std::move(v);
            } else {
                it->second += c1 * c2;
                if (it->second == 0) r.coeff_.erase(it);
            }
        }
    return r;
}

LaurentPoly LaurentPoly::shifted(long long deg) const {
    LaurentPoly r;
    for (const auto& [d, c] : coeff_) r.coeff_[d + deg] = c;
    return r;
}

LaurentPoly LaurentPoly::dual() const {
    LaurentPoly r;
    for (const auto& [d, c] : coeff_) r.coeff_[-d] = c;
    return r;
}

std::optional<LaurentPoly> LaurentPoly::divide_exact(const LaurentPoly& o) const {
    if (o.is_zero()) throw Error("division by zero polynomial");
    if (is_zero()) return LaurentPoly::zero();
    // Shift both to ordinary polynomials; the quotient picks up the net shift.
    const long long shift = min_degree() - o.min_degree();
    LaurentPoly rem = shifted(-min_degree());
    LaurentPoly div = o.shifted(-o.min_degree());
    const long long dn = div.max_degree();
    const Int& lead = div.coeff_.rbegin()->second;
    LaurentPoly quot;
    while (!rem.is_zero()) {
        const long long dr = rem.max_degree();
        if (dr < dn) return std::nullopt;
        const Int& cr = rem.coeff_.rbegin()->second;
        if (cr % lead != 0) return std::nullopt;
        Int t = cr / lead;
        quot.set(dr - dn, t);
        rem -= div.shifted(dr - dn) * LaurentPoly::monomial(0, t);
    }
    return quot.shifted(shift);
}

Rat LaurentPoly::evaluate(const Rat& q) const {
    Rat acc = 0;
    for (const auto& [d, c] : coeff_) {
        if (d < 0 && q == 0) throw Error("evaluation at q = 0 with negative powers of L");
        Rat term = c;
        Rat base = d >= 0 ? q : Rat(denominator(q), numerator(q));
        for (long long k = 0; k < (d >= 0 ? d : -d); ++k) term *= base;
        acc += term;
    }
    return acc;
}

std::string LaurentPoly::render() const {
    if (coeff_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) {
        const long long d = it->first;
        const Int& c = it->second;
        const bool neg = c < 0;
        Int a = neg ? Int(-c) : c;
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        if (d == 0) {
            out << a;
        } else {
            if (a != 1) out << a;
            out << "L";
            if (d != 1) out << "^" << d;
        }
    }
    return out.str();
}

LaurentPoly cyclotomic_factor(long long n) {
    return LaurentPoly::monomial(n) - LaurentPoly::one();
}

// ---------------------------------------------------------------------------
// MotiveClass

MotiveClass::MotiveClass(LaurentPoly num, const std::map<long long, long long>& denominator_factors)
    : num_(std::move(num)) {
    for (const auto& [n, mult] : denominator_factors) {
        if (n < 1) throw Error("denominator factor L^n - 1 needs n >= 1");
        if (mult < 0) throw Error("negative denominator multiplicity");
        if (mult > 0) den_[n] = mult;
    }
    reduce();
}

MotiveClass MotiveClass::inverse_factor(long long n) {
    return MotiveClass(LaurentPoly::one(), {{n, 1}});
}

void MotiveClass::reduce() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = den_.rbegin(); it != den_.rend(); ++it) {
            while (it->second > 0) {
                auto q = num_.divide_exact(cyclotomic_factor(it->first));
                if (!q) break;
                num_ = *q;
                --it->second;
                changed = true;
            }
        }
        for (auto it = den_.begin(); it != den_.end();)
            it = it->second == 0 ? den_.erase(it) : std::next(it);
    }
}

LaurentPoly MotiveClass::as_laurent() const {
    if (!den_.empty())
        throw Error("class did not reduce to a Laurent polynomial: " + render());
    return num_;
}

namespace {
LaurentPoly factor_product(const std::map<long long, long long>& den) {
    LaurentPoly p = LaurentPoly::one();
    for (const auto& [n, mult] : den)
        for (long long k = 0; k < mult; ++k) p *= cyclotomic_factor(n);
    return p;
}
}  // namespace

MotiveClass MotiveClass::operator-() const {
    MotiveClass r = *this;
    r.num_ = -r.num_;
    return r;
}

MotiveClass MotiveClass::operator+(const MotiveClass& o) const {
    // Common denominator: per-factor maximum of the two multiplicity maps.
    std::map<long long, long long> common = den_;
    for (const auto& [n, mult] : o.den_) {
        auto& slot = common[n];
        slot = std::max(slot, mult);
    }
    std::map<long long, long long> pad_a, pad_b;
    for (const auto& [n, mult] : common) {
        long long have_a = den_.count(n) ? den_.at(n) : 0;
        long long have_b = o.den_.count(n) ? o.den_.at(n) : 0;
        if (mult > have_a) pad_a[n] = mult - have_a;
        if (mult > have_b) pad_b[n] = mult - have_b;
    }
    MotiveClass r;
    r.num_ = num_ * factor_product(pad_a) + o.num_ * factor_product(pad_b);
    r.den_ = common;
    r.reduce();
    return r;
}

MotiveClass MotiveClass::operator-(const MotiveClass& o) const { return *this + (-o); }

MotiveClass MotiveClass::operator*(const MotiveClass& o) const {
    MotiveClass r;
    r.num_ = num_ * o.num_;
    r.den_ = den_;
    for (const auto& [n, mult] : o.den_) r.den_[n] += mult;
    r.reduce();
    return r;
}

bool MotiveClass::operator==(const MotiveClass& o) const {
    // Value equality via cross-multiplication; reduced forms of equal values
    // can differ in how they split shared factors, so compare products.
    return num_ * factor_product(o.den_) == o.num_ * factor_product(den_);
}

MotiveClass MotiveClass::dual() const {
    // dual(L^n - 1) = -L^{-n} (L^n - 1), so each denominator factor stays put
    // and contributes -L^{n} to the numerator.
    MotiveClass r;
    r.num_ = num_.dual();
    r.den_ = den_;
    for (const auto& [n, mult] : den_)
        for (long long k = 0; k < mult; ++k) r.num_ *= -LaurentPoly::monomial(n);
    r.reduce();
    return r;
}

Rat MotiveClass::evaluate(const Rat& q) const {
    Rat val = num_.evaluate(q);
    for (const auto& [n, mult] : den_) {
        Rat f = LaurentPoly(cyclotomic_factor(n)).evaluate(q);
        if (f == 0) throw Error("pole at q = " + render_rational(q) + " (factor L^" + std::to_string(n) + " - 1)");
        for (long long k = 0; k < mult; ++k) val /= f;
    }
    return val;
}

std::string MotiveClass::render() const {
    if (den_.empty()) return num_.render();
    std::ostringstream out;
    const bool wrap_num = num_.coefficients().size() > 1;
    if (wrap_num)
        out << "(" << num_.render() << ")";
    else
        out << num_.render();
    out << "/";
    long long nfactors = 0;
    for (const auto& [n, mult] : den_) nfactors += mult;
    if (nfactors > 1) out << "(";
    bool first = true;
    for (const auto& [n, mult] : den_)
        for (long long k = 0; k < mult; ++k) {
            if (!first) out << "*";
            first = false;
            out << "(L";
            if (n != 1) out << "^" << n;
            out << "-1)";
        }
    if (nfactors > 1) out << ")";
    return out.str();
}

// ---------------------------------------------------------------------------
// Parsing of the render() grammar.

namespace {

struct ClassLexer {
    const std::string& text;
    size_t pos = 0;

    explicit ClassLexer(const std::string& t) : text(t) {}

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_space();
        return pos >= text.size();
    }
    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "' in class expression");
    }
    Int integer() {
        skip_space();
        size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == digits) throw ParseError("expected integer in class expression");
        return Int(text.substr(start, pos - start));
    }
};

// term := INT ['*'] [Lpow] | Lpow ;  Lpow := 'L' ['^' INT]
LaurentPoly parse_term(ClassLexer& lex) {
    Int coef = 1;
    bool have_coef = false;
    if (std::isdigit(static_cast<unsigned char>(lex.peek()))) {
        coef = lex.integer();
        have_coef = true;
        lex.accept('*');
    }
    if (lex.peek() == 'L') {
        ++lex.pos;
        long long deg = 1;
        if (lex.accept('^')) deg = static_cast<long long>(lex.integer());
        return LaurentPoly::monomial(deg, coef);
    }
    if (!have_coef) throw ParseError("expected term in class expression");
    return LaurentPoly::monomial(0, coef);
}

LaurentPoly parse_sum(ClassLexer& lex) {
    LaurentPoly acc;
    bool negate = false;
    if (lex.accept('-'))
        negate = true;
    else
        lex.accept('+');
    LaurentPoly t = parse_term(lex);
    acc = negate ? -t : t;
    while (true) {
        char c = lex.peek();
        if (c != '+' && c != '-') break;
        ++lex.pos;
        LaurentPoly u = parse_term(lex);
        acc = (c == '-') ? acc - u : acc + u;
    }
    return acc;
}

// factor := '(' sum ')' ['^' INT], where the sum must be L^n - 1
void parse_denom_factor(ClassLexer& lex, std::map<long long, long long>& den) {
    lex.expect('(');
    LaurentPoly p = parse_sum(lex);
    lex.expect(')');
    long long power = 1;
    if (lex.accept('^')) power = static_cast<long long>(lex.integer());
    if (power < 1) throw ParseError("denominator factor power must be positive");
    if (p.is_zero() || p.coefficients().size() != 2)
        throw ParseError("denominator factor is not of the form L^n - 1: " + p.render());
    long long n = p.max_degree();
    if (n < 1 || p != cyclotomic_factor(n))
        throw ParseError("denominator factor is not of the form L^n - 1: " + p.render());
    den[n] += power;
}

size_t matching_paren(const std::string& text, size_t open) {
    int depth = 0;
    for (size_t i = open; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')' && --depth == 0) return i;
    }
    throw ParseError("unbalanced parentheses in class expression");
}

}  // namespace

MotiveClass MotiveClass::parse(const std::string& text) {
    ClassLexer lex(text);
    LaurentPoly num;
    if (lex.peek() == '(') {
        // Either "(sum)/denom" or a parse error: sums are never parenthesized
        // except as the numerator of a quotient.
        size_t open = lex.pos;
        size_t close = matching_paren(lex.text, open);
        size_t after = close + 1;
        while (after < lex.text.size() && std::isspace(static_cast<unsigned char>(lex.text[after]))) ++after;
        if (after < lex.text.size() && lex.text[after] == '/') {
            ++lex.pos;
            num = parse_sum(lex);
            lex.expect(')');
        } else {
            throw ParseError("unexpected parenthesized expression without denominator");
        }
    } else {
        num = parse_sum(lex);
    }
    std::map<long long, long long> den;
    if (lex.accept('/')) {
        // Single factor "(L-1)" or parenthesized product "((L-1)*(L^2-1))".
        lex.skip_space();
        if (lex.pos + 1 < lex.text.size() && lex.text[lex.pos] == '(' && lex.text[lex.pos + 1] == '(') {
            lex.expect('(');
            parse_denom_factor(lex, den);
            while (lex.accept('*')) parse_denom_factor(lex, den);
            lex.expect(')');
        } else {
            parse_denom_factor(lex, den);
        }
    }
    if (!lex.eof()) throw ParseError("trailing characters in class expression: " + lex.text.substr(lex.pos));
    return MotiveClass(num, den);
}

MotiveClass operator+(const LaurentPoly& a, const MotiveClass& b) { return MotiveClass(a) + b; }
MotiveClass operator*(const LaurentPoly& a, const MotiveClass& b) { return MotiveClass(a) * b; }

// ---------------------------------------------------------------------------
// Stock classes

LaurentPoly gl_motive(long long n) {
    if (n < 0) throw Error("gl_motive of negative rank");
    LaurentPoly p = LaurentPoly::one();
    for (long long k = 0; k < n; ++k)
        p *= LaurentPoly::monomial(n) - LaurentPoly::monomial(k);
    return p;
}

LaurentPoly grassmannian_motive(long long n, long long r) {
    if (n < 0 || r < 0 || r > n) return LaurentPoly::zero();
    // q-Pascal: [m, j] = [m-1, j-1] + L^j [m-1, j]
    std::vector<LaurentPoly> row{LaurentPoly::one()};
    for (long long m = 1; m <= n; ++m) {
        std::vector<LaurentPoly> next(static_cast<size_t>(std::min(m, r)) + 1);
        for (long long j = 0; j <= std::min(m, r); ++j) {
            LaurentPoly v;
            if (j > 0 && j - 1 < static_cast<long long>(row.size())) v += row[static_cast<size_t>(j - 1)];
            if (j < static_cast<long long>(row.size())) v += row[static_cast<size_t>(j)].shifted(j);
            next[static_cast<size_t>(j)] = v;
        }
        row = std::move(next);
    }
    return row[static_cast<size_t>(r)];
}

MotiveClass pochhammer_inv(long long n) {
    if (n < 0) throw Error("pochhammer_inv of negative index");
    LaurentPoly p = LaurentPoly::one();
    for (long long k = 1; k <= n; ++k)
        p *= LaurentPoly::one() - LaurentPoly::monomial(-k);
    return MotiveClass(p);
}

Rat parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational");
    try {
        return Rat(s);
    } catch (const std::exception&) {
        throw ParseError("malformed rational: " + text);
    }
}

std::string render_rational(const Rat& q) {
    std::ostringstream out;
    out << q;
    return out.str();
}

}  // namespace qmv

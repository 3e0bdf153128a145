// Exact arithmetic in Z[L^{±1}] and its localization at the factors L^n - 1.
//
// LaurentPoly is a sparse Laurent polynomial in the Lefschetz class L with
// arbitrary-precision integer coefficients.  MotiveClass is a LaurentPoly
// divided by a multiset of factors (L^n - 1), kept in a canonically reduced
// form (no remaining factor divides the numerator exactly).  Everything is
// immutable in spirit: operations return new values, so instances can be
// shared freely between worker threads.

#ifndef QMV_RING_HPP
#define QMV_RING_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace qmv {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Base class for all library errors; the CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Malformed textual input (quiver files, class strings); carries a line number
// when one is known.
struct ParseError : Error {
    explicit ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_no(line) {}
    int line_no;
};
// A documented resource cap was exceeded (oracle bit budget, CLI size caps).
struct CapError : Error {
    using Error::Error;
};

class LaurentPoly {
public:
    LaurentPoly() = default;

    static LaurentPoly zero() { return LaurentPoly{}; }
    static LaurentPoly one() { return monomial(0); }
    // c * L^deg
    static LaurentPoly monomial(long long deg, Int c = 1);
    static LaurentPoly from_int(const Int& c) { return monomial(0, c); }

    bool is_zero() const { return coeff_.empty(); }
    bool is_one() const;

    // Degree bounds; calling either on the zero polynomial is an error.
    long long max_degree() const;
    long long min_degree() const;

    Int coefficient(long long deg) const;
    const std::map<long long, Int>& coefficients() const { return coeff_; }

    LaurentPoly operator-() const;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    bool operator==(const LaurentPoly& o) const { return coeff_ == o.coeff_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    // Multiply by L^deg (shift all degrees).
    LaurentPoly shifted(long long deg) const;

    // The involution L -> L^{-1}.
    LaurentPoly dual() const;

    // Exact division: returns the quotient iff o divides *this in Z[L^{±1}].
    std::optional<LaurentPoly> divide_exact(const LaurentPoly& o) const;

    // Substitute L = q; q must be nonzero when negative degrees are present.
    Rat evaluate(const Rat& q) const;

    // Sparse-sum rendering, descending degrees: "L^4 - L^3 + 1", "2L^-1".
    std::string render() const;

private:
    std::map<long long, Int> coeff_;  // degree -> coefficient, zeros never stored
    void set(long long deg, Int c);
    friend class MotiveClass;
};

// L^n - 1
LaurentPoly cyclotomic_factor(long long n);

// A Laurent polynomial divided by a multiset of factors (L^n - 1).  Stored
// reduced: after every operation each remaining denominator factor fails to
// divide the numerator exactly.  Equality is value equality (cross-multiplied),
// not representation equality.
class MotiveClass {
public:
    MotiveClass() = default;
    MotiveClass(const LaurentPoly& num) : num_(num) {}  // NOLINT: intentional implicit lift
    MotiveClass(LaurentPoly num, const std::map<long long, long long>& denominator_factors);

    static MotiveClass zero() { return MotiveClass{}; }
    static MotiveClass one() { return MotiveClass{LaurentPoly::one()}; }
    // L^deg as a class (always invertible, so negative deg is fine).
    static MotiveClass lefschetz_power(long long deg) { return MotiveClass{LaurentPoly::monomial(deg)}; }
    // 1 / (L^n - 1)
    static MotiveClass inverse_factor(long long n);

    const LaurentPoly& numerator() const { return num_; }
    // factor n -> multiplicity of (L^n - 1)
    const std::map<long long, long long>& denominator_factors() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    // True when the reduced form has an empty denominator.
    bool is_laurent() const { return den_.empty(); }
    // The numerator when is_laurent(); otherwise a non-reduction error.
    LaurentPoly as_laurent() const;

    MotiveClass operator-() const;
    MotiveClass operator+(const MotiveClass& o) const;
    MotiveClass operator-(const MotiveClass& o) const;
    MotiveClass operator*(const MotiveClass& o) const;
    MotiveClass& operator+=(const MotiveClass& o) { return *this = *this + o; }
    MotiveClass& operator-=(const MotiveClass& o) { return *this = *this - o; }
    MotiveClass& operator*=(const MotiveClass& o) { return *this = *this * o; }

    bool operator==(const MotiveClass& o) const;
    bool operator!=(const MotiveClass& o) const { return !(*this == o); }

    MotiveClass dual() const;
    Rat evaluate(const Rat& q) const;

    std::string render() const;
    // Inverse of the grammar produced by render(); used by golden-file tests.
    static MotiveClass parse(const std::string& text);

private:
    LaurentPoly num_;
    std::map<long long, long long> den_;  // n -> multiplicity of (L^n - 1)
    void reduce();
};

MotiveClass operator+(const LaurentPoly& a, const MotiveClass& b);
MotiveClass operator*(const LaurentPoly& a, const MotiveClass& b);

// |GL_n| as a class: Π_{k=0}^{n-1} (L^n - L^k); gl_motive(0) = 1.
LaurentPoly gl_motive(long long n);

// Gaussian binomial [n choose r] in L — the class of the Grassmannian of
// r-dimensional quotients (equivalently subspaces) of an n-space; 0 if r > n.
LaurentPoly grassmannian_motive(long long n, long long r);

// (L^{-1})_n = Π_{k=1}^{n} (1 - L^{-k}), as a (denominator-free) class.
MotiveClass pochhammer_inv(long long n);

// Parse/render exact rationals as "p" or "p/q" (used for theta values).
Rat parse_rational(const std::string& text);
std::string render_rational(const Rat& q);

}  // namespace qmv

#endif

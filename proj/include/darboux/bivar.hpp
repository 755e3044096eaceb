#pragma once

#include "darboux/gaussian.hpp"
#include "darboux/upoly.hpp"

#include <complex>
#include <optional>
#include <string>
#include <map>
#include <vector>

namespace darboux {

/// Exponent pair of a monomial x^dx y^dy.
struct Mono {
    int dx = 0;
    int dy = 0;
    int total() const { return dx + dy; }
    friend bool operator==(const Mono &, const Mono &) = default;
};

/// Graded-lexicographic order with x < y: total degree first, then degree in y.
struct GradedLex {
    bool operator()(const Mono &a, const Mono &b) const {
        if (a.total() != b.total())
            return a.total() < b.total();
        return a.dy < b.dy;
    }
};

enum class Var { X, Y };

/// Sparse bivariate polynomial over Q(i). Terms are kept in graded-lex order;
/// no stored coefficient is zero.
class BivarPoly {
  public:
    using TermMap = std::map<Mono, GR, GradedLex>;

    BivarPoly() = default;
    BivarPoly(GR c);
    BivarPoly(long c) : BivarPoly(GR(c)) {}

    static BivarPoly x();
    static BivarPoly y();
    static BivarPoly monomial(GR c, int dx, int dy);
    /// Polynomial in x only.
    static BivarPoly from_x(const UPoly &p);
    /// sum_j coeffs[j](x) * y^j
    static BivarPoly from_y_coeffs(const std::vector<UPoly> &coeffs);

    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.total() == 0); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const { return deg_; }
    int deg_x() const { return deg_x_; }
    int deg_y() const { return deg_y_; }

    GR coeff(int dx, int dy) const;
    /// Leading term under graded-lex (zero polynomial has none).
    Mono lead_mono() const { return terms_.rbegin()->first; }
    const GR &lead_coeff() const { return terms_.rbegin()->second; }

    /// Coefficient of y^j as a polynomial in x.
    UPoly y_coeff(int j) const;
    std::vector<UPoly> y_coeffs() const;
    /// Homogeneous component of total degree k.
    BivarPoly homogeneous_part(int k) const;

    BivarPoly derivative(Var v) const;
    GR eval(const GR &x, const GR &y) const;
    std::complex<double> eval(std::complex<double> x, std::complex<double> y) const;
    /// Substitutes polynomials for x and y.
    BivarPoly compose(const BivarPoly &px, const BivarPoly &py) const;

    BivarPoly conj() const;
    bool is_real() const;
    /// Divides by the leading coefficient.
    BivarPoly monic() const;
    /// Gaussian-integer coefficients with content 1 and positive integer leading coefficient.
    BivarPoly primitive() const;
    /// Scalar s with primitive() == s * (*this).
    GR primitive_scale() const;

    BivarPoly operator-() const;
    BivarPoly &operator+=(const BivarPoly &o);
    BivarPoly &operator-=(const BivarPoly &o);
    BivarPoly &operator*=(const GR &c);
    friend BivarPoly operator+(BivarPoly a, const BivarPoly &b) { return a += b; }
    friend BivarPoly operator-(BivarPoly a, const BivarPoly &b) { return a -= b; }
    friend BivarPoly operator*(const BivarPoly &a, const BivarPoly &b);
    friend BivarPoly operator*(BivarPoly a, const GR &c) { return a *= c; }
    friend BivarPoly operator*(const GR &c, BivarPoly a) { return a *= c; }
    friend BivarPoly operator*(long c, BivarPoly a) { return a *= GR(c); }
    friend BivarPoly operator*(BivarPoly a, long c) { return a *= GR(c); }
    friend bool operator==(const BivarPoly &a, const BivarPoly &b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BivarPoly &a, const BivarPoly &b) { return !(a == b); }

    BivarPoly pow(int e) const;

    /// Adds c*x^dx*y^dy.
    void add_term(int dx, int dy, const GR &c);

    /// Canonical text: descending graded-lex terms, e.g. "x*y^2 - x - 1".
    std::string str() const;

  private:
    void refresh();
    TermMap terms_;
    int deg_ = -1;
    int deg_x_ = -1;
    int deg_y_ = -1;
};

/// a associated to b: a = c*b for a nonzero constant c.
bool associates(const BivarPoly &a, const BivarPoly &b);

/// Canonical comparison: total degree, then printed text. Used to sort reports.
bool canonical_less(const BivarPoly &a, const BivarPoly &b);

struct DivisionResult {
    BivarPoly quotient;
    BivarPoly remainder;
};

/// Multivariate division by a single divisor under graded-lex order.
DivisionResult divide(const BivarPoly &num, const BivarPoly &den);

class NotDivisible : public Error {
  public:
    explicit NotDivisible(BivarPoly remainder);
    const BivarPoly &remainder() const { return remainder_; }

  private:
    BivarPoly remainder_;
};

/// Exact quotient q with num = q*den; throws NotDivisible otherwise.
BivarPoly divide_exact(const BivarPoly &num, const BivarPoly &den);
/// q when den divides num.
std::optional<BivarPoly> try_divide(const BivarPoly &num, const BivarPoly &den);

/// Monic gcd (graded-lex leading coefficient 1). Not both zero.
BivarPoly gcd(const BivarPoly &a, const BivarPoly &b);

/// Factorization into powers of pairwise coprime square-free parts in y:
/// p = c(x) * prod s_i^i where each s_i has positive y-degree.
std::vector<std::pair<BivarPoly, int>> squarefree_in_y(const BivarPoly &p);

/// Quotient of two polynomials, reduced and with monic denominator.
class RationalFunction {
  public:
    RationalFunction() : num_(0), den_(1) {}
    RationalFunction(BivarPoly num) : num_(std::move(num)), den_(1) {}
    RationalFunction(BivarPoly num, BivarPoly den);

    const BivarPoly &num() const { return num_; }
    const BivarPoly &den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool depends_on_y_only_through_num() const { return den_.deg_y() == 0; }

    RationalFunction derivative(Var v) const;

    RationalFunction operator-() const { return {-num_, den_}; }
    friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b);
    friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b);
    friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b);
    friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b);
    friend bool operator==(const RationalFunction &a, const RationalFunction &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

  private:
    BivarPoly num_;
    BivarPoly den_;
};

} // namespace darboux

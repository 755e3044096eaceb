#pragma once

#include "darboux/gaussian.hpp"

#include <utility>
#include <vector>

namespace darboux {

/// Dense univariate polynomial over Q(i); coefficient i multiplies t^i.
/// The coefficient vector never ends in a zero.
class UPoly {
  public:
    UPoly() = default;
    UPoly(GR c);
    explicit UPoly(std::vector<GR> coeffs);

    static UPoly monomial(GR c, int deg);
    /// t - root
    static UPoly linear(const GR &root);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<GR> &coeffs() const { return c_; }
    GR coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : GR(0); }
    GR lead() const { return c_.empty() ? GR(0) : c_.back(); }

    GR eval(const GR &t) const;
    UPoly derivative() const;
    UPoly monic() const;

    UPoly operator-() const;
    UPoly &operator+=(const UPoly &o);
    UPoly &operator-=(const UPoly &o);
    friend UPoly operator+(UPoly a, const UPoly &b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly &b) { return a -= b; }
    friend UPoly operator*(const UPoly &a, const UPoly &b);
    friend bool operator==(const UPoly &a, const UPoly &b) { return a.c_ == b.c_; }

    UPoly pow(int e) const;

    std::string str(const char *var = "x") const;

  private:
    void trim();
    std::vector<GR> c_;
};

/// Quotient and remainder of Euclidean division (divisor nonzero).
std::pair<UPoly, UPoly> divmod(const UPoly &a, const UPoly &b);
/// Monic gcd; gcd(0,0) = 0.
UPoly gcd(UPoly a, UPoly b);

/// Square-free decomposition: p = lead * prod s_i^i with s_i monic, square-free
/// and pairwise coprime. Entries with s_i = 1 are omitted.
std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly &p);

/// Raised when a polynomial does not split into linear factors over Q(i).
class ExtensionRequired : public Error {
  public:
    ExtensionRequired(const std::string &what, UPoly unfactored)
        : Error(what), unfactored_(std::move(unfactored)) {}
    const UPoly &unfactored() const { return unfactored_; }

  private:
    UPoly unfactored_;
};

struct UnivariateFactorization {
    GR unit{1};
    /// Monic linear factors t - r with multiplicity, sorted canonically by root.
    std::vector<std::pair<UPoly, int>> factors;
    /// Monic part whose roots are not in Q(i) (1 when the split is complete).
    UPoly unfactored{GR(1)};

    bool complete() const { return unfactored.degree() == 0; }
    /// The roots with multiplicity, in factor order.
    std::vector<std::pair<GR, int>> roots() const;
};

/// Splits p as far as Q(i) allows: rational-root extraction for degree >= 3
/// and the quadratic formula for quadratic remainders.
UnivariateFactorization factor_univariate_partial(const UPoly &p);

/// Complete split of p into linear factors over Q(i), or ExtensionRequired.
UnivariateFactorization factor_univariate(const UPoly &p);

} // namespace darboux

#pragma once

#include "darboux/bivar.hpp"

#include <map>
#include <optional>

namespace darboux {

/// Truncated Laurent-Puiseux series sum a_e x^e with rational exponents e.
/// The series is exact for exponents below trunc(); an empty trunc() means the
/// stored finite sum is the exact value.
class PuiseuxSeries {
  public:
    using TermMap = std::map<mpq_class, GR>;

    PuiseuxSeries() = default;
    PuiseuxSeries(GR c);
    PuiseuxSeries(long c) : PuiseuxSeries(GR(c)) {}

    static PuiseuxSeries monomial(GR c, const mpq_class &e);
    /// The zero series known only below T, i.e. O(x^T).
    static PuiseuxSeries big_o(const mpq_class &T);
    static PuiseuxSeries from_upoly(const UPoly &p);
    /// Laurent expansion of num(x)/den(x) at x = 0 known below T.
    static PuiseuxSeries from_rational(const UPoly &num, const UPoly &den, const mpq_class &T);

    const TermMap &terms() const { return terms_; }
    const std::optional<mpq_class> &trunc() const { return trunc_; }
    bool is_exact() const { return !trunc_.has_value(); }
    /// No known nonzero coefficient.
    bool is_zero() const { return terms_.empty(); }
    GR coeff(const mpq_class &e) const;
    /// Smallest exponent with nonzero coefficient.
    std::optional<mpq_class> valuation() const;
    /// Lower bound for the exponents of the true series (valuation, or trunc when no term is known).
    mpq_class order_bound() const;
    /// Reduced common denominator of the exponents; throws on the zero series.
    long polydromy() const;
    /// Common denominator of exponents and truncation bound.
    long grid() const;
    /// Coefficients of every exponent below e are known.
    bool known_below(const mpq_class &e) const { return !trunc_ || *trunc_ > e; }

    PuiseuxSeries truncated(const mpq_class &T) const;
    /// x -> x^factor on exponents (and truncation).
    PuiseuxSeries scale_exponents(const mpq_class &factor) const;
    PuiseuxSeries shift(const mpq_class &e) const;
    PuiseuxSeries conj() const;

    PuiseuxSeries derivative() const;
    /// 1/s. An exact non-monomial input needs rel_precision, the number of exponent
    /// units of relative accuracy to keep.
    PuiseuxSeries reciprocal(std::optional<mpq_class> rel_precision = std::nullopt) const;
    PuiseuxSeries pow(int e) const;

    PuiseuxSeries operator-() const;
    PuiseuxSeries &operator+=(const PuiseuxSeries &o);
    PuiseuxSeries &operator-=(const PuiseuxSeries &o);
    PuiseuxSeries &operator*=(const GR &c);
    friend PuiseuxSeries operator+(PuiseuxSeries a, const PuiseuxSeries &b) { return a += b; }
    friend PuiseuxSeries operator-(PuiseuxSeries a, const PuiseuxSeries &b) { return a -= b; }
    friend PuiseuxSeries operator*(const PuiseuxSeries &a, const PuiseuxSeries &b);
    friend PuiseuxSeries operator*(PuiseuxSeries a, const GR &c) { return a *= c; }
    friend PuiseuxSeries operator*(const GR &c, PuiseuxSeries a) { return a *= c; }
    /// Same known terms and same truncation.
    friend bool operator==(const PuiseuxSeries &a, const PuiseuxSeries &b) {
        return a.terms_ == b.terms_ && a.trunc_ == b.trunc_;
    }

    /// Agreement of two series on the exponents both know.
    friend bool agree(const PuiseuxSeries &a, const PuiseuxSeries &b);

    /// "a*x^(r/n) + ... + O(x^(T/n))"
    std::string str() const;

    void add_term(const mpq_class &e, const GR &c);

  private:
    void clip();
    TermMap terms_;
    std::optional<mpq_class> trunc_;
};

std::optional<mpq_class> min_trunc(const std::optional<mpq_class> &a, const std::optional<mpq_class> &b);
/// "x", "x^2", "x^(3/2)", "x^(-1)"
std::string power_str(const mpq_class &e, const char *var = "x");
long lcm_long(long a, long b);

/// Polynomial in y with series coefficients: sum_j c[j](x) y^j.
class SeriesPoly {
  public:
    SeriesPoly() = default;
    explicit SeriesPoly(std::vector<PuiseuxSeries> coeffs);
    static SeriesPoly from_bivar(const BivarPoly &p);

    const std::vector<PuiseuxSeries> &coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const PuiseuxSeries &coeff(int j) const { return c_[j]; }
    PuiseuxSeries coeff_or_zero(int j) const;

    PuiseuxSeries eval(const PuiseuxSeries &y) const;
    SeriesPoly derivative_x() const;
    SeriesPoly derivative_y() const;
    /// Smallest truncation among the coefficients.
    std::optional<mpq_class> trunc() const;
    /// Largest polydromy among the nonzero coefficients' lcm.
    long polydromy() const;
    /// Every coefficient has integer exponents and is exact: the value as a polynomial.
    std::optional<BivarPoly> to_bivar() const;

    friend SeriesPoly operator+(const SeriesPoly &a, const SeriesPoly &b);
    friend SeriesPoly operator-(const SeriesPoly &a, const SeriesPoly &b);
    friend SeriesPoly operator*(const SeriesPoly &a, const SeriesPoly &b);
    friend SeriesPoly operator*(const SeriesPoly &a, const PuiseuxSeries &s);

    std::string str() const;

  private:
    void trim();
    std::vector<PuiseuxSeries> c_;
};

/// Quotient and remainder of division by (y - g).
std::pair<SeriesPoly, PuiseuxSeries> divide_linear(const SeriesPoly &p, const PuiseuxSeries &g);

} // namespace darboux

#pragma once

#include "darboux/upoly.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace darboux {

/// Sparse polynomial over Q(i) in a fixed number of unknowns. Exponent vectors are
/// compared lexicographically with unknown 0 most significant.
class MPoly {
  public:
    using Exps = std::vector<int>;
    using TermMap = std::map<Exps, GR>;

    explicit MPoly(int nvars = 0) : n_(nvars) {}
    MPoly(int nvars, GR c);
    static MPoly var(int nvars, int i);

    int nvars() const { return n_; }
    const TermMap &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    GR constant_term() const;
    int total_degree() const;
    int degree_in(int v) const;
    /// Unknowns that occur.
    std::vector<int> vars() const;
    const GR &lead_coeff() const { return t_.rbegin()->second; }

    /// Coefficients of v^0, v^1, ... as polynomials free of v.
    std::vector<MPoly> coeffs_in(int v) const;
    MPoly substitute(int v, const MPoly &value) const;
    /// Polynomial in the single unknown v (requires no other unknown to occur).
    UPoly to_upoly(int v) const;
    MPoly monic() const;

    MPoly operator-() const;
    MPoly &operator+=(const MPoly &o);
    MPoly &operator-=(const MPoly &o);
    MPoly &operator*=(const GR &c);
    friend MPoly operator+(MPoly a, const MPoly &b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly &b) { return a -= b; }
    friend MPoly operator*(const MPoly &a, const MPoly &b);
    friend MPoly operator*(MPoly a, const GR &c) { return a *= c; }
    friend MPoly operator*(const GR &c, MPoly a) { return a *= c; }
    friend bool operator==(const MPoly &a, const MPoly &b) { return a.t_ == b.t_; }
    friend bool operator<(const MPoly &a, const MPoly &b);

    void add_term(const Exps &e, const GR &c);
    std::string str() const;

  private:
    int n_ = 0;
    TermMap t_;
};

/// Exact quotient; throws NotDivisible-like Error when b does not divide a.
MPoly divide_exact(const MPoly &a, const MPoly &b);

/// Resultant of a and b with respect to unknown v (fraction-free determinant).
MPoly resultant(const MPoly &a, const MPoly &b, int v);

struct SolveLimits {
    int max_branches = 512;
    int max_resultants = 48;
};

/// Solutions of a polynomial system. Each solution gives every unknown as a polynomial
/// in the unknowns left free; a free unknown maps to itself.
struct PolySolveResult {
    std::vector<std::vector<MPoly>> solutions;
    std::vector<std::string> diagnostics;
    bool complete = true;
};

/// Linear elimination, branching on univariate roots over Q(i) and on monomial factors,
/// and resultant elimination. Branches needing algebraic extensions are pruned with a
/// diagnostic; when nothing else applies an unknown is sampled and the result is
/// marked incomplete.
PolySolveResult solve_polynomial_system(const std::vector<MPoly> &equations, int nvars,
                                        const SolveLimits &limits = {});

/// Unknowns that occur in some entry of a solution.
std::vector<int> free_unknowns(const std::vector<MPoly> &solution);

/// Evaluates a solution at values for its free unknowns.
std::vector<GR> instantiate(const std::vector<MPoly> &solution, const std::map<int, GR> &free_values);

} // namespace darboux

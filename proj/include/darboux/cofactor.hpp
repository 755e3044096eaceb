#pragma once

#include "darboux/logderiv.hpp"
#include "darboux/puiseux.hpp"

namespace darboux {

/// X(f) is not a multiple of f.
class NotInvariant : public Error {
  public:
    NotInvariant(const std::string &what, BivarPoly remainder = {})
        : Error(what), remainder_(std::move(remainder)) {}
    const BivarPoly &remainder() const { return remainder_; }

  private:
    BivarPoly remainder_;
};

class NotAParticularSolution : public Error {
  public:
    using Error::Error;
};

class TopDegreeViolation : public Error {
  public:
    using Error::Error;
};

class RSMismatch : public Error {
  public:
    using Error::Error;
};

class Inconsistent : public Error {
  public:
    using Error::Error;
};

/// Invariant curve f with X(f) = k f.
struct CurveWithCofactor {
    BivarPoly f;
    BivarPoly k;
};

/// k = X(f)/f; throws NotInvariant with the division remainder.
CurveWithCofactor curve_cofactor(const BivarPoly &f, const PlanarSystem &sys);

/// Polynomial in y with series coefficients k_0(x), ..., k_{m-1}(x).
using QuasiCofactor = SeriesPoly;

/// M = (Q - g' P) / (y - g). Throws NotAParticularSolution when the division leaves a
/// known nonzero remainder.
QuasiCofactor quasipolynomial_cofactor(const PuiseuxSeries &g, const PlanarSystem &sys);

/// Data of an invariant h(x) prod (y - g_i)^alpha_i, optionally times
/// exp(h2(x) prod (y - a_k) / prod (y - gt_j)) with h playing the role of h1.
struct SigmaTable {
    std::vector<PuiseuxSeries> g;
    std::vector<GR> alpha;
    LogDerivativeSpec h = LogDerivativeSpec::trivial();
    std::optional<RationalFunction> h2;
    std::vector<PuiseuxSeries> a;
    std::vector<PuiseuxSeries> gt;
    /// Truncation used when expanding rational data of x.
    mpq_class precision{kDefaultOrder};

    /// sum alpha_i g_i^kappa
    PuiseuxSeries sigma(int kappa) const;
};

/// sum alpha_i g_i^kappa + kappa h2 sum over J_kappa of
/// (-1)^(|eps|+1) prod a_k^eps_k prod gt_j^i_j. Requires #a == #gt.
PuiseuxSeries sigma_tilde(int kappa, const SigmaTable &table);

struct FormulaCofactor {
    QuasiCofactor k;
    /// p_m times the log-derivative term; must vanish.
    PuiseuxSeries top;
};

/// k_j = p_j h'/h + sum_{s=j+1}^{m} (sigma_{s-j-1} q_s - sigma'_{s-j} p_s / (s-j)).
/// Throws TopDegreeViolation when p_m h'/h has a known nonzero coefficient.
FormulaCofactor cofactor_formula_I(const SigmaTable &table, const PlanarSystem &sys);

/// The same with sigma_tilde and the term (h1'/h1 + h2') p_j.
FormulaCofactor cofactor_formula_II(const SigmaTable &table, const PlanarSystem &sys);

struct InvertedSystem {
    PlanarSystem system;
    /// Both components were multiplied by z^e.
    int e = 0;
};

/// y = 1/z followed by multiplication with the smallest z^e giving polynomials.
InvertedSystem invert_y(const PlanarSystem &sys);

struct RationalSolution {
    enum class Kind { Rational, LinearEquation };
    Kind kind = Kind::Rational;
    std::optional<RationalFunction> g;
};

/// Recovers a rational particular solution from a polynomial quasipolynomial cofactor M.
/// Returns LinearEquation when every elimination degenerates and the system reads
/// x' = L1(x) M, y' = M y + q0(x) with M a nonzero constant. Throws Inconsistent otherwise.
RationalSolution rational_solution_from_cofactor(const BivarPoly &M, const PlanarSystem &sys);

/// Exact test of g' P - Q + M (y - g) = 0 for g = num/den of x.
bool satisfies_cofactor_identity(const RationalFunction &g, const BivarPoly &M, const PlanarSystem &sys);

struct PolydromyVerdict {
    bool ok = false;
    long nu_g = 1;
    long nu_M = 1;
    bool linear_exemption = false;
    std::string detail;
};

/// nu(M) = nu(g) for nonlinear equations; nu(M) | nu(g) for linear ones.
PolydromyVerdict polydromy_consistency(const PuiseuxSeries &g, const QuasiCofactor &M, const PlanarSystem &sys);

} // namespace darboux

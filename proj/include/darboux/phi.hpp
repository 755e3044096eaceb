#pragma once

#include "darboux/search.hpp"

namespace darboux {

/// exp(N / A0) with N = h2 * prod (y - a_k) and A0 = c(x) prod (y - gt_j).
struct PhiInvariant {
    PuiseuxSeries h2{GR(1)};
    std::vector<PuiseuxSeries> a;
    std::vector<PuiseuxSeries> gt;
    SeriesPoly numerator;
    SeriesPoly denominator;
    /// A0 as an exact polynomial, when it was given as one.
    std::optional<BivarPoly> a0_poly;

    /// Cancels roots shared by the two lists before building N and A0.
    static PhiInvariant from_roots(PuiseuxSeries h2, std::vector<PuiseuxSeries> a, std::vector<PuiseuxSeries> gt);
    /// A0 = a0 and N = num(x^(1/ram), y); the roots gt come from Newton-Puiseux.
    static PhiInvariant from_polynomials(const BivarPoly &a0, const BivarPoly &num, int ram = 1,
                                         int order = kDefaultOrder);
};

/// Raised by verify_phi; clause names the failing check.
class PhiNotInvariant : public NotInvariant {
  public:
    PhiNotInvariant(std::string clause, const std::string &what) : NotInvariant(what), clause_(std::move(clause)) {}
    /// One of particular_solution, not_polynomial, degree_bound, finiteness, polydromy.
    const std::string &clause() const { return clause_; }

  private:
    std::string clause_;
};

/// Cofactor of exp(num/den) when den = lead * prod (y - roots_j): (X(num) - K num) / den
/// with K = X(den)/den. Empty when either division leaves a known nonzero remainder.
std::optional<SeriesPoly> exp_quotient_cofactor(const SeriesPoly &num, const SeriesPoly &den,
                                                const std::vector<PuiseuxSeries> &den_roots,
                                                const PlanarSystem &sys);

/// Quasipolynomial cofactor M of the invariant, after checking that each gt_j is a
/// particular solution, that M is polynomial in y of degree at most m - 1, that
/// M(x, gt_j) is known, and that M has polydromy dividing that of the data.
QuasiCofactor verify_phi(const PhiInvariant &phi, const PlanarSystem &sys);

/// Coefficients R_i of the minimal polynomial in (x, y, eps) of the y-roots of
/// A0 + eps N, with R_0 certified as a power of the minimal polynomial of the gt_j.
struct EpsilonPolynomial {
    std::vector<BivarPoly> R;
    BivarPoly r0_base;
    int r0_power = 0;
};

struct EpsilonOptions {
    int max_total_degree = 6;
    int margin = 4;
    /// Degree bounds used for the minimal polynomial of each gt_j.
    int root_max_dx = 6;
    int root_max_dy = 6;
};

EpsilonPolynomial epsilon_minimal_polynomial(const PhiInvariant &phi, const EpsilonOptions &opts = {});

class NoFactorFound : public Error {
  public:
    using Error::Error;
};

struct PhiSynthesis {
    QuasiCofactor M;
    EpsilonPolynomial eps;
    /// First nonzero R_i with i > 0 over R_0, and whether it passed the exact check.
    ExponentialFactor raw_candidate;
    bool raw_passed = false;
    ExponentialFactor factor;
    /// Cofactor of exp(h/R_0 - N/A0): kt - M.
    SeriesPoly psi_cofactor;
    /// The same cofactor recomputed from the exponent of the companion invariant.
    std::optional<SeriesPoly> psi_direct;
    bool psi_verified = false;
};

/// exp(h / R_0) from the epsilon construction; the exact linear search supplies h when
/// the raw candidate fails.
PhiSynthesis synthesize_exponential_factor(const PhiInvariant &phi, const PlanarSystem &sys, int max_h_degree,
                                           const EpsilonOptions &opts = {});

/// h(x) prod (y - g_i)^alpha_i, optionally times exp(h2 A1 / A0).
struct RootProductInvariant {
    LogDerivativeSpec h = LogDerivativeSpec::trivial();
    std::vector<std::pair<PuiseuxSeries, GR>> roots;
    struct Phi {
        RationalFunction h2;
        std::vector<PuiseuxSeries> a;
        std::vector<PuiseuxSeries> gt;
    };
    std::optional<Phi> phi;
};

struct Recognition {
    enum class Verdict { Darboux, NotDarboux, Undetermined };
    Verdict verdict = Verdict::Undetermined;
    std::optional<DarbouxFunction> function;
    /// The polynomial cofactor, when the formula produced one.
    std::optional<BivarPoly> cofactor;
    std::string detail;
};

struct RecognitionOptions {
    int max_dx = 6;
    int max_dy = 6;
    mpq_class precision{kDefaultOrder};
    int exp_degree = -1;
};

/// The polynomial agreeing with a quasipolynomial cofactor, when every coefficient is
/// known through total degree max_degree and has no other known terms.
std::optional<BivarPoly> polynomial_part(const SeriesPoly &k, int max_degree);

/// Groups the roots by minimal polynomial and rebuilds the invariant as
/// h~(x) prod f_j^beta_j, with the exponential factor attached for a phi part.
Recognition darboux_recognition(const RootProductInvariant &inv, const PlanarSystem &sys,
                                const RecognitionOptions &opts = {});

std::string verdict_name(Recognition::Verdict v);

} // namespace darboux

#pragma once

#include "darboux/cofactor.hpp"
#include "darboux/mpoly.hpp"

namespace darboux {

/// f0 is not an invariant curve of the system.
class NotInvariantCurve : public NotInvariant {
  public:
    using NotInvariant::NotInvariant;
};

struct CurveSearchResult {
    /// Primitive, pairwise non-associated curves, canonically sorted.
    std::vector<CurveWithCofactor> curves;
    std::vector<std::string> diagnostics;
    bool complete = true;
    /// Some degree admits a family of curves with free parameters; only unit
    /// representatives of each family are listed.
    bool has_families = false;
};

struct CurveSearchOptions {
    SolveLimits limits{};
    /// Drop candidates divisible by a curve found at lower degree.
    bool drop_products = true;
};

/// Invariant curves of degree 1..max_degree by undetermined coefficients. The top
/// homogeneous part is built from factors of x Q_d - y P_d; the remaining bilinear
/// system is handed to the polynomial solver. Every curve is verified exactly.
CurveSearchResult find_invariant_curves(const PlanarSystem &sys, int max_degree,
                                        const CurveSearchOptions &opts = {});

/// exp(h / f0) with X(h) = k0 h + kt f0, where k0 is the cofactor of f0.
struct ExponentialFactor {
    BivarPoly h;
    BivarPoly f0;
    BivarPoly kt;
};

/// Checks X(h) = k0 h + kt f0 exactly.
bool verify_exponential_factor(const ExponentialFactor &e, const PlanarSystem &sys);

/// Basis of the exponential factors exp(h/f0) with deg h <= max_h_degree, modulo
/// the trivial ones (h a multiple of f0; constants when f0 is constant).
std::vector<ExponentialFactor> find_exponential_factors(const PlanarSystem &sys, const BivarPoly &f0,
                                                        int max_h_degree);

enum class DarbouxRole { FirstIntegral, IntegratingFactorInverse, GeneralInvariant };

/// prod f_i^lambda_i * exp(h/f0) with cofactor sum lambda_i k_i + kt.
struct DarbouxFunction {
    std::vector<std::pair<BivarPoly, GR>> factors;
    std::optional<ExponentialFactor> exp_part;
    DarbouxRole role = DarbouxRole::GeneralInvariant;
    BivarPoly cofactor;
    /// All exponents are integers and there is no exponential part.
    bool rational = false;
};

struct DarbouxMembers {
    std::vector<CurveWithCofactor> curves;
    std::vector<ExponentialFactor> exponentials;
    bool empty() const { return curves.empty() && exponentials.empty(); }
};

/// Recomputes every member cofactor and checks sum lambda_i k_i + kt == cofactor.
bool verify_darboux(const DarbouxFunction &fn, const PlanarSystem &sys);

/// Basis of the exponent vectors with sum lambda k + sum mu kt = 0.
std::vector<DarbouxFunction> find_first_integral(const PlanarSystem &sys, const DarbouxMembers &members);

/// A particular solution of sum lambda k + sum mu kt = div, followed by that solution
/// shifted by each first-integral basis vector. Empty when no solution exists.
std::vector<DarbouxFunction> find_inverse_integrating_factor(const PlanarSystem &sys,
                                                             const DarbouxMembers &members);

/// f * conj(f).
BivarPoly realify(const BivarPoly &f);
/// f * conj(f) with cofactor k + conj(k).
CurveWithCofactor realify(const CurveWithCofactor &c);

/// Scales a nonzero vector to Gaussian-integer entries with content 1 and first
/// nonzero entry a positive integer.
std::vector<GR> primitive_vector(std::vector<GR> v);

std::string role_name(DarbouxRole r);

} // namespace darboux

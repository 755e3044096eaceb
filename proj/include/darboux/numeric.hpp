#pragma once

#include "darboux/search.hpp"

#include <array>
#include <complex>

namespace darboux {

class SingularStart : public Error {
  public:
    using Error::Error;
};

class StepUnderflow : public Error {
  public:
    using Error::Error;
};

class ExcludedRegion : public Error {
  public:
    using Error::Error;
};

using Real = long double;

/// Extended-precision evaluator for a polynomial over Q(i).
class CompiledPoly {
  public:
    CompiledPoly() = default;
    explicit CompiledPoly(const BivarPoly &p);
    std::complex<Real> operator()(Real x, Real y) const;
    /// Sum of the absolute values of the terms, the scale of the rounding error.
    Real magnitude(Real x, Real y) const;

  private:
    struct Term {
        int dx, dy;
        std::complex<Real> c;
    };
    std::vector<Term> terms_;
};

struct Orbit {
    /// (t, x, y)
    std::vector<std::array<Real, 3>> samples;
    double h = 0;
    std::string method = "rk4";
    /// Set when integration stopped before t_end.
    bool aborted = false;
    std::string abort_reason;
};

struct IntegrateOptions {
    /// Samples with |P| + |Q| below this count as singular.
    double singular_threshold = 1e-14;
    /// Integration stops once |x| + |y| exceeds this.
    double escape_radius = 1e8;
};

/// Classic fixed-step fourth-order Runge-Kutta on a real system. StepUnderflow when h
/// is below the resolution of t_end.
Orbit integrate(const PlanarSystem &sys, double x0, double y0, double t_end, double h,
                const IntegrateOptions &opts = {});

/// Numeric form of prod f_i^lambda_i exp(h/f0). Polynomial functions (nonnegative
/// integer exponents, no exponential part) are evaluated directly; the rest through
/// sum Re(lambda_i log f_i) + Re(h/f0) with the arguments of f_i unwrapped along the orbit.
/// A point is excluded when some f_i or f0 is below margin in absolute value, or below
/// rel_margin times the magnitude of its terms.
class EvaluableInvariant {
  public:
    explicit EvaluableInvariant(const DarbouxFunction &fn, double margin = 1e-15, double rel_margin = 1e-13);

    bool direct() const { return direct_; }
    bool excluded(Real x, Real y) const;
    /// Index of the first excluded sample.
    std::optional<size_t> first_excluded(const Orbit &orbit) const;
    /// Values along the orbit samples; ExcludedRegion at an excluded sample.
    std::vector<Real> along(const Orbit &orbit) const;

  private:
    std::vector<std::pair<CompiledPoly, std::complex<Real>>> factors_;
    std::optional<std::pair<CompiledPoly, CompiledPoly>> exp_;
    bool direct_ = false;
    double margin_, rel_margin_;
};

/// max |H(t) - H(0)| / (1 + |H(0)|) over the orbit.
double check_conserved(const EvaluableInvariant &H, const Orbit &orbit);

} // namespace darboux

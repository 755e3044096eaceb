#pragma once

#include "darboux/series.hpp"
#include "darboux/system.hpp"

namespace darboux {

/// Default number of exponent units computed past the last Newton-polygon step.
inline constexpr int kDefaultOrder = 24;

/// All y-roots of f as Puiseux series at x = 0, repeated by multiplicity and
/// sorted canonically. Each root is exact below its truncation, which is the
/// exponent of the final Newton-polygon step plus order/N for ramification N.
/// Throws ExtensionRequired when a characteristic polynomial does not split over Q(i).
std::vector<PuiseuxSeries> newton_puiseux(const BivarPoly &f, int order = kDefaultOrder);

/// Canonical order of series: valuation, then coefficients term by term.
bool series_less(const PuiseuxSeries &a, const PuiseuxSeries &b);

/// f(x, g(x)) with its certified truncation.
PuiseuxSeries series_substitute(const BivarPoly &f, const PuiseuxSeries &g);

class InconclusiveTruncation : public Error {
  public:
    using Error::Error;
};

struct SolutionCheck {
    bool verdict = false;
    /// g' P(x,g) - Q(x,g)
    PuiseuxSeries residual;
    /// Number of residual coefficients that were checked; -1 when the residual is exact.
    long checked = 0;
};

/// Checks g' P(x, g) = Q(x, g) on every computable coefficient.
SolutionCheck is_particular_solution(const PuiseuxSeries &g, const PlanarSystem &sys, long min_checkable = 4);

class NotFound : public Error {
  public:
    using Error::Error;
};

class AmbiguousKernel : public Error {
  public:
    using Error::Error;
};

/// Lowest total degree polynomial f with deg_x f <= max_dx, deg_y f <= max_dy and
/// f(x, g(x)) = 0 on all known coefficients, normalized with primitive().
/// A truncated g must leave at least `margin` more equations than unknowns.
BivarPoly minimal_polynomial(const PuiseuxSeries &g, int max_dx, int max_dy, int margin = 4);

} // namespace darboux

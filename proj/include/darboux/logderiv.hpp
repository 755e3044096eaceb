#pragma once

#include "darboux/series.hpp"

namespace darboux {

/// A function of x known through its logarithmic derivative h'/h, a rational
/// function of x. The optional closed form is prod p_i(x)^lambda_i * exp(r(x)).
struct LogDerivativeSpec {
    struct ClosedForm {
        std::vector<std::pair<UPoly, GR>> factors;
        std::optional<RationalFunction> exp_part;
    };

    RationalFunction logderiv;
    std::optional<ClosedForm> closed_form;

    /// h = 1
    static LogDerivativeSpec trivial();
    static LogDerivativeSpec from_logderiv(RationalFunction r);
    static LogDerivativeSpec from_closed_form(ClosedForm form);

    /// Formal logarithmic derivative of the closed form.
    static RationalFunction closed_form_logderiv(const ClosedForm &form);
    bool consistent() const;

    /// Laurent expansion of h'/h at x = 0, known below T.
    PuiseuxSeries series(const mpq_class &T) const;
};

/// Closed form prod (x - r_i)^c_i * exp(R(x)) of a function with logarithmic derivative r,
/// by partial fractions. Empty when the denominator of r does not split over Q(i).
std::optional<LogDerivativeSpec::ClosedForm> integrate_log_derivative(const RationalFunction &r);

/// Laurent expansion of a rational function of x alone.
PuiseuxSeries rational_series(const RationalFunction &r, const mpq_class &T);

} // namespace darboux

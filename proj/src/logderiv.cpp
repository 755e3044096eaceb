#include "darboux/logderiv.hpp"

namespace darboux {

namespace {

void require_x_only(const RationalFunction &r) {
    if (r.num().deg_y() > 0 || r.den().deg_y() > 0)
        throw PreconditionFailed("expected a rational function of x alone");
}

} // namespace

PuiseuxSeries rational_series(const RationalFunction &r, const mpq_class &T) {
    require_x_only(r);
    return PuiseuxSeries::from_rational(r.num().y_coeff(0), r.den().y_coeff(0), T);
}

LogDerivativeSpec LogDerivativeSpec::trivial() { return from_closed_form({}); }

LogDerivativeSpec LogDerivativeSpec::from_logderiv(RationalFunction r) {
    require_x_only(r);
    LogDerivativeSpec s;
    s.logderiv = std::move(r);
    return s;
}

RationalFunction LogDerivativeSpec::closed_form_logderiv(const ClosedForm &form) {
    RationalFunction acc;
    for (const auto &[p, lambda] : form.factors) {
        if (p.is_zero())
            throw PreconditionFailed("zero factor in a closed form");
        BivarPoly bp = BivarPoly::from_x(p);
        acc = acc + RationalFunction(bp.derivative(Var::X) * lambda, bp);
    }
    if (form.exp_part) {
        require_x_only(*form.exp_part);
        acc = acc + form.exp_part->derivative(Var::X);
    }
    return acc;
}

LogDerivativeSpec LogDerivativeSpec::from_closed_form(ClosedForm form) {
    LogDerivativeSpec s;
    s.logderiv = closed_form_logderiv(form);
    s.closed_form = std::move(form);
    return s;
}

bool LogDerivativeSpec::consistent() const {
    return !closed_form || closed_form_logderiv(*closed_form) == logderiv;
}

namespace {

UPoly shift_arg(const UPoly &p, const GR &r) {
    UPoly acc, lin(std::vector<GR>{r, GR(1)});
    for (int k = p.degree(); k >= 0; --k)
        acc = acc * lin + UPoly(p.coeff(k));
    return acc;
}

} // namespace

std::optional<LogDerivativeSpec::ClosedForm> integrate_log_derivative(const RationalFunction &r) {
    require_x_only(r);
    LogDerivativeSpec::ClosedForm form;
    if (r.is_zero())
        return form;
    const UPoly num = r.num().y_coeff(0), den = r.den().y_coeff(0);
    auto [q, rem] = divmod(num, den);
    const BivarPoly X = BivarPoly::x();
    RationalFunction integral;
    {
        std::vector<GR> c(q.degree() + 2);
        for (int k = 0; k <= q.degree(); ++k)
            c[k + 1] = q.coeff(k) * GR(mpq_class(1, k + 1));
        integral = RationalFunction(BivarPoly::from_x(UPoly(c)));
    }
    if (!rem.is_zero()) {
        UnivariateFactorization fac;
        try {
            fac = factor_univariate(den);
        } catch (const ExtensionRequired &) {
            return std::nullopt;
        }
        for (const auto &[root, m] : fac.roots()) {
            UPoly rest = den;
            for (int j = 0; j < m; ++j)
                rest = divmod(rest, UPoly::linear(root)).first;
            UPoly A = shift_arg(rem, root), B = shift_arg(rest, root);
            std::vector<GR> t(m);
            for (int k = 0; k < m; ++k) {
                GR acc = A.coeff(k);
                for (int l = 1; l <= k; ++l)
                    acc -= B.coeff(l) * t[k - l];
                t[k] = acc / B.coeff(0);
            }
            BivarPoly lin = X - BivarPoly(root);
            for (int j = 1; j <= m; ++j) {
                const GR &c = t[m - j];
                if (c.is_zero())
                    continue;
                if (j == 1)
                    form.factors.push_back({UPoly::linear(root), c});
                else
                    integral = integral + RationalFunction(BivarPoly(-c / GR(j - 1)), lin.pow(j - 1));
            }
        }
    }
    if (!integral.is_zero())
        form.exp_part = integral;
    if (!(LogDerivativeSpec::closed_form_logderiv(form) == r))
        return std::nullopt;
    return form;
}

PuiseuxSeries LogDerivativeSpec::series(const mpq_class &T) const { return rational_series(logderiv, T); }

} // namespace darboux

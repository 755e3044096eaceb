#include "darboux/cofactor.hpp"

#include <algorithm>
#include <functional>

namespace darboux {

CurveWithCofactor curve_cofactor(const BivarPoly &f, const PlanarSystem &sys) {
    if (f.degree() < 1)
        throw PreconditionFailed("curve_cofactor needs a nonconstant polynomial");
    auto r = divide(sys.apply(f), f);
    if (!r.remainder.is_zero())
        throw NotInvariant(f.str() + " is not invariant", r.remainder);
    if (r.quotient.degree() > sys.degree() - 1)
        throw Error("cofactor degree exceeds d-1");
    return {f, r.quotient};
}

QuasiCofactor quasipolynomial_cofactor(const PuiseuxSeries &g, const PlanarSystem &sys) {
    SeriesPoly num = SeriesPoly::from_bivar(sys.Q()) - SeriesPoly::from_bivar(sys.P()) * g.derivative();
    auto [M, rem] = divide_linear(num, g);
    if (!rem.is_zero())
        throw NotAParticularSolution("Q - g'P leaves the remainder " + rem.str() + " on division by y - g");
    return M;
}

PuiseuxSeries SigmaTable::sigma(int kappa) const {
    if (alpha.size() != g.size())
        throw PreconditionFailed("one exponent per root is required");
    PuiseuxSeries acc;
    for (size_t i = 0; i < g.size(); ++i)
        acc += g[i].pow(kappa) * alpha[i];
    return acc;
}

PuiseuxSeries sigma_tilde(int kappa, const SigmaTable &t) {
    if (t.a.size() != t.gt.size())
        throw RSMismatch("sigma_tilde needs as many A1 roots as A0 roots (" + std::to_string(t.a.size()) +
                         " vs " + std::to_string(t.gt.size()) + ")");
    PuiseuxSeries acc = t.sigma(kappa);
    if (kappa == 0 || !t.h2)
        return acc;
    const size_t r = t.a.size();
    std::vector<std::vector<PuiseuxSeries>> gpow(r);
    for (size_t j = 0; j < r; ++j) {
        gpow[j].push_back(PuiseuxSeries(1));
        for (int i = 1; i <= kappa; ++i)
            gpow[j].push_back(gpow[j].back() * t.gt[j]);
    }
    PuiseuxSeries sum;
    // eps over {0,1}^r, then compositions of the remainder into r parts.
    std::vector<int> parts(r);
    std::function<void(size_t, int, const PuiseuxSeries &)> compose = [&](size_t j, int left,
                                                                         const PuiseuxSeries &prod) {
        if (j + 1 == r || r == 0) {
            if (r == 0) {
                if (left == 0)
                    sum += prod;
                return;
            }
            sum += prod * gpow[j][left];
            return;
        }
        for (int i = 0; i <= left; ++i)
            compose(j + 1, left - i, prod * gpow[j][i]);
    };
    for (unsigned long mask = 0; mask < (1UL << r); ++mask) {
        int ones = __builtin_popcountl(mask);
        if (ones > kappa)
            continue;
        PuiseuxSeries prod(ones % 2 == 1 ? GR(1) : GR(-1));
        for (size_t k = 0; k < r; ++k)
            if (mask & (1UL << k))
                prod = prod * t.a[k];
        compose(0, kappa - ones, prod);
    }
    PuiseuxSeries h2 = rational_series(*t.h2, t.precision);
    return acc + h2 * sum * GR(kappa);
}

namespace {

FormulaCofactor assemble(const PuiseuxSeries &lead, const std::function<PuiseuxSeries(int)> &sig,
                         const PlanarSystem &sys) {
    const int m = sys.m();
    std::vector<PuiseuxSeries> sigmas, dsigmas;
    for (int k = 0; k <= m; ++k) {
        sigmas.push_back(sig(k));
        dsigmas.push_back(sigmas.back().derivative());
    }
    auto ps = [&](int i) { return PuiseuxSeries::from_upoly(sys.p()[i]); };
    auto qs = [&](int i) { return PuiseuxSeries::from_upoly(sys.q()[i]); };
    FormulaCofactor out;
    out.top = ps(m) * lead;
    if (!out.top.is_zero())
        throw TopDegreeViolation("p_m times the logarithmic-derivative term is " + out.top.str());
    std::vector<PuiseuxSeries> k(m);
    for (int j = 0; j < m; ++j) {
        PuiseuxSeries acc = ps(j) * lead;
        for (int s = j + 1; s <= m; ++s)
            acc += sigmas[s - j - 1] * qs(s) - dsigmas[s - j] * ps(s) * GR(mpq_class(1, s - j));
        k[j] = std::move(acc);
    }
    out.k = SeriesPoly(std::move(k));
    return out;
}

} // namespace

FormulaCofactor cofactor_formula_I(const SigmaTable &table, const PlanarSystem &sys) {
    PuiseuxSeries lead = table.h.series(table.precision);
    return assemble(lead, [&](int k) { return table.sigma(k); }, sys);
}

FormulaCofactor cofactor_formula_II(const SigmaTable &table, const PlanarSystem &sys) {
    if (table.a.size() != table.gt.size())
        throw RSMismatch("formula II needs r = s");
    PuiseuxSeries lead = table.h.series(table.precision);
    if (table.h2)
        lead += rational_series(*table.h2, table.precision + 1).derivative();
    return assemble(lead, [&](int k) { return sigma_tilde(k, table); }, sys);
}

InvertedSystem invert_y(const PlanarSystem &sys) {
    const BivarPoly &P = sys.P(), &Q = sys.Q();
    int e = std::max({0, P.deg_y(), Q.deg_y() - 2});
    BivarPoly nP, nQ;
    for (const auto &[m, c] : P.terms())
        nP.add_term(m.dx, e - m.dy, c);
    for (const auto &[m, c] : Q.terms())
        nQ.add_term(m.dx, e + 2 - m.dy, -c);
    return {PlanarSystem(nP, nQ), e};
}

bool satisfies_cofactor_identity(const RationalFunction &g, const BivarPoly &M, const PlanarSystem &sys) {
    const BivarPoly &a = g.num(), &b = g.den();
    if (a.deg_y() > 0 || b.deg_y() > 0)
        return false;
    BivarPoly lhs = (a.derivative(Var::X) * b - a * b.derivative(Var::X)) * sys.P() - b * b * sys.Q();
    BivarPoly rhs = b * M * (b * BivarPoly::y() - a);
    return (lhs + rhs).is_zero();
}

RationalSolution rational_solution_from_cofactor(const BivarPoly &M, const PlanarSystem &sys) {
    const int m = sys.m();
    if (m < 1)
        throw PreconditionFailed("the system does not depend on y");
    if (M.deg_y() > m - 1)
        throw PreconditionFailed("cofactor degree in y exceeds m-1");
    auto P = [&](int i) { return BivarPoly::from_x(sys.p()[i]); };
    auto Qc = [&](int i) { return BivarPoly::from_x(sys.q()[i]); };
    auto K = [&](int i) { return i >= 0 && i <= M.deg_y() ? BivarPoly::from_x(M.y_coeff(i)) : BivarPoly(); };

    std::vector<RationalFunction> candidates;
    for (int j = 1; j <= m - 1; ++j) {
        BivarPoly den = K(0) * P(j) - P(0) * K(j);
        if (!den.is_zero())
            candidates.emplace_back(P(0) * Qc(j) - Qc(0) * P(j) - P(0) * K(j - 1), den);
    }
    BivarPoly pm_k0 = P(m) * K(0);
    if (!pm_k0.is_zero())
        candidates.emplace_back(P(0) * (Qc(m) - K(m - 1)) - P(m) * Qc(0), pm_k0);
    for (int j = 1; j <= m - 1; ++j) {
        BivarPoly den = P(m) * K(j);
        if (!den.is_zero())
            candidates.emplace_back(Qc(m) * P(j) - P(m) * Qc(j) + P(m) * K(j - 1) - K(m - 1) * P(j), den);
    }
    for (const auto &g : candidates)
        if (satisfies_cofactor_identity(g, M, sys))
            return {RationalSolution::Kind::Rational, g};
    if (candidates.empty() && M.is_constant() && !M.is_zero() && sys.P().deg_y() <= 0 &&
        sys.Q().deg_y() == 1 && sys.Q().y_coeff(1) == UPoly(M.coeff(0, 0)))
        return {RationalSolution::Kind::LinearEquation, std::nullopt};
    throw Inconsistent(candidates.empty() ? "every elimination degenerates and the system is not linear"
                                          : "no eliminated candidate satisfies the solution identity");
}

PolydromyVerdict polydromy_consistency(const PuiseuxSeries &g, const QuasiCofactor &M, const PlanarSystem &sys) {
    PolydromyVerdict v;
    v.nu_g = g.is_zero() ? 1 : g.polydromy();
    v.nu_M = M.polydromy();
    bool divides = v.nu_g % v.nu_M == 0;
    if (!sys.is_linear()) {
        v.ok = v.nu_g == v.nu_M;
        v.detail = v.ok ? "polydromy orders agree" : "polydromy orders differ on a nonlinear equation";
    } else {
        v.ok = divides;
        v.linear_exemption = v.nu_g != v.nu_M;
        v.detail = v.linear_exemption ? "linear exemption" : "polydromy orders agree";
        if (!divides)
            v.detail = "cofactor polydromy does not divide the solution's";
    }
    return v;
}

} // namespace darboux

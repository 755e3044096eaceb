#include "darboux/phi.hpp"
#include "darboux/linalg.hpp"

#include <algorithm>
#include <set>

namespace darboux {

namespace {

SeriesPoly product_of_linear(const std::vector<PuiseuxSeries> &roots) {
    SeriesPoly acc(std::vector<PuiseuxSeries>{PuiseuxSeries(GR(1))});
    for (const auto &r : roots)
        acc = acc * SeriesPoly(std::vector<PuiseuxSeries>{-r, PuiseuxSeries(GR(1))});
    return acc;
}

SeriesPoly apply_field(const SeriesPoly &p, const PlanarSystem &sys) {
    return SeriesPoly::from_bivar(sys.P()) * p.derivative_x() + SeriesPoly::from_bivar(sys.Q()) * p.derivative_y();
}

// p / den where den = lead * prod (y - roots_j); empty when a remainder is known nonzero.
std::optional<SeriesPoly> divide_by_roots(const SeriesPoly &p, const SeriesPoly &den,
                                          const std::vector<PuiseuxSeries> &roots) {
    if (den.degree() != static_cast<int>(roots.size()))
        throw PreconditionFailed("denominator degree " + std::to_string(den.degree()) + " does not match its " +
                                 std::to_string(roots.size()) + " roots");
    SeriesPoly q = p * den.coeff(den.degree()).reciprocal(mpq_class(kDefaultOrder));
    for (const auto &r : roots) {
        auto [quot, rem] = divide_linear(q, r);
        if (!rem.is_zero())
            return std::nullopt;
        q = quot;
    }
    return q;
}

long data_polydromy(const PhiInvariant &phi) {
    long nu = std::max(phi.numerator.polydromy(), phi.denominator.polydromy());
    nu = lcm_long(nu, phi.h2.grid());
    for (const auto &s : phi.a)
        nu = lcm_long(nu, s.grid());
    for (const auto &s : phi.gt)
        nu = lcm_long(nu, s.grid());
    return nu;
}

using EpsSeries = std::vector<PuiseuxSeries>;

EpsSeries eps_mul(const EpsSeries &a, const EpsSeries &b) {
    EpsSeries c(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero() && a[i].is_exact())
            continue;
        for (size_t j = 0; i + j < a.size(); ++j)
            c[i + j] += a[i] * b[j];
    }
    return c;
}

// A0(y) + eps N(y) at a y given as a series in eps.
EpsSeries eval_perturbed(const PhiInvariant &phi, const EpsSeries &y) {
    const int top = std::max(phi.denominator.degree(), phi.numerator.degree());
    EpsSeries acc(y.size());
    for (int j = top; j >= 0; --j) {
        acc = eps_mul(acc, y);
        acc[0] += phi.denominator.coeff_or_zero(j);
        if (acc.size() > 1)
            acc[1] += phi.numerator.coeff_or_zero(j);
    }
    return acc;
}

EpsSeries perturbed_root(const PhiInvariant &phi, const PuiseuxSeries &g, int E) {
    EpsSeries y(E + 1);
    y[0] = g;
    PuiseuxSeries slope = phi.denominator.derivative_y().eval(g);
    if (slope.is_zero())
        throw PreconditionFailed("A0 has a repeated root; the perturbative expansion needs simple roots");
    PuiseuxSeries inv = slope.reciprocal(mpq_class(kDefaultOrder));
    for (int k = 1; k <= E; ++k) {
        EpsSeries v = eval_perturbed(phi, y);
        y[k] = -(v[k] * inv);
    }
    return y;
}

struct TriMono {
    int e, dx, dy;
};

} // namespace

PhiInvariant PhiInvariant::from_roots(PuiseuxSeries h2, std::vector<PuiseuxSeries> a, std::vector<PuiseuxSeries> gt) {
    for (size_t i = 0; i < a.size();) {
        auto it = std::find(gt.begin(), gt.end(), a[i]);
        if (it != gt.end()) {
            gt.erase(it);
            a.erase(a.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    PhiInvariant phi;
    phi.h2 = std::move(h2);
    phi.a = std::move(a);
    phi.gt = std::move(gt);
    phi.numerator = product_of_linear(phi.a) * phi.h2;
    phi.denominator = product_of_linear(phi.gt);
    return phi;
}

PhiInvariant PhiInvariant::from_polynomials(const BivarPoly &a0, const BivarPoly &num, int ram, int order) {
    if (a0.deg_y() < 1)
        throw PreconditionFailed("A0 must depend on y");
    if (num.is_zero())
        throw PreconditionFailed("the numerator of the exponent is zero");
    if (ram < 1)
        throw PreconditionFailed("ramification must be positive");
    BivarPoly A0 = a0, N = num;
    if (ram == 1) {
        BivarPoly g = gcd(A0, N);
        if (!g.is_constant()) {
            A0 = divide_exact(A0, g);
            N = divide_exact(N, g);
        }
    }
    PhiInvariant phi;
    phi.a0_poly = A0;
    phi.denominator = SeriesPoly::from_bivar(A0);
    if (A0.deg_y() > 0)
        phi.gt = newton_puiseux(A0, order);
    std::vector<PuiseuxSeries> nc;
    for (const auto &c : N.y_coeffs())
        nc.push_back(PuiseuxSeries::from_upoly(c).scale_exponents(mpq_class(1, ram)));
    phi.numerator = SeriesPoly(nc);
    phi.h2 = phi.numerator.coeff(phi.numerator.degree());
    if (ram == 1 && N.deg_y() > 0) {
        try {
            phi.a = newton_puiseux(N, order);
        } catch (const Error &) {
            phi.a.clear();
        }
    }
    return phi;
}

std::optional<SeriesPoly> exp_quotient_cofactor(const SeriesPoly &num, const SeriesPoly &den,
                                                const std::vector<PuiseuxSeries> &den_roots,
                                                const PlanarSystem &sys) {
    auto K = divide_by_roots(apply_field(den, sys), den, den_roots);
    if (!K)
        return std::nullopt;
    return divide_by_roots(apply_field(num, sys) - *K * num, den, den_roots);
}

QuasiCofactor verify_phi(const PhiInvariant &phi, const PlanarSystem &sys) {
    for (const auto &g : phi.gt) {
        SolutionCheck chk;
        try {
            chk = is_particular_solution(g, sys);
        } catch (const InconclusiveTruncation &e) {
            throw PhiNotInvariant("particular_solution", std::string("root of A0 inconclusive: ") + e.what());
        }
        if (!chk.verdict)
            throw PhiNotInvariant("particular_solution", "root " + g.str() + " of A0 is not a particular solution");
    }
    auto M = exp_quotient_cofactor(phi.numerator, phi.denominator, phi.gt, sys);
    if (!M)
        throw PhiNotInvariant("not_polynomial", "X(N) A0 - N X(A0) is not a multiple of A0^2: the cofactor is not "
                                                "polynomial in y");
    if (M->degree() > sys.m() - 1)
        throw PhiNotInvariant("degree_bound", "cofactor has degree " + std::to_string(M->degree()) +
                                                  " in y, above m - 1 = " + std::to_string(sys.m() - 1));
    for (const auto &g : phi.gt) {
        PuiseuxSeries v = M->eval(g);
        if (v.is_zero() && v.trunc() && *v.trunc() <= 0)
            throw PhiNotInvariant("finiteness", "M(x, " + g.str() + ") has no known coefficient");
    }
    long nu = data_polydromy(phi);
    if (nu % M->polydromy() != 0)
        throw PhiNotInvariant("polydromy", "cofactor polydromy " + std::to_string(M->polydromy()) +
                                               " does not divide " + std::to_string(nu));
    return *M;
}

EpsilonPolynomial epsilon_minimal_polynomial(const PhiInvariant &phi, const EpsilonOptions &opts) {
    if (phi.gt.empty())
        throw PreconditionFailed("A0 has no roots in y");
    const int maxD = opts.max_total_degree;
    const int E = 2 * maxD + 2;
    std::vector<std::vector<EpsSeries>> powers;
    for (const auto &g : phi.gt) {
        EpsSeries y = perturbed_root(phi, g, E);
        std::vector<EpsSeries> pw{EpsSeries(E + 1)};
        pw[0][0] = PuiseuxSeries(GR(1));
        for (int b = 1; b <= maxD; ++b)
            pw.push_back(eps_mul(pw.back(), y));
        powers.push_back(std::move(pw));
    }
    for (int D = 1; D <= maxD; ++D) {
        std::vector<TriMono> monos;
        for (int e = 0; e <= D; ++e)
            for (int dx = 0; e + dx <= D; ++dx)
                for (int dy = 0; e + dx + dy <= D; ++dy)
                    monos.push_back({e, dx, dy});
        const int n = static_cast<int>(monos.size());
        Matrix rows;
        bool truncated = false;
        for (const auto &pw : powers)
            for (int order = 0; order <= E; ++order) {
                std::vector<PuiseuxSeries> cols;
                std::optional<mpq_class> T;
                std::set<mpq_class> support;
                for (const auto &m : monos) {
                    PuiseuxSeries s = order >= m.e ? pw[m.dy][order - m.e].shift(m.dx) : PuiseuxSeries();
                    T = min_trunc(T, s.trunc());
                    for (const auto &[ex, c] : s.terms())
                        support.insert(ex);
                    cols.push_back(std::move(s));
                }
                if (T)
                    truncated = true;
                for (const auto &ex : support) {
                    if (T && ex >= *T)
                        break;
                    Vector row(n);
                    for (int k = 0; k < n; ++k)
                        row[k] = cols[k].coeff(ex);
                    rows.push_back(std::move(row));
                }
            }
        if (truncated && static_cast<int>(rows.size()) < n + opts.margin)
            throw PreconditionFailed("too few known coefficients for an epsilon polynomial of degree " +
                                     std::to_string(D));
        auto ker = nullspace(rows, n);
        if (ker.empty())
            continue;
        if (ker.size() > 1)
            throw AmbiguousKernel("epsilon polynomial kernel of dimension " + std::to_string(ker.size()) +
                                  " at total degree " + std::to_string(D));
        int maxe = 0;
        for (const auto &m : monos)
            maxe = std::max(maxe, m.e);
        std::vector<BivarPoly> R(maxe + 1);
        for (int k = 0; k < n; ++k)
            R[monos[k].e].add_term(monos[k].dx, monos[k].dy, ker[0][k]);
        while (!R.empty() && R.back().is_zero())
            R.pop_back();
        Vector flat;
        for (const auto &r : R)
            for (auto it = r.terms().rbegin(); it != r.terms().rend(); ++it)
                flat.push_back(it->second);
        Vector scaled = primitive_vector(flat);
        GR scale = scaled.front() / flat.front();
        for (auto &r : R)
            r = r * scale;
        if (R.empty() || R[0].is_zero())
            throw PreconditionFailed("epsilon polynomial has R_0 = 0");

        EpsilonPolynomial out;
        out.R = R;
        BivarPoly base(1);
        for (const auto &g : phi.gt) {
            BivarPoly mp = minimal_polynomial(g, opts.root_max_dx, opts.root_max_dy);
            if (!try_divide(base, mp))
                base = base * mp;
        }
        out.r0_base = base.primitive();
        if (R[0].degree() % out.r0_base.degree() == 0) {
            int k = R[0].degree() / out.r0_base.degree();
            if (associates(R[0], out.r0_base.pow(k)))
                out.r0_power = k;
        }
        if (out.r0_power == 0)
            throw PreconditionFailed("R_0 = " + R[0].str() + " is not a power of " + out.r0_base.str());
        return out;
    }
    throw NotFound("no epsilon polynomial of total degree <= " + std::to_string(maxD));
}

PhiSynthesis synthesize_exponential_factor(const PhiInvariant &phi, const PlanarSystem &sys, int max_h_degree,
                                           const EpsilonOptions &opts) {
    PhiSynthesis out;
    out.M = verify_phi(phi, sys);
    out.eps = epsilon_minimal_polynomial(phi, opts);
    const BivarPoly &R0 = out.eps.R[0];
    BivarPoly k0;
    if (!R0.is_constant())
        k0 = curve_cofactor(R0, sys).k;
    size_t first = 1;
    while (first < out.eps.R.size() && out.eps.R[first].is_zero())
        ++first;
    if (first < out.eps.R.size()) {
        const BivarPoly &h = out.eps.R[first];
        out.raw_candidate = {h, R0, {}};
        auto kt = try_divide(sys.apply(h) - k0 * h, R0);
        if (kt && kt->degree() <= sys.degree() - 1) {
            out.raw_candidate.kt = *kt;
            out.raw_passed = verify_exponential_factor(out.raw_candidate, sys);
        }
    }

    std::vector<ExponentialFactor> candidates;
    if (out.raw_passed)
        candidates.push_back(out.raw_candidate);
    for (auto &e : find_exponential_factors(sys, R0, max_h_degree))
        candidates.push_back(e);
    if (candidates.empty())
        throw NoFactorFound("no exponential factor with denominator " + R0.str() + " and numerator degree <= " +
                            std::to_string(max_h_degree));

    std::vector<PuiseuxSeries> r0_roots;
    bool have_roots = true;
    try {
        r0_roots = newton_puiseux(R0);
    } catch (const Error &) {
        have_roots = false;
    }
    for (size_t c = 0; c < candidates.size(); ++c) {
        const auto &ef = candidates[c];
        SeriesPoly psi = SeriesPoly::from_bivar(ef.kt) - out.M;
        bool ok = psi.degree() <= sys.m() - 1;
        std::optional<SeriesPoly> direct;
        if (ok && have_roots) {
            SeriesPoly num = SeriesPoly::from_bivar(ef.h) * phi.denominator - phi.numerator * SeriesPoly::from_bivar(R0);
            SeriesPoly den = SeriesPoly::from_bivar(R0) * phi.denominator;
            std::vector<PuiseuxSeries> roots = r0_roots;
            roots.insert(roots.end(), phi.gt.begin(), phi.gt.end());
            direct = exp_quotient_cofactor(num, den, roots, sys);
            ok = direct.has_value();
            for (int j = 0; ok && j <= std::max(psi.degree(), direct->degree()); ++j)
                ok = agree(psi.coeff_or_zero(j), direct->coeff_or_zero(j));
        }
        if (ok || c + 1 == candidates.size()) {
            out.factor = ef;
            out.psi_cofactor = psi;
            out.psi_direct = direct;
            out.psi_verified = ok && have_roots;
            return out;
        }
    }
    return out;
}

std::optional<BivarPoly> polynomial_part(const SeriesPoly &k, int max_degree) {
    BivarPoly out;
    for (int j = 0; j <= k.degree(); ++j) {
        const PuiseuxSeries &c = k.coeff(j);
        const int top = max_degree - j;
        if (c.trunc() && *c.trunc() <= top)
            return std::nullopt;
        for (const auto &[e, v] : c.terms()) {
            if (e.get_den() != 1 || e < 0 || e > top)
                return std::nullopt;
            out.add_term(static_cast<int>(e.get_num().get_si()), j, v);
        }
    }
    return out;
}

namespace {

// Accumulates x-factors as root -> exponent, with unsplit polynomials kept whole.
struct XFactors {
    std::map<std::string, std::pair<BivarPoly, GR>> parts;

    void add(const UPoly &p, const GR &lambda) {
        if (p.degree() < 1 || lambda.is_zero())
            return;
        auto fac = factor_univariate_partial(p);
        for (const auto &[r, mult] : fac.roots())
            put(BivarPoly::x() - BivarPoly(r), lambda * GR(mult));
        if (!fac.complete())
            put(BivarPoly::from_x(fac.unfactored).primitive(), lambda);
    }
    void put(const BivarPoly &f, const GR &lambda) {
        BivarPoly p = f.primitive();
        auto [it, inserted] = parts.try_emplace(p.str(), p, lambda);
        if (!inserted)
            it->second.second += lambda;
    }
};

} // namespace

Recognition darboux_recognition(const RootProductInvariant &inv, const PlanarSystem &sys,
                                const RecognitionOptions &opts) {
    Recognition out;
    SigmaTable table;
    for (const auto &[g, alpha] : inv.roots) {
        table.g.push_back(g);
        table.alpha.push_back(alpha);
    }
    table.h = inv.h;
    table.precision = opts.precision;
    if (inv.phi) {
        table.h2 = inv.phi->h2;
        table.a = inv.phi->a;
        table.gt = inv.phi->gt;
    }
    FormulaCofactor fc;
    try {
        fc = inv.phi ? cofactor_formula_II(table, sys) : cofactor_formula_I(table, sys);
    } catch (const TopDegreeViolation &e) {
        throw PreconditionFailed(std::string("cofactor formula does not apply: ") + e.what());
    }
    const int d = sys.degree();
    auto kpoly = polynomial_part(fc.k, d - 1);

    // group roots by the curve they lie on
    std::vector<std::pair<BivarPoly, std::vector<size_t>>> groups;
    for (size_t i = 0; i < inv.roots.size(); ++i) {
        BivarPoly mp;
        try {
            mp = minimal_polynomial(inv.roots[i].first, opts.max_dx, opts.max_dy);
        } catch (const Error &e) {
            out.verdict = Recognition::Verdict::Undetermined;
            out.detail = "cannot separate root " + std::to_string(i) + ": " + e.what();
            return out;
        }
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto &gr) { return associates(gr.first, mp); });
        if (it == groups.end())
            groups.push_back({mp, {i}});
        else
            it->second.push_back(i);
    }
    std::vector<GR> beta;
    for (const auto &[f, idx] : groups) {
        GR b = inv.roots[idx.front()].second;
        for (size_t i : idx)
            if (inv.roots[i].second != b) {
                out.verdict = Recognition::Verdict::NotDarboux;
                out.detail = "exponents differ among the branches of " + f.str();
                if (!kpoly)
                    out.detail += "; the cofactor formula is not polynomial";
                return out;
            }
        beta.push_back(b);
    }
    if (!kpoly)
        throw PreconditionFailed("the cofactor is not a polynomial of degree <= " + std::to_string(d - 1));
    out.cofactor = kpoly;
    for (const auto &[f, idx] : groups)
        if (static_cast<int>(idx.size()) != f.deg_y()) {
            out.verdict = Recognition::Verdict::Undetermined;
            out.detail = f.str() + " has " + std::to_string(f.deg_y()) + " branches but " +
                         std::to_string(idx.size()) + " are present";
            return out;
        }

    std::optional<LogDerivativeSpec::ClosedForm> hform = inv.h.closed_form;
    if (!hform)
        hform = integrate_log_derivative(inv.h.logderiv);
    if (!hform) {
        out.verdict = Recognition::Verdict::Undetermined;
        out.detail = "h'/h has no closed form over Q(i)";
        return out;
    }
    XFactors xf;
    for (const auto &[p, lambda] : hform->factors)
        xf.add(p, lambda);
    DarbouxFunction fn;
    for (size_t j = 0; j < groups.size(); ++j) {
        const BivarPoly &f = groups[j].first;
        xf.add(f.y_coeff(f.deg_y()), -beta[j]);
    }
    std::vector<std::pair<BivarPoly, GR>> factors;
    for (size_t j = 0; j < groups.size(); ++j)
        if (!beta[j].is_zero())
            factors.push_back({groups[j].first, beta[j]});
    for (const auto &[key, fl] : xf.parts)
        if (!fl.second.is_zero())
            factors.push_back(fl);

    std::optional<ExponentialFactor> expo;
    if (hform->exp_part) {
        const RationalFunction &r = *hform->exp_part;
        ExponentialFactor e{r.num(), r.den(), {}};
        BivarPoly k0;
        if (!r.den().is_constant()) {
            try {
                k0 = curve_cofactor(r.den(), sys).k;
            } catch (const NotInvariant &) {
                out.verdict = Recognition::Verdict::Undetermined;
                out.detail = "denominator of exp part of h is not invariant";
                return out;
            }
        }
        auto kt = try_divide(sys.apply(e.h) - k0 * e.h, e.f0);
        if (!kt) {
            out.verdict = Recognition::Verdict::Undetermined;
            out.detail = "exp part of h is not an exponential factor";
            return out;
        }
        e.kt = *kt;
        expo = e;
    }
    if (inv.phi) {
        PhiInvariant phi = PhiInvariant::from_roots(rational_series(inv.phi->h2, opts.precision), inv.phi->a,
                                                    inv.phi->gt);
        PhiSynthesis syn;
        try {
            syn = synthesize_exponential_factor(phi, sys, opts.exp_degree > 0 ? opts.exp_degree : d);
        } catch (const Error &e) {
            out.verdict = Recognition::Verdict::Undetermined;
            out.detail = std::string("exponential part not synthesized: ") + e.what();
            return out;
        }
        if (!expo)
            expo = syn.factor;
        else
            expo = ExponentialFactor{expo->h * syn.factor.f0 + syn.factor.h * expo->f0, expo->f0 * syn.factor.f0,
                                     expo->kt + syn.factor.kt};
    }

    fn.factors = factors;
    fn.exp_part = expo;
    fn.cofactor = *kpoly;
    fn.rational = !expo && std::all_of(factors.begin(), factors.end(),
                                       [](const auto &p) { return p.second.is_integer(); });
    if (kpoly->is_zero())
        fn.role = DarbouxRole::FirstIntegral;
    else if (*kpoly == sys.divergence())
        fn.role = DarbouxRole::IntegratingFactorInverse;
    else
        fn.role = DarbouxRole::GeneralInvariant;
    if (!verify_darboux(fn, sys)) {
        out.verdict = Recognition::Verdict::Undetermined;
        out.detail = "assembled function fails the exact cofactor identity";
        out.function = fn;
        return out;
    }
    out.verdict = Recognition::Verdict::Darboux;
    out.function = fn;
    return out;
}

std::string verdict_name(Recognition::Verdict v) {
    switch (v) {
    case Recognition::Verdict::Darboux:
        return "darboux";
    case Recognition::Verdict::NotDarboux:
        return "not_darboux";
    default:
        return "undetermined";
    }
}

} // namespace darboux

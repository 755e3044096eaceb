#include "darboux/search.hpp"
#include "darboux/linalg.hpp"

#include <algorithm>
#include <functional>
#include <future>

namespace darboux {

namespace {

using MCoeffPoly = std::map<Mono, MPoly, GradedLex>;

std::vector<Mono> monomials_up_to(int deg) {
    std::vector<Mono> r;
    for (int t = 0; t <= deg; ++t)
        for (int dy = 0; dy <= t; ++dy)
            r.push_back({t - dy, dy});
    return r;
}

void accumulate(MCoeffPoly &acc, const Mono &m, const MPoly &c) {
    if (c.is_zero())
        return;
    auto [it, inserted] = acc.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            acc.erase(it);
    }
}

MCoeffPoly mul(const MCoeffPoly &a, const BivarPoly &b) {
    MCoeffPoly r;
    for (const auto &[ma, ca] : a)
        for (const auto &[mb, cb] : b.terms())
            accumulate(r, {ma.dx + mb.dx, ma.dy + mb.dy}, ca * cb);
    return r;
}

MCoeffPoly mul(const MCoeffPoly &a, const MCoeffPoly &b) {
    MCoeffPoly r;
    for (const auto &[ma, ca] : a)
        for (const auto &[mb, cb] : b)
            accumulate(r, {ma.dx + mb.dx, ma.dy + mb.dy}, ca * cb);
    return r;
}

MCoeffPoly derivative(const MCoeffPoly &a, Var v) {
    MCoeffPoly r;
    for (const auto &[m, c] : a) {
        int e = v == Var::X ? m.dx : m.dy;
        if (e == 0)
            continue;
        Mono n = v == Var::X ? Mono{m.dx - 1, m.dy} : Mono{m.dx, m.dy - 1};
        accumulate(r, n, c * GR(e));
    }
    return r;
}

MCoeffPoly lift(const BivarPoly &p, int nvars) {
    MCoeffPoly r;
    for (const auto &[m, c] : p.terms())
        r.emplace(m, MPoly(nvars, c));
    return r;
}

// Irreducible-as-found factors of a homogeneous form of degree D.
struct HomogeneousFactors {
    std::vector<BivarPoly> blocks;
    bool complete = true;
};

HomogeneousFactors factor_homogeneous(const BivarPoly &H) {
    const int D = H.degree();
    std::vector<GR> u(D + 1);
    for (const auto &[m, c] : H.terms())
        u[m.dy] = c;
    UPoly up(u);
    HomogeneousFactors out;
    if (D - up.degree() > 0)
        out.blocks.push_back(BivarPoly::x());
    auto fac = factor_univariate_partial(up);
    for (const auto &[r, mult] : fac.roots())
        out.blocks.push_back(BivarPoly::y() - r * BivarPoly::x());
    if (!fac.complete()) {
        out.complete = false;
        const UPoly &w = fac.unfactored;
        BivarPoly block;
        for (int j = 0; j <= w.degree(); ++j)
            block.add_term(w.degree() - j, j, w.coeff(j));
        out.blocks.push_back(block);
    }
    return out;
}

void compositions(const std::vector<BivarPoly> &blocks, size_t i, int left, const BivarPoly &acc,
                  std::vector<BivarPoly> &out) {
    if (left == 0) {
        out.push_back(acc);
        return;
    }
    if (i == blocks.size())
        return;
    BivarPoly p = acc;
    for (int used = 0; used <= left; used += blocks[i].degree()) {
        compositions(blocks, i + 1, left - used, p, out);
        p = p * blocks[i];
    }
}

struct StageOutput {
    std::vector<BivarPoly> curves;
    std::vector<std::string> diagnostics;
    bool complete = true;
    bool family = false;
};

// Solves X(f) = k f with the top part of f given by `top` (coefficients that are
// unknowns are listed in top_unknowns) and the top part of k fixed.
StageOutput solve_stage(const PlanarSystem &sys, int n, const MCoeffPoly &top, int top_unknowns,
                        const BivarPoly &k_top, const SolveLimits &limits) {
    const int d = sys.degree();
    auto f_low = monomials_up_to(n - 1);
    auto k_low = monomials_up_to(d - 2);
    const int nf = static_cast<int>(f_low.size()), nk = static_cast<int>(k_low.size());
    const int nv = nf + nk + top_unknowns;
    MCoeffPoly f, k = lift(k_top, nv);
    for (const auto &[m, c] : top) {
        MPoly cc(nv);
        for (const auto &[e, v] : c.terms()) {
            MPoly::Exps ee(nv, 0);
            for (size_t i = 0; i < e.size(); ++i)
                ee[nf + nk + i] = e[i];
            cc.add_term(ee, v);
        }
        accumulate(f, m, cc);
    }
    for (int i = 0; i < nf; ++i)
        accumulate(f, f_low[i], MPoly::var(nv, i));
    for (int i = 0; i < nk; ++i)
        accumulate(k, k_low[i], MPoly::var(nv, nf + i));
    MCoeffPoly res = mul(derivative(f, Var::X), sys.P());
    for (const auto &[m, c] : mul(derivative(f, Var::Y), sys.Q()))
        accumulate(res, m, c);
    for (const auto &[m, c] : mul(k, f))
        accumulate(res, m, -c);
    std::vector<MPoly> eqs;
    for (const auto &[m, c] : res)
        eqs.push_back(c);

    StageOutput out;
    auto sol = solve_polynomial_system(eqs, nv, limits);
    out.diagnostics = sol.diagnostics;
    out.complete = sol.complete;
    for (const auto &s : sol.solutions) {
        auto freev = free_unknowns(s);
        for (int v : freev)
            if (v < nf || v >= nf + nk)
                out.family = true;
        std::vector<std::map<int, GR>> choices{{}};
        for (int v : freev)
            choices.push_back({{v, GR(1)}});
        for (const auto &ch : choices) {
            auto vals = instantiate(s, ch);
            BivarPoly cand;
            for (const auto &[m, c] : f) {
                MPoly cc = c;
                for (int v = 0; v < nv; ++v)
                    if (cc.degree_in(v) > 0)
                        cc = cc.substitute(v, MPoly(nv, vals[v]));
                cand.add_term(m.dx, m.dy, cc.constant_term());
            }
            if (cand.degree() == n)
                out.curves.push_back(cand);
        }
    }
    return out;
}

} // namespace

CurveSearchResult find_invariant_curves(const PlanarSystem &sys, int max_degree, const CurveSearchOptions &opts) {
    if (max_degree < 1)
        throw PreconditionFailed("curve search needs a maximum degree of at least 1");
    const int d = sys.degree();
    const BivarPoly Pd = sys.P().homogeneous_part(d), Qd = sys.Q().homogeneous_part(d);
    const BivarPoly X = BivarPoly::x(), Y = BivarPoly::y();
    const BivarPoly H = X * Qd - Y * Pd;
    CurveSearchResult result;

    std::optional<HomogeneousFactors> hf;
    BivarPoly A;
    if (H.is_zero()) {
        A = Pd.is_zero() ? divide_exact(Qd, Y) : divide_exact(Pd, X);
    } else {
        hf = factor_homogeneous(H);
        if (!hf->complete) {
            result.complete = false;
            result.diagnostics.push_back("x*Q_d - y*P_d does not split over Q(i); its unsplit part is used as a single block");
        }
    }

    for (int n = 1; n <= max_degree; ++n) {
        std::vector<std::future<StageOutput>> tasks;
        if (hf) {
            std::vector<BivarPoly> tops;
            compositions(hf->blocks, 0, n, BivarPoly(1), tops);
            for (const auto &top : tops) {
                BivarPoly k_top = divide_exact(sys.apply(top).homogeneous_part(n + d - 1), top);
                tasks.push_back(std::async(std::launch::async, [&sys, n, top, k_top, &opts] {
                    return solve_stage(sys, n, lift(top, 0), 0, k_top, opts.limits);
                }));
            }
        } else {
            BivarPoly k_top = GR(n) * A;
            for (int lead = 0; lead <= n; ++lead) {
                MCoeffPoly top;
                int unknowns = n - lead;
                for (int j = lead; j <= n; ++j) {
                    Mono m{n - j, j};
                    if (j == lead)
                        top.emplace(m, MPoly(unknowns, GR(1)));
                    else
                        top.emplace(m, MPoly::var(unknowns, j - lead - 1));
                }
                tasks.push_back(std::async(std::launch::async, [&sys, n, top, unknowns, k_top, &opts] {
                    return solve_stage(sys, n, top, unknowns, k_top, opts.limits);
                }));
            }
        }
        std::vector<BivarPoly> found;
        for (auto &t : tasks) {
            StageOutput so = t.get();
            for (const auto &dg : so.diagnostics) {
                std::string line = "degree " + std::to_string(n) + ": " + dg;
                if (std::find(result.diagnostics.begin(), result.diagnostics.end(), line) == result.diagnostics.end())
                    result.diagnostics.push_back(line);
            }
            result.complete = result.complete && so.complete;
            if (so.family && !result.has_families) {
                result.has_families = true;
                result.diagnostics.push_back("degree " + std::to_string(n) +
                                             ": curves come in families with free parameters; unit representatives listed");
            }
            for (const auto &c : so.curves)
                found.push_back(c.primitive());
        }
        std::sort(found.begin(), found.end(), canonical_less);
        for (const auto &f : found) {
            bool skip = false;
            for (const auto &prev : result.curves) {
                if (associates(prev.f, f) ||
                    (opts.drop_products && prev.f.degree() < n && try_divide(f, prev.f))) {
                    skip = true;
                    break;
                }
            }
            if (skip)
                continue;
            try {
                result.curves.push_back(curve_cofactor(f, sys));
            } catch (const NotInvariant &) {
                result.diagnostics.push_back("discarded unverified candidate " + f.str());
            }
        }
    }
    std::sort(result.curves.begin(), result.curves.end(),
              [](const CurveWithCofactor &a, const CurveWithCofactor &b) { return canonical_less(a.f, b.f); });
    return result;
}

bool verify_exponential_factor(const ExponentialFactor &e, const PlanarSystem &sys) {
    if (e.h.is_zero() || e.f0.is_zero())
        return false;
    BivarPoly k0;
    try {
        k0 = curve_cofactor(e.f0, sys).k;
    } catch (const Error &) {
        if (!e.f0.is_constant())
            return false;
    }
    return sys.apply(e.h) - k0 * e.h - e.kt * e.f0 == BivarPoly();
}

std::vector<ExponentialFactor> find_exponential_factors(const PlanarSystem &sys, const BivarPoly &f0,
                                                        int max_h_degree) {
    if (f0.is_zero())
        throw NotInvariantCurve("the zero polynomial is not a curve");
    BivarPoly k0;
    if (!f0.is_constant()) {
        try {
            k0 = curve_cofactor(f0, sys).k;
        } catch (const NotInvariant &e) {
            throw NotInvariantCurve(f0.str() + " is not an invariant curve", e.remainder());
        }
    }
    const int d = sys.degree();
    auto hm = monomials_up_to(max_h_degree), km = monomials_up_to(d - 1);
    std::vector<BivarPoly> cols;
    for (const auto &m : hm) {
        BivarPoly mono = BivarPoly::monomial(1, m.dx, m.dy);
        cols.push_back(sys.apply(mono) - k0 * mono);
    }
    for (const auto &m : km)
        cols.push_back(-(BivarPoly::monomial(1, m.dx, m.dy) * f0));
    std::map<Mono, int, GradedLex> rows;
    for (const auto &c : cols)
        for (const auto &[m, v] : c.terms())
            rows.try_emplace(m, 0);
    int r = 0;
    for (auto &[m, idx] : rows)
        idx = r++;
    Matrix M(rows.size(), Vector(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (const auto &[m, v] : cols[j].terms())
            M[rows[m]][j] = v;
    auto basis = nullspace(M, static_cast<int>(cols.size()));

    auto cofactor_of = [&](const BivarPoly &h) -> std::optional<BivarPoly> {
        auto q = try_divide(sys.apply(h) - k0 * h, f0);
        if (!q || q->degree() > d - 1)
            return std::nullopt;
        return q;
    };
    // Representatives modulo the trivial solutions, as coefficient rows over hm
    // listed from the highest monomial down.
    const int nh = static_cast<int>(hm.size());
    Matrix reps;
    for (const auto &v : basis) {
        BivarPoly h;
        for (int i = 0; i < nh; ++i)
            h.add_term(hm[i].dx, hm[i].dy, v[i]);
        BivarPoly red = f0.is_constant() ? h - BivarPoly(h.coeff(0, 0)) : divide(h, f0).remainder;
        if (red.is_zero())
            continue;
        BivarPoly rep = cofactor_of(red) ? red : h;
        Vector row(nh);
        for (int i = 0; i < nh; ++i)
            row[i] = rep.coeff(hm[nh - 1 - i].dx, hm[nh - 1 - i].dy);
        reps.push_back(row);
    }
    auto pivots = rref(reps, nh);
    std::vector<ExponentialFactor> out;
    for (size_t i = 0; i < pivots.size(); ++i) {
        BivarPoly h;
        for (int j = 0; j < nh; ++j)
            h.add_term(hm[nh - 1 - j].dx, hm[nh - 1 - j].dy, reps[i][j]);
        h = h.primitive();
        auto kt = cofactor_of(h);
        if (!kt)
            continue;
        out.push_back({h, f0, *kt});
    }
    std::sort(out.begin(), out.end(),
              [](const ExponentialFactor &a, const ExponentialFactor &b) { return canonical_less(a.h, b.h); });
    return out;
}

std::vector<GR> primitive_vector(std::vector<GR> v) {
    auto it = std::find_if(v.begin(), v.end(), [](const GR &c) { return !c.is_zero(); });
    if (it == v.end())
        return v;
    GR inv = it->inverse();
    mpz_class lcm = 1;
    for (auto &c : v) {
        c = c * inv;
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.re().get_den_mpz_t());
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.im().get_den_mpz_t());
    }
    mpz_class g = 0;
    for (auto &c : v) {
        c = c * GR(mpq_class(lcm));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.re().get_num_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.im().get_num_mpz_t());
    }
    for (auto &c : v)
        c = c * GR(mpq_class(1, g));
    return v;
}

namespace {

std::vector<BivarPoly> member_cofactors(const DarbouxMembers &members) {
    std::vector<BivarPoly> cols;
    for (const auto &c : members.curves)
        cols.push_back(c.k);
    for (const auto &e : members.exponentials)
        cols.push_back(e.kt);
    return cols;
}

// Rows of the linear map (lambda, mu) -> sum of cofactors, plus the target row data.
Matrix cofactor_matrix(const std::vector<BivarPoly> &cols, const BivarPoly &target, Vector &rhs) {
    std::map<Mono, int, GradedLex> rows;
    for (const auto &c : cols)
        for (const auto &[m, v] : c.terms())
            rows.try_emplace(m, 0);
    for (const auto &[m, v] : target.terms())
        rows.try_emplace(m, 0);
    int r = 0;
    for (auto &[m, idx] : rows)
        idx = r++;
    Matrix M(rows.size(), Vector(cols.size()));
    rhs.assign(rows.size(), GR(0));
    for (size_t j = 0; j < cols.size(); ++j)
        for (const auto &[m, v] : cols[j].terms())
            M[rows[m]][j] = v;
    for (const auto &[m, v] : target.terms())
        rhs[rows[m]] = v;
    return M;
}

DarbouxFunction assemble(const DarbouxMembers &members, const Vector &coeffs, DarbouxRole role) {
    DarbouxFunction fn;
    fn.role = role;
    fn.rational = true;
    const size_t nc = members.curves.size();
    for (size_t i = 0; i < nc; ++i) {
        if (coeffs[i].is_zero())
            continue;
        fn.factors.push_back({members.curves[i].f, coeffs[i]});
        fn.cofactor += coeffs[i] * members.curves[i].k;
        if (!coeffs[i].is_integer())
            fn.rational = false;
    }
    std::optional<ExponentialFactor> acc;
    for (size_t j = 0; j < members.exponentials.size(); ++j) {
        const GR &mu = coeffs[nc + j];
        if (mu.is_zero())
            continue;
        const auto &e = members.exponentials[j];
        fn.cofactor += mu * e.kt;
        if (!acc)
            acc = ExponentialFactor{mu * e.h, e.f0, mu * e.kt};
        else
            acc = ExponentialFactor{acc->h * e.f0 + mu * e.h * acc->f0, acc->f0 * e.f0, acc->kt + mu * e.kt};
    }
    if (acc) {
        fn.exp_part = acc;
        fn.rational = false;
    }
    return fn;
}

std::vector<Vector> canonical_basis(std::vector<Vector> basis, int cols) {
    if (basis.empty())
        return basis;
    Matrix m = basis;
    auto piv = rref(m, cols);
    m.resize(piv.size());
    for (auto &row : m)
        row = primitive_vector(row);
    return m;
}

} // namespace

std::vector<DarbouxFunction> find_first_integral(const PlanarSystem &sys, const DarbouxMembers &members) {
    (void)sys;
    auto cols = member_cofactors(members);
    if (cols.empty())
        return {};
    Vector rhs;
    Matrix M = cofactor_matrix(cols, BivarPoly(), rhs);
    const int n = static_cast<int>(cols.size());
    std::vector<DarbouxFunction> out;
    for (const auto &v : canonical_basis(nullspace(M, n), n))
        out.push_back(assemble(members, v, DarbouxRole::FirstIntegral));
    return out;
}

std::vector<DarbouxFunction> find_inverse_integrating_factor(const PlanarSystem &sys,
                                                             const DarbouxMembers &members) {
    auto cols = member_cofactors(members);
    const int n = static_cast<int>(cols.size());
    const BivarPoly div = sys.divergence();
    Vector rhs;
    Matrix M = cofactor_matrix(cols, div, rhs);
    auto part = solve_particular(M, rhs, n);
    if (!part)
        return {};
    std::vector<DarbouxFunction> out{assemble(members, *part, DarbouxRole::IntegratingFactorInverse)};
    for (const auto &v : canonical_basis(nullspace(M, n), n)) {
        Vector w = *part;
        for (int i = 0; i < n; ++i)
            w[i] += v[i];
        out.push_back(assemble(members, w, DarbouxRole::IntegratingFactorInverse));
    }
    return out;
}

bool verify_darboux(const DarbouxFunction &fn, const PlanarSystem &sys) {
    BivarPoly sum;
    for (const auto &[f, lambda] : fn.factors) {
        try {
            sum += lambda * curve_cofactor(f, sys).k;
        } catch (const Error &) {
            return false;
        }
    }
    if (fn.exp_part) {
        if (!verify_exponential_factor(*fn.exp_part, sys))
            return false;
        sum += fn.exp_part->kt;
    }
    if (sum != fn.cofactor)
        return false;
    if (fn.role == DarbouxRole::FirstIntegral)
        return fn.cofactor.is_zero();
    if (fn.role == DarbouxRole::IntegratingFactorInverse)
        return fn.cofactor == sys.divergence();
    return true;
}

BivarPoly realify(const BivarPoly &f) { return f * f.conj(); }

CurveWithCofactor realify(const CurveWithCofactor &c) { return {realify(c.f), c.k + c.k.conj()}; }

std::string role_name(DarbouxRole r) {
    switch (r) {
    case DarbouxRole::FirstIntegral:
        return "first_integral";
    case DarbouxRole::IntegratingFactorInverse:
        return "inverse_integrating_factor";
    default:
        return "invariant";
    }
}

} // namespace darboux

#include "darboux/cofactor.hpp"
#include "darboux/parser.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace darboux;
using testing_support::planted_system;
using testing_support::random_poly;

namespace {
const BivarPoly X = BivarPoly::x();
const BivarPoly Y = BivarPoly::y();

mpq_class q(long a, long b = 1) { return mpq_class(a, b); }

PlanarSystem load(const char *name) {
    return parse_system(load_system_file(std::string(DARBOUX_DATA_DIR) + "/" + name));
}

// Every coefficient in y agrees on the known exponents, and enough of them are known.
bool agrees_with(const SeriesPoly &s, const BivarPoly &p, const mpq_class &min_trunc) {
    for (int j = 0; j <= std::max(s.degree(), p.deg_y()); ++j) {
        PuiseuxSeries c = s.coeff_or_zero(j);
        if (!agree(c, PuiseuxSeries::from_upoly(p.y_coeff(j))))
            return false;
        if (c.trunc() && *c.trunc() < min_trunc)
            return false;
    }
    return true;
}

SeriesPoly sum_oracle(const std::vector<PuiseuxSeries> &roots, const std::vector<GR> &alpha,
                      const LogDerivativeSpec &h, const PlanarSystem &sys, const mpq_class &T) {
    SeriesPoly acc = SeriesPoly::from_bivar(sys.P()) * h.series(T);
    for (size_t i = 0; i < roots.size(); ++i)
        acc = acc + quasipolynomial_cofactor(roots[i], sys) * PuiseuxSeries(alpha[i]);
    return acc;
}

const BivarPoly K1 = -3 * (1 + 2 * X * Y - 4 * Y * Y + 3 * Y.pow(4));
} // namespace

TEST_CASE("curve cofactors") {
    PlanarSystem quintic = load("quintic.sys");
    auto c1 = curve_cofactor(Y.pow(3) - Y - X, quintic);
    CHECK(c1.k == K1);
    auto c2 = curve_cofactor(X * Y * Y - X - 1, quintic);
    CHECK(c2.k == GR(q(5, 3)) * K1);
    CHECK(curve_cofactor(X, PlanarSystem(X, -Y)).k == BivarPoly(1));
    CHECK_THROWS_AS(curve_cofactor(X + Y, quintic), NotInvariant);
    try {
        curve_cofactor(X + Y, quintic);
    } catch (const NotInvariant &e) {
        CHECK_FALSE(e.remainder().is_zero());
    }
    CHECK_THROWS_AS(curve_cofactor(BivarPoly(3), quintic), PreconditionFailed);
}

TEST_CASE("quasipolynomial cofactors") {
    PlanarSystem coalescing = load("coalescing.sys");
    auto M = quasipolynomial_cofactor(PuiseuxSeries(), coalescing);
    CHECK(M.to_bivar() == std::optional<BivarPoly>(1 + X + X * Y));

    PlanarSystem node(2 * X, 3 * Y);
    PuiseuxSeries g = PuiseuxSeries::monomial(1, q(3, 2));
    auto M2 = quasipolynomial_cofactor(g, node);
    CHECK(M2.to_bivar() == std::optional<BivarPoly>(BivarPoly(3)));
    CHECK(M2.polydromy() == 1);
    auto verdict = polydromy_consistency(g, M2, node);
    CHECK(verdict.ok);
    CHECK(verdict.linear_exemption);
    CHECK(verdict.nu_g == 2);
    CHECK(verdict.nu_M == 1);

    PlanarSystem inverted = invert_y(load("cubic.sys")).system;
    for (GR c : {GR(0, 1), GR(0, -1)}) {
        auto Mc = quasipolynomial_cofactor(PuiseuxSeries::monomial(c, q(-1)), inverted);
        CHECK(Mc.polydromy() == 1);
        CHECK(Mc.trunc() == std::nullopt);
    }
    CHECK_THROWS_AS(quasipolynomial_cofactor(PuiseuxSeries::monomial(1, q(1)), coalescing), NotAParticularSolution);
}

TEST_CASE("polydromy consistency on the quintic system") {
    PlanarSystem quintic = load("quintic.sys");
    for (const auto &g : newton_puiseux(X * Y * Y - X - 1)) {
        auto M = quasipolynomial_cofactor(g, quintic);
        auto v = polydromy_consistency(g, M, quintic);
        CHECK(v.nu_M == 2);
        CHECK(v.ok);
    }
    auto rational = quasipolynomial_cofactor(PuiseuxSeries(), load("coalescing.sys"));
    CHECK(polydromy_consistency(PuiseuxSeries(), rational, load("coalescing.sys")).nu_M == 1);
}

TEST_CASE("formula I on the quintic system") {
    PlanarSystem quintic = load("quintic.sys");
    auto r1 = newton_puiseux(Y.pow(3) - Y - X);
    auto r2 = newton_puiseux(X * Y * Y - X - 1);
    std::vector<std::pair<GR, GR>> betas{{1, 0}, {0, 1}, {2, -3}, {GR(q(1, 2)), GR(0, 1)}};
    for (const auto &[b1, b2] : betas) {
        SigmaTable t;
        for (const auto &g : r1) {
            t.g.push_back(g);
            t.alpha.push_back(b1);
        }
        for (const auto &g : r2) {
            t.g.push_back(g);
            t.alpha.push_back(b2);
        }
        t.h = LogDerivativeSpec::from_closed_form({{{UPoly(std::vector<GR>{0, 1}), b2}}, std::nullopt});
        auto res = cofactor_formula_I(t, quintic);
        BivarPoly expect = (b1 + GR(q(5, 3)) * b2) * K1;
        CHECK(agrees_with(res.k, expect, q(5)));
        CHECK(res.top.is_zero());
    }
    SigmaTable empty;
    auto z = cofactor_formula_I(empty, quintic);
    CHECK(agrees_with(z.k, BivarPoly(), q(0)));
}

TEST_CASE("inverting y") {
    PlanarSystem cubic = load("cubic.sys");
    auto inv = invert_y(cubic);
    CHECK(inv.e == 2);
    CHECK(inv.system.P() == 1 + (1 + 4 * X * X) * Y + X * X * Y * Y);
    CHECK(inv.system.Q() == -2 * X * Y * Y + (X + 2 * X.pow(3)) * Y.pow(4));
    auto twice = invert_y(inv.system).system;
    auto ratio = divide(twice.P(), cubic.P());
    CHECK(ratio.remainder.is_zero());
    CHECK(ratio.quotient.terms().size() == 1);
    CHECK(twice.Q() == ratio.quotient * cubic.Q());
    auto trivial = invert_y(PlanarSystem(BivarPoly(1), BivarPoly(0)));
    CHECK(trivial.e == 0);
    CHECK(trivial.system.P() == BivarPoly(1));
    CHECK(trivial.system.Q().is_zero());
}

TEST_CASE("sigma tilde and formula II on the inverted cubic system") {
    PlanarSystem inverted = invert_y(load("cubic.sys")).system;
    SigmaTable t;
    t.a = {PuiseuxSeries(0), PuiseuxSeries(2)};
    t.gt = {PuiseuxSeries::monomial(GR(0, -1), q(-1)), PuiseuxSeries::monomial(GR(0, 1), q(-1))};
    t.h2 = RationalFunction(BivarPoly(-1), X * X);
    std::vector<PuiseuxSeries> expect{PuiseuxSeries(),
                                      PuiseuxSeries::monomial(-2, q(-2)),
                                      PuiseuxSeries::monomial(-2, q(-4)),
                                      PuiseuxSeries::monomial(6, q(-4)),
                                      PuiseuxSeries::monomial(4, q(-6))};
    for (int k = 0; k <= 4; ++k)
        CHECK(sigma_tilde(k, t) == expect[k]);
    auto res = cofactor_formula_II(t, inverted);
    CHECK(res.k.to_bivar() == std::optional<BivarPoly>(-4 * X * Y * Y));
    CHECK(res.k.coeff_or_zero(3).is_zero());

    SigmaTable bad = t;
    bad.a.pop_back();
    CHECK_THROWS_AS(sigma_tilde(1, bad), RSMismatch);
    CHECK_THROWS_AS(cofactor_formula_II(bad, inverted), RSMismatch);

    SigmaTable none;
    CHECK(sigma_tilde(0, none).is_zero());

    SigmaTable one;
    PuiseuxSeries gg = PuiseuxSeries(1) + PuiseuxSeries::monomial(3, q(1));
    PuiseuxSeries aa = PuiseuxSeries::monomial(5, q(2));
    one.a = {aa};
    one.gt = {gg};
    one.g = {PuiseuxSeries::monomial(7, q(1, 2))};
    one.alpha = {GR(q(1, 3))};
    one.h2 = RationalFunction(BivarPoly(1), X + 1);
    PuiseuxSeries h2s = rational_series(*one.h2, one.precision);
    CHECK(agree(sigma_tilde(1, one), one.g[0] * one.alpha[0] + h2s * (aa - gg)));
}

TEST_CASE("top-degree violation") {
    PlanarSystem sys(Y, -X);
    SigmaTable t;
    t.h = LogDerivativeSpec::from_closed_form({{{UPoly(std::vector<GR>{1, 1}), GR(1)}}, std::nullopt});
    CHECK_THROWS_AS(cofactor_formula_I(t, sys), TopDegreeViolation);
}

TEST_CASE("formula II at r = s = 0 equals formula I") {
    PlanarSystem quintic = load("quintic.sys");
    SigmaTable t;
    for (const auto &g : newton_puiseux(Y.pow(3) - Y - X)) {
        t.g.push_back(g);
        t.alpha.push_back(GR(q(2, 7)));
    }
    t.h = LogDerivativeSpec::from_closed_form({{{UPoly(std::vector<GR>{0, 1}), GR(3)}}, std::nullopt});
    auto a = cofactor_formula_I(t, quintic);
    auto b = cofactor_formula_II(t, quintic);
    CHECK(a.k.coeffs() == b.k.coeffs());
}

TEST_CASE("rational solutions from cofactors") {
    PlanarSystem node(2 * X, 3 * Y);
    CHECK(rational_solution_from_cofactor(BivarPoly(3), node).kind == RationalSolution::Kind::LinearEquation);

    // y = x^2 solves this system with cofactor x + y.
    PlanarSystem planted(1 + Y, 2 * X * (1 + Y) + (Y - X * X) * (X + Y));
    auto M = quasipolynomial_cofactor(PuiseuxSeries::monomial(1, q(2)), planted);
    REQUIRE(M.to_bivar());
    CHECK(*M.to_bivar() == X + Y);
    auto sol = rational_solution_from_cofactor(*M.to_bivar(), planted);
    CHECK(sol.kind == RationalSolution::Kind::Rational);
    REQUIRE(sol.g);
    CHECK(*sol.g == RationalFunction(X * X));

    PlanarSystem quintic = load("quintic.sys");
    CHECK_THROWS_AS(rational_solution_from_cofactor(BivarPoly(), quintic), Inconsistent);
    CHECK_THROWS_AS(rational_solution_from_cofactor(K1, quintic), Inconsistent);
}

TEST_CASE("cofactor product rule and conjugation on random systems") {
    std::mt19937 rng(101);
    int done = 0;
    for (int t = 0; t < 400 && done < 100; ++t) {
        BivarPoly f = random_poly(rng, 1, 2, 0.8, true);
        BivarPoly g = random_poly(rng, 1, 2, 0.8, false);
        if (f.degree() < 1 || g.degree() < 1 || f.is_real())
            continue;
        BivarPoly F = f * f.conj() * g;
        auto sys = planted_system(rng, F, 0, 0);
        if (!sys || !sys->is_real() || sys->degree() > 3)
            continue;
        ++done;
        auto cf = curve_cofactor(f, *sys);
        auto cfc = curve_cofactor(f.conj(), *sys);
        auto cg = curve_cofactor(g, *sys);
        CHECK(cfc.k == cf.k.conj());
        CHECK(curve_cofactor(f * g, *sys).k == cf.k + cg.k);
        auto real = curve_cofactor(f * f.conj(), *sys);
        CHECK(real.k.is_real());
        CHECK(real.k == cf.k + cfc.k);
    }
    CHECK(done == 100);
}

TEST_CASE("sum decomposition and formula I against the series oracle") {
    std::mt19937 rng(77);
    int done = 0;
    for (int t = 0; t < 500 && done < 25; ++t) {
        BivarPoly lead = random_poly(rng, 1, 2, 0.8);
        BivarPoly f = lead * Y * Y + random_poly(rng, 1, 2, 0.8) * Y + random_poly(rng, 2, 2, 0.7);
        if (f.deg_y() < 1 || lead.deg_y() > 0 || !squarefree_in_y(f).empty() && squarefree_in_y(f)[0].second > 1)
            continue;
        auto sys = planted_system(rng, f, 1, 1);
        if (!sys)
            continue;
        std::vector<PuiseuxSeries> roots;
        try {
            roots = newton_puiseux(f, 20);
        } catch (const ExtensionRequired &) {
            continue;
        }
        if (static_cast<int>(roots.size()) != f.deg_y())
            continue;
        ++done;
        const mpq_class T(20);
        // k_f = h'/h P + sum M_i with h the leading y-coefficient of f
        auto cf = curve_cofactor(f, *sys);
        UPoly h = f.y_coeff(f.deg_y());
        LogDerivativeSpec hs = h.degree() > 0
                                   ? LogDerivativeSpec::from_closed_form({{{h, GR(1)}}, std::nullopt})
                                   : LogDerivativeSpec::trivial();
        std::vector<GR> ones(roots.size(), GR(1));
        CHECK(agrees_with(sum_oracle(roots, ones, hs, *sys, T), cf.k, q(1)));

        std::vector<GR> alpha;
        std::uniform_int_distribution<int> d(-4, 4);
        for (size_t i = 0; i < roots.size(); ++i)
            alpha.push_back(GR(mpq_class(d(rng), 3)));
        SigmaTable tab;
        tab.g = roots;
        tab.alpha = alpha;
        bool top_free = sys->p()[sys->m()].is_zero();
        tab.h = top_free && h.degree() > 0
                    ? LogDerivativeSpec::from_closed_form({{{h, GR(q(1, 2))}}, std::nullopt})
                    : LogDerivativeSpec::trivial();
        auto res = cofactor_formula_I(tab, *sys);
        SeriesPoly oracle = sum_oracle(roots, alpha, tab.h, *sys, T);
        for (int j = 0; j <= std::max(res.k.degree(), oracle.degree()); ++j)
            CHECK(agree(res.k.coeff_or_zero(j), oracle.coeff_or_zero(j)));
    }
    CHECK(done == 25);
}

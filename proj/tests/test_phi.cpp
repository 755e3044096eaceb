#include "darboux/parser.hpp"
#include "darboux/phi.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace darboux;
using testing_support::random_poly;

namespace {
const BivarPoly X = BivarPoly::x();
const BivarPoly Y = BivarPoly::y();

mpq_class q(long a, long b = 1) { return mpq_class(a, b); }

PlanarSystem load(const char *name) {
    return parse_system(load_system_file(std::string(DARBOUX_DATA_DIR) + "/" + name));
}

PuiseuxSeries mono(GR c, const mpq_class &e) { return PuiseuxSeries::monomial(c, e); }

PhiInvariant sqrt_over_y() { return PhiInvariant::from_polynomials(Y, X, 2); }

bool same_coeffs(const SeriesPoly &a, const SeriesPoly &b) {
    for (int j = 0; j <= std::max(a.degree(), b.degree()); ++j)
        if (!agree(a.coeff_or_zero(j), b.coeff_or_zero(j)))
            return false;
    return true;
}

RationalFunction rf(const BivarPoly &n, const BivarPoly &d) { return RationalFunction(n, d); }
} // namespace

TEST_CASE("cofactor of exp(sqrt(x)/y)") {
    auto M = verify_phi(sqrt_over_y(), load("coalescing.sys"));
    REQUIRE(M.degree() == 2);
    CHECK(M.coeff(2) == mono(GR(q(1, 2)), q(-1, 2)));
    CHECK(M.coeff_or_zero(1).is_zero());
    CHECK(M.coeff(0) == mono(GR(q(1, 2)), q(-1, 2)) + mono(GR(q(1, 2)), q(1, 2)));
    CHECK(M.polydromy() == 2);
}

TEST_CASE("phi checks reject bad data") {
    PlanarSystem coalescing = load("coalescing.sys");
    try {
        verify_phi(PhiInvariant::from_polynomials(Y * Y, X), coalescing);
        FAIL("exp(x/y^2) accepted");
    } catch (const PhiNotInvariant &e) {
        CHECK(e.clause() == "not_polynomial");
    }
    try {
        verify_phi(PhiInvariant::from_polynomials(Y - 1, X), coalescing);
        FAIL("y = 1 accepted");
    } catch (const PhiNotInvariant &e) {
        CHECK(e.clause() == "particular_solution");
    }
    PlanarSystem rot(Y, -X);
    auto phi = PhiInvariant::from_roots(PuiseuxSeries(1), {}, {mono(GR(0, 1), 1), mono(GR(0, -1), 1)});
    try {
        verify_phi(phi, PlanarSystem(Y * Y, X * X));
        FAIL("non-invariant roots accepted");
    } catch (const PhiNotInvariant &e) {
        CHECK(e.clause() == "particular_solution");
    }
    auto M = verify_phi(phi, rot);
    CHECK(M.degree() <= 0);
    CHECK(M.coeff_or_zero(0).is_zero());
}

TEST_CASE("phi with the numerator equal to the denominator") {
    PlanarSystem coalescing = load("coalescing.sys");
    PuiseuxSeries h2 = PuiseuxSeries(1) + mono(3, q(1)) + mono(-1, q(2));
    PhiInvariant phi;
    phi.h2 = h2;
    phi.gt = {PuiseuxSeries()};
    phi.denominator = SeriesPoly::from_bivar(Y);
    phi.numerator = SeriesPoly::from_bivar(Y) * h2;
    auto M = exp_quotient_cofactor(phi.numerator, phi.denominator, phi.gt, coalescing);
    REQUIRE(M);
    SeriesPoly expect = SeriesPoly::from_bivar(coalescing.P()) * h2.derivative();
    CHECK(same_coeffs(*M, expect));
    try {
        verify_phi(phi, coalescing);
        FAIL("degree bound ignored");
    } catch (const PhiNotInvariant &e) {
        CHECK(e.clause() == "degree_bound");
    }
}

TEST_CASE("epsilon minimal polynomials") {
    auto e1 = epsilon_minimal_polynomial(sqrt_over_y());
    REQUIRE(e1.R.size() == 3);
    CHECK(e1.R[0] == Y * Y);
    CHECK(e1.R[1].is_zero());
    CHECK(e1.R[2] == -X);
    CHECK(e1.r0_base == Y);
    CHECK(e1.r0_power == 2);

    auto e2 = epsilon_minimal_polynomial(PhiInvariant::from_polynomials(Y - X, X));
    REQUIRE(e2.R.size() == 2);
    CHECK(e2.R[0] == Y - X);
    CHECK(e2.R[1] == X);
    CHECK(e2.r0_power == 1);

    CHECK_THROWS_AS(epsilon_minimal_polynomial(PhiInvariant::from_polynomials(Y * Y, X)), PreconditionFailed);
}

TEST_CASE("exponential factor synthesis on the coalescing system") {
    PlanarSystem coalescing = load("coalescing.sys");
    auto syn = synthesize_exponential_factor(sqrt_over_y(), coalescing, 2);
    CHECK(syn.raw_candidate.h == -X);
    CHECK(syn.raw_candidate.f0 == Y * Y);
    CHECK_FALSE(syn.raw_passed);
    CHECK(syn.factor.h == X + Y);
    CHECK(syn.factor.f0 == Y * Y);
    CHECK(syn.factor.kt == Y - X);
    CHECK(verify_exponential_factor(syn.factor, coalescing));
    REQUIRE(syn.psi_direct);
    CHECK(syn.psi_verified);
    CHECK(same_coeffs(syn.psi_cofactor, *syn.psi_direct));
    CHECK(syn.psi_cofactor.degree() <= coalescing.m() - 1);
}

TEST_CASE("synthesis straight from the first epsilon coefficient") {
    PlanarSystem sys(BivarPoly(1), Y * Y);
    auto syn = synthesize_exponential_factor(PhiInvariant::from_polynomials(Y, BivarPoly(1)), sys, 2);
    CHECK(syn.eps.R.size() == 2);
    CHECK(syn.raw_passed);
    CHECK(syn.factor.h == BivarPoly(1));
    CHECK(syn.factor.f0 == Y);
    CHECK(syn.factor.kt == BivarPoly(-1));
    CHECK(syn.psi_verified);
    for (const auto &c : syn.psi_cofactor.coeffs())
        CHECK(c.is_zero());
}

TEST_CASE("no factor found") {
    PlanarSystem sys(BivarPoly(1), Y * Y);
    auto phi = PhiInvariant::from_polynomials(Y, X * X * X);
    CHECK_THROWS_AS(synthesize_exponential_factor(phi, sys, 0), Error);
}

TEST_CASE("polynomial part of a quasipolynomial cofactor") {
    SeriesPoly k(std::vector<PuiseuxSeries>{PuiseuxSeries(2) + PuiseuxSeries::big_o(q(5)), mono(-1, 1)});
    CHECK(polynomial_part(k, 2) == std::optional<BivarPoly>(BivarPoly(2) - X * Y));
    CHECK_FALSE(polynomial_part(SeriesPoly(std::vector<PuiseuxSeries>{PuiseuxSeries::big_o(q(1)), PuiseuxSeries(1)}), 2));
    CHECK_FALSE(polynomial_part(SeriesPoly(std::vector<PuiseuxSeries>{mono(1, q(1, 2))}), 2));
    CHECK_FALSE(polynomial_part(SeriesPoly(std::vector<PuiseuxSeries>{mono(1, q(3))}), 2));
}

TEST_CASE("recognition on the quintic system") {
    PlanarSystem quintic = load("quintic.sys");
    const BivarPoly f1 = Y.pow(3) - Y - X, f2 = X * Y * Y - X - 1;
    auto build = [&](GR b1, GR b2) {
        RootProductInvariant inv;
        for (const auto &g : newton_puiseux(f1))
            inv.roots.push_back({g, b1});
        for (const auto &g : newton_puiseux(f2))
            inv.roots.push_back({g, b2});
        inv.h = LogDerivativeSpec::from_closed_form({{{UPoly(std::vector<GR>{0, 1}), b2}}, std::nullopt});
        return inv;
    };
    auto rec = darboux_recognition(build(5, -3), quintic);
    REQUIRE(rec.verdict == Recognition::Verdict::Darboux);
    REQUIRE(rec.function);
    CHECK(rec.function->role == DarbouxRole::FirstIntegral);
    CHECK(rec.function->rational);
    CHECK(rec.function->factors.size() == 2);
    for (const auto &[f, b] : rec.function->factors) {
        if (associates(f, f1))
            CHECK(b == GR(5));
        else if (associates(f, f2))
            CHECK(b == GR(-3));
        else
            FAIL("unexpected factor " << f.str());
    }

    auto half = darboux_recognition(build(GR(q(1, 2)), GR(0)), quintic);
    REQUIRE(half.verdict == Recognition::Verdict::Darboux);
    CHECK(half.function->role == DarbouxRole::GeneralInvariant);
    CHECK_FALSE(half.function->rational);

    RootProductInvariant mixed = build(1, 0);
    mixed.roots[0].second = GR(2);
    auto bad = darboux_recognition(mixed, quintic);
    CHECK(bad.verdict == Recognition::Verdict::NotDarboux);

    RootProductInvariant partial = build(1, 0);
    partial.roots.erase(partial.roots.begin());
    CHECK_THROWS_AS(darboux_recognition(partial, quintic), PreconditionFailed);
}

TEST_CASE("recognition of x-only and exponential invariants") {
    PlanarSystem node(2 * X, 3 * Y);
    RootProductInvariant only_h;
    only_h.h = LogDerivativeSpec::from_logderiv(rf(BivarPoly(3), X));
    auto r = darboux_recognition(only_h, node);
    REQUIRE(r.verdict == Recognition::Verdict::Darboux);
    CHECK(r.function->cofactor == BivarPoly(6));
    CHECK(r.function->factors.size() == 1);

    RootProductInvariant fi = only_h;
    fi.roots.push_back({PuiseuxSeries(), GR(-2)});
    auto r2 = darboux_recognition(fi, node);
    REQUIRE(r2.verdict == Recognition::Verdict::Darboux);
    CHECK(r2.function->role == DarbouxRole::FirstIntegral);

    RootProductInvariant iif;
    iif.roots.push_back({PuiseuxSeries(), GR(1)});
    iif.h = LogDerivativeSpec::from_logderiv(rf(BivarPoly(1), X));
    auto r3 = darboux_recognition(iif, node);
    REQUIRE(r3.verdict == Recognition::Verdict::Darboux);
    CHECK(r3.function->role == DarbouxRole::IntegratingFactorInverse);

    PlanarSystem sys(BivarPoly(1), Y * Y);
    RootProductInvariant ex;
    ex.phi = RootProductInvariant::Phi{rf(BivarPoly(1), BivarPoly(1)), {PuiseuxSeries(1)}, {PuiseuxSeries()}};
    auto r4 = darboux_recognition(ex, sys);
    REQUIRE(r4.verdict == Recognition::Verdict::Darboux);
    REQUIRE(r4.function->exp_part);
    CHECK(r4.function->exp_part->f0 == Y);
    CHECK(r4.function->cofactor == BivarPoly(1));
    CHECK_FALSE(r4.function->rational);
}

TEST_CASE("recognition reassembles planted curve powers") {
    std::mt19937 rng(4242);
    int tested = 0;
    for (int trial = 0; trial < 60 && tested < 15; ++trial) {
        BivarPoly lead = trial % 2 ? X : BivarPoly(1);
        BivarPoly f = lead * Y * Y + random_poly(rng, 1, 2, 0.8);
        if (!gcd(f, f.derivative(Var::Y)).is_constant())
            continue;
        auto sys = testing_support::planted_system(rng, f, 1, 1);
        if (!sys || sys->degree() < 1)
            continue;
        std::vector<PuiseuxSeries> roots;
        try {
            roots = newton_puiseux(f);
        } catch (const Error &) {
            continue;
        }
        try {
            if (!associates(minimal_polynomial(roots[0], 4, 4), f))
                continue;
        } catch (const Error &) {
            continue;
        }
        GR beta(std::uniform_int_distribution<int>(-3, 3)(rng));
        if (beta.is_zero())
            beta = GR(1);
        RootProductInvariant inv;
        for (const auto &g : roots)
            inv.roots.push_back({g, beta});
        if (trial % 2)
            inv.h = LogDerivativeSpec::from_closed_form({{{UPoly(std::vector<GR>{0, 1}), beta}}, std::nullopt});
        Recognition rec;
        try {
            rec = darboux_recognition(inv, *sys);
        } catch (const PreconditionFailed &) {
            continue;
        }
        if (rec.verdict != Recognition::Verdict::Darboux)
            continue;
        ++tested;
        REQUIRE(rec.function->factors.size() == 1);
        CHECK(associates(rec.function->factors[0].first, f));
        CHECK(rec.function->factors[0].second == beta);
        CHECK(rec.function->cofactor == beta * curve_cofactor(f, *sys).k);
    }
    CHECK(tested >= 5);
}

TEST_CASE("closed forms of logarithmic derivatives") {
    // 3/x + 1/(x-1)^2 + 2
    BivarPoly xm1 = X - 1;
    RationalFunction r = rf(3 * xm1 * xm1 + X + 2 * X * xm1 * xm1, X * xm1 * xm1);
    auto cf = integrate_log_derivative(r);
    REQUIRE(cf);
    CHECK(LogDerivativeSpec::closed_form_logderiv(*cf) == r);
    REQUIRE(cf->exp_part);
    CHECK(cf->factors.size() == 1);
    CHECK(cf->factors[0].second == GR(3));

    auto gauss = integrate_log_derivative(rf(BivarPoly(1), X * X + 1));
    REQUIRE(gauss);
    CHECK(gauss->factors.size() == 2);
    CHECK_FALSE(gauss->exp_part);

    CHECK_FALSE(integrate_log_derivative(rf(BivarPoly(1), X * X - 2)));
    auto zero = integrate_log_derivative(rf(BivarPoly(), BivarPoly(1)));
    REQUIRE(zero);
    CHECK(zero->factors.empty());
}

TEST_CASE("cofactor identity reassembled to truncation") {
    auto field = [](const SeriesPoly &p, const PlanarSystem &sys) {
        return SeriesPoly::from_bivar(sys.P()) * p.derivative_x() + SeriesPoly::from_bivar(sys.Q()) * p.derivative_y();
    };
    auto check = [&](const PhiInvariant &phi, const PlanarSystem &sys) {
        SeriesPoly M = verify_phi(phi, sys);
        SeriesPoly lhs = field(phi.numerator, sys) * phi.denominator - phi.numerator * field(phi.denominator, sys) -
                         M * phi.denominator * phi.denominator;
        for (const auto &c : lhs.coeffs())
            CHECK(c.is_zero());
    };
    check(sqrt_over_y(), load("coalescing.sys"));
    check(PhiInvariant::from_polynomials(Y, BivarPoly(1)), PlanarSystem(BivarPoly(1), Y * Y));
    check(PhiInvariant::from_roots(PuiseuxSeries(1), {}, {mono(GR(0, 1), 1), mono(GR(0, -1), 1)}),
          PlanarSystem(Y, -X));

    // exp(c(x)/y) with cofactor t c' on x' = t y + s c, y' = y c' s
    std::mt19937 rng(99);
    int tested = 0;
    for (int trial = 0; trial < 40 && tested < 10; ++trial) {
        std::uniform_int_distribution<int> coef(-3, 3);
        BivarPoly c = BivarPoly(coef(rng)) + coef(rng) * X + coef(rng) * X * X;
        BivarPoly t = random_poly(rng, 1, 2, 0.7);
        BivarPoly sp = random_poly(rng, 1, 2, 0.7);
        if (c.deg_y() > 0 || c.degree() < 1 || t.is_zero() || sp.is_zero())
            continue;
        BivarPoly dc = c.derivative(Var::X);
        BivarPoly P = t * Y + sp * c, Q = Y * dc * sp;
        if (P.is_zero() || !gcd(P, Q).is_constant())
            continue;
        PlanarSystem sys(P, Q);
        PhiInvariant phi = PhiInvariant::from_polynomials(Y, c);
        if (sys.m() < 1 || (t * dc).deg_y() > sys.m() - 1)
            continue;
        check(phi, sys);
        CHECK(verify_phi(phi, sys).to_bivar() == std::optional<BivarPoly>(t * dc));
        ++tested;
    }
    CHECK(tested >= 5);
}

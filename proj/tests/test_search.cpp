#include "darboux/parser.hpp"
#include "darboux/search.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <chrono>

using namespace darboux;
using testing_support::planted_system;
using testing_support::random_poly;

namespace {
const BivarPoly X = BivarPoly::x();
const BivarPoly Y = BivarPoly::y();
const BivarPoly I = BivarPoly(GR(0, 1));

PlanarSystem load(const char *name) {
    return parse_system(load_system_file(std::string(DARBOUX_DATA_DIR) + "/" + name));
}

const CurveWithCofactor *find_curve(const CurveSearchResult &r, const BivarPoly &f) {
    for (const auto &c : r.curves)
        if (associates(c.f, f))
            return &c;
    return nullptr;
}

const BivarPoly F1 = Y.pow(3) - Y - X;
const BivarPoly F2 = X * Y * Y - X - 1;
const BivarPoly K1 = -3 * (1 + 2 * X * Y - 4 * Y * Y + 3 * Y.pow(4));
} // namespace

TEST_CASE("invariant curves of the quintic system") {
    auto t0 = std::chrono::steady_clock::now();
    auto r = find_invariant_curves(load("quintic.sys"), 3);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 30);
    auto c1 = find_curve(r, F1), c2 = find_curve(r, F2);
    REQUIRE(c1);
    REQUIRE(c2);
    CHECK(c1->f == F1);
    CHECK(c2->f == F2);
    CHECK(c1->k == K1);
    CHECK(c2->k == GR(mpq_class(5, 3)) * K1);
    for (size_t i = 1; i < r.curves.size(); ++i)
        CHECK(canonical_less(r.curves[i - 1].f, r.curves[i].f));
}

TEST_CASE("invariant lines") {
    auto r = find_invariant_curves(load("coalescing.sys"), 1);
    REQUIRE(find_curve(r, Y));
    CHECK(find_curve(r, Y)->k == 1 + X + X * Y);

    PlanarSystem star(X, Y);
    auto s = find_invariant_curves(star, 2);
    REQUIRE(find_curve(s, X));
    REQUIRE(find_curve(s, Y));
    auto kx = find_curve(s, X)->k, ky = find_curve(s, Y)->k;
    CHECK(curve_cofactor(X * Y, star).k == kx + ky);
    for (const auto &c : s.curves)
        CHECK(curve_cofactor(c.f, star).k == c.k);

    CHECK_THROWS_AS(find_invariant_curves(star, 0), PreconditionFailed);
}

TEST_CASE("curve search is sound and finds planted curves") {
    std::mt19937 rng(5);
    int done = 0;
    for (int t = 0; t < 200 && done < 30; ++t) {
        BivarPoly f = random_poly(rng, 2, 2, 0.8);
        if (f.degree() < 1)
            continue;
        auto sys = planted_system(rng, f, 1, 1);
        if (!sys || sys->degree() > 3)
            continue;
        ++done;
        auto r = find_invariant_curves(*sys, f.degree());
        for (const auto &c : r.curves) {
            CHECK(c.f == c.f.primitive());
            CHECK(sys->apply(c.f) == c.k * c.f);
            CHECK(c.k.degree() <= sys->degree() - 1);
        }
        if (r.complete) {
            // every irreducible factor of f is invariant and lies within the search bound
            bool covered = find_curve(r, f) != nullptr;
            for (const auto &c : r.curves)
                covered = covered || try_divide(f, c.f).has_value();
            CHECK(covered);
        }
    }
    CHECK(done == 30);
}

namespace {
// All real invariant curves of degree <= 2 with integer coefficients in [-2, 2].
std::vector<BivarPoly> brute_force_curves(const PlanarSystem &sys) {
    std::vector<Mono> monos;
    for (int t = 0; t <= 2; ++t)
        for (int dy = 0; dy <= t; ++dy)
            monos.push_back({t - dy, dy});
    std::vector<BivarPoly> out;
    std::vector<int> c(monos.size(), -2);
    while (true) {
        BivarPoly f;
        for (size_t i = 0; i < monos.size(); ++i)
            f.add_term(monos[i].dx, monos[i].dy, GR(c[i]));
        if (f.degree() >= 1 && f == f.primitive()) {
            auto q = try_divide(sys.apply(f), f);
            if (q)
                out.push_back(f);
        }
        size_t i = 0;
        while (i < c.size() && c[i] == 2)
            c[i++] = -2;
        if (i == c.size())
            break;
        ++c[i];
    }
    return out;
}

bool in_box(const BivarPoly &f) {
    for (const auto &[m, v] : f.terms())
        if (!v.is_integer() || abs(v.re()) > 2)
            return false;
    return true;
}
} // namespace

TEST_CASE("brute-force oracle agreement for quadratic systems") {
    std::mt19937 rng(2024);
    int done = 0, compared = 0;
    auto t0 = std::chrono::steady_clock::now();
    for (int t = 0; t < 400 && done < 20; ++t) {
        BivarPoly f = random_poly(rng, 1 + static_cast<int>(rng() % 2), 2, 0.8);
        if (f.degree() < 1 || !in_box(f.primitive()))
            continue;
        auto sys = f.degree() == 2 ? planted_system(rng, f, 0, 0) : planted_system(rng, f, 1, 1);
        if (!sys || sys->degree() > 2 || sys->degree() < 1)
            continue;
        BivarPoly H = X * sys->Q().homogeneous_part(sys->degree()) - Y * sys->P().homogeneous_part(sys->degree());
        if (H.is_zero())
            continue;
        ++done;
        auto oracle = brute_force_curves(*sys);
        auto found = find_invariant_curves(*sys, 2);
        for (const auto &c : found.curves)
            if (in_box(c.f) && c.f.is_real()) {
                bool hit = false;
                for (const auto &o : oracle)
                    hit = hit || associates(o, c.f);
                CHECK_MESSAGE(hit, c.f.str());
            }
        if (!found.complete || found.has_families)
            continue;
        ++compared;
        for (const auto &o : oracle) {
            bool hit = find_curve(found, o) != nullptr;
            for (const auto &c : found.curves)
                hit = hit || (c.f.degree() < o.degree() && try_divide(o, c.f).has_value());
            CHECK_MESSAGE(hit, (o.str() + " missing for dx = " + sys->P().str() + ", dy = " + sys->Q().str()));
        }
    }
    CHECK(done == 20);
    CHECK(compared >= 10);
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 120);
}

TEST_CASE("exponential factors") {
    PlanarSystem coalescing = load("coalescing.sys");
    auto e = find_exponential_factors(coalescing, Y * Y, 2);
    REQUIRE(e.size() == 1);
    CHECK(e[0].h == X + Y);
    CHECK(e[0].kt == Y - X);
    CHECK(verify_exponential_factor(e[0], coalescing));

    PlanarSystem cubic = load("cubic.sys");
    auto e11 = find_exponential_factors(cubic, X * X + Y * Y, 1);
    REQUIRE(e11.size() == 1);
    CHECK(e11[0].h == 2 * Y - 1);
    CHECK(e11[0].kt == -4 * X);

    PlanarSystem flow(BivarPoly(1), X);
    auto p = find_exponential_factors(flow, BivarPoly(1), 1);
    REQUIRE(p.size() == 1);
    CHECK(p[0].h == X);
    CHECK(p[0].kt == BivarPoly(1));
    CHECK(verify_exponential_factor(p[0], flow));

    CHECK_THROWS_AS(find_exponential_factors(coalescing, X + Y, 2), NotInvariantCurve);
    CHECK_THROWS_AS(find_exponential_factors(coalescing, X + Y, 2), NotInvariant);

    ExponentialFactor tampered = e[0];
    tampered.kt = Y + X;
    CHECK_FALSE(verify_exponential_factor(tampered, coalescing));
}

TEST_CASE("exponential factors satisfy the defining identity on random systems") {
    std::mt19937 rng(9);
    int planted = 0;
    for (int t = 0; t < 200 && planted < 20; ++t) {
        BivarPoly f = random_poly(rng, 1, 2, 0.9);
        if (f.degree() != 1)
            continue;
        // exp(g/f) is an exponential factor when R {f, g} = k0 g modulo f.
        BivarPoly fx = f.derivative(Var::X), fy = f.derivative(Var::Y);
        BivarPoly g = -fy * X + fx * Y + random_poly(rng, 0, 2, 1.0);
        GR jac = (fx * fx + fy * fy).coeff(0, 0);
        BivarPoly U = random_poly(rng, 1, 2, 0.6), V = random_poly(rng, 1, 2, 0.6);
        BivarPoly k0 = U * fx + V * fy;
        BivarPoly R = k0 * g * jac.inverse() + f * random_poly(rng, 0, 2, 1.0);
        BivarPoly P = -(R * fy) + f * U, Q = R * fx + f * V;
        if (P.is_zero() || Q.is_zero() || !gcd(P, Q).is_constant())
            continue;
        PlanarSystem sys(P, Q);
        ++planted;
        auto found = find_exponential_factors(sys, f, 1);
        CHECK_FALSE(found.empty());
        for (const auto &ef : found) {
            CHECK(verify_exponential_factor(ef, sys));
            CHECK(ef.kt.degree() <= sys.degree() - 1);
            CHECK_FALSE(try_divide(ef.h, ef.f0).has_value());
        }
    }
    CHECK(planted == 20);
}

TEST_CASE("first integrals") {
    PlanarSystem quintic = load("quintic.sys");
    DarbouxMembers m{{curve_cofactor(F1, quintic), curve_cofactor(F2, quintic)}, {}};
    auto fi = find_first_integral(quintic, m);
    REQUIRE(fi.size() == 1);
    REQUIRE(fi[0].factors.size() == 2);
    CHECK(fi[0].factors[0].first == F1);
    CHECK(fi[0].factors[0].second == GR(5));
    CHECK(fi[0].factors[1].second == GR(-3));
    CHECK(fi[0].cofactor.is_zero());
    CHECK(fi[0].rational);
    CHECK(fi[0].role == DarbouxRole::FirstIntegral);
    CHECK(verify_darboux(fi[0], quintic));

    // scaling a member leaves the exponent space unchanged
    DarbouxMembers scaled{{curve_cofactor(GR(7) * F1, quintic), curve_cofactor(GR(0, 2) * F2, quintic)}, {}};
    auto fs = find_first_integral(quintic, scaled);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].factors[0].second == GR(5));
    CHECK(fs[0].factors[1].second == GR(-3));

    DarbouxMembers single{{curve_cofactor(F1, quintic)}, {}};
    CHECK(find_first_integral(quintic, single).empty());

    DarbouxMembers dependent{{curve_cofactor(F1, quintic), curve_cofactor(F1 * F1, quintic)}, {}};
    auto fd = find_first_integral(quintic, dependent);
    REQUIRE(fd.size() == 1);
    CHECK(fd[0].factors[0].second == GR(2));
    CHECK(fd[0].factors[1].second == GR(-1));

    DarbouxFunction bad = fi[0];
    bad.factors[1].second = GR(-2);
    CHECK_FALSE(verify_darboux(bad, quintic));
}

TEST_CASE("first integral with an exponential part") {
    PlanarSystem coalescing = load("coalescing.sys");
    auto y = curve_cofactor(Y, coalescing);
    auto e = find_exponential_factors(coalescing, Y * Y, 2);
    DarbouxMembers m{{y}, e};
    for (const auto &fn : find_first_integral(coalescing, m))
        CHECK(verify_darboux(fn, coalescing));
    for (const auto &fn : find_inverse_integrating_factor(coalescing, m)) {
        CHECK(verify_darboux(fn, coalescing));
        CHECK(fn.cofactor == coalescing.divergence());
    }
}

TEST_CASE("inverse integrating factors") {
    PlanarSystem rot(-Y, X);
    BivarPoly r2 = X * X + Y * Y;
    DarbouxMembers m{{curve_cofactor(r2, rot)}, {}};
    auto iif = find_inverse_integrating_factor(rot, m);
    REQUIRE(iif.size() == 2);
    CHECK(iif[0].factors.empty());
    CHECK(iif[1].factors.size() == 1);
    CHECK(iif[1].factors[0].first == r2);
    CHECK(iif[1].factors[0].second == GR(1));
    CHECK(iif[1].rational);
    auto fi = find_first_integral(rot, m);
    REQUIRE(fi.size() == 1);
    CHECK(fi[0].factors[0].first == r2);
    for (const auto &fn : iif)
        CHECK(verify_darboux(fn, rot));

    CHECK(find_inverse_integrating_factor(rot, DarbouxMembers{}).size() == 1);

    PlanarSystem quintic = load("quintic.sys");
    DarbouxMembers m14{{curve_cofactor(F1, quintic), curve_cofactor(F2, quintic)}, {}};
    for (const auto &fn : find_inverse_integrating_factor(quintic, m14))
        CHECK(verify_darboux(fn, quintic));

    PlanarSystem node(2 * X, 3 * Y);
    DarbouxMembers mn{{curve_cofactor(X, node), curve_cofactor(Y, node)}, {}};
    auto v = find_inverse_integrating_factor(node, mn);
    REQUIRE_FALSE(v.empty());
    CHECK(verify_darboux(v[0], node));
    CHECK(v[0].cofactor == BivarPoly(5));
}

TEST_CASE("realify") {
    PlanarSystem inverted = invert_y(load("cubic.sys")).system;
    auto c = curve_cofactor(X * Y - I, inverted);
    auto r = realify(c);
    CHECK(r.f == X * X * Y * Y + 1);
    CHECK(r.k.is_real());
    CHECK(curve_cofactor(r.f, inverted).k == r.k);

    PlanarSystem cubic = load("cubic.sys");
    auto line = curve_cofactor(Y - I * X, cubic);
    auto rl = realify(line);
    CHECK(rl.f == Y * Y + X * X);
    CHECK(curve_cofactor(rl.f, cubic).k == rl.k);

    PlanarSystem quintic = load("quintic.sys");
    auto f1 = curve_cofactor(F1, quintic);
    CHECK(realify(f1).f == F1 * F1);
    CHECK(realify(f1).k == 2 * f1.k);
}

TEST_CASE("primitive vectors") {
    auto v = primitive_vector({GR(0), GR(mpq_class(-3, 2)), GR(mpq_class(5, 2))});
    CHECK(v == std::vector<GR>{GR(0), GR(3), GR(-5)});
    auto w = primitive_vector({GR(0, 2), GR(4)});
    CHECK(w == std::vector<GR>{GR(1), GR(0, -2)});
}

TEST_CASE("multivariate resultants and the constraint solver") {
    const int n = 3;
    MPoly a = MPoly::var(n, 0), b = MPoly::var(n, 1), c = MPoly::var(n, 2);
    MPoly one(n, GR(1));
    // res_a(a^2 - b, a - c) = c^2 - b
    CHECK(resultant(a * a - b, a - c, 0) == c * c - b);
    CHECK(divide_exact(a * a - b * b, a - b) == a + b);
    CHECK_THROWS_AS(divide_exact(a * a + one, a - b), Error);

    auto r = solve_polynomial_system({a * b, b + c - one}, n);
    CHECK(r.complete);
    REQUIRE(r.solutions.size() == 2);
    for (const auto &s : r.solutions)
        for (long t : {0L, 1L, 5L}) {
            std::map<int, GR> fv;
            for (int v : free_unknowns(s))
                fv[v] = GR(t);
            auto vals = instantiate(s, fv);
            CHECK((vals[0] * vals[1]).is_zero());
            CHECK(vals[1] + vals[2] == GR(1));
        }

    auto q = solve_polynomial_system({a * a + GR(4) * one, b - a}, n);
    REQUIRE(q.solutions.size() == 2);
    CHECK(q.complete);

    auto irr = solve_polynomial_system({a * a - GR(2) * one}, n);
    CHECK(irr.solutions.empty());
    CHECK_FALSE(irr.complete);
    CHECK_FALSE(irr.diagnostics.empty());

    CHECK(solve_polynomial_system({a - one, a - GR(2) * one}, n).solutions.empty());

    // intersection of two conics, solved through a resultant
    auto conics = solve_polynomial_system({a * a + b * b - GR(5) * one, a * b - GR(2) * one}, n);
    CHECK(conics.solutions.size() == 4);
    for (const auto &s : conics.solutions) {
        auto v = instantiate(s, {});
        CHECK(v[0] * v[0] + v[1] * v[1] == GR(5));
        CHECK(v[0] * v[1] == GR(2));
    }
}

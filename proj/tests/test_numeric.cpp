#include "darboux/numeric.hpp"
#include "darboux/parser.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace darboux;

namespace {
const BivarPoly X = BivarPoly::x();
const BivarPoly Y = BivarPoly::y();

PlanarSystem load(const char *name) {
    return parse_system(load_system_file(std::string(DARBOUX_DATA_DIR) + "/" + name));
}

const PlanarSystem oscillator(-Y, X);

DarbouxFunction single(const BivarPoly &f, GR lambda = GR(1)) {
    DarbouxFunction fn;
    fn.factors = {{f, lambda}};
    return fn;
}

DarbouxFunction quintic_integral(GR l1 = GR(5), GR l2 = GR(-3)) {
    DarbouxFunction fn;
    fn.factors = {{Y.pow(3) - Y - X, l1}, {X * Y * Y - X - 1, l2}};
    return fn;
}
} // namespace

TEST_CASE("harmonic oscillator closes its orbit") {
    auto orbit = integrate(oscillator, 1, 0, 2 * std::numbers::pi, 1e-3);
    CHECK_FALSE(orbit.aborted);
    const auto &end = orbit.samples.back();
    CHECK(static_cast<double>(end[0]) == doctest::Approx(2 * std::numbers::pi));
    CHECK(std::hypot(static_cast<double>(end[1] - 1), static_cast<double>(end[2])) <= 1e-6);
    for (size_t i = 1; i < orbit.samples.size(); ++i)
        CHECK(orbit.samples[i][0] > orbit.samples[i - 1][0]);
}

TEST_CASE("integration errors") {
    CHECK_THROWS_AS(integrate(oscillator, 0, 0, 1, 1e-3), SingularStart);
    CHECK_THROWS_AS(integrate(PlanarSystem(2 * X, 3 * Y), 0, 0, 1, 1e-3), SingularStart);
    CHECK_THROWS_AS(integrate(oscillator, 1, 0, 1, 0), PreconditionFailed);
    CHECK_THROWS_AS(integrate(PlanarSystem(GR(0, 1) * Y, X), 1, 0, 1, 1e-2), PreconditionFailed);
    CHECK_THROWS_AS(integrate(oscillator, 1, 0, 1e20, 1e-3), StepUnderflow);

    auto blowup = integrate(PlanarSystem(X * X, Y), 1, 1, 2, 1e-2);
    CHECK(blowup.aborted);
    CHECK(blowup.samples.back()[0] < 1.1);

    auto into_node = integrate(PlanarSystem(-X, -Y), 1e-6, 0, 50, 0.1);
    CHECK(into_node.aborted);
}

TEST_CASE("quintic system smoke run") {
    auto orbit = integrate(load("quintic.sys"), 0.1, 0.2, 1, 1e-3);
    CHECK_FALSE(orbit.aborted);
    CHECK(orbit.samples.size() == 1001);
    for (const auto &s : orbit.samples)
        CHECK((std::isfinite(s[1]) && std::isfinite(s[2])));
}

TEST_CASE("conserved quantities") {
    auto orbit = integrate(oscillator, 1, 0, 2 * std::numbers::pi, 1e-3);
    EvaluableInvariant r2(single(X * X + Y * Y));
    CHECK(r2.direct());
    CHECK(check_conserved(r2, orbit) <= 1e-8);

    auto q = integrate(load("quintic.sys"), 0.1, 0.2, 1, 1e-3);
    EvaluableInvariant H(quintic_integral());
    CHECK_FALSE(H.direct());
    CHECK(check_conserved(H, q) <= 1e-6);

    auto line = integrate(PlanarSystem(BivarPoly(1), BivarPoly()), 0, 0, 3, 1e-2);
    CHECK(check_conserved(EvaluableInvariant(single(X)), line) == doctest::Approx(3).epsilon(1e-9));
}

TEST_CASE("complex exponents and exponential parts") {
    // |x + iy|^{2i} = exp(-2 arg), conserved only when the angle is fixed: a radial flow
    auto radial = integrate(PlanarSystem(X, Y), 1, 1, 1, 1e-3);
    EvaluableInvariant angle(single(X + GR(0, 1) * Y, GR(0, 1)));
    CHECK(check_conserved(angle, radial) <= 1e-9);

    // the argument winds past pi without a jump
    auto circle = integrate(oscillator, 1, 0, 3 * std::numbers::pi, 1e-3);
    EvaluableInvariant turning(single(X + GR(0, 1) * Y, GR(0, 1)));
    CHECK(check_conserved(turning, circle) == doctest::Approx(3 * std::numbers::pi).epsilon(1e-6));

    // exp(x + y) on x' = 1, y' = -1
    DarbouxFunction fn;
    fn.exp_part = ExponentialFactor{X + Y, BivarPoly(1), BivarPoly()};
    auto diag = integrate(PlanarSystem(BivarPoly(1), BivarPoly(-1)), 0, 0, 2, 1e-2);
    CHECK(check_conserved(EvaluableInvariant(fn), diag) <= 1e-12);

    auto through_zero = integrate(PlanarSystem(BivarPoly(1), BivarPoly()), -1, 0, 2, 0.5);
    CHECK_THROWS_AS(check_conserved(EvaluableInvariant(single(X, GR(-1))), through_zero), ExcludedRegion);
}

TEST_CASE("fourth-order convergence of the drift") {
    EvaluableInvariant r2(single(X * X + Y * Y));
    double coarse = check_conserved(r2, integrate(oscillator, 1, 0, 2 * std::numbers::pi, 0.1));
    double fine = check_conserved(r2, integrate(oscillator, 1, 0, 2 * std::numbers::pi, 0.05));
    CHECK(coarse > 0);
    CHECK(coarse >= 8 * fine);
}

TEST_CASE("a corrupted exponent is detected") {
    auto orbit = integrate(load("quintic.sys"), 0.1, 0.2, 1, 1e-3);
    double good = check_conserved(EvaluableInvariant(quintic_integral()), orbit);
    double bad = check_conserved(EvaluableInvariant(quintic_integral(GR(mpq_class(5001, 1000)))), orbit);
    CHECK(bad >= 100 * std::max(good, 1e-15));
}

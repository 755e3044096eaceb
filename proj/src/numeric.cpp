#include "darboux/numeric.hpp"

#include <cmath>
#include <numbers>

namespace darboux {

CompiledPoly::CompiledPoly(const BivarPoly &p) {
    for (const auto &[m, c] : p.terms())
        terms_.push_back({m.dx, m.dy, {static_cast<Real>(c.re().get_d()), static_cast<Real>(c.im().get_d())}});
}

std::complex<Real> CompiledPoly::operator()(Real x, Real y) const {
    std::complex<Real> s = 0;
    for (const auto &t : terms_)
        s += t.c * std::pow(x, t.dx) * std::pow(y, t.dy);
    return s;
}

Real CompiledPoly::magnitude(Real x, Real y) const {
    Real s = 0;
    for (const auto &t : terms_)
        s += std::abs(t.c) * std::pow(std::abs(x), t.dx) * std::pow(std::abs(y), t.dy);
    return s;
}

Orbit integrate(const PlanarSystem &sys, double x0, double y0, double t_end, double h,
                const IntegrateOptions &opts) {
    if (!sys.is_real())
        throw PreconditionFailed("numeric integration needs real coefficients");
    if (!(h > 0) || !(t_end > 0) || !std::isfinite(x0) || !std::isfinite(y0))
        throw PreconditionFailed("integration needs finite start, positive step and positive end time");
    if (static_cast<Real>(t_end) + h == static_cast<Real>(t_end))
        throw StepUnderflow("step " + std::to_string(h) + " is below the resolution of t_end = " + std::to_string(t_end));
    const CompiledPoly P(sys.P()), Q(sys.Q());
    auto field = [&](Real x, Real y) { return std::array<Real, 2>{P(x, y).real(), Q(x, y).real()}; };
    auto singular = [&](const std::array<Real, 2> &v) {
        return std::abs(v[0]) + std::abs(v[1]) < opts.singular_threshold;
    };
    if (singular(field(x0, y0)))
        throw SingularStart("start point is a singular point of the field");

    Orbit orbit;
    orbit.h = h;
    orbit.samples.push_back({0.0, x0, y0});
    const long steps = std::lround(std::ceil(t_end / h - 1e-9));
    Real x = x0, y = y0;
    for (long n = 1; n <= steps; ++n) {
        Real t = orbit.samples.back()[0];
        Real step = std::min<Real>(h, t_end - t);
        auto k1 = field(x, y);
        auto k2 = field(x + step / 2 * k1[0], y + step / 2 * k1[1]);
        auto k3 = field(x + step / 2 * k2[0], y + step / 2 * k2[1]);
        auto k4 = field(x + step * k3[0], y + step * k3[1]);
        Real nx = x + step / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        Real ny = y + step / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        if (!std::isfinite(nx) || !std::isfinite(ny) || std::abs(nx) + std::abs(ny) > opts.escape_radius) {
            orbit.aborted = true;
            orbit.abort_reason = "orbit escapes at t = " + std::to_string(static_cast<double>(t + step));
            break;
        }
        if (singular(field(nx, ny))) {
            orbit.aborted = true;
            orbit.abort_reason = "singular point reached at t = " + std::to_string(static_cast<double>(t + step));
            break;
        }
        x = nx;
        y = ny;
        orbit.samples.push_back({n == steps ? static_cast<Real>(t_end) : t + step, x, y});
    }
    return orbit;
}

EvaluableInvariant::EvaluableInvariant(const DarbouxFunction &fn, double margin, double rel_margin)
    : margin_(margin), rel_margin_(rel_margin) {
    direct_ = !fn.exp_part;
    for (const auto &[f, lambda] : fn.factors) {
        factors_.push_back({CompiledPoly(f), {static_cast<Real>(lambda.re().get_d()), static_cast<Real>(lambda.im().get_d())}});
        if (!lambda.is_integer() || sgn(lambda.re()) < 0)
            direct_ = false;
    }
    if (fn.exp_part)
        exp_ = {CompiledPoly(fn.exp_part->h), CompiledPoly(fn.exp_part->f0)};
}

bool EvaluableInvariant::excluded(Real x, Real y) const {
    if (direct_)
        return false;
    auto near_zero = [&](const CompiledPoly &f) {
        Real v = std::abs(f(x, y));
        return v < margin_ || v < rel_margin_ * f.magnitude(x, y);
    };
    for (const auto &fl : factors_)
        if (near_zero(fl.first))
            return true;
    return exp_ && near_zero(exp_->second);
}

std::optional<size_t> EvaluableInvariant::first_excluded(const Orbit &orbit) const {
    for (size_t i = 0; i < orbit.samples.size(); ++i)
        if (excluded(orbit.samples[i][1], orbit.samples[i][2]))
            return i;
    return std::nullopt;
}

std::vector<Real> EvaluableInvariant::along(const Orbit &orbit) const {
    std::vector<Real> out;
    out.reserve(orbit.samples.size());
    if (auto i = first_excluded(orbit))
        throw ExcludedRegion("orbit enters the excluded region around the zeros of the factors at t = " +
                             std::to_string(static_cast<double>(orbit.samples[*i][0])));
    if (direct_) {
        for (const auto &[t, x, y] : orbit.samples) {
            std::complex<Real> v = 1;
            for (const auto &[f, lambda] : factors_)
                v *= std::pow(f(x, y), static_cast<int>(lambda.real()));
            out.push_back(v.real());
        }
        return out;
    }
    std::vector<Real> prev_arg(factors_.size());
    for (size_t s = 0; s < orbit.samples.size(); ++s) {
        const Real x = orbit.samples[s][1], y = orbit.samples[s][2];
        Real v = 0;
        for (size_t i = 0; i < factors_.size(); ++i) {
            const auto &[f, lambda] = factors_[i];
            std::complex<Real> z = f(x, y);
            Real arg = std::arg(z);
            if (s > 0) {
                Real jump = arg - prev_arg[i];
                arg -= 2 * std::numbers::pi_v<Real> * std::round(jump / (2 * std::numbers::pi_v<Real>));
            }
            prev_arg[i] = arg;
            v += lambda.real() * std::log(std::abs(z)) - lambda.imag() * arg;
        }
        if (exp_) {
            v += (exp_->first(x, y) / exp_->second(x, y)).real();
        }
        out.push_back(v);
    }
    return out;
}

double check_conserved(const EvaluableInvariant &H, const Orbit &orbit) {
    auto v = H.along(orbit);
    Real drift = 0;
    for (Real w : v)
        drift = std::max(drift, std::abs(w - v.front()) / (1 + std::abs(v.front())));
    return static_cast<double>(drift);
}

} // namespace darboux

#include "darboux/system.hpp"

#include <algorithm>

namespace darboux {

CoprimalityViolation::CoprimalityViolation(BivarPoly common)
    : Error("P and Q are not coprime; common factor " + common.str()), common_(std::move(common)) {}

PlanarSystem::PlanarSystem(BivarPoly P, BivarPoly Q) : P_(std::move(P)), Q_(std::move(Q)) {
    if (P_.is_zero() && Q_.is_zero())
        throw Error("the zero vector field is not a system");
    BivarPoly g = gcd(P_, Q_);
    if (!g.is_constant())
        throw CoprimalityViolation(g.primitive());
    d_ = std::max(P_.degree(), Q_.degree());
    m_ = std::max({P_.deg_y(), Q_.deg_y(), 0});
    p_ = P_.y_coeffs();
    q_ = Q_.y_coeffs();
    p_.resize(m_ + 1);
    q_.resize(m_ + 1);
}

BivarPoly PlanarSystem::apply(const BivarPoly &f) const {
    return P_ * f.derivative(Var::X) + Q_ * f.derivative(Var::Y);
}

BivarPoly PlanarSystem::divergence() const { return P_.derivative(Var::X) + Q_.derivative(Var::Y); }

bool PlanarSystem::is_linear() const { return P_.deg_y() <= 0 && Q_.deg_y() <= 1; }

} // namespace darboux

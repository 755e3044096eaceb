#pragma once

#include "darboux/bivar.hpp"

namespace darboux {

/// Raised when P and Q share a nonconstant factor.
class CoprimalityViolation : public Error {
  public:
    explicit CoprimalityViolation(BivarPoly common);
    const BivarPoly &common_factor() const { return common_; }

  private:
    BivarPoly common_;
};

/// The vector field P d/dx + Q d/dy with coprime P, Q.
class PlanarSystem {
  public:
    PlanarSystem(BivarPoly P, BivarPoly Q);

    const BivarPoly &P() const { return P_; }
    const BivarPoly &Q() const { return Q_; }
    /// max(deg P, deg Q)
    int degree() const { return d_; }
    /// max(deg_y P, deg_y Q)
    int m() const { return m_; }
    /// y-coefficients of P and Q, padded to length m+1.
    const std::vector<UPoly> &p() const { return p_; }
    const std::vector<UPoly> &q() const { return q_; }

    /// X(f) = P f_x + Q f_y
    BivarPoly apply(const BivarPoly &f) const;
    BivarPoly divergence() const;
    /// dy/dx = Q/P is linear in y: P free of y and Q of degree <= 1 in y.
    bool is_linear() const;
    /// P and Q have real coefficients.
    bool is_real() const { return P_.is_real() && Q_.is_real(); }

  private:
    BivarPoly P_, Q_;
    int d_ = 0;
    int m_ = 0;
    std::vector<UPoly> p_, q_;
};

} // namespace darboux

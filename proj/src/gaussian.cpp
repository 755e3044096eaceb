#include "darboux/gaussian.hpp"

namespace darboux {

GaussianRational GaussianRational::inverse() const {
    if (is_zero())
        throw Error("division by zero in Q(i)");
    mpq_class n = norm();
    return {re_ / n, -im_ / n};
}

GaussianRational &GaussianRational::operator+=(const GaussianRational &o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussianRational &GaussianRational::operator-=(const GaussianRational &o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussianRational &GaussianRational::operator*=(const GaussianRational &o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

GaussianRational &GaussianRational::operator/=(const GaussianRational &o) {
    if (sgn(o.im_) == 0) {
        if (sgn(o.re_) == 0)
            throw Error("division by zero in Q(i)");
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

int GaussianRational::compare(const GaussianRational &a, const GaussianRational &b) {
    if (int c = cmp(a.re_, b.re_); c != 0)
        return c < 0 ? -1 : 1;
    int c = cmp(a.im_, b.im_);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

GaussianRational GaussianRational::pow(long e) const {
    if (e < 0)
        return inverse().pow(-e);
    GaussianRational result(1), base = *this;
    while (e > 0) {
        if (e & 1)
            result *= base;
        e >>= 1;
        if (e)
            base *= base;
    }
    return result;
}

std::optional<mpq_class> rational_sqrt(const mpq_class &q) {
    if (sgn(q) < 0)
        return std::nullopt;
    const mpz_class &n = q.get_num();
    const mpz_class &d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    return mpq_class(sn, sd);
}

// sqrt(a+bi) = u+vi with u^2 = (|z|+a)/2, v^2 = (|z|-a)/2, sign(v) = sign(b).
std::optional<GaussianRational> GaussianRational::sqrt() const {
    if (is_zero())
        return GaussianRational(0);
    auto modulus = rational_sqrt(norm());
    if (!modulus)
        return std::nullopt;
    auto u = rational_sqrt((*modulus + re_) / 2);
    auto v = rational_sqrt((*modulus - re_) / 2);
    if (!u || !v)
        return std::nullopt;
    mpq_class vv = sgn(im_) < 0 ? mpq_class(-*v) : *v;
    GaussianRational root(*u, vv);
    if (root * root != *this)
        return std::nullopt;
    return root;
}

std::complex<long double> GaussianRational::to_complex_ld() const {
    // Two-term split: double approximation plus the double of the residual.
    auto split = [](const mpq_class &q) {
        mpf_class v(q, 256);
        double hi = v.get_d();
        mpf_class rest = v - mpf_class(hi, 256);
        return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
    };
    return {split(re_), split(im_)};
}

std::string GaussianRational::str() const {
    if (sgn(im_) == 0)
        return re_.get_str();
    auto imag = [&](const mpq_class &v) -> std::string {
        if (v == 1)
            return "i";
        if (v == -1)
            return "-i";
        return v.get_str() + "*i";
    };
    if (sgn(re_) == 0)
        return imag(im_);
    std::string s = re_.get_str();
    std::string t = imag(im_);
    if (t[0] != '-')
        s += "+";
    return s + t;
}

} // namespace darboux

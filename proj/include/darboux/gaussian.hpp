#pragma once

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>

namespace darboux {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionFailed : public Error {
  public:
    using Error::Error;
};

/// Exact element of Q(i): re + im*i with arbitrary precision rational parts.
///
/// mpq_class keeps both parts canonical (lowest terms, positive denominator),
/// so equality is plain structural equality.
class GaussianRational {
  public:
    GaussianRational() = default;
    GaussianRational(long v) : re_(v), im_(0) {}
    GaussianRational(mpq_class re, mpq_class im = 0)
        : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational i() { return {0, 1}; }

    const mpq_class &re() const { return re_; }
    const mpq_class &im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_imaginary() const { return sgn(re_) == 0 && sgn(im_) != 0; }
    /// True for a rational integer (real, denominator 1).
    bool is_integer() const { return is_real() && re_.get_den() == 1; }

    GaussianRational conj() const { return {re_, -im_}; }
    /// |z|^2, always a nonnegative rational.
    mpq_class norm() const { return re_ * re_ + im_ * im_; }
    GaussianRational inverse() const;

    GaussianRational operator-() const { return {-re_, -im_}; }
    GaussianRational &operator+=(const GaussianRational &o);
    GaussianRational &operator-=(const GaussianRational &o);
    GaussianRational &operator*=(const GaussianRational &o);
    GaussianRational &operator/=(const GaussianRational &o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational &b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational &b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational &b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational &b) { return a /= b; }

    friend bool operator==(const GaussianRational &a, const GaussianRational &b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational &a, const GaussianRational &b) { return !(a == b); }

    /// Total order (real part, then imaginary part); used only for canonical sorting.
    static int compare(const GaussianRational &a, const GaussianRational &b);

    GaussianRational pow(long e) const;

    /// Exact square root inside Q(i), if one exists.
    std::optional<GaussianRational> sqrt() const;

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
    std::complex<long double> to_complex_ld() const;

    /// Text such as "3/2", "-i", "1/2+3*i". Parenthesization is left to callers.
    std::string str() const;

  private:
    mpq_class re_{0};
    mpq_class im_{0};
};

using GR = GaussianRational;

/// Exact square root of a nonnegative rational, if rational.
std::optional<mpq_class> rational_sqrt(const mpq_class &q);

} // namespace darboux

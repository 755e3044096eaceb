#include "darboux/upoly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace darboux {

UPoly::UPoly(GR c) {
    if (!c.is_zero())
        c_.push_back(std::move(c));
}

UPoly::UPoly(std::vector<GR> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::monomial(GR c, int deg) {
    if (c.is_zero())
        return {};
    std::vector<GR> v(deg + 1);
    v[deg] = std::move(c);
    return UPoly(std::move(v));
}

UPoly UPoly::linear(const GR &root) { return UPoly(std::vector<GR>{-root, GR(1)}); }

void UPoly::trim() {
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
}

GR UPoly::eval(const GR &t) const {
    GR acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc *= t;
        acc += *it;
    }
    return acc;
}

UPoly UPoly::derivative() const {
    if (c_.size() <= 1)
        return {};
    std::vector<GR> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i)
        d[i - 1] = c_[i] * GR(static_cast<long>(i));
    return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
    if (c_.empty() || c_.back().is_one())
        return *this;
    GR inv = c_.back().inverse();
    UPoly r = *this;
    for (auto &c : r.c_)
        c *= inv;
    return r;
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto &c : r.c_)
        c = -c;
    return r;
}

UPoly &UPoly::operator+=(const UPoly &o) {
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i)
        c_[i] += o.c_[i];
    trim();
    return *this;
}

UPoly &UPoly::operator-=(const UPoly &o) {
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i)
        c_[i] -= o.c_[i];
    trim();
    return *this;
}

UPoly operator*(const UPoly &a, const UPoly &b) {
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<GR> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero())
            continue;
        for (size_t j = 0; j < b.c_.size(); ++j)
            r[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(r));
}

UPoly UPoly::pow(int e) const {
    UPoly r(GR(1));
    for (int i = 0; i < e; ++i)
        r = r * *this;
    return r;
}

std::string UPoly::str(const char *var) const {
    if (c_.empty())
        return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        if (c_[i].is_zero())
            continue;
        if (!s.empty())
            s += " + ";
        s += "(" + c_[i].str() + ")";
        if (i > 0)
            s += std::string("*") + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return s;
}

std::pair<UPoly, UPoly> divmod(const UPoly &a, const UPoly &b) {
    if (b.is_zero())
        throw Error("polynomial division by zero");
    std::vector<GR> rem = a.coeffs();
    int db = b.degree();
    if (a.degree() < db)
        return {UPoly(), a};
    std::vector<GR> quo(a.degree() - db + 1);
    GR inv = b.lead().inverse();
    for (int i = a.degree(); i >= db; --i) {
        if (rem[i].is_zero())
            continue;
        GR q = rem[i] * inv;
        for (int j = 0; j <= db; ++j)
            rem[i - db + j] -= q * b.coeffs()[j];
        quo[i - db] = std::move(q);
    }
    rem.resize(db);
    return {UPoly(std::move(quo)), UPoly(std::move(rem))};
}

UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly &p) {
    // Yun's algorithm (characteristic zero).
    std::vector<std::pair<UPoly, int>> out;
    if (p.degree() < 1)
        return out;
    UPoly f = p.monic();
    UPoly d = f.derivative();
    UPoly a = gcd(f, d);
    UPoly b = divmod(f, a).first;
    UPoly c = divmod(d, a).first;
    UPoly e = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        UPoly g = gcd(b, e);
        if (g.degree() > 0)
            out.emplace_back(g, i);
        b = divmod(b, g).first;
        c = divmod(e, g).first;
        e = c - b.derivative();
        ++i;
    }
    return out;
}

std::vector<std::pair<GR, int>> UnivariateFactorization::roots() const {
    std::vector<std::pair<GR, int>> r;
    for (const auto &[f, m] : factors)
        r.emplace_back(-f.coeff(0), m);
    return r;
}

namespace {

using cld = std::complex<long double>;

// Aberth-Ehrlich simultaneous iteration on a square-free polynomial.
std::vector<cld> approximate_roots(const UPoly &p) {
    int n = p.degree();
    std::vector<cld> c(n + 1);
    for (int i = 0; i <= n; ++i)
        c[i] = p.coeff(i).to_complex_ld();
    auto eval = [&](cld z, cld &dz) {
        cld v = c[n];
        dz = 0;
        for (int i = n - 1; i >= 0; --i) {
            dz = dz * z + v;
            v = v * z + c[i];
        }
        return v;
    };
    // Cauchy bound for the initial circle.
    long double bound = 0;
    for (int i = 0; i < n; ++i)
        bound = std::max(bound, std::abs(c[i] / c[n]));
    bound = 1 + bound;
    std::vector<cld> z(n);
    const long double pi = std::acos(-1.0L);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(bound * 0.5L, 2 * pi * k / n + 0.4L);
    for (int iter = 0; iter < 500; ++iter) {
        long double change = 0;
        for (int k = 0; k < n; ++k) {
            cld dz;
            cld v = eval(z[k], dz);
            if (v == cld(0))
                continue;
            cld ratio = v / dz;
            cld sum = 0;
            for (int j = 0; j < n; ++j)
                if (j != k)
                    sum += 1.0L / (z[k] - z[j]);
            cld w = ratio / (1.0L - ratio * sum);
            z[k] -= w;
            change = std::max(change, std::abs(w) / (1 + std::abs(z[k])));
        }
        if (change < 1e-18L)
            break;
    }
    return z;
}

mpz_class round_ld(long double v) {
    long double r = std::nearbyint(v);
    double hi = static_cast<double>(r);
    double lo = static_cast<double>(r - static_cast<long double>(hi));
    mpz_class z(hi);
    z += mpz_class(lo);
    return z;
}

// Continued-fraction rationalization with a denominator cap.
mpq_class rationalize(long double v, long cap) {
    long double x = v;
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 40; ++it) {
        long double a = std::floor(x);
        mpz_class ai = round_ld(a);
        mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > cap)
            break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        long double frac = x - a;
        if (frac < 1e-15L)
            break;
        x = 1 / frac;
    }
    if (k1 == 0)
        return mpq_class(round_ld(v));
    mpq_class q(h1, k1);
    q.canonicalize();
    return q;
}

// Candidate exact roots near the numeric approximation z of a root of p.
std::vector<GR> root_candidates(const UPoly &p, cld z) {
    std::vector<GR> out;
    // Clear denominators: p * L has Gaussian-integer coefficients, and for a
    // root r in Q(i) the number lead*r is a Gaussian integer.
    mpz_class lcm = 1;
    for (const auto &c : p.coeffs()) {
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.re().get_den_mpz_t());
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.im().get_den_mpz_t());
    }
    GR lead = p.lead() * GR(mpq_class(lcm));
    cld lz = lead.to_complex_ld() * z;
    GR w(mpq_class(round_ld(lz.real())), mpq_class(round_ld(lz.imag())));
    out.push_back(w / lead);
    out.emplace_back(rationalize(z.real(), 1L << 20), rationalize(z.imag(), 1L << 20));
    return out;
}

// Roots of a monic square-free quadratic, if they lie in Q(i).
std::optional<std::pair<GR, GR>> quadratic_roots(const UPoly &q) {
    const GR &b = q.coeff(1);
    const GR &c = q.coeff(0);
    GR disc = b * b - GR(4) * c;
    auto s = disc.sqrt();
    if (!s)
        return std::nullopt;
    GR half(mpq_class(1, 2));
    return std::make_pair((-b + *s) * half, (-b - *s) * half);
}

// Splits a monic square-free polynomial into roots in Q(i) and a leftover.
std::pair<std::vector<GR>, UPoly> split_squarefree(UPoly s) {
    std::vector<GR> roots;
    while (s.degree() >= 1) {
        if (s.degree() == 1) {
            roots.push_back(-s.coeff(0));
            s = UPoly(GR(1));
            break;
        }
        if (s.degree() == 2) {
            if (auto r = quadratic_roots(s)) {
                roots.push_back(r->first);
                roots.push_back(r->second);
                s = UPoly(GR(1));
            }
            break;
        }
        if (s.coeff(0).is_zero()) {
            roots.emplace_back(0);
            s = divmod(s, UPoly::linear(GR(0))).first;
            continue;
        }
        bool found = false;
        for (const cld &z : approximate_roots(s)) {
            for (const GR &cand : root_candidates(s, z)) {
                if (s.eval(cand).is_zero()) {
                    roots.push_back(cand);
                    s = divmod(s, UPoly::linear(cand)).first;
                    found = true;
                    break;
                }
            }
            if (found)
                break;
        }
        if (!found)
            break;
    }
    return {roots, s};
}

} // namespace

UnivariateFactorization factor_univariate_partial(const UPoly &p) {
    if (p.is_zero())
        throw Error("factor_univariate: zero polynomial");
    UnivariateFactorization out;
    out.unit = p.lead();
    for (const auto &[s, mult] : squarefree_decomposition(p)) {
        auto [roots, rest] = split_squarefree(s);
        for (const GR &r : roots)
            out.factors.emplace_back(UPoly::linear(r), mult);
        if (rest.degree() > 0)
            out.unfactored = out.unfactored * rest.pow(mult);
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const auto &a, const auto &b) {
        int c = GR::compare(-a.first.coeff(0), -b.first.coeff(0));
        return c != 0 ? c < 0 : a.second < b.second;
    });
    return out;
}

UnivariateFactorization factor_univariate(const UPoly &p) {
    auto f = factor_univariate_partial(p);
    if (!f.complete())
        throw ExtensionRequired("polynomial does not split over Q(i): " + f.unfactored.str("z"),
                                f.unfactored);
    return f;
}

} // namespace darboux

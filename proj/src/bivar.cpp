#include "darboux/bivar.hpp"

#include <algorithm>

namespace darboux {

BivarPoly::BivarPoly(GR c) {
    if (!c.is_zero())
        terms_.emplace(Mono{0, 0}, std::move(c));
    refresh();
}

BivarPoly BivarPoly::x() { return monomial(GR(1), 1, 0); }
BivarPoly BivarPoly::y() { return monomial(GR(1), 0, 1); }

BivarPoly BivarPoly::monomial(GR c, int dx, int dy) {
    BivarPoly p;
    p.add_term(dx, dy, c);
    return p;
}

BivarPoly BivarPoly::from_x(const UPoly &p) {
    BivarPoly r;
    for (int i = 0; i <= p.degree(); ++i)
        if (!p.coeff(i).is_zero())
            r.terms_.emplace(Mono{i, 0}, p.coeff(i));
    r.refresh();
    return r;
}

BivarPoly BivarPoly::from_y_coeffs(const std::vector<UPoly> &coeffs) {
    BivarPoly r;
    for (size_t j = 0; j < coeffs.size(); ++j)
        for (int i = 0; i <= coeffs[j].degree(); ++i)
            if (!coeffs[j].coeff(i).is_zero())
                r.terms_.emplace(Mono{i, static_cast<int>(j)}, coeffs[j].coeff(i));
    r.refresh();
    return r;
}

void BivarPoly::refresh() {
    deg_ = deg_x_ = deg_y_ = -1;
    for (const auto &[m, c] : terms_) {
        deg_ = std::max(deg_, m.total());
        deg_x_ = std::max(deg_x_, m.dx);
        deg_y_ = std::max(deg_y_, m.dy);
    }
}

void BivarPoly::add_term(int dx, int dy, const GR &c) {
    if (c.is_zero())
        return;
    auto [it, inserted] = terms_.try_emplace(Mono{dx, dy}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
            refresh();
            return;
        }
    }
    deg_ = std::max(deg_, dx + dy);
    deg_x_ = std::max(deg_x_, dx);
    deg_y_ = std::max(deg_y_, dy);
}

GR BivarPoly::coeff(int dx, int dy) const {
    auto it = terms_.find(Mono{dx, dy});
    return it == terms_.end() ? GR(0) : it->second;
}

UPoly BivarPoly::y_coeff(int j) const {
    std::vector<GR> v(std::max(deg_x_ + 1, 0));
    for (const auto &[m, c] : terms_)
        if (m.dy == j)
            v[m.dx] = c;
    return UPoly(std::move(v));
}

std::vector<UPoly> BivarPoly::y_coeffs() const {
    std::vector<std::vector<GR>> v(std::max(deg_y_ + 1, 0), std::vector<GR>(deg_x_ + 1));
    for (const auto &[m, c] : terms_)
        v[m.dy][m.dx] = c;
    std::vector<UPoly> out;
    out.reserve(v.size());
    for (auto &row : v)
        out.emplace_back(std::move(row));
    return out;
}

BivarPoly BivarPoly::homogeneous_part(int k) const {
    BivarPoly r;
    for (const auto &[m, c] : terms_)
        if (m.total() == k)
            r.terms_.emplace(m, c);
    r.refresh();
    return r;
}

BivarPoly BivarPoly::derivative(Var v) const {
    BivarPoly r;
    for (const auto &[m, c] : terms_) {
        int e = v == Var::X ? m.dx : m.dy;
        if (e == 0)
            continue;
        Mono n = v == Var::X ? Mono{m.dx - 1, m.dy} : Mono{m.dx, m.dy - 1};
        r.terms_.emplace(n, c * GR(e));
    }
    r.refresh();
    return r;
}

GR BivarPoly::eval(const GR &x, const GR &y) const {
    GR acc(0);
    for (const auto &[m, c] : terms_)
        acc += c * x.pow(m.dx) * y.pow(m.dy);
    return acc;
}

std::complex<double> BivarPoly::eval(std::complex<double> x, std::complex<double> y) const {
    std::vector<std::complex<double>> px(deg_x_ + 1, 1.0), py(deg_y_ + 1, 1.0);
    for (int i = 1; i <= deg_x_; ++i)
        px[i] = px[i - 1] * x;
    for (int i = 1; i <= deg_y_; ++i)
        py[i] = py[i - 1] * y;
    std::complex<double> acc = 0;
    for (const auto &[m, c] : terms_)
        acc += c.to_complex() * px[m.dx] * py[m.dy];
    return acc;
}

BivarPoly BivarPoly::compose(const BivarPoly &px, const BivarPoly &py) const {
    std::vector<BivarPoly> powx{BivarPoly(1)}, powy{BivarPoly(1)};
    for (int i = 1; i <= deg_x_; ++i)
        powx.push_back(powx.back() * px);
    for (int i = 1; i <= deg_y_; ++i)
        powy.push_back(powy.back() * py);
    BivarPoly r;
    for (const auto &[m, c] : terms_)
        r += c * (powx[m.dx] * powy[m.dy]);
    return r;
}

BivarPoly BivarPoly::conj() const {
    BivarPoly r = *this;
    for (auto &[m, c] : r.terms_)
        c = c.conj();
    return r;
}

bool BivarPoly::is_real() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto &t) { return t.second.is_real(); });
}

BivarPoly BivarPoly::monic() const {
    if (is_zero())
        return *this;
    return *this * lead_coeff().inverse();
}

GR BivarPoly::primitive_scale() const {
    if (is_zero())
        return GR(1);
    GR inv = lead_coeff().inverse();
    mpz_class lcm = 1;
    for (const auto &[m, c] : terms_) {
        GR v = c * inv;
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.re().get_den_mpz_t());
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.im().get_den_mpz_t());
    }
    mpz_class g = 0;
    for (const auto &[m, c] : terms_) {
        GR v = c * inv * GR(mpq_class(lcm));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.re().get_num_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.im().get_num_mpz_t());
    }
    return inv * GR(mpq_class(lcm, g));
}

BivarPoly BivarPoly::primitive() const { return *this * primitive_scale(); }

BivarPoly BivarPoly::operator-() const {
    BivarPoly r = *this;
    for (auto &[m, c] : r.terms_)
        c = -c;
    return r;
}

BivarPoly &BivarPoly::operator+=(const BivarPoly &o) {
    for (const auto &[m, c] : o.terms_) {
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }
    refresh();
    return *this;
}

BivarPoly &BivarPoly::operator-=(const BivarPoly &o) { return *this += -o; }

BivarPoly &BivarPoly::operator*=(const GR &c) {
    if (c.is_zero()) {
        terms_.clear();
        refresh();
        return *this;
    }
    for (auto &[m, v] : terms_)
        v *= c;
    return *this;
}

BivarPoly operator*(const BivarPoly &a, const BivarPoly &b) {
    BivarPoly r;
    for (const auto &[ma, ca] : a.terms_)
        for (const auto &[mb, cb] : b.terms_) {
            Mono m{ma.dx + mb.dx, ma.dy + mb.dy};
            GR v = ca * cb;
            auto [it, inserted] = r.terms_.try_emplace(m, v);
            if (!inserted)
                it->second += v;
        }
    std::erase_if(r.terms_, [](const auto &t) { return t.second.is_zero(); });
    r.refresh();
    return r;
}

BivarPoly BivarPoly::pow(int e) const {
    if (e < 0)
        throw Error("negative polynomial power");
    BivarPoly r(1), base = *this;
    while (e > 0) {
        if (e & 1)
            r = r * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return r;
}

namespace {

std::string mono_str(const Mono &m) {
    std::string s;
    auto var = [&](const char *v, int e) {
        if (e == 0)
            return;
        if (!s.empty())
            s += "*";
        s += v;
        if (e > 1)
            s += "^" + std::to_string(e);
    };
    var("x", m.dx);
    var("y", m.dy);
    return s;
}

} // namespace

std::string BivarPoly::str() const {
    if (is_zero())
        return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Mono &m = it->first;
        GR c = it->second;
        bool negative = false;
        if (c.is_real()) {
            negative = sgn(c.re()) < 0;
        } else if (c.is_imaginary()) {
            negative = sgn(c.im()) < 0;
        }
        if (negative)
            c = -c;
        std::string coef;
        if (c.is_real() || c.is_imaginary())
            coef = c.str();
        else
            coef = "(" + c.str() + ")";
        std::string mono = mono_str(m);
        std::string term;
        if (mono.empty())
            term = coef;
        else if (c.is_one())
            term = mono;
        else
            term = coef + "*" + mono;
        if (out.empty())
            out = negative ? "-" + term : term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    return out;
}

bool associates(const BivarPoly &a, const BivarPoly &b) {
    if (a.is_zero() || b.is_zero())
        return a.is_zero() && b.is_zero();
    if (a.terms().size() != b.terms().size())
        return false;
    return a.monic() == b.monic();
}

bool canonical_less(const BivarPoly &a, const BivarPoly &b) {
    if (a.degree() != b.degree())
        return a.degree() < b.degree();
    return a.str() < b.str();
}

DivisionResult divide(const BivarPoly &num, const BivarPoly &den) {
    if (den.is_zero())
        throw Error("division by the zero polynomial");
    DivisionResult out;
    BivarPoly p = num;
    const Mono lm = den.lead_mono();
    const GR inv = den.lead_coeff().inverse();
    while (!p.is_zero()) {
        Mono m = p.lead_mono();
        GR c = p.lead_coeff();
        if (m.dx >= lm.dx && m.dy >= lm.dy) {
            BivarPoly t = BivarPoly::monomial(c * inv, m.dx - lm.dx, m.dy - lm.dy);
            out.quotient += t;
            p -= t * den;
        } else {
            BivarPoly t = BivarPoly::monomial(c, m.dx, m.dy);
            out.remainder += t;
            p -= t;
        }
    }
    return out;
}

NotDivisible::NotDivisible(BivarPoly remainder)
    : Error("not divisible; remainder " + remainder.str()), remainder_(std::move(remainder)) {}

BivarPoly divide_exact(const BivarPoly &num, const BivarPoly &den) {
    auto r = divide(num, den);
    if (!r.remainder.is_zero())
        throw NotDivisible(std::move(r.remainder));
    return std::move(r.quotient);
}

std::optional<BivarPoly> try_divide(const BivarPoly &num, const BivarPoly &den) {
    auto r = divide(num, den);
    if (!r.remainder.is_zero())
        return std::nullopt;
    return std::move(r.quotient);
}

namespace {

// Polynomials in y with coefficients in Q(i)[x].
using YPoly = std::vector<UPoly>;

void trim(YPoly &p) {
    while (!p.empty() && p.back().is_zero())
        p.pop_back();
}

UPoly content(const YPoly &p) {
    UPoly g;
    for (const auto &c : p) {
        g = gcd(g, c);
        if (g.degree() == 0)
            break;
    }
    return g;
}

YPoly divide_coeffs(const YPoly &p, const UPoly &c) {
    YPoly r;
    for (const auto &v : p)
        r.push_back(divmod(v, c).first);
    return r;
}

// Pseudo-remainder of a by b (deg_y a >= deg_y b >= 0, b nonzero).
YPoly prem(YPoly a, const YPoly &b) {
    int db = static_cast<int>(b.size()) - 1;
    const UPoly &lb = b.back();
    while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
        int da = static_cast<int>(a.size()) - 1;
        UPoly la = a.back();
        for (auto &c : a)
            c = c * lb;
        for (int j = 0; j <= db; ++j)
            a[da - db + j] -= la * b[j];
        trim(a);
    }
    return a;
}

YPoly primitive_part(const YPoly &p) {
    UPoly c = content(p);
    return divide_coeffs(p, c);
}

} // namespace

BivarPoly gcd(const BivarPoly &a, const BivarPoly &b) {
    if (a.is_zero() && b.is_zero())
        throw Error("gcd of two zero polynomials");
    if (a.is_zero())
        return b.monic();
    if (b.is_zero())
        return a.monic();
    YPoly pa = a.y_coeffs(), pb = b.y_coeffs();
    UPoly c = gcd(content(pa), content(pb));
    pa = primitive_part(pa);
    pb = primitive_part(pb);
    if (pa.size() < pb.size())
        std::swap(pa, pb);
    while (!pb.empty()) {
        YPoly r = prem(pa, pb);
        pa = std::move(pb);
        pb = r.empty() ? r : primitive_part(r);
    }
    YPoly g = pa;
    for (auto &v : g)
        v = v * c;
    return BivarPoly::from_y_coeffs(g).monic();
}

std::vector<std::pair<BivarPoly, int>> squarefree_in_y(const BivarPoly &p) {
    std::vector<std::pair<BivarPoly, int>> out;
    if (p.deg_y() < 1)
        return out;
    BivarPoly f = BivarPoly::from_y_coeffs(primitive_part(p.y_coeffs()));
    BivarPoly d = f.derivative(Var::Y);
    BivarPoly a = gcd(f, d);
    BivarPoly b = divide_exact(f, a);
    BivarPoly c = divide_exact(d, a);
    BivarPoly e = c - b.derivative(Var::Y);
    int i = 1;
    while (b.deg_y() > 0) {
        BivarPoly g = e.is_zero() ? b.monic() : gcd(b, e);
        if (g.deg_y() > 0)
            out.emplace_back(g, i);
        b = divide_exact(b, g);
        e = divide_exact(e, g) - b.derivative(Var::Y);
        ++i;
    }
    return out;
}

RationalFunction::RationalFunction(BivarPoly num, BivarPoly den) {
    if (den.is_zero())
        throw Error("rational function with zero denominator");
    if (num.is_zero()) {
        num_ = BivarPoly();
        den_ = BivarPoly(1);
        return;
    }
    BivarPoly g = gcd(num, den);
    if (!g.is_constant()) {
        num = divide_exact(num, g);
        den = divide_exact(den, g);
    }
    GR inv = den.lead_coeff().inverse();
    num_ = num * inv;
    den_ = den * inv;
}

RationalFunction RationalFunction::derivative(Var v) const {
    return {num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_};
}

RationalFunction operator+(const RationalFunction &a, const RationalFunction &b) {
    if (a.den_ == b.den_)
        return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction &a, const RationalFunction &b) { return a + (-b); }

RationalFunction operator*(const RationalFunction &a, const RationalFunction &b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction &a, const RationalFunction &b) {
    if (b.is_zero())
        throw Error("rational function division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
}

} // namespace darboux

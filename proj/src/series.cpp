#include "darboux/series.hpp"

#include <numeric>

namespace darboux {

long lcm_long(long a, long b) { return std::lcm(a, b); }

std::optional<mpq_class> min_trunc(const std::optional<mpq_class> &a, const std::optional<mpq_class> &b) {
    if (!a)
        return b;
    if (!b)
        return a;
    return *a < *b ? a : b;
}

std::string power_str(const mpq_class &e, const char *var) {
    if (sgn(e) == 0)
        return "";
    if (e == 1)
        return var;
    if (e.get_den() == 1 && sgn(e) > 0)
        return std::string(var) + "^" + e.get_str();
    return std::string(var) + "^(" + e.get_str() + ")";
}

PuiseuxSeries::PuiseuxSeries(GR c) {
    if (!c.is_zero())
        terms_.emplace(mpq_class(0), std::move(c));
}

PuiseuxSeries PuiseuxSeries::monomial(GR c, const mpq_class &e) {
    PuiseuxSeries s;
    s.add_term(e, c);
    return s;
}

PuiseuxSeries PuiseuxSeries::big_o(const mpq_class &T) {
    PuiseuxSeries s;
    s.trunc_ = T;
    return s;
}

PuiseuxSeries PuiseuxSeries::from_upoly(const UPoly &p) {
    PuiseuxSeries s;
    for (int i = 0; i <= p.degree(); ++i)
        s.add_term(mpq_class(i), p.coeff(i));
    return s;
}

PuiseuxSeries PuiseuxSeries::from_rational(const UPoly &num, const UPoly &den, const mpq_class &T) {
    if (den.is_zero())
        throw Error("rational series with zero denominator");
    int s = 0;
    while (den.coeff(s).is_zero())
        ++s;
    std::vector<GR> rest(den.coeffs().begin() + s, den.coeffs().end());
    UPoly d(std::move(rest));
    PuiseuxSeries n = from_upoly(num);
    if (d.degree() == 0)
        return (n * d.coeff(0).inverse()).shift(mpq_class(-s));
    if (n.is_zero())
        return {};
    mpq_class vn = *n.valuation();
    mpq_class need = T + s - vn;
    if (sgn(need) <= 0)
        return big_o(T);
    PuiseuxSeries inv = from_upoly(d).reciprocal(need);
    return (n * inv).shift(mpq_class(-s)).truncated(T);
}

void PuiseuxSeries::add_term(const mpq_class &e, const GR &c) {
    if (c.is_zero() || (trunc_ && e >= *trunc_))
        return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

void PuiseuxSeries::clip() {
    if (trunc_)
        terms_.erase(terms_.lower_bound(*trunc_), terms_.end());
    std::erase_if(terms_, [](const auto &t) { return t.second.is_zero(); });
}

GR PuiseuxSeries::coeff(const mpq_class &e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? GR(0) : it->second;
}

std::optional<mpq_class> PuiseuxSeries::valuation() const {
    if (terms_.empty())
        return std::nullopt;
    return terms_.begin()->first;
}

mpq_class PuiseuxSeries::order_bound() const {
    if (!terms_.empty())
        return terms_.begin()->first;
    if (trunc_)
        return *trunc_;
    throw Error("order bound of the exact zero series");
}

long PuiseuxSeries::polydromy() const {
    if (terms_.empty())
        throw Error("polydromy of a zero series");
    long n = 1;
    for (const auto &[e, c] : terms_)
        n = std::lcm(n, e.get_den().get_si());
    return n;
}

long PuiseuxSeries::grid() const {
    long n = 1;
    for (const auto &[e, c] : terms_)
        n = std::lcm(n, e.get_den().get_si());
    if (trunc_)
        n = std::lcm(n, trunc_->get_den().get_si());
    return n;
}

PuiseuxSeries PuiseuxSeries::truncated(const mpq_class &T) const {
    PuiseuxSeries r = *this;
    r.trunc_ = min_trunc(trunc_, T);
    r.clip();
    return r;
}

PuiseuxSeries PuiseuxSeries::scale_exponents(const mpq_class &factor) const {
    PuiseuxSeries r;
    for (const auto &[e, c] : terms_)
        r.terms_.emplace(mpq_class(e * factor), c);
    if (trunc_)
        r.trunc_ = *trunc_ * factor;
    return r;
}

PuiseuxSeries PuiseuxSeries::shift(const mpq_class &k) const {
    PuiseuxSeries r;
    for (const auto &[e, c] : terms_)
        r.terms_.emplace(mpq_class(e + k), c);
    if (trunc_)
        r.trunc_ = *trunc_ + k;
    return r;
}

PuiseuxSeries PuiseuxSeries::conj() const {
    PuiseuxSeries r = *this;
    for (auto &[e, c] : r.terms_)
        c = c.conj();
    return r;
}

PuiseuxSeries PuiseuxSeries::derivative() const {
    PuiseuxSeries r;
    for (const auto &[e, c] : terms_)
        if (sgn(e) != 0)
            r.terms_.emplace(mpq_class(e - 1), c * GR(e));
    if (trunc_)
        r.trunc_ = *trunc_ - 1;
    return r;
}

PuiseuxSeries PuiseuxSeries::reciprocal(std::optional<mpq_class> rel_precision) const {
    if (terms_.empty())
        throw Error("reciprocal of a series that is zero to its truncation");
    const mpq_class v = terms_.begin()->first;
    const GR lead_inv = terms_.begin()->second.inverse();
    if (is_exact() && terms_.size() == 1)
        return monomial(lead_inv, -v);
    mpq_class R;
    if (trunc_)
        R = *trunc_ - v;
    else if (rel_precision)
        R = *rel_precision;
    else
        throw PreconditionFailed("reciprocal of an exact series needs a precision");
    if (trunc_ && rel_precision && *rel_precision < R)
        R = *rel_precision;
    // s = lead x^v (1 + u); 1/(1+u) = sum w_k t^k on the grid t = x^(1/L).
    long L = R.get_den().get_si();
    std::vector<std::pair<long, GR>> u;
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
        L = std::lcm(L, mpq_class(it->first - v).get_den().get_si());
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
        mpq_class k = (it->first - v) * L;
        u.emplace_back(k.get_num().get_si(), it->second * lead_inv);
    }
    // L is a multiple of R's denominator, so R*L is an integer.
    long K = mpq_class(R * L).get_num().get_si() - 1;
    if (K < 0)
        K = 0;
    std::vector<GR> w(K + 1);
    w[0] = GR(1);
    for (long k = 1; k <= K; ++k) {
        GR acc(0);
        for (const auto &[j, c] : u) {
            if (j > k)
                break;
            if (!w[k - j].is_zero())
                acc += c * w[k - j];
        }
        w[k] = -acc;
    }
    PuiseuxSeries r;
    r.trunc_ = R - v;
    for (long k = 0; k <= K; ++k)
        if (!w[k].is_zero())
            r.terms_.emplace(mpq_class(mpq_class(k, L) - v), w[k] * lead_inv);
    r.clip();
    return r;
}

PuiseuxSeries PuiseuxSeries::pow(int e) const {
    if (e < 0)
        return reciprocal().pow(-e);
    PuiseuxSeries r(1), base = *this;
    while (e > 0) {
        if (e & 1)
            r = r * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return r;
}

PuiseuxSeries PuiseuxSeries::operator-() const {
    PuiseuxSeries r = *this;
    for (auto &[e, c] : r.terms_)
        c = -c;
    return r;
}

PuiseuxSeries &PuiseuxSeries::operator+=(const PuiseuxSeries &o) {
    trunc_ = min_trunc(trunc_, o.trunc_);
    for (const auto &[e, c] : o.terms_) {
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted)
            it->second += c;
    }
    clip();
    return *this;
}

PuiseuxSeries &PuiseuxSeries::operator-=(const PuiseuxSeries &o) { return *this += -o; }

PuiseuxSeries &PuiseuxSeries::operator*=(const GR &c) {
    if (c.is_zero())
        terms_.clear();
    for (auto &[e, v] : terms_)
        v *= c;
    return *this;
}

PuiseuxSeries operator*(const PuiseuxSeries &a, const PuiseuxSeries &b) {
    if ((a.is_exact() && a.is_zero()) || (b.is_exact() && b.is_zero()))
        return {};
    std::optional<mpq_class> T;
    if (b.trunc_)
        T = a.order_bound() + *b.trunc_;
    if (a.trunc_)
        T = min_trunc(T, b.order_bound() + *a.trunc_);
    PuiseuxSeries r;
    r.trunc_ = T;
    for (const auto &[ea, ca] : a.terms_) {
        for (const auto &[eb, cb] : b.terms_) {
            mpq_class e = ea + eb;
            if (T && e >= *T)
                break;
            GR v = ca * cb;
            auto [it, inserted] = r.terms_.try_emplace(e, v);
            if (!inserted)
                it->second += v;
        }
    }
    r.clip();
    return r;
}

bool agree(const PuiseuxSeries &a, const PuiseuxSeries &b) {
    return (a - b).terms_.empty();
}

std::string PuiseuxSeries::str() const {
    std::string out;
    for (const auto &[e, c0] : terms_) {
        GR c = c0;
        bool negative = c.is_real() ? sgn(c.re()) < 0 : (c.is_imaginary() && sgn(c.im()) < 0);
        if (negative)
            c = -c;
        std::string coef = (c.is_real() || c.is_imaginary()) ? c.str() : "(" + c.str() + ")";
        std::string pw = power_str(e);
        std::string term = pw.empty() ? coef : (c.is_one() ? pw : coef + "*" + pw);
        if (out.empty())
            out = negative ? "-" + term : term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    if (trunc_) {
        std::string o = "O(" + (sgn(*trunc_) == 0 ? std::string("1") : power_str(*trunc_)) + ")";
        out = out.empty() ? o : out + " + " + o;
    }
    return out.empty() ? "0" : out;
}

SeriesPoly::SeriesPoly(std::vector<PuiseuxSeries> coeffs) : c_(std::move(coeffs)) { trim(); }

SeriesPoly SeriesPoly::from_bivar(const BivarPoly &p) {
    std::vector<PuiseuxSeries> c;
    for (const auto &u : p.y_coeffs())
        c.push_back(PuiseuxSeries::from_upoly(u));
    return SeriesPoly(std::move(c));
}

void SeriesPoly::trim() {
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
}

PuiseuxSeries SeriesPoly::coeff_or_zero(int j) const {
    return j >= 0 && j < static_cast<int>(c_.size()) ? c_[j] : PuiseuxSeries();
}

PuiseuxSeries SeriesPoly::eval(const PuiseuxSeries &y) const {
    PuiseuxSeries acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * y + *it;
    return acc;
}

SeriesPoly SeriesPoly::derivative_x() const {
    std::vector<PuiseuxSeries> c;
    for (const auto &s : c_)
        c.push_back(s.derivative());
    return SeriesPoly(std::move(c));
}

SeriesPoly SeriesPoly::derivative_y() const {
    std::vector<PuiseuxSeries> c;
    for (size_t j = 1; j < c_.size(); ++j)
        c.push_back(c_[j] * GR(static_cast<long>(j)));
    return SeriesPoly(std::move(c));
}

std::optional<mpq_class> SeriesPoly::trunc() const {
    std::optional<mpq_class> T;
    for (const auto &s : c_)
        T = min_trunc(T, s.trunc());
    return T;
}

long SeriesPoly::polydromy() const {
    long n = 1;
    for (const auto &s : c_)
        if (!s.is_zero())
            n = std::lcm(n, s.polydromy());
    return n;
}

std::optional<BivarPoly> SeriesPoly::to_bivar() const {
    BivarPoly r;
    for (size_t j = 0; j < c_.size(); ++j) {
        if (!c_[j].is_exact())
            return std::nullopt;
        for (const auto &[e, c] : c_[j].terms()) {
            if (e.get_den() != 1 || sgn(e) < 0)
                return std::nullopt;
            r.add_term(static_cast<int>(e.get_num().get_si()), static_cast<int>(j), c);
        }
    }
    return r;
}

SeriesPoly operator+(const SeriesPoly &a, const SeriesPoly &b) {
    std::vector<PuiseuxSeries> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t j = 0; j < c.size(); ++j)
        c[j] = a.coeff_or_zero(j) + b.coeff_or_zero(j);
    return SeriesPoly(std::move(c));
}

SeriesPoly operator-(const SeriesPoly &a, const SeriesPoly &b) {
    std::vector<PuiseuxSeries> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t j = 0; j < c.size(); ++j)
        c[j] = a.coeff_or_zero(j) - b.coeff_or_zero(j);
    return SeriesPoly(std::move(c));
}

SeriesPoly operator*(const SeriesPoly &a, const SeriesPoly &b) {
    if (a.c_.empty() || b.c_.empty())
        return {};
    std::vector<PuiseuxSeries> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j)
            c[i + j] += a.c_[i] * b.c_[j];
    return SeriesPoly(std::move(c));
}

SeriesPoly operator*(const SeriesPoly &a, const PuiseuxSeries &s) {
    std::vector<PuiseuxSeries> c;
    for (const auto &v : a.c_)
        c.push_back(v * s);
    return SeriesPoly(std::move(c));
}

std::string SeriesPoly::str() const {
    if (c_.empty())
        return "0";
    std::string out;
    for (int j = degree(); j >= 0; --j) {
        if (c_[j].is_zero() && c_[j].is_exact())
            continue;
        std::string part = "(" + c_[j].str() + ")";
        if (j > 0)
            part += j == 1 ? "*y" : "*y^" + std::to_string(j);
        out += out.empty() ? part : " + " + part;
    }
    return out.empty() ? "0" : out;
}

std::pair<SeriesPoly, PuiseuxSeries> divide_linear(const SeriesPoly &p, const PuiseuxSeries &g) {
    int n = p.degree();
    if (n < 1)
        return {SeriesPoly(), p.coeff_or_zero(0)};
    std::vector<PuiseuxSeries> q(n);
    q[n - 1] = p.coeff(n);
    for (int j = n - 1; j >= 1; --j)
        q[j - 1] = p.coeff(j) + g * q[j];
    PuiseuxSeries rem = p.coeff(0) + g * q[0];
    return {SeriesPoly(std::move(q)), rem};
}

} // namespace darboux

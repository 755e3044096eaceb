#include "darboux/puiseux.hpp"

#include "darboux/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace darboux {

namespace {

struct Point {
    int j;
    int i;
};

// Lower convex hull of the Newton polygon points, sorted by j.
std::vector<Point> lower_hull(const std::vector<Point> &pts) {
    std::vector<Point> h;
    for (const Point &p : pts) {
        while (h.size() >= 2) {
            const Point &a = h[h.size() - 2];
            const Point &b = h.back();
            // Remove b when it lies on or above segment a-p.
            long cross = static_cast<long>(b.j - a.j) * (p.i - a.i) - static_cast<long>(b.i - a.i) * (p.j - a.j);
            if (cross <= 0)
                h.pop_back();
            else
                break;
        }
        h.push_back(p);
    }
    return h;
}

std::vector<long> binomial_row(int n) {
    std::vector<long> row(n + 1, 1);
    for (int k = 1; k < n; ++k)
        row[k] = row[k - 1] * (n - k + 1) / k;
    return row;
}

// G(v^q, v^p (c + w)) / v^shift
BivarPoly substitute_branch(const BivarPoly &G, long q, long p, const GR &c, long shift) {
    BivarPoly out;
    std::vector<GR> cpow{GR(1)};
    for (const auto &[m, a] : G.terms()) {
        while (static_cast<int>(cpow.size()) <= m.dy)
            cpow.push_back(cpow.back() * c);
        long base = q * m.dx + p * m.dy - shift;
        auto binom = binomial_row(m.dy);
        for (int k = 0; k <= m.dy; ++k)
            out.add_term(static_cast<int>(base), k, a * GR(binom[k]) * cpow[m.dy - k]);
    }
    return out;
}

// Truncated product of polynomials in u, keeping degrees <= deg.
UPoly mul_trunc(const UPoly &a, const UPoly &b, int deg) {
    std::vector<GR> r(deg + 1);
    for (int i = 0; i <= std::min(a.degree(), deg); ++i) {
        if (a.coeff(i).is_zero())
            continue;
        for (int j = 0; j <= std::min(b.degree(), deg - i); ++j)
            r[i + j] += a.coeff(i) * b.coeff(j);
    }
    return UPoly(std::move(r));
}

struct Branch {
    BivarPoly G;          // polynomial in (u, w)
    std::map<long, GR> S; // known part of y in powers of u
    long e = 0;           // y = S(u) + u^e w
    long N = 1;           // x = u^N
};

class Expander {
  public:
    explicit Expander(int order) : order_(order) {}

    void top(const BivarPoly &F) {
        Branch b{F, {}, 0, 1};
        expand(b, -1);
    }

    std::vector<PuiseuxSeries> roots;

  private:
    PuiseuxSeries finish(const Branch &b, const std::map<long, GR> &w, bool exact) {
        PuiseuxSeries s;
        for (const auto &[k, c] : b.S)
            s.add_term(mpq_class(k, b.N), c);
        for (const auto &[k, c] : w)
            s.add_term(mpq_class(b.e + k, b.N), c);
        if (!exact)
            s = s + PuiseuxSeries::big_o(mpq_class(b.e + order_, b.N));
        return s;
    }

    void regular(const Branch &b) {
        std::vector<UPoly> Gj = b.G.y_coeffs();
        if (Gj[0].is_zero()) {
            roots.push_back(finish(b, {}, true));
            return;
        }
        GR a = Gj.size() > 1 ? Gj[1].coeff(0) : GR(0);
        if (a.is_zero())
            throw Error("Newton-Puiseux: regular step without a simple root");
        GR ainv = a.inverse();
        const int K = order_;
        UPoly s;
        std::map<long, GR> w;
        for (int k = 1; k < K; ++k) {
            // [u^k] G(u, s(u))
            UPoly acc;
            for (int j = static_cast<int>(Gj.size()) - 1; j >= 0; --j)
                acc = mul_trunc(acc, s, k) + Gj[j];
            GR bk = -acc.coeff(k) * ainv;
            if (!bk.is_zero()) {
                s += UPoly::monomial(bk, k);
                w[k] = bk;
            }
        }
        roots.push_back(finish(b, w, false));
    }

    // r < 0: top level, all edges; otherwise only edges with j <= r.
    void expand(const Branch &b, int r) {
        std::vector<UPoly> Gj = b.G.y_coeffs();
        int jmax = r < 0 ? static_cast<int>(Gj.size()) - 1 : r;
        std::vector<Point> pts;
        for (int j = 0; j <= jmax; ++j) {
            if (Gj[j].is_zero())
                continue;
            int i = 0;
            while (Gj[j].coeff(i).is_zero())
                ++i;
            pts.push_back({j, i});
        }
        if (pts.empty())
            return;
        // w = 0 is a root of multiplicity jmin: the series terminates.
        for (int k = 0; k < pts.front().j; ++k)
            roots.push_back(finish(b, {}, true));
        std::vector<Point> hull = lower_hull(pts);
        for (size_t h = 0; h + 1 < hull.size(); ++h) {
            Point A = hull[h], B = hull[h + 1];
            // slope gamma = p/q with w ~ u^gamma
            long num = A.i - B.i, den = B.j - A.j;
            long g = std::gcd(std::abs(num), den);
            long p = num / g, q = den / g;
            std::vector<GR> phi(B.j - A.j + 1);
            for (const Point &pt : pts) {
                if (pt.j < A.j || pt.j > B.j)
                    continue;
                if (static_cast<long>(pt.i - A.i) * den != static_cast<long>(A.j - pt.j) * num)
                    continue;
                phi[pt.j - A.j] = Gj[pt.j].coeff(pt.i);
            }
            auto fac = factor_univariate(UPoly(std::move(phi)));
            long shift = q * A.i + p * A.j;
            for (const auto &[c, mult] : fac.roots()) {
                Branch nb;
                nb.G = substitute_branch(b.G, q, p, c, shift);
                nb.N = b.N * q;
                nb.e = b.e * q + p;
                for (const auto &[k, v] : b.S)
                    nb.S[k * q] = v;
                nb.S[nb.e] += c;
                if (mult == 1)
                    regular(nb);
                else
                    expand(nb, mult);
            }
        }
    }

    int order_;
};

int compare_series(const PuiseuxSeries &a, const PuiseuxSeries &b) {
    auto ia = a.terms().begin(), ib = b.terms().begin();
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        if (ia->first != ib->first)
            return ia->first < ib->first ? -1 : 1;
        if (int c = GR::compare(ia->second, ib->second); c != 0)
            return c;
    }
    if (ia != a.terms().end())
        return -1;
    if (ib != b.terms().end())
        return 1;
    return 0;
}

} // namespace

bool series_less(const PuiseuxSeries &a, const PuiseuxSeries &b) { return compare_series(a, b) < 0; }

std::vector<PuiseuxSeries> newton_puiseux(const BivarPoly &f, int order) {
    if (f.is_zero() || f.deg_y() < 1)
        throw PreconditionFailed("newton_puiseux needs a polynomial of positive degree in y");
    if (order < 1)
        throw PreconditionFailed("newton_puiseux needs a positive order");
    std::vector<PuiseuxSeries> out;
    for (const auto &[s, mult] : squarefree_in_y(f)) {
        Expander ex(order);
        ex.top(s);
        if (static_cast<int>(ex.roots.size()) != s.deg_y())
            throw Error("Newton-Puiseux lost roots of " + s.str());
        for (const auto &r : ex.roots)
            for (int k = 0; k < mult; ++k)
                out.push_back(r);
    }
    std::sort(out.begin(), out.end(), series_less);
    return out;
}

PuiseuxSeries series_substitute(const BivarPoly &f, const PuiseuxSeries &g) {
    return SeriesPoly::from_bivar(f).eval(g);
}

SolutionCheck is_particular_solution(const PuiseuxSeries &g, const PlanarSystem &sys, long min_checkable) {
    PuiseuxSeries Pg = series_substitute(sys.P(), g);
    if (Pg.is_zero())
        throw PreconditionFailed("P(x, g(x)) vanishes to the available truncation");
    PuiseuxSeries lhs = g.derivative() * Pg;
    PuiseuxSeries Qg = series_substitute(sys.Q(), g);
    SolutionCheck out;
    out.residual = lhs - Qg;
    if (out.residual.is_exact()) {
        out.checked = -1;
        out.verdict = out.residual.is_zero();
        return out;
    }
    mpq_class low = lhs.order_bound();
    if (!(Qg.is_exact() && Qg.is_zero()))
        low = std::min(low, Qg.order_bound());
    long L = std::lcm(out.residual.grid(), std::lcm(g.grid(), low.get_den().get_si()));
    mpq_class span = (*out.residual.trunc() - low) * L;
    out.checked = std::max(0L, span.get_num().get_si() / span.get_den().get_si());
    if (span.get_den() != 1 && sgn(span) > 0)
        out.checked += 1;
    if (out.checked < min_checkable)
        throw InconclusiveTruncation("only " + std::to_string(out.checked) +
                                     " residual coefficients are computable");
    out.verdict = out.residual.is_zero();
    return out;
}

BivarPoly minimal_polynomial(const PuiseuxSeries &g, int max_dx, int max_dy, int margin) {
    if (max_dx < 0 || max_dy < 1)
        throw PreconditionFailed("minimal_polynomial needs max_dy >= 1 and max_dx >= 0");
    std::vector<PuiseuxSeries> gp{PuiseuxSeries(1)};
    for (int b = 1; b <= max_dy; ++b)
        gp.push_back(gp.back() * g);
    for (int D = 1; D <= max_dx + max_dy; ++D) {
        std::vector<Mono> monos;
        for (int t = 0; t <= D; ++t)
            for (int b = 0; b <= std::min(t, max_dy); ++b)
                if (t - b <= max_dx)
                    monos.push_back({t - b, b});
        std::vector<PuiseuxSeries> cols;
        std::optional<mpq_class> T;
        for (const Mono &m : monos) {
            cols.push_back(gp[m.dy].shift(mpq_class(m.dx)));
            T = min_trunc(T, cols.back().trunc());
        }
        std::set<mpq_class> exps;
        std::optional<mpq_class> low;
        long L = 1;
        for (auto &c : cols) {
            if (T)
                c = c.truncated(*T);
            for (const auto &[e, v] : c.terms())
                exps.insert(e);
            if (!c.is_zero() || !c.is_exact()) {
                mpq_class ob = c.order_bound();
                low = low ? std::min(*low, ob) : ob;
            }
            L = std::lcm(L, c.grid());
        }
        Matrix M;
        for (const mpq_class &e : exps) {
            Vector row;
            for (const auto &c : cols)
                row.push_back(c.coeff(e));
            M.push_back(std::move(row));
        }
        int n = static_cast<int>(monos.size());
        auto ns = nullspace(M, n);
        if (ns.empty())
            continue;
        if (T && low) {
            mpq_class eqs = (*T - *low) * L;
            long count = eqs.get_num().get_si() / eqs.get_den().get_si();
            if (count < n + margin)
                throw PreconditionFailed("truncation too low: " + std::to_string(count) + " equations for " +
                                         std::to_string(n) + " unknowns");
        }
        if (ns.size() > 1)
            throw AmbiguousKernel("kernel of dimension " + std::to_string(ns.size()) + " at total degree " +
                                  std::to_string(D));
        BivarPoly f;
        for (int k = 0; k < n; ++k)
            f.add_term(monos[k].dx, monos[k].dy, ns[0][k]);
        return f.primitive();
    }
    throw NotFound("no annihilating polynomial within degree bounds (" + std::to_string(max_dx) + ", " +
                   std::to_string(max_dy) + ")");
}

} // namespace darboux

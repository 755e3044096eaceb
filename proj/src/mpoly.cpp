#include "darboux/mpoly.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace darboux {

MPoly::MPoly(int nvars, GR c) : n_(nvars) {
    if (!c.is_zero())
        t_.emplace(Exps(nvars, 0), std::move(c));
}

MPoly MPoly::var(int nvars, int i) {
    MPoly r(nvars);
    Exps e(nvars, 0);
    e[i] = 1;
    r.t_.emplace(std::move(e), GR(1));
    return r;
}

bool MPoly::is_constant() const {
    if (t_.empty())
        return true;
    if (t_.size() > 1)
        return false;
    const Exps &e = t_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](int a) { return a == 0; });
}

GR MPoly::constant_term() const {
    auto it = t_.find(Exps(n_, 0));
    return it == t_.end() ? GR(0) : it->second;
}

int MPoly::total_degree() const {
    int best = -1;
    for (const auto &[e, c] : t_) {
        int s = 0;
        for (int a : e)
            s += a;
        best = std::max(best, s);
    }
    return best;
}

int MPoly::degree_in(int v) const {
    int best = t_.empty() ? -1 : 0;
    for (const auto &[e, c] : t_)
        best = std::max(best, e[v]);
    return best;
}

std::vector<int> MPoly::vars() const {
    std::vector<int> r;
    for (int v = 0; v < n_; ++v)
        for (const auto &[e, c] : t_)
            if (e[v] > 0) {
                r.push_back(v);
                break;
            }
    return r;
}

std::vector<MPoly> MPoly::coeffs_in(int v) const {
    std::vector<MPoly> r(std::max(0, degree_in(v) + 1), MPoly(n_));
    for (const auto &[e, c] : t_) {
        Exps f = e;
        f[v] = 0;
        r[e[v]].t_.emplace(std::move(f), c);
    }
    return r;
}

MPoly MPoly::substitute(int v, const MPoly &value) const {
    auto cs = coeffs_in(v);
    MPoly r(n_);
    for (size_t j = cs.size(); j-- > 0;)
        r = r * value + cs[j];
    return r;
}

UPoly MPoly::to_upoly(int v) const {
    std::vector<GR> c(std::max(0, degree_in(v) + 1));
    for (const auto &[e, coef] : t_) {
        for (int w = 0; w < n_; ++w)
            if (w != v && e[w] != 0)
                throw PreconditionFailed("to_upoly: more than one unknown occurs");
        c[e[v]] = coef;
    }
    return UPoly(std::move(c));
}

MPoly MPoly::monic() const { return is_zero() ? *this : *this * lead_coeff().inverse(); }

MPoly MPoly::operator-() const {
    MPoly r = *this;
    for (auto &[e, c] : r.t_)
        c = -c;
    return r;
}

MPoly &MPoly::operator+=(const MPoly &o) {
    if (n_ == 0)
        n_ = o.n_;
    for (const auto &[e, c] : o.t_)
        add_term(e, c);
    return *this;
}

MPoly &MPoly::operator-=(const MPoly &o) { return *this += -o; }

MPoly &MPoly::operator*=(const GR &c) {
    if (c.is_zero())
        t_.clear();
    else
        for (auto &[e, v] : t_)
            v *= c;
    return *this;
}

MPoly operator*(const MPoly &a, const MPoly &b) {
    MPoly r(std::max(a.n_, b.n_));
    for (const auto &[ea, ca] : a.t_)
        for (const auto &[eb, cb] : b.t_) {
            MPoly::Exps e = ea;
            for (size_t i = 0; i < e.size(); ++i)
                e[i] += eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

bool operator<(const MPoly &a, const MPoly &b) {
    if (a.t_.size() != b.t_.size())
        return a.t_.size() < b.t_.size();
    auto ia = a.t_.begin(), ib = b.t_.begin();
    for (; ia != a.t_.end(); ++ia, ++ib) {
        if (ia->first != ib->first)
            return ia->first < ib->first;
        int c = GR::compare(ia->second, ib->second);
        if (c != 0)
            return c < 0;
    }
    return false;
}

void MPoly::add_term(const Exps &e, const GR &c) {
    if (c.is_zero())
        return;
    auto [it, inserted] = t_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            t_.erase(it);
    }
}

std::string MPoly::str() const {
    if (t_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << it->second.str() << ")";
        for (int v = 0; v < n_; ++v)
            if (it->first[v] > 0)
                os << "*u" << v << (it->first[v] > 1 ? "^" + std::to_string(it->first[v]) : "");
    }
    return os.str();
}

MPoly divide_exact(const MPoly &a, const MPoly &b) {
    if (b.is_zero())
        throw PreconditionFailed("division by the zero polynomial");
    MPoly q(a.nvars()), rem = a;
    const auto &[lb, cb] = *b.terms().rbegin();
    GR inv = cb.inverse();
    while (!rem.is_zero()) {
        const auto &[lr, cr] = *rem.terms().rbegin();
        MPoly::Exps e = lr;
        for (size_t i = 0; i < e.size(); ++i) {
            e[i] -= lb[i];
            if (e[i] < 0)
                throw Error("multivariate division is not exact");
        }
        MPoly term(a.nvars());
        term.add_term(e, cr * inv);
        q += term;
        rem -= term * b;
    }
    return q;
}

MPoly resultant(const MPoly &a, const MPoly &b, int v) {
    auto ca = a.coeffs_in(v), cb = b.coeffs_in(v);
    const int p = static_cast<int>(ca.size()) - 1, q = static_cast<int>(cb.size()) - 1;
    const int n = std::max(a.nvars(), b.nvars());
    if (p < 0 || q < 0)
        return MPoly(n);
    if (p == 0 && q == 0)
        return MPoly(n, GR(1));
    const int size = p + q;
    std::vector<std::vector<MPoly>> m(size, std::vector<MPoly>(size, MPoly(n)));
    for (int i = 0; i < q; ++i)
        for (int k = 0; k <= p; ++k)
            m[i][i + k] = ca[p - k];
    for (int i = 0; i < p; ++i)
        for (int k = 0; k <= q; ++k)
            m[q + i][i + k] = cb[q - k];
    MPoly prev(n, GR(1));
    bool negate = false;
    for (int k = 0; k < size - 1; ++k) {
        if (m[k][k].is_zero()) {
            int r = k + 1;
            while (r < size && m[r][k].is_zero())
                ++r;
            if (r == size)
                return MPoly(n);
            std::swap(m[k], m[r]);
            negate = !negate;
        }
        for (int i = k + 1; i < size; ++i) {
            for (int j = k + 1; j < size; ++j)
                m[i][j] = divide_exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
            m[i][k] = MPoly(n);
        }
        prev = m[k][k];
    }
    MPoly det = m[size - 1][size - 1];
    return negate ? -det : det;
}

namespace {

struct State {
    std::vector<MPoly> eqs;
    std::vector<MPoly> values;
    std::set<std::tuple<MPoly, MPoly, int>> tried;
    int resultants = 0;
};

class Solver {
  public:
    Solver(int n, const SolveLimits &lim) : n_(n), lim_(lim) {}

    void run(State s) {
        while (true) {
            if (!normalize(s))
                return;
            if (s.eqs.empty()) {
                out.solutions.push_back(s.values);
                return;
            }
            if (eliminate_linear(s, 1))
                continue;
            if (branch_univariate(s))
                return;
            if (branch_monomial_factor(s))
                return;
            if (eliminate_linear(s, 2))
                continue;
            if (s.resultants < lim_.max_resultants) {
                int r = add_resultant(s);
                if (r < 0)
                    return;
                if (r > 0)
                    continue;
            }
            sample(s);
            return;
        }
    }

    PolySolveResult out;

  private:
    bool spend_branch() {
        if (++branches_ > lim_.max_branches) {
            if (out.complete)
                out.diagnostics.push_back("branch limit reached; remaining branches skipped");
            out.complete = false;
            return false;
        }
        return true;
    }

    void assign(State &s, int v, const MPoly &value) {
        for (auto &e : s.eqs)
            e = e.substitute(v, value);
        for (auto &x : s.values)
            x = x.substitute(v, value);
    }

    bool normalize(State &s) {
        std::vector<MPoly> kept;
        for (auto &e : s.eqs) {
            if (e.is_zero())
                continue;
            if (e.is_constant())
                return false;
            kept.push_back(e.monic());
        }
        std::sort(kept.begin(), kept.end());
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        s.eqs = std::move(kept);
        return true;
    }

    // Solves one equation of the form c*v + rest = 0 with constant c and
    // deg rest <= max_rest_degree, preferring low degree and few terms.
    bool eliminate_linear(State &s, int max_rest_degree) {
        int best = -1, best_v = -1;
        std::pair<int, size_t> score{0, 0};
        for (size_t i = 0; i < s.eqs.size(); ++i) {
            const MPoly &e = s.eqs[i];
            for (int v : e.vars()) {
                if (e.degree_in(v) != 1)
                    continue;
                auto cs = e.coeffs_in(v);
                if (!cs[1].is_constant())
                    continue;
                if (cs[0].total_degree() > max_rest_degree)
                    continue;
                std::pair<int, size_t> sc{e.total_degree(), e.terms().size()};
                if (best < 0 || sc < score) {
                    best = static_cast<int>(i);
                    best_v = v;
                    score = sc;
                }
                break;
            }
        }
        if (best < 0)
            return false;
        auto cs = s.eqs[best].coeffs_in(best_v);
        MPoly value = -cs[0] * cs[1].constant_term().inverse();
        assign(s, best_v, value);
        return true;
    }

    bool branch_univariate(State &s) {
        int best = -1;
        for (size_t i = 0; i < s.eqs.size(); ++i)
            if (s.eqs[i].vars().size() == 1 &&
                (best < 0 || s.eqs[i].total_degree() < s.eqs[best].total_degree()))
                best = static_cast<int>(i);
        if (best < 0)
            return false;
        int v = s.eqs[best].vars()[0];
        auto fac = factor_univariate_partial(s.eqs[best].to_upoly(v));
        if (!fac.complete()) {
            out.diagnostics.push_back("pruned branch: roots of " + fac.unfactored.str("t") +
                                      " lie outside Q(i)");
            out.complete = false;
        }
        for (const auto &[root, mult] : fac.roots()) {
            if (!spend_branch())
                return true;
            State t = s;
            assign(t, v, MPoly(n_, root));
            run(std::move(t));
        }
        return true;
    }

    bool branch_monomial_factor(State &s) {
        for (size_t i = 0; i < s.eqs.size(); ++i) {
            const MPoly &e = s.eqs[i];
            for (int v : e.vars()) {
                int low = e.degree_in(v);
                for (const auto &[ex, c] : e.terms())
                    low = std::min(low, ex[v]);
                if (low == 0)
                    continue;
                if (spend_branch()) {
                    State t = s;
                    assign(t, v, MPoly(n_));
                    run(std::move(t));
                }
                MPoly rest(n_);
                for (const auto &[ex, c] : e.terms()) {
                    MPoly::Exps f = ex;
                    f[v] -= low;
                    rest.add_term(f, c);
                }
                if (!rest.is_constant() && spend_branch()) {
                    State t = s;
                    t.eqs[i] = rest;
                    run(std::move(t));
                }
                return true;
            }
        }
        return false;
    }

    // 1 when a new equation was added, 0 when no pair helps, -1 when inconsistent.
    int add_resultant(State &s) {
        struct Cand {
            size_t i, j;
            int v;
            std::tuple<size_t, int, size_t> score;
        };
        std::optional<Cand> best;
        for (size_t i = 0; i < s.eqs.size(); ++i)
            for (size_t j = i + 1; j < s.eqs.size(); ++j) {
                auto vi = s.eqs[i].vars(), vj = s.eqs[j].vars();
                std::vector<int> uni;
                std::set_union(vi.begin(), vi.end(), vj.begin(), vj.end(), std::back_inserter(uni));
                for (int v : vi) {
                    if (!std::binary_search(vj.begin(), vj.end(), v))
                        continue;
                    if (s.tried.count({s.eqs[i], s.eqs[j], v}))
                        continue;
                    auto sc = std::make_tuple(uni.size(), s.eqs[i].degree_in(v) * s.eqs[j].degree_in(v),
                                              s.eqs[i].terms().size() + s.eqs[j].terms().size());
                    if (!best || sc < best->score)
                        best = Cand{i, j, v, sc};
                }
            }
        if (!best)
            return 0;
        s.tried.insert({s.eqs[best->i], s.eqs[best->j], best->v});
        ++s.resultants;
        MPoly r = resultant(s.eqs[best->i], s.eqs[best->j], best->v);
        if (r.is_zero())
            return 1;
        if (r.is_constant())
            return -1;
        s.eqs.push_back(r);
        return 1;
    }

    void sample(State &s) {
        int v = s.eqs.front().vars().front();
        if (out.complete)
            out.diagnostics.push_back("elimination stalled; sampled unknown values");
        out.complete = false;
        for (long val : {0L, 1L, -1L}) {
            if (!spend_branch())
                return;
            State t = s;
            assign(t, v, MPoly(n_, GR(val)));
            t.resultants = 0;
            run(std::move(t));
        }
    }

    int n_;
    SolveLimits lim_;
    int branches_ = 0;
};

} // namespace

PolySolveResult solve_polynomial_system(const std::vector<MPoly> &equations, int nvars, const SolveLimits &limits) {
    Solver solver(nvars, limits);
    State s;
    s.eqs = equations;
    for (int v = 0; v < nvars; ++v)
        s.values.push_back(MPoly::var(nvars, v));
    solver.run(std::move(s));
    return solver.out;
}

std::vector<int> free_unknowns(const std::vector<MPoly> &solution) {
    std::set<int> vs;
    for (const auto &p : solution)
        for (int v : p.vars())
            vs.insert(v);
    return {vs.begin(), vs.end()};
}

std::vector<GR> instantiate(const std::vector<MPoly> &solution, const std::map<int, GR> &free_values) {
    std::vector<GR> r;
    for (MPoly p : solution) {
        for (int v : p.vars()) {
            auto it = free_values.find(v);
            p = p.substitute(v, MPoly(p.nvars(), it == free_values.end() ? GR(0) : it->second));
        }
        r.push_back(p.constant_term());
    }
    return r;
}

} // namespace darboux

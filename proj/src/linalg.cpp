#include "darboux/linalg.hpp"

namespace darboux {

std::vector<int> rref(Matrix &m, int cols) {
    std::vector<int> pivots;
    size_t row = 0;
    for (int c = 0; c < cols && row < m.size(); ++c) {
        size_t p = row;
        while (p < m.size() && m[p][c].is_zero())
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[p], m[row]);
        GR inv = m[row][c].inverse();
        for (int k = c; k < cols; ++k)
            if (!m[row][k].is_zero())
                m[row][k] *= inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][c].is_zero())
                continue;
            GR f = m[r][c];
            for (int k = c; k < cols; ++k)
                if (!m[row][k].is_zero())
                    m[r][k] -= f * m[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    m.resize(row);
    return pivots;
}

std::vector<Vector> nullspace(Matrix m, int cols) {
    std::vector<int> pivots = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots)
        is_pivot[p] = true;
    std::vector<Vector> basis;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        Vector v(cols);
        v[f] = GR(1);
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vector> solve_particular(Matrix m, const Vector &rhs, int cols) {
    for (size_t r = 0; r < m.size(); ++r)
        m[r].push_back(rhs[r]);
    std::vector<int> pivots = rref(m, cols + 1);
    if (!pivots.empty() && pivots.back() == cols)
        return std::nullopt;
    Vector v(cols);
    for (size_t r = 0; r < pivots.size(); ++r)
        v[pivots[r]] = m[r][cols];
    return v;
}

} // namespace darboux

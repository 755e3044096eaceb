#pragma once

#include "darboux/gaussian.hpp"

#include <optional>
#include <vector>

namespace darboux {

using Vector = std::vector<GR>;
using Matrix = std::vector<Vector>;

/// Reduces m in place to reduced row echelon form; returns the pivot columns.
std::vector<int> rref(Matrix &m, int cols);

/// Basis of {v : m v = 0}. Each basis vector has a 1 in its own free column
/// and 0 in the other free columns.
std::vector<Vector> nullspace(Matrix m, int cols);

/// Some solution of m v = rhs, or nullopt when inconsistent. Free variables are 0.
std::optional<Vector> solve_particular(Matrix m, const Vector &rhs, int cols);

} // namespace darboux

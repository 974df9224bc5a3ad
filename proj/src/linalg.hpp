#pragma once

#include <array>

namespace mage {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// Dense helpers for the n <= 4 matrices used throughout; `n` selects the
// leading block actually in use.
double det(const Mat4& m, int n);
Mat4 inverse(const Mat4& m, int n);  // throws SingularError when |det| <= 1e-300
double frobenius_norm(const Mat4& m, int n);
double max_abs(const Mat4& m, int n);

// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations, ascending.
std::array<double, 4> sym_eigenvalues(Mat4 m, int n);

}  // namespace mage

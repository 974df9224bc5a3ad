#include "linalg.hpp"

#include <algorithm>
#include <cmath>

#include "scalar_field.hpp"

namespace mage {

double det(const Mat4& m, int n) {
  // LU with partial pivoting; pivot swaps tracked in the sign
  Mat4 a = m;
  double sign = 1, d = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      sign = -sign;
    }
    if (a[col][col] == 0) return 0;
    for (int r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
    d *= a[col][col];
  }
  return sign * d;
}

Mat4 inverse(const Mat4& m, int n) {
  if (std::abs(det(m, n)) <= 1e-300)
    throw SingularError("matrix is numerically singular");
  Mat4 a = m;
  Mat4 inv{};
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    double diag = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= diag;
      inv[col][c] /= diag;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col];
      if (f == 0) continue;
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

double frobenius_norm(const Mat4& m, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += m[i][j] * m[i][j];
  return std::sqrt(s);
}

double max_abs(const Mat4& m, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s = std::max(s, std::abs(m[i][j]));
  return s;
}

std::array<double, 4> sym_eigenvalues(Mat4 m, int n) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m[i][j] * m[i][j];
    if (off <= 1e-30 * (1 + frobenius_norm(m, n))) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (m[p][q] == 0) continue;
        double theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
    }
  }
  std::array<double, 4> ev{};
  for (int i = 0; i < n; ++i) ev[i] = m[i][i];
  std::sort(ev.begin(), ev.begin() + n);
  return ev;
}

}  // namespace mage

#pragma once

#include <array>

#include "linalg.hpp"
#include "scalar_field.hpp"

namespace mage {

// Metric components with first and second partials at a point. dim is 2 or
// 4; only the leading dim x dim block of each slot is used.
//   dg[k][i][j]     = d_k g_ij
//   ddg[k][l][i][j] = d_k d_l g_ij
struct MetricJet {
  int dim = 4;
  Mat4 g{};
  std::array<Mat4, 4> dg{};
  std::array<std::array<Mat4, 4>, 4> ddg{};
};

// Symmetric matrix of symbolic metric entries.
using FieldMat2 = std::array<std::array<ScalarField, 2>, 2>;
using FieldMat4 = std::array<std::array<ScalarField, 4>, 4>;

// Evaluates symbolic metric entries and their exact derivatives at pt.
MetricJet metric_jet_from_fields(const FieldMat4& fields, int dim,
                                 const Point4& pt);

Mat4 inverse_metric(const MetricJet& mj);

// Gamma[k][i][j] = Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
std::array<Mat4, 4> christoffel(const MetricJet& mj);

// R_ij = d_k Gamma^k_ij - d_i Gamma^k_kj
//        + Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj,
// with d Gamma expanded analytically from dg and ddg. This convention gives
// the round unit 2-sphere Ricci tensor equal to its metric.
Mat4 ricci(const MetricJet& mj);

double ricci_scalar(const MetricJet& mj);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

// Eigenvalue sign counts; |lambda| <= 1e-10 * ||g||_F counts as zero.
Signature signature(const Mat4& g, int dim);

}  // namespace mage

#include "curvature.hpp"

#include <cmath>

namespace mage {

MetricJet metric_jet_from_fields(const FieldMat4& fields, int dim,
                                 const Point4& pt) {
  MetricJet mj;
  mj.dim = dim;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Jet2 jet = fields[i][j].jet(pt);
      mj.g[i][j] = mj.g[j][i] = jet.value;
      for (int k = 0; k < dim; ++k) {
        mj.dg[k][i][j] = mj.dg[k][j][i] = jet.grad[k];
        for (int l = 0; l < dim; ++l) {
          mj.ddg[k][l][i][j] = jet.hess[k][l];
          mj.ddg[k][l][j][i] = jet.hess[k][l];
        }
      }
    }
  }
  return mj;
}

Mat4 inverse_metric(const MetricJet& mj) {
  if (std::abs(det(mj.g, mj.dim)) <= 1e-300)
    throw SingularError("metric is singular at the requested point");
  return inverse(mj.g, mj.dim);
}

std::array<Mat4, 4> christoffel(const MetricJet& mj) {
  const int n = mj.dim;
  Mat4 ginv = inverse_metric(mj);
  std::array<Mat4, 4> gamma{};
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l)
          s += ginv[k][l] *
               (mj.dg[i][j][l] + mj.dg[j][i][l] - mj.dg[l][i][j]);
        gamma[k][i][j] = 0.5 * s;
        gamma[k][j][i] = 0.5 * s;
      }
    }
  }
  return gamma;
}

namespace {

// dGamma[m][k][i][j] = d_m Gamma^k_ij, expanded from dg and ddg using
// d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}.
std::array<std::array<Mat4, 4>, 4> christoffel_derivative(const MetricJet& mj,
                                                          const Mat4& ginv) {
  const int n = mj.dim;
  std::array<Mat4, 4> dginv{};
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double s = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            s += ginv[k][a] * mj.dg[m][a][b] * ginv[b][l];
        dginv[m][k][l] = -s;
      }

  std::array<std::array<Mat4, 4>, 4> dgamma{};
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = 0;
          for (int l = 0; l < n; ++l) {
            s += dginv[m][k][l] *
                 (mj.dg[i][j][l] + mj.dg[j][i][l] - mj.dg[l][i][j]);
            s += ginv[k][l] * (mj.ddg[m][i][j][l] + mj.ddg[m][j][i][l] -
                               mj.ddg[m][l][i][j]);
          }
          dgamma[m][k][i][j] = 0.5 * s;
        }
      }
    }
  }
  return dgamma;
}

}  // namespace

Mat4 ricci(const MetricJet& mj) {
  const int n = mj.dim;
  Mat4 ginv = inverse_metric(mj);
  std::array<Mat4, 4> gamma = christoffel(mj);
  auto dgamma = christoffel_derivative(mj, ginv);

  Mat4 r{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) {
        s += dgamma[k][k][i][j];  // d_k Gamma^k_ij
        s -= dgamma[i][k][k][j];  // d_i Gamma^k_kj
        for (int l = 0; l < n; ++l) {
          s += gamma[k][k][l] * gamma[l][i][j];
          s -= gamma[k][i][l] * gamma[l][k][j];
        }
      }
      r[i][j] = s;
    }
  }
  return r;
}

double ricci_scalar(const MetricJet& mj) {
  const int n = mj.dim;
  Mat4 ginv = inverse_metric(mj);
  Mat4 r = ricci(mj);
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += ginv[i][j] * r[i][j];
  return s;
}

Signature signature(const Mat4& g, int dim) {
  auto ev = sym_eigenvalues(g, dim);
  double tol = 1e-10 * frobenius_norm(g, dim);
  Signature sig;
  for (int i = 0; i < dim; ++i) {
    if (ev[i] > tol)
      ++sig.positive;
    else if (ev[i] < -tol)
      ++sig.negative;
    else
      ++sig.zero;
  }
  return sig;
}

}  // namespace mage

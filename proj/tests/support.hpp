#pragma once

// Deterministic generators shared by the test binaries. Randomness is
// mt19937_64 with explicit bit scaling so streams are identical across
// standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

#include "curvature.hpp"
#include "lr_metric.hpp"
#include "ma_structure.hpp"
#include "scalar_field.hpp"

namespace testsupport {

using mage::FieldMat4;
using mage::Jet2;
using mage::MAStructure;
using mage::MetricJet;
using mage::Point4;
using mage::ScalarField;
using mage::Var;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double prob) { return uniform(0, 1) < prob; }

 private:
  std::mt19937_64 gen_;
};

inline Point4 random_point(Rng& rng, double lo, double hi) {
  return Point4{rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi),
                rng.uniform(lo, hi)};
}

// Polynomial of degree <= 2 over the chart variables with bounded
// coefficients; base_only restricts to x, y.
inline ScalarField random_poly(Rng& rng, double amp, bool base_only = false) {
  const int nvars = base_only ? 2 : 4;
  ScalarField f = ScalarField::constant(rng.uniform(-amp, amp));
  for (int i = 0; i < nvars; ++i) {
    if (!rng.chance(0.7)) continue;
    f = f + ScalarField::constant(rng.uniform(-amp, amp)) *
                ScalarField::variable(static_cast<Var>(i));
  }
  for (int t = 0; t < 2; ++t) {
    if (!rng.chance(0.5)) continue;
    int i = rng.integer(0, nvars - 1);
    int j = rng.integer(0, nvars - 1);
    f = f + ScalarField::constant(rng.uniform(-amp, amp)) *
                ScalarField::variable(static_cast<Var>(i)) *
                ScalarField::variable(static_cast<Var>(j));
  }
  return f;
}

// Free-form expression tree of the given depth; callers reject samples whose
// jets fall outside their domain or magnitude budget.
inline ScalarField random_expr(Rng& rng, int depth) {
  if (depth <= 0) {
    if (rng.chance(0.4)) return ScalarField::constant(rng.uniform(-1.5, 1.5));
    return ScalarField::variable(static_cast<Var>(rng.integer(0, 3)));
  }
  switch (rng.integer(0, 9)) {
    case 0: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 3: return random_expr(rng, depth - 1) / random_expr(rng, depth - 1);
    case 4: return -random_expr(rng, depth - 1);
    case 5: return ScalarField::exp(random_expr(rng, depth - 1));
    case 6: return ScalarField::ln(random_expr(rng, depth - 1));
    case 7:
      return rng.chance(0.5) ? ScalarField::sin(random_expr(rng, depth - 1))
                             : ScalarField::cos(random_expr(rng, depth - 1));
    case 8: {
      const int exponents[4] = {2, 3, -1, -2};
      return ScalarField::ipow(random_expr(rng, depth - 1),
                               exponents[rng.integer(0, 3)]);
    }
    default:
      return ScalarField::rpow(random_expr(rng, depth - 1),
                               rng.chance(0.5) ? 0.5 : 1.5);
  }
}

inline bool jet_within(const Jet2& jet, double bound) {
  if (!std::isfinite(jet.value) || std::abs(jet.value) > bound) return false;
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(jet.grad[i]) || std::abs(jet.grad[i]) > bound)
      return false;
    for (int j = 0; j < 4; ++j)
      if (!std::isfinite(jet.hess[i][j]) || std::abs(jet.hess[i][j]) > bound)
        return false;
  }
  return true;
}

// Accepts samples where the central-difference error model (truncation from
// third/fourth derivatives, rounding from the value magnitude over h^2)
// stays below the mixed 1e-6 tolerance with margin.
inline bool fd_well_conditioned(const ScalarField& f, const Point4& pt) {
  try {
    if (!jet_within(f.jet(pt), 10)) return false;
    for (int v = 0; v < 4; ++v) {
      ScalarField d = f.diff(static_cast<Var>(v));
      if (!jet_within(d.jet(pt), 60)) return false;
      for (int w = v; w < 4; ++w)
        if (!jet_within(d.diff(static_cast<Var>(w)).jet(pt), 300))
          return false;
    }
  } catch (const mage::DomainError&) {
    return false;
  }
  return true;
}

// Structure with polynomial coefficients and |D| >= dmin at pt.
inline MAStructure random_structure(Rng& rng, const Point4& pt, double dmin) {
  MAStructure ma;
  ma.A = random_poly(rng, 1.5);
  ma.B = random_poly(rng, 1.5);
  ma.C = random_poly(rng, 1.5);
  ma.E = random_poly(rng, 1.5);
  for (;;) {
    ma.D = random_poly(rng, 1.5);
    if (std::abs(ma.D.eval(pt)) >= dmin) return ma;
  }
}

// Polynomial or exp-type D with |D| >= dmin at pt, for the A = B = C = 0
// scalar-curvature checks.
inline ScalarField random_d_field(Rng& rng, const Point4& pt, double dmin) {
  for (;;) {
    ScalarField d = rng.chance(0.5)
                        ? random_poly(rng, 1.2)
                        : ScalarField::exp(random_poly(rng, 0.6));
    if (std::abs(d.eval(pt)) >= dmin &&
        jet_within(d.jet(pt), 100)) return d;
  }
}

// MetricJet with all derivatives taken by central differences; independent
// oracle for the symbolic pipeline.
inline MetricJet fd_metric_jet(const FieldMat4& fields, int dim,
                               const Point4& pt, double h = 1e-4) {
  MetricJet mj;
  mj.dim = dim;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Jet2 jet = mage::fd_jet(fields[i][j], pt, h);
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

inline bool close(double a, double b, double abs_tol, double rel_tol = 0) {
  return std::abs(a - b) <=
         std::max(abs_tol, rel_tol * std::max(std::abs(a), std::abs(b)));
}

}  // namespace testsupport

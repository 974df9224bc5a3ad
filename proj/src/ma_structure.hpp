#pragma once

#include "scalar_field.hpp"

namespace mage {

// The five coefficient fields of the 2-form
//   alpha = A dp^dy + B (dx^dp - dy^dq) + C dx^dq + D dp^dq + E dx^dy.
// Any choice of smooth coefficients is admissible at construction; D != 0
// is checked pointwise by the metric consumers.
struct MAStructure {
  ScalarField A, B, C, D, E;
};

}  // namespace mage

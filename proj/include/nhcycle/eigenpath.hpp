#pragma once

#include <vector>

#include "nhcycle/linalg.hpp"
#include "nhcycle/numerics.hpp"

namespace nhcycle {

// Instantaneous eigenvalue/eigenvector samples along one period. The grid is
// either time or the loop angle, depending on the producer.
struct EigenPath {
  std::vector<double> grid;
  std::vector<cplx> values;
  std::vector<CVec2> vectors;
  Branch label = Branch::Plus;
  bool closed = false;
};

}  // namespace nhcycle

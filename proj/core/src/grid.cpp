#include "emx/grid.hpp"

#include <stdexcept>
#include <string>

namespace emx {

FourierGrid::FourierGrid(int n) : n_(n) {
  if (n < 16 || n % 2 != 0)
    throw std::invalid_argument("FourierGrid: n must be even and >= 16, got " + std::to_string(n));
}

}  // namespace emx

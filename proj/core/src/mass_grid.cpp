#include "lagsw/mass_grid.hpp"

#include <stdexcept>

namespace lagsw {

MassGrid::MassGrid(int cells) : cells_(cells), dy_(cells > 0 ? 1.0 / cells : 0.0) {
  if (cells < 1) throw std::invalid_argument("MassGrid needs at least one cell");
}

}  // namespace lagsw

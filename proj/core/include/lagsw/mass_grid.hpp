#pragma once

#include <cstddef>

namespace lagsw {

/// Uniform partition of the normalized mass coordinate y in [0, 1].
///
/// Cells carry density and entropy, nodes carry velocity and radius. Every cell
/// holds exactly the mass dy; the grid never moves.
class MassGrid {
 public:
  explicit MassGrid(int cells);

  int cells() const { return cells_; }
  int nodes() const { return cells_ + 1; }
  double dy() const { return dy_; }

  /// y_i = i * dy, for i = 0..M. The last node is exactly 1.
  double node(int i) const { return i == cells_ ? 1.0 : i * dy_; }
  /// y_{i+1/2} = (i + 1/2) * dy, for i = 0..M-1.
  double center(int i) const { return (i + 0.5) * dy_; }

  /// Total mass. Structurally 1: the grid is an equal-mass partition.
  double total_mass() const { return static_cast<double>(cells_) / cells_; }

  bool operator==(const MassGrid&) const = default;

 private:
  int cells_;
  double dy_;
};

}  // namespace lagsw

#pragma once

namespace schartree {

/// Controls shared by every split-step evolution.
struct StepOptions {
  /// Keep every k-th node (the first and last node are always kept).
  int record_every = 1;
  /// Boundary-mass monitor: fail once the outermost `boundary_cells`
  /// samples on either side hold more than `boundary_tolerance` of the mass.
  int boundary_cells = 12;
  double boundary_tolerance = 1e-8;
};

}  // namespace schartree

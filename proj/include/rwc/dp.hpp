#pragma once

#include "rwc/geometry.hpp"
#include "rwc/walk.hpp"

#include <cstdint>
#include <vector>

namespace rwc {

// Finite box of lattice points with a precomputed cone-interior mask.
// Values on masked-out points are identically zero in every kernel.
struct LatticeBox {
  IVec lo, hi;                    // inclusive coordinate bounds
  std::vector<long> shape;        // hi - lo + 1 per axis
  std::vector<long> strides;      // row-major
  std::vector<unsigned char> inside;

  std::size_t size() const { return inside.size(); }
  // Flat index, or -1 when x is outside the box.
  long index(const IVec& x) const;
  IVec point(std::size_t idx) const;
};

LatticeBox make_box(const Cone& cone, const IVec& lo, const IVec& hi);

// Box covering the cone's lattice points within sup-norm radius L (tightened
// to positive coordinates for half-line and orthant cones).
LatticeBox cone_box(const Cone& cone, double radius);

// Gather update out[x] = sum_s p_s * value(x + s), where value() is `in` on
// in-box mask points, 0 on masked points, and `out_of_box` beyond the box.
// Cells are independent, so the serial and OpenMP paths are bitwise equal.
void dp_step_backward(const LatticeBox& box, const StepDistribution& dist,
                      const std::vector<double>& in, std::vector<double>& out,
                      double out_of_box = 0.0, bool parallel = true);

// Gather update out[y] = sum_s p_s * in(y - s) on mask points (mass leaving
// the box is dropped; callers should size the box so the leak is negligible
// or track the total mass).
void dp_step_forward(const LatticeBox& box, const StepDistribution& dist,
                     const std::vector<double>& in, std::vector<double>& out,
                     bool parallel = true);

// Fixed-order sum over the mask (deterministic regardless of thread count).
double mask_sum(const LatticeBox& box, const std::vector<double>& values);

}  // namespace rwc

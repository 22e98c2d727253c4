#include "rwc/dp.hpp"

#include <cmath>
#include <stdexcept>

namespace rwc {

long LatticeBox::index(const IVec& x) const {
  long idx = 0;
  for (int i = 0; i < x.size(); ++i) {
    long c = x(i) - lo(i);
    if (c < 0 || c >= shape[static_cast<std::size_t>(i)]) return -1;
    idx += c * strides[static_cast<std::size_t>(i)];
  }
  return idx;
}

IVec LatticeBox::point(std::size_t idx) const {
  IVec x(lo.size());
  long rem = static_cast<long>(idx);
  for (int i = 0; i < lo.size(); ++i) {
    x(i) = lo(i) + static_cast<int>(rem / strides[static_cast<std::size_t>(i)]);
    rem %= strides[static_cast<std::size_t>(i)];
  }
  return x;
}

LatticeBox make_box(const Cone& cone, const IVec& lo, const IVec& hi) {
  if (lo.size() != cone.dim() || hi.size() != cone.dim())
    throw DimensionMismatch("make_box: bounds do not match cone dimension");
  LatticeBox box;
  box.lo = lo;
  box.hi = hi;
  const int d = static_cast<int>(lo.size());
  box.shape.resize(static_cast<std::size_t>(d));
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) {
    long s = static_cast<long>(hi(i)) - lo(i) + 1;
    if (s <= 0) throw std::invalid_argument("make_box: empty box");
    box.shape[static_cast<std::size_t>(i)] = s;
    total *= static_cast<std::size_t>(s);
  }
  box.strides.assign(static_cast<std::size_t>(d), 1);
  for (int i = d - 2; i >= 0; --i)
    box.strides[static_cast<std::size_t>(i)] =
        box.strides[static_cast<std::size_t>(i) + 1] * box.shape[static_cast<std::size_t>(i) + 1];
  box.inside.resize(total);
  Vec x(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    IVec pt = box.point(idx);
    for (int i = 0; i < d; ++i) x(i) = pt(i);
    box.inside[idx] = contains(cone, x) ? 1 : 0;
  }
  return box;
}

LatticeBox cone_box(const Cone& cone, double radius) {
  const int d = cone.dim();
  long l = static_cast<long>(std::ceil(radius));
  if (l < 1) throw std::invalid_argument("cone_box: radius too small");
  IVec lo = IVec::Constant(d, static_cast<int>(-l));
  IVec hi = IVec::Constant(d, static_cast<int>(l));
  if (cone.kind() == ConeKind::HalfLine || cone.kind() == ConeKind::Orthant) lo.setConstant(1);
  return make_box(cone, lo, hi);
}

namespace {

struct StepOffsets {
  std::vector<long> flat;          // stride offset of each step
  std::vector<IVec> steps;
  std::vector<double> probs;
};

StepOffsets offsets_for(const LatticeBox& box, const StepDistribution& dist, int sign) {
  StepOffsets off;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    IVec s = sign * dist.support[i];
    long f = 0;
    for (int k = 0; k < s.size(); ++k)
      f += static_cast<long>(s(k)) * box.strides[static_cast<std::size_t>(k)];
    off.flat.push_back(f);
    off.steps.push_back(s);
    off.probs.push_back(dist.probs[i]);
  }
  return off;
}

}  // namespace

void dp_step_backward(const LatticeBox& box, const StepDistribution& dist,
                      const std::vector<double>& in, std::vector<double>& out,
                      double out_of_box, bool parallel) {
  if (in.size() != box.size()) throw std::invalid_argument("dp_step_backward: layer size mismatch");
  out.assign(box.size(), 0.0);
  StepOffsets off = offsets_for(box, dist, +1);
  const long n = static_cast<long>(box.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (long idx = 0; idx < n; ++idx) {
    if (!box.inside[static_cast<std::size_t>(idx)]) continue;
    IVec x = box.point(static_cast<std::size_t>(idx));
    double acc = 0;
    for (std::size_t si = 0; si < off.flat.size(); ++si) {
      IVec y = x + off.steps[si];
      long j = box.index(y);
      if (j < 0)
        acc += off.probs[si] * out_of_box;
      else if (box.inside[static_cast<std::size_t>(j)])
        acc += off.probs[si] * in[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(idx)] = acc;
  }
}

void dp_step_forward(const LatticeBox& box, const StepDistribution& dist,
                     const std::vector<double>& in, std::vector<double>& out,
                     bool parallel) {
  if (in.size() != box.size()) throw std::invalid_argument("dp_step_forward: layer size mismatch");
  out.assign(box.size(), 0.0);
  StepOffsets off = offsets_for(box, dist, -1);  // gather from y - s
  const long n = static_cast<long>(box.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (long idx = 0; idx < n; ++idx) {
    if (!box.inside[static_cast<std::size_t>(idx)]) continue;
    IVec y = box.point(static_cast<std::size_t>(idx));
    double acc = 0;
    for (std::size_t si = 0; si < off.flat.size(); ++si) {
      IVec x = y + off.steps[si];
      long j = box.index(x);
      if (j >= 0 && box.inside[static_cast<std::size_t>(j)])
        acc += off.probs[si] * in[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(idx)] = acc;
  }
}

double mask_sum(const LatticeBox& box, const std::vector<double>& values) {
  double total = 0;
  for (std::size_t idx = 0; idx < box.size(); ++idx)
    if (box.inside[idx]) total += values[idx];
  return total;
}

}  // namespace rwc

// Serial vs OpenMP DP kernel comparison: times both variants on a quadrant
// survival workload and checks the results are bitwise identical.
#include "rwc/dp.hpp"
#include "rwc/walk.hpp"

#include <chrono>
#include <cstring>
#include <iostream>

namespace {

double time_run(const rwc::LatticeBox& box, const rwc::StepDistribution& dist, long layers,
                bool parallel, std::vector<double>& out) {
  std::vector<double> layer(box.size(), 0.0), next;
  for (std::size_t i = 0; i < box.size(); ++i)
    if (box.inside[i]) layer[i] = 1.0;
  auto start = std::chrono::steady_clock::now();
  for (long k = 0; k < layers; ++k) {
    rwc::dp_step_backward(box, dist, layer, next, 0.0, parallel);
    layer.swap(next);
  }
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out = layer;
  return sec;
}

}  // namespace

int main() {
  rwc::Cone cone = rwc::Cone::orthant(2);
  rwc::StepDistribution dist;
  auto add = [&](int a, int b, double p) {
    rwc::IVec s(2);
    s << a, b;
    dist.support.push_back(s);
    dist.probs.push_back(p);
  };
  add(0, 0, 0.5);
  add(1, 0, 0.125);
  add(-1, 0, 0.125);
  add(0, 1, 0.125);
  add(0, -1, 0.125);

  rwc::IVec lo(2), hi(2);
  lo << 1, 1;
  hi << 400, 400;
  rwc::LatticeBox box = rwc::make_box(cone, lo, hi);
  const long layers = 256;

  std::vector<double> serial_out, parallel_out;
  double t_serial = time_run(box, dist, layers, false, serial_out);
  double t_parallel = time_run(box, dist, layers, true, parallel_out);

  bool identical = serial_out.size() == parallel_out.size() &&
                   std::memcmp(serial_out.data(), parallel_out.data(),
                               serial_out.size() * sizeof(double)) == 0;
  std::cout << "box " << box.size() << " cells, " << layers << " layers\n";
  std::cout << "serial:   " << t_serial << " s\n";
  std::cout << "parallel: " << t_parallel << " s (speedup " << t_serial / t_parallel << "x)\n";
  std::cout << "bitwise identical: " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}

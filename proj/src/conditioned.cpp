#include "rwc/conditioned.hpp"

#include "rwc/bm.hpp"
#include "rwc/special.hpp"
#include "rwc/spectral.hpp"
#include "rwc/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace rwc {

namespace {

LatticeBox reachable_box(const Cone& cone, const StepDistribution& dist, const IVec& x, long n) {
  const int d = static_cast<int>(x.size());
  IVec lo = x, hi = x;
  for (const auto& s : dist.support)
    for (int k = 0; k < d; ++k) {
      lo(k) = std::min(lo(k), x(k) + static_cast<int>(n) * std::min(0, s(k)));
      hi(k) = std::max(hi(k), x(k) + static_cast<int>(n) * std::max(0, s(k)));
    }
  return make_box(cone, lo, hi);
}

LatticeBox dp_box(const Cone& cone, const StepDistribution& dist, const IVec& x, long n,
                  double radius) {
  if (radius > 0) return cone_box(cone, radius);
  // Full reachable range only for short horizons; otherwise a generous
  // diffusive budget (escape beyond 12 sigma is below double precision).
  double reach = static_cast<double>(n) * dist.max_step_norm();
  double diffusive = x.cast<double>().lpNorm<Eigen::Infinity>() +
                     12.0 * dist.max_step_norm() * std::sqrt(static_cast<double>(n)) + 1;
  if (reach + x.cast<double>().lpNorm<Eigen::Infinity>() <= diffusive)
    return reachable_box(cone, dist, x, n);
  return cone_box(cone, diffusive);
}

}  // namespace

SurvivalTable::SurvivalTable(const Cone& cone, const StepDistribution& dist, double radius,
                             long horizon, long stride)
    : cone_(cone), dist_(dist), box_(cone_box(cone, radius)), horizon_(horizon) {
  dist_.validate();
  if (horizon < 0) throw std::invalid_argument("survival table: negative horizon");
  stride_ = stride > 0 ? stride
                       : std::max<long>(1, static_cast<long>(std::sqrt(static_cast<double>(
                                               std::max<long>(horizon, 1)))));
  std::vector<double> layer(box_.size(), 0.0), next;
  bool any_inside = false;
  for (std::size_t idx = 0; idx < box_.size(); ++idx)
    if (box_.inside[idx]) {
      layer[idx] = 1.0;
      any_inside = true;
    }
  if (!any_inside) throw ZeroSurvival("survival table: box contains no interior lattice point");
  checkpoints_.push_back(layer);
  for (long k = 1; k <= horizon_; ++k) {
    dp_step_backward(box_, dist_, layer, next);
    layer.swap(next);
    if (k % stride_ == 0) checkpoints_.push_back(layer);
  }
  if (horizon_ % stride_ != 0) checkpoints_.push_back(layer);  // final layer always kept
}

std::vector<double> SurvivalTable::layer(long k) const {
  if (k < 0 || k > horizon_) throw std::invalid_argument("survival table: layer out of range");
  long j = k / stride_;
  if (k == horizon_ && horizon_ % stride_ != 0) return checkpoints_.back();
  std::vector<double> cur = checkpoints_[static_cast<std::size_t>(j)];
  std::vector<double> next;
  for (long m = j * stride_; m < k; ++m) {
    dp_step_backward(box_, dist_, cur, next);
    cur.swap(next);
  }
  return cur;
}

double SurvivalTable::q(long k, const IVec& z) const {
  long idx = box_.index(z);
  if (idx < 0 || !box_.inside[static_cast<std::size_t>(idx)]) return 0.0;
  return layer(k)[static_cast<std::size_t>(idx)];
}

std::vector<std::vector<double>> SurvivalTable::block(long j) const {
  long lo = j * stride_;
  if (lo > horizon_ || j < 0) throw std::invalid_argument("survival table: block out of range");
  long hi = std::min(lo + stride_ - 1, horizon_);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  out.push_back(checkpoints_[static_cast<std::size_t>(j)]);
  std::vector<double> next;
  for (long m = lo + 1; m <= hi; ++m) {
    dp_step_backward(box_, dist_, out.back(), next);
    out.push_back(next);
  }
  return out;
}

SurvivalBracket survival_dp(const Cone& cone, const StepDistribution& dist, const IVec& x, long n,
                            double radius) {
  dist.validate();
  if (!contains(cone, x.cast<double>()))
    throw std::invalid_argument("survival_dp: start outside the open cone");
  LatticeBox base = dp_box(cone, dist, x, n, radius);
  // Pad the box by one step reach so every boundary-killed cell is a masked
  // in-box cell; otherwise the upper bracket credits kills with the
  // out-of-box value and degenerates to 1 on origin-cornered boxes.
  int reach = static_cast<int>(std::ceil(dist.max_step_norm()));
  IVec pad = IVec::Constant(base.lo.size(), reach);
  LatticeBox box = make_box(cone, base.lo - pad, base.hi + pad);
  long xi = box.index(x);
  if (xi < 0) throw std::invalid_argument("survival_dp: start outside the DP box");
  std::vector<double> low(box.size(), 0.0), up(box.size(), 0.0), next;
  for (std::size_t idx = 0; idx < box.size(); ++idx)
    if (box.inside[idx]) low[idx] = up[idx] = 1.0;
  for (long k = 0; k < n; ++k) {
    dp_step_backward(box, dist, low, next, 0.0);
    low.swap(next);
    dp_step_backward(box, dist, up, next, 1.0);
    up.swap(next);
  }
  return SurvivalBracket{low[static_cast<std::size_t>(xi)], up[static_cast<std::size_t>(xi)]};
}

PointmassLayer pointmass_layer(const Cone& cone, const StepDistribution& dist, const IVec& x,
                               long n, double radius) {
  dist.validate();
  if (!contains(cone, x.cast<double>()))
    throw std::invalid_argument("pointmass_dp: start outside the open cone");
  PointmassLayer out{dp_box(cone, dist, x, n, radius), {}, 0};
  long xi = out.box.index(x);
  if (xi < 0 || !out.box.inside[static_cast<std::size_t>(xi)])
    throw std::invalid_argument("pointmass_dp: start outside the DP box");
  out.values.assign(out.box.size(), 0.0);
  out.values[static_cast<std::size_t>(xi)] = 1.0;
  std::vector<double> next;
  for (long k = 0; k < n; ++k) {
    dp_step_forward(out.box, dist, out.values, next);
    out.values.swap(next);
  }
  out.total = mask_sum(out.box, out.values);
  return out;
}

double pointmass_dp(const Cone& cone, const StepDistribution& dist, const IVec& x, const IVec& y,
                    long n, double radius) {
  PointmassLayer layer = pointmass_layer(cone, dist, x, n, radius);
  long yi = layer.box.index(y);
  if (yi < 0 || !layer.box.inside[static_cast<std::size_t>(yi)]) return 0.0;
  return layer.values[static_cast<std::size_t>(yi)];
}

namespace {

// One conditioned step from z at time k (surviving to the table horizon n):
// weights p_s q_{n-k-1}(z+s), renormalized.
IVec conditioned_step(const LatticeBox& box, const StepDistribution& dist,
                      const std::vector<double>& q_next, const IVec& z, Rng& rng) {
  double total = 0;
  std::array<double, 64> w{};
  const std::size_t ns = dist.support.size();
  if (ns > w.size()) throw std::invalid_argument("conditioned sampler: support too large");
  for (std::size_t si = 0; si < ns; ++si) {
    long j = box.index(z + dist.support[si]);
    double qv = (j >= 0 && box.inside[static_cast<std::size_t>(j)])
                    ? q_next[static_cast<std::size_t>(j)]
                    : 0.0;
    w[si] = dist.probs[si] * qv;
    total += w[si];
  }
  if (!(total > 0)) throw ZeroSurvival("conditioned sampler: no surviving continuation");
  double u = rng.next_double() * total;
  double acc = 0;
  for (std::size_t si = 0; si < ns; ++si) {
    acc += w[si];
    if (u < acc || si + 1 == ns) return z + dist.support[si];
  }
  return z + dist.support[ns - 1];
}

}  // namespace

std::vector<IVec> exact_conditioned_sampler(const SurvivalTable& table, const IVec& x, long n,
                                            Rng& rng) {
  if (n > table.horizon()) throw std::invalid_argument("conditioned sampler: horizon exceeds table");
  if (!(table.q(n, x) > 0)) throw ZeroSurvival("conditioned sampler: q_n(x) = 0");
  std::vector<IVec> path{x};
  IVec z = x;
  long cur_block = -1;
  std::vector<std::vector<double>> blk;
  for (long k = 0; k < n; ++k) {
    long m = n - k - 1;
    long j = m / table.stride();
    if (j != cur_block) {
      blk = table.block(j);
      cur_block = j;
    }
    z = conditioned_step(table.box(), table.dist(), blk[static_cast<std::size_t>(m - j * table.stride())],
                         z, rng);
    path.push_back(z);
  }
  return path;
}

std::vector<IVec> conditioned_endpoints(const SurvivalTable& table, const IVec& x, long n,
                                        long n_samples, std::uint64_t seed, int workers) {
  if (n > table.horizon()) throw std::invalid_argument("conditioned sampler: horizon exceeds table");
  if (n_samples <= 0) throw TooFewSamples("conditioned sampler: need at least one sample");
  if (!(table.q(n, x) > 0)) throw ZeroSurvival("conditioned sampler: q_n(x) = 0");
  (void)workers;  // per-sample substreams make the result worker-invariant
  std::vector<IVec> pos(static_cast<std::size_t>(n_samples), x);
  std::vector<Rng> rngs;
  rngs.reserve(static_cast<std::size_t>(n_samples));
  for (long i = 0; i < n_samples; ++i) rngs.emplace_back(seed, static_cast<std::uint64_t>(i));
  long k = 0;
  for (long j = (n - 1) / table.stride(); j >= 0 && k < n; --j) {
    std::vector<std::vector<double>> blk = table.block(j);
    long m_lo = j * table.stride();
    long m_hi = std::min(m_lo + table.stride() - 1, n - 1);
    for (long m = m_hi; m >= m_lo && k < n; --m, ++k) {
      const std::vector<double>& q_next = blk[static_cast<std::size_t>(m - m_lo)];
      const long ns = n_samples;
#pragma omp parallel for schedule(static)
      for (long i = 0; i < ns; ++i)
        pos[static_cast<std::size_t>(i)] =
            conditioned_step(table.box(), table.dist(), q_next, pos[static_cast<std::size_t>(i)],
                             rngs[static_cast<std::size_t>(i)]);
    }
  }
  return pos;
}

std::vector<IVec> htransform_sampler(const HarmonicTable& table, const StepDistribution& dist,
                                     const Cone& cone, const IVec& x, long n, Rng& rng,
                                     double* max_defect) {
  dist.validate();
  std::vector<IVec> path{x};
  IVec z = x;
  double worst = 0;
  for (long k = 0; k < n; ++k) {
    double vz = table.value_at(z);
    if (!(vz > 0)) throw NonpositiveV("htransform sampler: V <= 0 at a visited state");
    double total = 0;
    std::vector<double> w(dist.support.size(), 0.0);
    for (std::size_t si = 0; si < dist.support.size(); ++si) {
      IVec y = z + dist.support[si];
      if (!contains(cone, y.cast<double>())) continue;
      w[si] = dist.probs[si] * table.value_at(y);
      total += w[si];
    }
    if (!(total > 0)) throw NonpositiveV("htransform sampler: no positive continuation");
    worst = std::max(worst, std::abs(total - vz));
    double u = rng.next_double() * total;
    double acc = 0;
    std::size_t pick = dist.support.size() - 1;
    for (std::size_t si = 0; si < dist.support.size(); ++si) {
      acc += w[si];
      if (u < acc) {
        pick = si;
        break;
      }
    }
    z += dist.support[pick];
    path.push_back(z);
  }
  if (max_defect) *max_defect = worst;
  return path;
}

std::string GofReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"statistic\":" << statistic << ",\"p_value\":" << p_value << ",\"cells\":" << cells
     << ",\"n\":" << n << ",\"seed\":" << seed;
  for (const auto& [key, val] : extras) os << ",\"" << key << "\":" << val;
  os << "}";
  return os.str();
}

namespace {

// Separable uniformizing coordinates for densities proportional to
// u^k(z) exp(-|z|^2/2) on the (whitened) cone; k=0 is the plain Gaussian
// restricted to the cone (the power-check control).
struct CoordMapper {
  int dims;
  int p_order;  // k
  SpectralData sd;
  bool weyl_a3;

  explicit CoordMapper(const Cone& cone, int k) : dims(0), p_order(k), sd(spectral_data(cone)) {
    weyl_a3 = cone.kind() == ConeKind::WeylA && cone.dim() == 3;
    if (sd.dim() == 1)
      dims = 1;
    else if (sd.wedge_like())
      dims = 2;
    else if (weyl_a3 && k == 2)
      dims = 3;
    else
      throw UnsupportedCone("separable cells unavailable for this cone: " + sd.cone().to_string());
  }

  static double wedge_angular_cdf(double psi, double alpha, double p, int k) {
    psi = std::clamp(psi, 0.0, alpha);
    switch (k) {
      case 0:
        return psi / alpha;
      case 1:
        return (1 - std::cos(p * psi)) / 2;
      default:
        return (psi / 2 - std::sin(2 * p * psi) / (4 * p)) / (alpha / 2);
    }
  }

  // coordinates in [0,1]^dims
  std::array<double, 3> map(const Vec& z) const {
    std::array<double, 3> out{0, 0, 0};
    if (dims == 1) {
      double r = z(0);
      out[0] = gamma_p((p_order * sd.p() + 1) / 2, r * r / 2);
      return out;
    }
    if (dims == 2) {
      double r = z.norm();
      double raw = std::atan2(z(1), z(0));
      double psi = std::remainder(raw - sd.theta0() - sd.alpha() / 2, 2 * std::numbers::pi) +
                   sd.alpha() / 2;
      out[0] = gamma_p((p_order * sd.p() + 2) / 2, r * r / 2);
      out[1] = wedge_angular_cdf(psi, sd.alpha(), sd.p(), p_order);
      return out;
    }
    // Weyl chamber A, d=3, k=2: center of mass is standard normal; the
    // orthogonal plane carries a wedge of opening pi/3 with u ~ r^3 sin(3 psi).
    double c = (z(0) + z(1) + z(2)) / std::sqrt(3.0);
    double t1 = (z(1) - z(0)) / std::sqrt(2.0);
    double t2 = (2 * z(2) - z(0) - z(1)) / std::sqrt(6.0);
    double r = std::hypot(t1, t2);
    double psi = std::atan2(t2, t1) - std::numbers::pi / 6;
    out[0] = norm_cdf(c);
    out[1] = gamma_p(4.0, r * r / 2);
    out[2] = wedge_angular_cdf(psi, std::numbers::pi / 3, 3.0, 2);
    return out;
  }
};

GofReport chi2_from_uniform_coords(const std::vector<std::array<double, 3>>& coords, int dims,
                                   const std::array<int, 3>& bins, long n, std::uint64_t seed) {
  std::size_t total_cells = 1;
  for (int i = 0; i < dims; ++i) total_cells *= static_cast<std::size_t>(bins[static_cast<std::size_t>(i)]);
  std::vector<double> observed(total_cells, 0.0);
  for (const auto& c : coords) {
    std::size_t idx = 0;
    for (int i = 0; i < dims; ++i) {
      int b = std::min(bins[static_cast<std::size_t>(i)] - 1,
                       static_cast<int>(c[static_cast<std::size_t>(i)] *
                                        bins[static_cast<std::size_t>(i)]));
      b = std::max(b, 0);
      idx = idx * static_cast<std::size_t>(bins[static_cast<std::size_t>(i)]) +
            static_cast<std::size_t>(b);
    }
    observed[idx] += 1;
  }
  std::vector<double> expected(total_cells,
                               static_cast<double>(coords.size()) / static_cast<double>(total_cells));
  GofResult res = gof_chi2(observed, expected);
  return GofReport{res.statistic, res.p_value, res.cells, n, seed, {}};
}

}  // namespace

GofReport clt_verify(const WalkSpec& spec, const std::vector<IVec>& endpoints, long n,
                     int radial_cells, int angular_cells, bool gaussian_control) {
  if (endpoints.size() < 10000) throw TooFewSamples("clt_verify: need at least 10^4 samples");
  CoordMapper mapper(spec.image_cone, gaussian_control ? 0 : 1);
  double sqn = std::sqrt(static_cast<double>(n));
  std::vector<long> spacing = coordinate_spacing(spec.dist);
  const int d = spec.dist.dim();
  std::vector<std::array<double, 3>> coords;
  coords.reserve(endpoints.size());
  double mean_r = 0;
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    // Continuity correction: spread each lattice atom over its cell (the
    // local limit theorem makes the jittered law match the limit density).
    Rng jit(0x636c74u, static_cast<std::uint64_t>(i));
    Vec z = endpoints[i].cast<double>();
    for (int c = 0; c < d; ++c)
      z(c) += (jit.next_double() - 0.5) * static_cast<double>(spacing[static_cast<std::size_t>(c)]);
    Vec y = spec.whitening * z / sqn;
    coords.push_back(mapper.map(y));
    mean_r += y.norm();
  }
  mean_r /= static_cast<double>(endpoints.size());
  std::array<int, 3> bins{radial_cells, angular_cells, 1};
  GofReport report = chi2_from_uniform_coords(coords, mapper.dims, bins,
                                              n, 0);
  // Radial moment of the limit density: E|Y| = sqrt(2) G((p+d+1)/2)/G((p+d)/2).
  SpectralData sd = spectral_data(spec.image_cone);
  double s = sd.p() + sd.dim();
  double target = std::sqrt(2.0) * std::exp(std::lgamma((s + 1) / 2) - std::lgamma(s / 2));
  report.extras.emplace_back("mean_radius_obs", mean_r);
  report.extras.emplace_back("mean_radius_target", target);
  return report;
}

namespace {

void require_aperiodic(const WalkSpec& spec, const char* who) {
  AssumptionReport rep = check_assumptions(spec);
  if (rep.strongly_aperiodic.has_value() && !*rep.strongly_aperiodic)
    throw PeriodicWalk(std::string(who) + ": step law is certainly periodic");
}

}  // namespace

std::vector<SupErrorPoint> llt_uniform_verify(const WalkSpec& spec, const HarmonicTable& vhat,
                                              const IVec& x, const std::vector<long>& n_grid) {
  require_aperiodic(spec, "llt_uniform_verify");
  SpectralData sd = spectral_data(spec.image_cone);
  double v_cell = spec.whitening.determinant();
  double vx = vhat.value_at(x);
  double pref = v_cell * sd.kappa() * sd.h0_const() * vx;
  std::vector<SupErrorPoint> out;
  for (long n : n_grid) {
    PointmassLayer layer = pointmass_layer(spec.cone, spec.dist, x, n);
    double sqn = std::sqrt(static_cast<double>(n));
    double scale = std::pow(static_cast<double>(n), (sd.p() + sd.dim()) / 2);
    double sup = 0;
    for (std::size_t idx = 0; idx < layer.box.size(); ++idx) {
      if (!layer.box.inside[idx]) continue;
      Vec yh = spec.whitening * layer.box.point(idx).cast<double>();
      double predicted = pref * sd.u(yh / sqn) * std::exp(-yh.squaredNorm() / (2 * n)) / scale;
      sup = std::max(sup, scale * std::abs(layer.values[idx] - predicted));
    }
    out.push_back(SupErrorPoint{n, sup});
  }
  return out;
}

std::vector<RatioPoint> llt_fixed_verify(const WalkSpec& spec, const HarmonicTable& vhat,
                                         const HarmonicTable& vhat_reflected, const IVec& x,
                                         const IVec& y, const std::vector<long>& n_grid) {
  require_aperiodic(spec, "llt_fixed_verify");
  SpectralData sd = spectral_data(spec.image_cone);
  const int d = sd.dim();
  double v_cell = spec.whitening.determinant();
  double amp = v_cell * std::pow(2 * std::numbers::pi, d) * sd.kappa() * sd.kappa() *
               sd.rho_const() * sd.h0_const() * sd.h0_const() * vhat.value_at(x) *
               vhat_reflected.value_at(y);
  std::vector<RatioPoint> out;
  for (long n : n_grid) {
    double dp = pointmass_dp(spec.cone, spec.dist, x, y, n);
    double predicted = amp * std::pow(static_cast<double>(n), -(sd.p() + d / 2.0));
    out.push_back(RatioPoint{n, dp, predicted, dp / predicted});
  }
  return out;
}

GofReport bridge_midpoint_verify(const WalkSpec& spec, const IVec& x, const IVec& y, long n,
                                 double t, int radial_cells, int angular_cells, long n_samples,
                                 std::uint64_t seed, double radius) {
  if (!(t > 0 && t < 1)) throw std::invalid_argument("bridge_midpoint_verify: t in (0,1)");
  long m = std::lround(t * static_cast<double>(n));
  if (m <= 0 || m >= n) throw std::invalid_argument("bridge_midpoint_verify: degenerate split");
  if (radius <= 0) {
    double max_axis = 0;
    for (const auto& s : spec.dist.support)
      max_axis = std::max(max_axis, static_cast<double>(s.cwiseAbs().maxCoeff()));
    radius = std::max(x.cast<double>().lpNorm<Eigen::Infinity>(),
                      y.cast<double>().lpNorm<Eigen::Infinity>()) +
             3.0 * max_axis * std::sqrt(static_cast<double>(n)) + 1;
  }
  PointmassLayer fwd = pointmass_layer(spec.cone, spec.dist, x, m, radius);
  PointmassLayer bwd = pointmass_layer(spec.cone, spec.dist.reflected(), y, n - m, radius);
  // Midpoint law of the box-killed bridge: product of the two killed kernels.
  std::vector<std::pair<std::size_t, double>> mass;  // (fwd box index, cumulative)
  double total = 0;
  for (std::size_t idx = 0; idx < fwd.box.size(); ++idx) {
    if (!fwd.box.inside[idx] || fwd.values[idx] == 0) continue;
    long j = bwd.box.index(fwd.box.point(idx));
    if (j < 0 || !bwd.box.inside[static_cast<std::size_t>(j)]) continue;
    double w = fwd.values[idx] * bwd.values[static_cast<std::size_t>(j)];
    if (w > 0) {
      total += w;
      mass.emplace_back(idx, total);
    }
  }
  if (!(total > 0)) throw ZeroBridgeMass("bridge_midpoint_verify: empty bridge");
  const int d = spec.dist.dim();
  std::vector<long> spacing = coordinate_spacing(spec.dist);

  CoordMapper mapper(spec.image_cone, 2);
  double scale = std::sqrt(static_cast<double>(n) * t * (1 - t));
  std::vector<std::array<double, 3>> coords;
  coords.reserve(static_cast<std::size_t>(n_samples));
  for (long i = 0; i < n_samples; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    double u = rng.next_double() * total;
    auto it = std::lower_bound(mass.begin(), mass.end(), u,
                               [](const auto& entry, double val) { return entry.second < val; });
    if (it == mass.end()) --it;
    Vec z = fwd.box.point(it->first).cast<double>();
    for (int c = 0; c < d; ++c)
      z(c) += (rng.next_double() - 0.5) * static_cast<double>(spacing[static_cast<std::size_t>(c)]);
    coords.push_back(mapper.map(spec.whitening * z / scale));
  }
  std::array<int, 3> bins{mapper.dims == 3 ? 4 : radial_cells,
                          mapper.dims == 3 ? radial_cells : angular_cells, angular_cells};
  GofReport report = chi2_from_uniform_coords(coords, mapper.dims, bins, n, seed);
  report.extras.emplace_back("bridge_mass", total);
  return report;
}

}  // namespace rwc

#include "rwc/walk.hpp"

#include "rwc/special.hpp"
#include "rwc/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

namespace rwc {

void StepDistribution::validate() const {
  if (support.empty()) throw std::invalid_argument("step distribution: empty support");
  if (support.size() != probs.size())
    throw std::invalid_argument("step distribution: support/probability size mismatch");
  const int d = dim();
  double total = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i].size() != d)
      throw DimensionMismatch("step distribution: inconsistent step dimensions");
    if (!(probs[i] > 0))
      throw std::invalid_argument("step distribution: probabilities must be positive");
    total += probs[i];
    for (std::size_t k = 0; k < i; ++k)
      if (support[k] == support[i])
        throw std::invalid_argument("step distribution: duplicate support point");
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("step distribution: probabilities must sum to 1");
}

std::vector<double> StepDistribution::cumulative() const {
  std::vector<double> cum(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cum.begin());
  cum.back() = 1.0;
  return cum;
}

StepDistribution StepDistribution::reflected() const {
  StepDistribution out;
  out.probs = probs;
  out.support.reserve(support.size());
  for (const auto& s : support) out.support.push_back(-s);
  return out;
}

double StepDistribution::max_step_norm() const {
  double m = 0;
  for (const auto& s : support) m = std::max(m, s.cast<double>().norm());
  return m;
}

std::pair<Vec, Mat> moments(const StepDistribution& dist) {
  dist.validate();
  const int d = dist.dim();
  Vec mean = Vec::Zero(d);
  Mat second = Mat::Zero(d, d);
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    Vec s = dist.support[i].cast<double>();
    mean += dist.probs[i] * s;
    second += dist.probs[i] * s * s.transpose();
  }
  return {mean, second - mean * mean.transpose()};
}

Mat whiten(const StepDistribution& dist) {
  auto [mean, cov] = moments(dist);
  if (mean.norm() > 1e-10)
    throw NonzeroMean("whiten: step distribution has nonzero mean");
  Eigen::SelfAdjointEigenSolver<Mat> es(cov);
  if (es.info() != Eigen::Success)
    throw SingularCovariance("whiten: eigendecomposition failed");
  Vec ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-12 * std::max(1.0, ev.maxCoeff()))
    throw SingularCovariance("whiten: covariance is singular");
  Vec inv_sqrt = ev.array().rsqrt();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

WalkSpec make_walk_spec(const Cone& cone, const StepDistribution& dist) {
  Mat m = whiten(dist);
  Cone image = (m - Mat::Identity(m.rows(), m.cols())).norm() < 1e-12
                   ? cone
                   : Cone::image(cone, m);
  return WalkSpec{cone, dist, m, image};
}

namespace {

// Index of the integer lattice generated by the given vectors inside Z^d:
// |det| of a triangular basis from integer column reduction, or 0 when the
// vectors do not span R^d.
long lattice_index(std::vector<IVec> gens, int d) {
  if (gens.empty()) return 0;
  // Column-style Hermite reduction with Euclidean steps.
  std::vector<IVec> basis;
  for (int row = 0; row < d; ++row) {
    // Reduce remaining generators so at most one has a nonzero entry in
    // `row`, using gcd combinations.
    std::size_t pivot = gens.size();
    while (true) {
      std::size_t nz = gens.size();
      int count = 0;
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i](row) != 0) {
          ++count;
          nz = i;
        }
      if (count <= 1) {
        pivot = count == 1 ? nz : gens.size();
        break;
      }
      // Find the two entries of smallest |value| and reduce the larger.
      std::size_t a = gens.size(), b = gens.size();
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i](row) == 0) continue;
        if (a == gens.size() || std::abs(gens[i](row)) < std::abs(gens[a](row))) {
          b = a;
          a = i;
        } else if (b == gens.size() || std::abs(gens[i](row)) < std::abs(gens[b](row))) {
          b = i;
        }
      }
      int q = gens[b](row) / gens[a](row);
      gens[b] -= q * gens[a];
      if (gens[b](row) == 0 && gens[b].isZero())
        gens.erase(gens.begin() + static_cast<long>(b));
    }
    if (pivot == gens.size()) return 0;  // no generator hits this row: rank-deficient
    basis.push_back(gens[pivot]);
    gens.erase(gens.begin() + static_cast<long>(pivot));
    // Later rows must not reuse this row: remaining gens already have 0 there.
  }
  long det = 1;
  for (int row = 0; row < d; ++row) det *= std::abs(static_cast<long>(basis[row](row)));
  return det;
}

}  // namespace

AssumptionReport check_assumptions(const WalkSpec& spec) {
  auto [mean, cov] = moments(spec.dist);
  const int d = spec.dist.dim();
  bool normalized = mean.norm() <= 1e-10 &&
                    (cov - Mat::Identity(d, d)).norm() <= 1e-8;
  // Finite support: all power moments exist.
  bool moment_ok = true;
  double cone_p = spectral_data(spec.cone).p();
  constexpr double kDeltaDefault = 0.1;
  double alpha_required = std::max(cone_p, 2.0 + kDeltaDefault);

  // Sufficient aperiodicity test: the lattice generated by the pairwise step
  // differences must be all of Z^d. Full-rank proper sublattice => the walk
  // is confined to shifting cosets => certainly not strongly aperiodic.
  std::optional<bool> aperiodic;
  std::vector<IVec> diffs;
  for (std::size_t i = 0; i < spec.dist.support.size(); ++i)
    for (std::size_t k = i + 1; k < spec.dist.support.size(); ++k) {
      IVec diff = spec.dist.support[i] - spec.dist.support[k];
      if (!diff.isZero()) diffs.push_back(diff);
    }
  long index = lattice_index(diffs, d);
  if (index == 1)
    aperiodic = true;
  else if (index > 1)
    aperiodic = false;
  // index 0: support differences span a lower-dimensional sublattice; the
  // sufficient test is inconclusive.
  return AssumptionReport{normalized, moment_ok, aperiodic, alpha_required};
}

TiltResult cramer_tilt(const std::vector<IVec>& steps) {
  if (steps.empty()) throw std::invalid_argument("cramer_tilt: empty step multiset");
  const int d = static_cast<int>(steps[0].size());
  const double n = static_cast<double>(steps.size());
  auto big_r = [&](const Vec& h) {
    double s = 0;
    for (const auto& st : steps) s += std::exp(h.dot(st.cast<double>()));
    return s / n;
  };
  Vec h = Vec::Zero(d);
  double r = big_r(h);
  for (int iter = 0; iter < 500; ++iter) {
    Vec grad = Vec::Zero(d);
    Mat hess = Mat::Zero(d, d);
    for (const auto& st : steps) {
      Vec s = st.cast<double>();
      double w = std::exp(h.dot(s)) / n;
      grad += w * s;
      hess += w * s * s.transpose();
    }
    // Relative tolerance: grad / R is the mean of the tilted law, which is
    // the quantity that must vanish (R itself can tend to 0 when the steps
    // sit in a half-space, sending the absolute gradient to 0 spuriously).
    if (grad.norm() <= 1e-12 * r) break;
    Mat reg = hess + 1e-12 * hess.trace() * Mat::Identity(d, d);
    Vec delta = reg.ldlt().solve(-grad);
    double step = 1.0;
    int halvings = 0;
    while (big_r(h + step * delta) > r && halvings < 60) {
      step *= 0.5;
      ++halvings;
    }
    if (halvings == 60) break;
    h += step * delta;
    r = big_r(h);
    if (h.norm() > 60.0) {
      // Escaping to infinity: the steps sit in a closed half-space. Verify
      // the witness direction before reporting.
      Vec c = -h.normalized();
      bool half_space = true;
      for (const auto& st : steps)
        if (c.dot(st.cast<double>()) < -1e-9) half_space = false;
      if (half_space)
        throw NoInteriorMinimum(
            "cramer_tilt: steps lie in a closed half-space; R has no interior minimum");
      throw NonConvergence("cramer_tilt: Newton iteration diverged");
    }
  }
  {
    Vec grad = Vec::Zero(d);
    for (const auto& st : steps) grad += std::exp(h.dot(st.cast<double>())) / n * st.cast<double>();
    if (grad.norm() > 1e-12 * big_r(h))
      throw NonConvergence("cramer_tilt: gradient tolerance not reached");
  }
  r = big_r(h);
  // Tilted law: collapse the multiset, weight exp(<h0, s>) / (N R(h0)).
  std::map<std::vector<int>, double> agg;
  for (const auto& st : steps) {
    std::vector<int> key(st.data(), st.data() + st.size());
    agg[key] += std::exp(h.dot(st.cast<double>())) / (n * r);
  }
  StepDistribution tilted;
  for (const auto& [key, pr] : agg) {
    IVec s(d);
    for (int i = 0; i < d; ++i) s(i) = key[static_cast<std::size_t>(i)];
    tilted.support.push_back(s);
    tilted.probs.push_back(pr);
  }
  double total = std::accumulate(tilted.probs.begin(), tilted.probs.end(), 0.0);
  for (auto& pr : tilted.probs) pr /= total;
  tilted.validate();
  return TiltResult{h, r, tilted};
}

std::vector<long> coordinate_spacing(const StepDistribution& dist) {
  const int d = dist.dim();
  std::vector<long> spacing(static_cast<std::size_t>(d), 0);
  for (std::size_t a = 0; a < dist.support.size(); ++a)
    for (std::size_t b = a + 1; b < dist.support.size(); ++b)
      for (int i = 0; i < d; ++i)
        spacing[static_cast<std::size_t>(i)] =
            std::gcd(spacing[static_cast<std::size_t>(i)],
                     static_cast<long>(std::abs(dist.support[a](i) - dist.support[b](i))));
  for (auto& g : spacing)
    if (g == 0) g = 1;
  return spacing;
}

std::vector<IVec> sample_path(const StepDistribution& dist, const IVec& x, int n, Rng& rng) {
  auto cum = dist.cumulative();
  std::vector<IVec> path;
  path.reserve(static_cast<std::size_t>(n) + 1);
  path.push_back(x);
  IVec pos = x;
  for (int k = 0; k < n; ++k) {
    pos += dist.support[rng.next_discrete(cum)];
    path.push_back(pos);
  }
  return path;
}

StepDistribution parse_steps_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    double val;
    while (ls >> val) row.push_back(val);
    if (!ls.eof() && ls.fail()) throw std::invalid_argument("step file: malformed line: " + line);
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty()) throw std::invalid_argument("step file: no steps");
  std::size_t cols = rows[0].size();
  for (const auto& row : rows)
    if (row.size() != cols)
      throw std::invalid_argument("step file: inconsistent column counts");
  // The last column holds probabilities when every entry lies in (0, 1] and
  // the column sums to 1; otherwise all columns are step coordinates.
  bool has_probs = false;
  if (cols >= 2) {
    double total = 0;
    bool plausible = true;
    for (const auto& row : rows) {
      double last = row.back();
      if (!(last > 0) || last > 1.0) plausible = false;
      total += last;
    }
    has_probs = plausible && std::abs(total - 1.0) <= 1e-9;
  }
  std::size_t d = has_probs ? cols - 1 : cols;
  StepDistribution dist;
  for (const auto& row : rows) {
    IVec s(static_cast<int>(d));
    for (std::size_t i = 0; i < d; ++i) {
      double c = row[i];
      if (std::abs(c - std::round(c)) > 1e-9)
        throw std::invalid_argument("step file: step coordinates must be integers");
      s(static_cast<int>(i)) = static_cast<int>(std::lround(c));
    }
    dist.support.push_back(s);
    dist.probs.push_back(has_probs ? row.back() : 1.0 / static_cast<double>(rows.size()));
  }
  dist.validate();
  return dist;
}

StepDistribution parse_steps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("step file: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_steps_text(buf.str());
}

std::vector<IVec> parse_step_multiset_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<IVec> steps;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    double val;
    while (ls >> val) row.push_back(val);
    if (row.empty()) continue;
    if (cols == 0) cols = row.size();
    if (row.size() != cols)
      throw std::invalid_argument("step multiset: inconsistent column counts");
    IVec s(static_cast<int>(cols));
    for (std::size_t i = 0; i < cols; ++i) {
      if (std::abs(row[i] - std::round(row[i])) > 1e-9)
        throw std::invalid_argument("step multiset: coordinates must be integers");
      s(static_cast<int>(i)) = static_cast<int>(std::lround(row[i]));
    }
    steps.push_back(s);
  }
  if (steps.empty()) throw std::invalid_argument("step multiset: no steps");
  return steps;
}

std::vector<IVec> parse_step_multiset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("step multiset: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_step_multiset_text(buf.str());
}

}  // namespace rwc

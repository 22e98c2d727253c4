#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace rwc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ConeKind { HalfLine, Orthant, Wedge2D, WeylA, WeylC, WeylD, LinearImage };

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedCone : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Cone {
public:
  static Cone half_line();
  static Cone orthant(int d);
  static Cone wedge(double alpha);  // {r>0, 0<theta<alpha}, alpha in (0,2pi)
  static Cone weyl_a(int d);        // x1 < x2 < ... < xd
  static Cone weyl_c(int d);        // 0 < x1 < ... < xd
  static Cone weyl_d(int d);        // |x1| < x2 < ... < xd
  static Cone image(const Cone& base, const Mat& map, double det_tol = 1e-12);

  ConeKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  const Cone& base() const { return *base_; }
  const Mat& map() const { return map_; }
  const Mat& inv_map() const { return inv_map_; }

  // 2D cones are all rotated wedges {theta0 < theta < theta0 + alpha}.
  // Returns (theta0, alpha) when this cone has such a representation.
  std::optional<std::pair<double, double>> wedge_form() const;

  // Isotropic-scaling images reduce to their base cone for spectral purposes.
  bool is_isotropic_image(double* scale = nullptr) const;

  std::string to_string() const;

private:
  Cone(ConeKind k, int d) : kind_(k), dim_(d) {}
  ConeKind kind_;
  int dim_;
  double alpha_ = 0;
  std::shared_ptr<const Cone> base_;
  Mat map_, inv_map_;
};

// Open-cone membership; boundary points are outside.
bool contains(const Cone& cone, const Vec& x);

// Euclidean distance to the boundary for x in K, 0 for x on or outside
// (for the nonconvex wedge catalog entries likewise 0 outside K).
double dist_to_boundary(const Cone& cone, const Vec& x);

// Cone spec strings: halfline | orthant:d=2 | wedge:alpha=<rad> |
// weylA:d=3 | weylC:d=2 | weylD:d=3 | image:<base>;m=<row-major entries>
Cone parse_cone(const std::string& spec);

}  // namespace rwc

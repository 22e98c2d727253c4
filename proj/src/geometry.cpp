#include "rwc/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rwc {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap_2pi(double a) {
  double r = std::fmod(a, 2 * kPi);
  if (r < 0) r += 2 * kPi;
  return r;
}

void check_dim(const Cone& c, const Vec& x) {
  if (x.size() != c.dim())
    throw DimensionMismatch("point dimension " + std::to_string(x.size()) +
                            " does not match cone dimension " + std::to_string(c.dim()));
}
}  // namespace

Cone Cone::half_line() { return Cone(ConeKind::HalfLine, 1); }

Cone Cone::orthant(int d) {
  if (d < 1) throw std::invalid_argument("orthant: d must be >= 1");
  return Cone(ConeKind::Orthant, d);
}

Cone Cone::wedge(double alpha) {
  if (!(alpha > 0 && alpha < 2 * kPi))
    throw std::invalid_argument("wedge: alpha must be in (0, 2pi)");
  Cone c(ConeKind::Wedge2D, 2);
  c.alpha_ = alpha;
  return c;
}

Cone Cone::weyl_a(int d) {
  if (d < 2) throw std::invalid_argument("weyl_a: d must be >= 2");
  return Cone(ConeKind::WeylA, d);
}

Cone Cone::weyl_c(int d) {
  if (d < 1) throw std::invalid_argument("weyl_c: d must be >= 1");
  return Cone(ConeKind::WeylC, d);
}

Cone Cone::weyl_d(int d) {
  if (d < 2) throw std::invalid_argument("weyl_d: d must be >= 2");
  return Cone(ConeKind::WeylD, d);
}

Cone Cone::image(const Cone& base, const Mat& map, double det_tol) {
  if (map.rows() != base.dim() || map.cols() != base.dim())
    throw std::invalid_argument("image: map must be d x d");
  double det = map.determinant();
  if (std::abs(det) <= det_tol)
    throw std::invalid_argument("image: map is singular (|det| <= tol)");
  Cone c(ConeKind::LinearImage, base.dim());
  c.base_ = std::make_shared<Cone>(base);
  c.map_ = map;
  c.inv_map_ = map.inverse();
  return c;
}

std::optional<std::pair<double, double>> Cone::wedge_form() const {
  switch (kind_) {
    case ConeKind::Wedge2D:
      return std::pair{0.0, alpha_};
    case ConeKind::Orthant:
      if (dim_ == 2) return std::pair{0.0, kPi / 2};
      return std::nullopt;
    case ConeKind::WeylA:
      if (dim_ == 2) return std::pair{kPi / 4, kPi};
      return std::nullopt;
    case ConeKind::WeylC:
      if (dim_ == 2) return std::pair{kPi / 4, kPi / 4};
      if (dim_ == 1) return std::nullopt;  // weylC(1) == halfline handled elsewhere
      return std::nullopt;
    case ConeKind::WeylD:
      if (dim_ == 2) return std::pair{kPi / 4, kPi / 2};
      return std::nullopt;
    case ConeKind::LinearImage: {
      auto bf = base_->wedge_form();
      if (!bf) return std::nullopt;
      auto dir = [&](double th) {
        Vec e(2);
        e << std::cos(th), std::sin(th);
        Vec w = map_ * e;
        return std::atan2(w(1), w(0));
      };
      double p1 = dir(bf->first);
      double p2 = dir(bf->first + bf->second);
      double pm = dir(bf->first + bf->second / 2);
      double w = wrap_2pi(p2 - p1);
      if (wrap_2pi(pm - p1) < w) return std::pair{p1, w};
      return std::pair{p2, 2 * kPi - w};
    }
    default:
      return std::nullopt;
  }
}

bool Cone::is_isotropic_image(double* scale) const {
  if (kind_ != ConeKind::LinearImage) return false;
  double c = map_(0, 0);
  if (c <= 0) return false;
  if ((map_ - c * Mat::Identity(dim_, dim_)).norm() > 1e-12 * c) return false;
  if (scale) *scale = c;
  return true;
}

std::string Cone::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case ConeKind::HalfLine: os << "halfline"; break;
    case ConeKind::Orthant: os << "orthant:d=" << dim_; break;
    case ConeKind::Wedge2D: os << "wedge:alpha=" << alpha_; break;
    case ConeKind::WeylA: os << "weylA:d=" << dim_; break;
    case ConeKind::WeylC: os << "weylC:d=" << dim_; break;
    case ConeKind::WeylD: os << "weylD:d=" << dim_; break;
    case ConeKind::LinearImage: {
      os << "image:" << base_->to_string() << ";m=";
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
          os << map_(i, j) << ((i == dim_ - 1 && j == dim_ - 1) ? "" : ",");
      break;
    }
  }
  return os.str();
}

bool contains(const Cone& cone, const Vec& x) {
  check_dim(cone, x);
  if (!x.allFinite()) throw std::invalid_argument("contains: non-finite point");
  switch (cone.kind()) {
    case ConeKind::HalfLine:
      return x(0) > 0;
    case ConeKind::Orthant:
      return (x.array() > 0).all();
    case ConeKind::WeylA: {
      for (int i = 0; i + 1 < x.size(); ++i)
        if (!(x(i) < x(i + 1))) return false;
      return true;
    }
    case ConeKind::WeylC: {
      if (!(x(0) > 0)) return false;
      for (int i = 0; i + 1 < x.size(); ++i)
        if (!(x(i) < x(i + 1))) return false;
      return true;
    }
    case ConeKind::WeylD: {
      if (!(std::abs(x(0)) < x(1))) return false;
      for (int i = 1; i + 1 < x.size(); ++i)
        if (!(x(i) < x(i + 1))) return false;
      return true;
    }
    case ConeKind::Wedge2D: {
      double r = x.norm();
      if (r == 0) return false;
      double th = wrap_2pi(std::atan2(x(1), x(0)));
      return th > 0 && th < cone.alpha();
    }
    case ConeKind::LinearImage:
      return contains(cone.base(), cone.inv_map() * x);
  }
  return false;
}

double dist_to_boundary(const Cone& cone, const Vec& x) {
  check_dim(cone, x);
  switch (cone.kind()) {
    case ConeKind::HalfLine:
      return x(0) > 0 ? x(0) : 0.0;
    case ConeKind::Orthant: {
      double m = x.minCoeff();
      return m > 0 ? m : 0.0;
    }
    case ConeKind::WeylA: {
      double m = std::numeric_limits<double>::infinity();
      for (int i = 0; i + 1 < x.size(); ++i) m = std::min(m, x(i + 1) - x(i));
      return m > 0 ? m / std::sqrt(2.0) : 0.0;
    }
    case ConeKind::WeylC: {
      double m = x(0) * std::sqrt(2.0);  // wall x1=0 has unscaled distance x1
      for (int i = 0; i + 1 < x.size(); ++i) m = std::min(m, x(i + 1) - x(i));
      return m > 0 ? m / std::sqrt(2.0) : 0.0;
    }
    case ConeKind::WeylD: {
      double m = std::min(x(1) - x(0), x(1) + x(0));
      for (int i = 1; i + 1 < x.size(); ++i) m = std::min(m, x(i + 1) - x(i));
      return m > 0 ? m / std::sqrt(2.0) : 0.0;
    }
    case ConeKind::Wedge2D: {
      if (!contains(cone, x)) return 0.0;
      double r = x.norm();
      double th = wrap_2pi(std::atan2(x(1), x(0)));
      double delta = std::min(th, cone.alpha() - th);
      return delta < kPi / 2 ? r * std::sin(delta) : r;
    }
    case ConeKind::LinearImage: {
      if (!contains(cone, x)) return 0.0;
      // lower bound through the preimage; exact for isotropic maps
      Eigen::JacobiSVD<Mat> svd(cone.map());
      return dist_to_boundary(cone.base(), cone.inv_map() * x) *
             svd.singularValues().minCoeff();
    }
  }
  return 0.0;
}

namespace {

double parse_kv(const std::string& s, const std::string& key) {
  auto pos = s.find(key + "=");
  if (pos == std::string::npos)
    throw std::invalid_argument("cone spec: missing " + key + "= in '" + s + "'");
  return std::stod(s.substr(pos + key.size() + 1));
}

}  // namespace

Cone parse_cone(const std::string& spec) {
  if (spec == "halfline") return Cone::half_line();
  auto starts = [&](const char* p) { return spec.rfind(p, 0) == 0; };
  if (starts("orthant:")) return Cone::orthant(static_cast<int>(parse_kv(spec, "d")));
  if (starts("wedge:")) return Cone::wedge(parse_kv(spec, "alpha"));
  if (starts("weylA:")) return Cone::weyl_a(static_cast<int>(parse_kv(spec, "d")));
  if (starts("weylC:")) return Cone::weyl_c(static_cast<int>(parse_kv(spec, "d")));
  if (starts("weylD:")) return Cone::weyl_d(static_cast<int>(parse_kv(spec, "d")));
  if (starts("image:")) {
    auto semi = spec.rfind(";m=");
    if (semi == std::string::npos)
      throw std::invalid_argument("cone spec: image requires ;m=<entries>");
    Cone base = parse_cone(spec.substr(6, semi - 6));
    std::vector<double> entries;
    std::string rest = spec.substr(semi + 3);
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) entries.push_back(std::stod(tok));
    int d = base.dim();
    if (static_cast<int>(entries.size()) != d * d)
      throw std::invalid_argument("cone spec: image map needs d*d entries");
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = entries[i * d + j];
    return Cone::image(base, m);
  }
  throw std::invalid_argument("unrecognized cone spec '" + spec + "'");
}

}  // namespace rwc

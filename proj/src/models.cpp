#include "levelset/models.hpp"

#include <cmath>

#include "levelset/errors.hpp"
#include "levelset/quadrature.hpp"
#include "levelset/rng.hpp"

namespace levelset {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr double kPhiMax = 0.39894228040143267793994605993438187;  // 1/sqrt(2*pi)

double normal_pdf(double x) { return kPhiMax * std::exp(-0.5 * x * x); }
double normal_cdf(double x) { return 0.5 * (1.0 + std::erf(x / kSqrt2)); }

}  // namespace

double DensityModel::pdf(double x) const {
  if (dim_ != 1) throw DimensionMismatch("1D pdf of a 2D model");
  return pdf1_(x);
}

double DensityModel::pdf(Vec2 x) const {
  if (dim_ != 2) throw DimensionMismatch("2D pdf of a 1D model");
  return radial_pdf_(norm(x));
}

double DensityModel::cdf(double x) const {
  if (dim_ != 1) throw DimensionMismatch("cdf is 1D only");
  return cdf1_(x);
}

double DensityModel::radial_mass(double r) const {
  if (dim_ != 2) throw DimensionMismatch("radial_mass is 2D only");
  return radial_mass_(std::min(r, support_radius_));
}

void DensityModel::sample(std::size_t n, std::uint64_t seed,
                          std::vector<double>* xs, std::vector<double>* ys) const {
  Rng rng(seed);
  xs->clear();
  xs->reserve(n);
  if (dim_ == 1) {
    if (ys) ys->clear();
    for (std::size_t i = 0; i < n; ++i) xs->push_back(inv_cdf1_(rng.uniform01()));
    return;
  }
  if (!ys) throw InvalidParameter("2D sampling requires a y output");
  ys->clear();
  ys->reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radial_sampler_(rng);
    const double theta = 2.0 * kPi * rng.uniform01();
    xs->push_back(r * std::cos(theta));
    ys->push_back(r * std::sin(theta));
  }
}

std::vector<double> DensityModel::sample_1d(std::size_t n, std::uint64_t seed) const {
  std::vector<double> xs;
  sample(n, seed, &xs);
  return xs;
}

double DensityModel::probability_of_interval(double lo, double hi) const {
  if (dim_ != 1) throw DimensionMismatch("interval probability of a 2D model");
  const double a = std::max(lo, support_lo_);
  const double b = std::min(hi, support_hi_);
  if (a >= b) return 0.0;
  return integrate(pdf1_, a, b, 1e-10);
}

double DensityModel::probability_of(const ConvexBody& a) const {
  if (a.dimension() != dim_) throw DimensionMismatch("body/model dimension");
  if (dim_ == 1) return probability_of_interval(a.interval().a, a.interval().b);
  // Radially symmetric density: reduce to a 1D integral over the angle of
  // the mass captured along each ray from the origin.
  const auto slice = [&](double theta) {
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    double t0, t1;
    if (!a.ray_intersect({0.0, 0.0}, dir, &t0, &t1)) return 0.0;
    t0 = std::min(t0, support_radius_);
    t1 = std::min(t1, support_radius_);
    if (t0 >= t1) return 0.0;
    return radial_mass_(t1) - radial_mass_(t0);
  };
  return integrate(slice, 0.0, 2.0 * kPi, 1e-6);
}

double DensityModel::boundary_derivative(bool plus_side, double boundary_param) const {
  return plus_side ? oracle_.f_prime_plus(boundary_param)
                   : oracle_.f_prime_minus(boundary_param);
}

double excess_mass_of(const DensityModel& model, const ConvexBody& a) {
  return model.probability_of(a) - model.lambda() * a.volume();
}

const std::vector<std::string>& builtin_model_names() {
  static const std::vector<std::string> names = {
      "triangular1d", "normal1d", "epanechnikov1d", "cone2d", "gaussian2d"};
  return names;
}

DensityModel builtin_model(const std::string& name, double lambda) {
  DensityModel m;
  m.name_ = name;
  LevelSetOracle& o = m.oracle_;
  o.lambda = lambda;

  if (name == "triangular1d") {
    m.dim_ = 1;
    m.max_density_ = 1.0;
    if (!(lambda > 0.0 && lambda < m.max_density_)) {
      throw LambdaOutOfRange("triangular1d requires 0 < lambda < 1");
    }
    m.support_lo_ = -1.0;
    m.support_hi_ = 1.0;
    const double edge = 1.0 - lambda;
    o.body = Interval{-edge, edge};
    o.v_lambda = 2.0 * edge;
    o.p_lambda = 1.0 - lambda * lambda;
    o.f_prime_plus = [](double) { return 1.0; };
    o.f_prime_minus = [](double) { return 1.0; };
    m.pdf1_ = [](double x) { return std::max(0.0, 1.0 - std::abs(x)); };
    m.cdf1_ = [](double x) {
      if (x <= -1.0) return 0.0;
      if (x >= 1.0) return 1.0;
      if (x < 0.0) return 0.5 * (1.0 + x) * (1.0 + x);
      return 1.0 - 0.5 * (1.0 - x) * (1.0 - x);
    };
    m.inv_cdf1_ = [](double u) {
      return u < 0.5 ? std::sqrt(2.0 * u) - 1.0 : 1.0 - std::sqrt(2.0 * (1.0 - u));
    };
  } else if (name == "normal1d") {
    m.dim_ = 1;
    m.max_density_ = kPhiMax;
    if (!(lambda > 0.0 && lambda < m.max_density_)) {
      throw LambdaOutOfRange("normal1d requires 0 < lambda < 1/sqrt(2*pi)");
    }
    m.support_lo_ = -40.0;
    m.support_hi_ = 40.0;
    const double edge = std::sqrt(-2.0 * std::log(lambda / kPhiMax));
    o.body = Interval{-edge, edge};
    o.v_lambda = 2.0 * edge;
    o.p_lambda = std::erf(edge / kSqrt2);
    // |phi'(x)| = |x| phi(x) = edge * lambda on the boundary.
    const double slope = edge * lambda;
    o.f_prime_plus = [slope](double) { return slope; };
    o.f_prime_minus = [slope](double) { return slope; };
    m.pdf1_ = normal_pdf;
    m.cdf1_ = normal_cdf;
    m.inv_cdf1_ = inverse_normal_cdf;
  } else if (name == "epanechnikov1d") {
    m.dim_ = 1;
    m.max_density_ = 0.75;
    if (!(lambda > 0.0 && lambda < m.max_density_)) {
      throw LambdaOutOfRange("epanechnikov1d requires 0 < lambda < 3/4");
    }
    m.support_lo_ = -1.0;
    m.support_hi_ = 1.0;
    const double edge = std::sqrt(1.0 - 4.0 * lambda / 3.0);
    o.body = Interval{-edge, edge};
    o.v_lambda = 2.0 * edge;
    o.p_lambda = 1.5 * edge - 0.5 * edge * edge * edge;
    const double slope = 1.5 * edge;
    o.f_prime_plus = [slope](double) { return slope; };
    o.f_prime_minus = [slope](double) { return slope; };
    m.pdf1_ = [](double x) {
      return x <= -1.0 || x >= 1.0 ? 0.0 : 0.75 * (1.0 - x * x);
    };
    m.cdf1_ = [](double x) {
      if (x <= -1.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return 0.25 * (2.0 + 3.0 * x - x * x * x);
    };
    m.inv_cdf1_ = [](double u) {
      return 2.0 * std::sin(std::asin(2.0 * u - 1.0) / 3.0);
    };
  } else if (name == "cone2d") {
    m.dim_ = 2;
    m.max_density_ = 3.0 / kPi;
    if (!(lambda > 0.0 && lambda < m.max_density_)) {
      throw LambdaOutOfRange("cone2d requires 0 < lambda < 3/pi");
    }
    m.support_radius_ = 1.0;
    const double r = 1.0 - kPi * lambda / 3.0;
    o.body = Ball{{0.0, 0.0}, r};
    o.v_lambda = kPi * r * r;
    o.p_lambda = 3.0 * r * r - 2.0 * r * r * r;
    const double slope = 3.0 / kPi;
    o.f_prime_plus = [slope](double) { return slope; };
    o.f_prime_minus = [slope](double) { return slope; };
    m.radial_pdf_ = [](double rr) {
      return rr >= 1.0 ? 0.0 : (3.0 / kPi) * (1.0 - rr);
    };
    m.radial_mass_ = [](double rr) {
      const double r2 = std::min(rr, 1.0);
      return (3.0 / kPi) * (0.5 * r2 * r2 - r2 * r2 * r2 / 3.0);
    };
    // |X| has density 6 r (1 - r), i.e. Beta(2,2): the median of three
    // independent uniforms.
    m.radial_sampler_ = [](Rng& rng) {
      double a = rng.uniform01(), b = rng.uniform01(), c = rng.uniform01();
      const double lo = std::min(a, std::min(b, c));
      const double hi = std::max(a, std::max(b, c));
      return a + b + c - lo - hi;
    };
  } else if (name == "gaussian2d") {
    m.dim_ = 2;
    m.max_density_ = 1.0 / (2.0 * kPi);
    if (!(lambda > 0.0 && lambda < m.max_density_)) {
      throw LambdaOutOfRange("gaussian2d requires 0 < lambda < 1/(2*pi)");
    }
    m.support_radius_ = 60.0;
    const double r = std::sqrt(-2.0 * std::log(2.0 * kPi * lambda));
    o.body = Ball{{0.0, 0.0}, r};
    o.v_lambda = kPi * r * r;
    o.p_lambda = 1.0 - std::exp(-0.5 * r * r);
    const double slope = r * lambda;  // |grad f| = r f(r) on the boundary
    o.f_prime_plus = [slope](double) { return slope; };
    o.f_prime_minus = [slope](double) { return slope; };
    m.radial_pdf_ = [](double rr) {
      return std::exp(-0.5 * rr * rr) / (2.0 * kPi);
    };
    m.radial_mass_ = [](double rr) {
      return (1.0 - std::exp(-0.5 * rr * rr)) / (2.0 * kPi);
    };
    m.radial_sampler_ = [](Rng& rng) {
      return std::sqrt(-2.0 * std::log(rng.uniform01()));
    };
  } else {
    throw InvalidParameter("unknown model: " + name);
  }

  o.e_lambda = o.p_lambda - lambda * o.v_lambda;

  // Registration self-checks: unit total mass by quadrature, positive
  // excess mass.
  double total;
  if (m.dim_ == 1) {
    total = integrate(m.pdf1_, m.support_lo_, m.support_hi_, 1e-9);
  } else {
    const auto& rp = m.radial_pdf_;
    total = 2.0 * kPi *
            integrate([&rp](double rr) { return rp(rr) * rr; }, 0.0,
                      m.support_radius_, 1e-9);
  }
  if (std::abs(total - 1.0) > 1e-8) {
    throw QuadratureFailure(name + " pdf mass " + std::to_string(total));
  }
  if (!(o.e_lambda > 0.0)) throw LambdaOutOfRange("e_lambda must be positive");
  return m;
}

}  // namespace levelset

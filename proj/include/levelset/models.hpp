#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "levelset/geometry.hpp"
#include "levelset/rng.hpp"

namespace levelset {

// Closed-form description of the level set of a density at its level:
// the true body, its probability mass, volume and excess mass, and the
// one-sided density slopes on the boundary.
struct LevelSetOracle {
  double lambda = 0.0;
  ConvexBody body;
  double p_lambda = 0.0;
  double v_lambda = 0.0;
  double e_lambda = 0.0;
  // Boundary parameter: endpoint index (0 = left, 1 = right) in 1D,
  // angle in 2D.
  std::function<double(double)> f_prime_plus;
  std::function<double(double)> f_prime_minus;
};

// A test density with exact analytic structure. 2D models are radially
// symmetric about the origin, which the probability quadrature exploits.
class DensityModel {
 public:
  const std::string& name() const { return name_; }
  int dimension() const { return dim_; }
  double lambda() const { return oracle_.lambda; }
  const LevelSetOracle& oracle() const { return oracle_; }

  double pdf(double x) const;
  double pdf(Vec2 x) const;

  // i.i.d. draws, deterministic in the seed. 1D output is in xs (ys empty);
  // 2D fills both coordinate arrays.
  void sample(std::size_t n, std::uint64_t seed, std::vector<double>* xs,
              std::vector<double>* ys = nullptr) const;
  std::vector<double> sample_1d(std::size_t n, std::uint64_t seed) const;

  double cdf(double x) const;  // 1D only

  // P(A) by adaptive quadrature (abs tol 1e-10 in 1D, 1e-6 in 2D).
  double probability_of(const ConvexBody& a) const;
  double probability_of_interval(double lo, double hi) const;

  // |grad f| on the indicated side of the level-set boundary.
  double boundary_derivative(bool plus_side, double boundary_param) const;

  double support_radius() const { return support_radius_; }
  double max_density() const { return max_density_; }

  // 2D only: integral of f(r) r dr over [0, min(r, support)], per unit angle.
  double radial_mass(double r) const;

 private:
  friend DensityModel builtin_model(const std::string& name, double lambda);

  std::string name_;
  int dim_ = 1;
  LevelSetOracle oracle_;
  double support_lo_ = 0.0, support_hi_ = 0.0;  // 1D support
  double support_radius_ = 0.0;                 // 2D support (inf for gaussians)
  double max_density_ = 0.0;

  std::function<double(double)> pdf1_;
  std::function<double(double)> cdf1_;
  std::function<double(double)> inv_cdf1_;
  std::function<double(double)> radial_pdf_;   // 2D: f as a function of |x|
  std::function<double(double)> radial_mass_;  // 2D: integral of f(r) r dr on [0, R]
  std::function<double(Rng&)> radial_sampler_; // 2D: draw |X|
};

// Registry of built-in densities: triangular1d, normal1d, epanechnikov1d,
// cone2d, gaussian2d. Throws LambdaOutOfRange unless 0 < lambda < max f.
DensityModel builtin_model(const std::string& name, double lambda);

const std::vector<std::string>& builtin_model_names();

// Excess mass e_lambda(A) = P(A) - lambda * mu(A), P by quadrature.
double excess_mass_of(const DensityModel& model, const ConvexBody& a);

}  // namespace levelset

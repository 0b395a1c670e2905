#pragma once

#include <cstdint>
#include <vector>

#include "levelset/cylinder.hpp"

namespace levelset {

struct WienerGrid {
  double step = 0.01;
  double c_max = 8.0;
};

// Two-sided Wiener path on a uniform grid: two independent cumulative sums
// glued at 0 with W(0) = 0. Increments are drawn outward from 0, so
// enlarging c_max extends a path without perturbing its inner part.
class TwoSidedPath {
 public:
  TwoSidedPath(const WienerGrid& grid, double nu_mass, std::uint64_t seed);

  double at(int k) const;  // value at t = k * step, |k| <= half_cells
  int half_cells() const { return half_cells_; }
  double step() const { return step_; }

 private:
  double step_;
  int half_cells_;
  std::vector<double> pos_;  // cumulative sums, index k-1 holds W(k*step)
  std::vector<double> neg_;
};

// One realization of the limiting argmax set and its functionals.
struct LimitDraw {
  CylinderSet argmax_set;
  double objective = 0.0;
  bool constrained = false;
  double m_total = 0.0;
  double m_plus = 0.0;
  double m_minus = 0.0;
  std::vector<double> shifts;
  int tie_count = 0;  // grid cells within 1e-12 of the maximum, beyond the argmax
};

// argmax over IntervalShifts pairs of sqrt(lambda) W(B) - D(B); the two
// boundary problems separate. Throws TruncationHit when an argmax lands
// within two steps of +-c_max.
LimitDraw draw_Z_interval(const DriftSpec& drift, double lambda,
                          const WienerGrid& grid, std::uint64_t seed);

// The same argmax restricted to the symmetric class M(B+) = M(B-), which on
// the interval cylinder is the diagonal t_left = -t_right.
LimitDraw draw_Z_interval_constrained(const DriftSpec& drift, double lambda,
                                      const WienerGrid& grid, std::uint64_t seed);

struct Ball2dGrid {
  int angles = 256;
  double s_step = 0.02;
  double c_max = 6.0;
  int lattice = 41;          // lattice points per shift coordinate
  double lattice_span = 3.0; // lattice covers [-span, span]^3
};

// White-noise field on the (theta, s) cylinder grid over a disc boundary of
// radius r_lambda; cell variances equal their M-mass.
class NoiseField2d {
 public:
  NoiseField2d(const Ball2dGrid& grid, double r_lambda, std::uint64_t seed);

  // Wiener mass of the radial-graph set h (one value per angle); h is
  // rounded to whole cells.
  double wiener(const std::vector<double>& h) const;

  int angles() const { return angles_; }
  double cell_mass() const { return cell_mass_; }
  int half_cells() const { return half_cells_; }
  double s_step() const { return s_step_; }

 private:
  int angles_;
  double s_step_;
  int half_cells_;
  double cell_mass_;
  std::vector<double> pos_;  // cumulative sums, [angle][cell]
  std::vector<double> neg_;
};

// argmax over ball-class radial graphs h(theta) = dr + dx cos + dy sin of
// sqrt(lambda) W(B_h) - D(B_h): lattice scan refined by simplex search.
// The constrained variant enforces M(B+) = M(B-), i.e. dr = 0.
LimitDraw draw_Z_ball2d(const DriftSpec& drift, double lambda, double r_lambda,
                        const Ball2dGrid& grid, bool constrained,
                        std::uint64_t seed);

// Empirical distribution of the draw functionals over independent seeds
// derived from (seed, index); each vector is sorted ascending.
struct ZDistribution {
  std::vector<double> m_total;
  std::vector<double> m_plus;
  std::vector<double> m_minus;
  std::vector<double> objective;
  std::vector<std::vector<double>> shifts;  // one sorted vector per coordinate
};

template <typename DrawFn>
ZDistribution z_distribution(DrawFn&& draw, std::size_t n_draws, std::uint64_t seed);

}  // namespace levelset

#include "levelset/limit_impl.hpp"

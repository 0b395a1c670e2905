#include "levelset/limit.hpp"

#include <cmath>

#include "levelset/errors.hpp"
#include "levelset/estimators.hpp"
#include "levelset/rng.hpp"

namespace levelset {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTieTol = 1e-12;

int cells_of(double x, double step, int cap) {
  const int m = static_cast<int>(std::floor(std::abs(x) / step + 0.5));
  return std::min(m, cap);
}

}  // namespace

TwoSidedPath::TwoSidedPath(const WienerGrid& grid, double nu_mass,
                           std::uint64_t seed)
    : step_(grid.step),
      half_cells_(static_cast<int>(std::floor(grid.c_max / grid.step + 0.5))) {
  if (!(grid.step > 0.0) || !(grid.c_max > grid.step)) {
    throw InvalidParameter("WienerGrid requires 0 < step < c_max");
  }
  const double sd = std::sqrt(grid.step * nu_mass);
  Rng rng_pos(derive_seed(seed, 0x50u));
  Rng rng_neg(derive_seed(seed, 0x4eu));
  pos_.resize(half_cells_);
  neg_.resize(half_cells_);
  double acc = 0.0;
  for (int k = 0; k < half_cells_; ++k) {
    acc += sd * rng_pos.normal();
    pos_[k] = acc;
  }
  acc = 0.0;
  for (int k = 0; k < half_cells_; ++k) {
    acc += sd * rng_neg.normal();
    neg_[k] = acc;
  }
}

double TwoSidedPath::at(int k) const {
  if (k == 0) return 0.0;
  if (k > 0) return pos_[static_cast<std::size_t>(k - 1)];
  return neg_[static_cast<std::size_t>(-k - 1)];
}

namespace {

struct SideArgmax {
  int k = 0;
  double value = 0.0;
  int tie_count = 0;
};

// argmax over the grid of sqrt(lambda) W(t) - g(sign t) t^2 / 2.
SideArgmax side_argmax(const TwoSidedPath& path, double sqrt_lambda,
                       double slope_pos, double slope_neg) {
  const int half = path.half_cells();
  SideArgmax best{0, -1e300, 0};
  for (int k = -half; k <= half; ++k) {
    const double t = k * path.step();
    const double g = k > 0 ? slope_pos : slope_neg;
    const double v = sqrt_lambda * path.at(k) - 0.5 * g * t * t;
    if (v > best.value) {
      best.k = k;
      best.value = v;
      best.tie_count = 0;
    } else if (v >= best.value - kTieTol) {
      ++best.tie_count;
    }
  }
  if (std::abs(best.k) >= half - 1) {
    throw TruncationHit("side argmax within two steps of c_max");
  }
  return best;
}

LimitDraw finish_interval_draw(double t_left, double t_right, double objective,
                               bool constrained, int tie_count) {
  LimitDraw d;
  d.argmax_set = CylinderSet::interval_shifts(t_left, t_right);
  d.objective = objective;
  d.constrained = constrained;
  d.m_total = m_measure(d.argmax_set);
  d.m_plus = m_measure_plus(d.argmax_set);
  d.m_minus = m_measure_minus(d.argmax_set);
  d.shifts = {t_left, t_right};
  d.tie_count = tie_count;
  return d;
}

}  // namespace

LimitDraw draw_Z_interval(const DriftSpec& drift, double lambda,
                          const WienerGrid& grid, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
  const double sq = std::sqrt(lambda);
  const TwoSidedPath left(grid, 1.0, derive_seed(seed, 0));
  const TwoSidedPath right(grid, 1.0, derive_seed(seed, 1));
  const SideArgmax al = side_argmax(left, sq, drift.f_plus(0.0), drift.f_minus(0.0));
  const SideArgmax ar = side_argmax(right, sq, drift.f_plus(1.0), drift.f_minus(1.0));
  return finish_interval_draw(al.k * grid.step, ar.k * grid.step,
                              al.value + ar.value, false,
                              al.tie_count + ar.tie_count);
}

LimitDraw draw_Z_interval_constrained(const DriftSpec& drift, double lambda,
                                      const WienerGrid& grid, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
  const double sq = std::sqrt(lambda);
  const TwoSidedPath left(grid, 1.0, derive_seed(seed, 0));
  const TwoSidedPath right(grid, 1.0, derive_seed(seed, 1));
  const int half = left.half_cells();
  int best_k = 0;
  double best_v = -1e300;
  int ties = 0;
  for (int k = -half; k <= half; ++k) {
    const double t = k * grid.step;
    const double g_left = k > 0 ? drift.f_plus(0.0) : drift.f_minus(0.0);
    const double g_right = -k > 0 ? drift.f_plus(1.0) : drift.f_minus(1.0);
    const double v = sq * (left.at(k) + right.at(-k)) -
                     0.5 * (g_left + g_right) * t * t;
    if (v > best_v) {
      best_k = k;
      best_v = v;
      ties = 0;
    } else if (v >= best_v - kTieTol) {
      ++ties;
    }
  }
  if (std::abs(best_k) >= half - 1) {
    throw TruncationHit("constrained argmax within two steps of c_max");
  }
  return finish_interval_draw(best_k * grid.step, -best_k * grid.step, best_v,
                              true, ties);
}

NoiseField2d::NoiseField2d(const Ball2dGrid& grid, double r_lambda,
                           std::uint64_t seed)
    : angles_(grid.angles),
      s_step_(grid.s_step),
      half_cells_(static_cast<int>(std::floor(grid.c_max / grid.s_step + 0.5))),
      cell_mass_(r_lambda * (2.0 * kPi / grid.angles) * grid.s_step) {
  if (!(r_lambda > 0.0)) throw InvalidParameter("r_lambda must be positive");
  const double sd = std::sqrt(cell_mass_);
  pos_.resize(static_cast<std::size_t>(angles_) * half_cells_);
  neg_.resize(static_cast<std::size_t>(angles_) * half_cells_);
  for (int i = 0; i < angles_; ++i) {
    Rng rng_pos(derive_seed(seed, static_cast<std::uint64_t>(i), 0x50u));
    Rng rng_neg(derive_seed(seed, static_cast<std::uint64_t>(i), 0x4eu));
    double acc = 0.0;
    for (int k = 0; k < half_cells_; ++k) {
      acc += sd * rng_pos.normal();
      pos_[static_cast<std::size_t>(i) * half_cells_ + k] = acc;
    }
    acc = 0.0;
    for (int k = 0; k < half_cells_; ++k) {
      acc += sd * rng_neg.normal();
      neg_[static_cast<std::size_t>(i) * half_cells_ + k] = acc;
    }
  }
}

double NoiseField2d::wiener(const std::vector<double>& h) const {
  if (static_cast<int>(h.size()) != angles_) {
    throw InvalidParameter("h grid does not match the field resolution");
  }
  double total = 0.0;
  for (int i = 0; i < angles_; ++i) {
    const int m = cells_of(h[i], s_step_, half_cells_);
    if (m == 0) continue;
    const std::size_t idx = static_cast<std::size_t>(i) * half_cells_ + (m - 1);
    total += h[i] > 0.0 ? pos_[idx] : neg_[idx];
  }
  return total;
}

LimitDraw draw_Z_ball2d(const DriftSpec& drift, double lambda, double r_lambda,
                        const Ball2dGrid& grid, bool constrained,
                        std::uint64_t seed) {
  if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
  const double sq = std::sqrt(lambda);
  const NoiseField2d field(grid, r_lambda, seed);
  const int g_angles = grid.angles;
  const double dtheta = 2.0 * kPi / g_angles;

  std::vector<double> cos_t(g_angles), sin_t(g_angles), slope_pos(g_angles),
      slope_neg(g_angles);
  for (int i = 0; i < g_angles; ++i) {
    const double theta = dtheta * i;
    cos_t[i] = std::cos(theta);
    sin_t[i] = std::sin(theta);
    slope_pos[i] = drift.f_plus(theta);
    slope_neg[i] = drift.f_minus(theta);
  }

  std::vector<double> h(g_angles);
  const auto fill_h = [&](double dx, double dy, double dr) {
    for (int i = 0; i < g_angles; ++i) {
      h[i] = dr + dx * cos_t[i] + dy * sin_t[i];
    }
  };
  const auto value_of = [&](double dx, double dy, double dr) {
    fill_h(dx, dy, dr);
    double drift_val = 0.0;
    for (int i = 0; i < g_angles; ++i) {
      const double slope = h[i] > 0.0 ? slope_pos[i] : slope_neg[i];
      drift_val += 0.5 * slope * h[i] * h[i];
    }
    drift_val *= r_lambda * dtheta;
    return sq * field.wiener(h) - drift_val;
  };

  const int n_lat = grid.lattice;
  const double span = grid.lattice_span;
  const double lat_step = 2.0 * span / (n_lat - 1);
  double best[3] = {0.0, 0.0, 0.0};
  double best_v = -1e300;
  int ties = 0;
  for (int ix = 0; ix < n_lat; ++ix) {
    const double dx = -span + lat_step * ix;
    for (int iy = 0; iy < n_lat; ++iy) {
      const double dy = -span + lat_step * iy;
      const int nr = constrained ? 1 : n_lat;
      for (int ir = 0; ir < nr; ++ir) {
        const double dr = constrained ? 0.0 : -span + lat_step * ir;
        const double v = value_of(dx, dy, dr);
        if (v > best_v) {
          best_v = v;
          best[0] = dx;
          best[1] = dy;
          best[2] = dr;
          ties = 0;
        } else if (v >= best_v - kTieTol) {
          ++ties;
        }
      }
    }
  }

  // Local refinement around the best lattice point.
  std::vector<double> start = constrained
                                  ? std::vector<double>{best[0], best[1]}
                                  : std::vector<double>{best[0], best[1], best[2]};
  const auto neg_obj = [&](const std::vector<double>& q) {
    return -value_of(q[0], q[1], constrained ? 0.0 : q[2]);
  };
  const SimplexResult sr = nelder_mead(neg_obj, start, lat_step, 1e-9, 300);
  double refined[3] = {sr.x[0], sr.x[1], constrained ? 0.0 : sr.x[2]};
  double refined_v = -sr.value;
  if (refined_v < best_v) {
    refined[0] = best[0];
    refined[1] = best[1];
    refined[2] = best[2];
    refined_v = best_v;
  }
  for (int c = 0; c < 3; ++c) {
    if (std::abs(refined[c] - best[c]) > 2.0 * lat_step) {
      throw GridTooCoarse("refinement moved the optimum beyond two lattice cells");
    }
  }

  fill_h(refined[0], refined[1], refined[2]);
  double max_h = 0.0;
  for (double v : h) max_h = std::max(max_h, std::abs(v));
  if (max_h >= grid.c_max - 2.0 * grid.s_step) {
    throw TruncationHit("optimal radial graph within two cells of c_max");
  }

  LimitDraw d;
  d.argmax_set =
      CylinderSet::radial_graph(h, std::vector<double>(g_angles, r_lambda));
  d.objective = refined_v;
  d.constrained = constrained;
  d.m_total = m_measure(d.argmax_set);
  d.m_plus = m_measure_plus(d.argmax_set);
  d.m_minus = m_measure_minus(d.argmax_set);
  d.shifts = {refined[0], refined[1], refined[2]};
  d.tie_count = ties;
  return d;
}

}  // namespace levelset

#include "levelset/cylinder.hpp"

#include <algorithm>
#include <cmath>

#include "levelset/errors.hpp"
#include "levelset/quadrature.hpp"

namespace levelset {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Lebesgue length of seg(t) symdiff seg(u), where seg(t) is the segment
// between 0 and t.
double segment_symdiff(double t, double u) {
  if (t == 0.0 || u == 0.0 || (t > 0.0) == (u > 0.0)) {
    return std::abs(std::abs(t) - std::abs(u));
  }
  return std::abs(t) + std::abs(u);
}

}  // namespace

CylinderSet CylinderSet::interval_shifts(double t_left, double t_right) {
  CylinderSet b;
  b.repr_ = IntervalShifts{t_left, t_right};
  b.c_bound_ = std::max(std::abs(t_left), std::abs(t_right));
  return b;
}

CylinderSet CylinderSet::radial_graph(std::vector<double> h,
                                      std::vector<double> weight) {
  if (h.size() != weight.size() || h.empty()) {
    throw InvalidParameter("radial graph needs matching h/weight grids");
  }
  CylinderSet b;
  double c = 0.0;
  for (double v : h) c = std::max(c, std::abs(v));
  b.repr_ = RadialGraph{std::move(h), std::move(weight)};
  b.c_bound_ = c;
  return b;
}

CylinderSet CylinderSet::grid(GridIndicator g) {
  CylinderSet b;
  b.c_bound_ = std::max(std::abs(g.s_min), std::abs(g.s_max));
  b.repr_ = std::move(g);
  return b;
}

const IntervalShifts& CylinderSet::shifts() const {
  if (!is_interval_shifts()) throw IncompatibleRepresentations("not interval shifts");
  return std::get<IntervalShifts>(repr_);
}

const RadialGraph& CylinderSet::radial() const {
  if (!is_radial_graph()) throw IncompatibleRepresentations("not a radial graph");
  return std::get<RadialGraph>(repr_);
}

const GridIndicator& CylinderSet::grid_indicator() const {
  if (!is_grid()) throw IncompatibleRepresentations("not a grid indicator");
  return std::get<GridIndicator>(repr_);
}

DriftSpec drift_from_model(const DensityModel& model) {
  const LevelSetOracle& o = model.oracle();
  return {o.f_prime_plus, o.f_prime_minus, o.lambda};
}

namespace {

// Boundary chart of a 2D body: point, outward normal, and surface-measure
// density, sampled at uniform radial angles from the body center.
struct BoundaryChart {
  std::vector<Vec2> point;
  std::vector<Vec2> normal;
  std::vector<double> weight;
  double delta_theta = 0.0;
};

BoundaryChart boundary_chart(const ConvexBody& body, int grid) {
  BoundaryChart ch;
  ch.delta_theta = 2.0 * kPi / grid;
  ch.point.resize(grid);
  ch.normal.resize(grid);
  ch.weight.resize(grid);
  const Vec2 c = body.center2();
  for (int i = 0; i < grid; ++i) {
    const double theta = ch.delta_theta * i;
    const Vec2 e{std::cos(theta), std::sin(theta)};
    ch.point[i] = c + body.radial_extent(theta) * e;
    if (body.is_ball()) {
      ch.normal[i] = e;
      ch.weight[i] = body.ball().radius;
    } else {
      Vec2 nrm = body.ellipsoid().shape.inverse().mul(ch.point[i] - c);
      const double len = norm(nrm);
      ch.normal[i] = {nrm.x / len, nrm.y / len};
    }
  }
  if (body.is_ellipsoid()) {
    // Arc length per unit angle by central differences.
    for (int i = 0; i < grid; ++i) {
      const Vec2 fwd = ch.point[(i + 1) % grid];
      const Vec2 bwd = ch.point[(i + grid - 1) % grid];
      ch.weight[i] = norm(fwd - bwd) / (2.0 * ch.delta_theta);
    }
  }
  return ch;
}

}  // namespace

CylinderSet magnify(const ConvexBody& L, const ConvexBody& A, double eps,
                    const MagnifyConfig& config) {
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  if (L.dimension() != A.dimension()) throw DimensionMismatch("magnify");

  if (L.is_interval()) {
    const Interval& l = L.interval();
    const Interval& a = A.interval();
    const double t_left = (l.a - a.a) / eps;
    const double t_right = (a.b - l.b) / eps;
    if (std::max(std::abs(t_left), std::abs(t_right)) > config.cap) {
      throw NotParallel("interval shifts exceed the parallel cap");
    }
    return CylinderSet::interval_shifts(t_left, t_right);
  }

  if (!A.contains(L.center2())) {
    throw NotParallel("candidate does not cover the level-set center");
  }
  const BoundaryChart ch = boundary_chart(L, config.grid);
  std::vector<double> h(ch.point.size());
  for (std::size_t i = 0; i < ch.point.size(); ++i) {
    // Signed offset of the boundary of A along the outward normal: the
    // larger root is the exit crossing of the normal line.
    double t0, t1;
    if (!A.line_intersect(ch.point[i], ch.normal[i], &t0, &t1)) {
      throw NotParallel("normal line misses the candidate");
    }
    h[i] = t1 / eps;
  }
  double c = 0.0;
  for (double v : h) c = std::max(c, std::abs(v));
  if (c > config.cap) throw NotParallel("radial offsets exceed the parallel cap");
  return CylinderSet::radial_graph(std::move(h), ch.weight);
}

DemagnifyResult demagnify(const ConvexBody& L, const CylinderSet& B, double eps,
                          double tol, SearchClass cls) {
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  if (B.is_interval_shifts()) {
    const IntervalShifts& s = B.shifts();
    const Interval& l = L.interval();
    const double a = l.a - eps * s.t_left;
    const double b = l.b + eps * s.t_right;
    if (!(a <= b)) throw NonRepresentable("shifts collapse the interval");
    return {ConvexBody(Interval{a, b}), 0.0};
  }
  if (!B.is_radial_graph()) {
    throw IncompatibleRepresentations("demagnify needs a parametric set");
  }

  const RadialGraph& rg = B.radial();
  const int grid = static_cast<int>(rg.h.size());
  const BoundaryChart ch = boundary_chart(L, grid);
  std::vector<Vec2> pts(grid);
  for (int i = 0; i < grid; ++i) {
    pts[i] = ch.point[i] + (eps * rg.h[i]) * ch.normal[i];
  }

  ConvexBody fitted{Ball{{0, 0}, 1}};
  if (cls == SearchClass::balls) {
    // Kasa algebraic circle fit: least squares on
    // x^2 + y^2 + b1 x + b2 y + b3 = 0.
    double m[3][4] = {};
    for (const Vec2& p : pts) {
      const double row[3] = {p.x, p.y, 1.0};
      const double z = -(p.x * p.x + p.y * p.y);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m[r][c] += row[r] * row[c];
        m[r][3] += row[r] * z;
      }
    }
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r) {
        if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
      }
      std::swap(m[col], m[piv]);
      if (m[col][col] == 0.0) throw NonRepresentable("degenerate circle fit");
      for (int r = 0; r < 3; ++r) {
        if (r == col) continue;
        const double f = m[r][col] / m[col][col];
        for (int cc = col; cc < 4; ++cc) m[r][cc] -= f * m[col][cc];
      }
    }
    const double b1 = m[0][3] / m[0][0];
    const double b2 = m[1][3] / m[1][1];
    const double b3 = m[2][3] / m[2][2];
    const Vec2 center{-0.5 * b1, -0.5 * b2};
    const double r2 = norm_sq(center) - b3;
    if (!(r2 > 0.0)) throw NonRepresentable("circle fit has no positive radius");
    fitted = Ball{center, std::sqrt(r2)};
  } else {
    // Conic least squares a x^2 + b xy + c y^2 + d x + e y = 1, recovered
    // as a center/shape pair.
    double mat[5][6] = {};
    for (const Vec2& p : pts) {
      const double row[5] = {p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y};
      for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) mat[r][c] += row[r] * row[c];
        mat[r][5] += row[r];
      }
    }
    for (int col = 0; col < 5; ++col) {
      int piv = col;
      for (int r = col + 1; r < 5; ++r) {
        if (std::abs(mat[r][col]) > std::abs(mat[piv][col])) piv = r;
      }
      std::swap(mat[col], mat[piv]);
      if (mat[col][col] == 0.0) throw NonRepresentable("degenerate conic fit");
      for (int r = 0; r < 5; ++r) {
        if (r == col) continue;
        const double f = mat[r][col] / mat[col][col];
        for (int cc = col; cc < 6; ++cc) mat[r][cc] -= f * mat[col][cc];
      }
    }
    const double qa = mat[0][5] / mat[0][0];
    const double qb = mat[1][5] / mat[1][1];
    const double qc = mat[2][5] / mat[2][2];
    const double qd = mat[3][5] / mat[3][3];
    const double qe = mat[4][5] / mat[4][4];
    const Sym2 quad{qa, 0.5 * qb, qc};
    if (!(quad.det() > 0.0) || !(quad.trace() > 0.0)) {
      throw NonRepresentable("conic fit is not an ellipse");
    }
    const Sym2 quad_inv = quad.inverse();
    const Vec2 center = quad_inv.mul({-0.5 * qd, -0.5 * qe});
    const double q0 = dot(center, quad.mul(center)) + qd * center.x +
                      qe * center.y - 1.0;
    if (!(q0 < 0.0)) throw NonRepresentable("conic fit is not an ellipse");
    fitted = Ellipsoid{center, {-q0 * quad_inv.a, -q0 * quad_inv.b,
                                -q0 * quad_inv.c}};
  }

  double rss = 0.0;
  for (const Vec2& p : pts) {
    try {
      const double s = project(fitted, p).s;
      rss += s * s;
    } catch (const SkeletonPoint&) {
      rss += norm_sq(p - fitted.center2());
    }
  }
  const double residual = std::sqrt(rss / static_cast<double>(grid));
  if (residual > tol) {
    throw NonRepresentable("fit residual " + std::to_string(residual) +
                           " above tolerance");
  }
  return {fitted, residual};
}

namespace {

enum class Side { plus, minus, both };

double side_mass(double t, Side side) {
  switch (side) {
    case Side::plus: return std::max(t, 0.0);
    case Side::minus: return std::max(-t, 0.0);
    case Side::both: return std::abs(t);
  }
  return 0.0;
}

double measure_impl(const CylinderSet& b, Side side) {
  if (b.is_interval_shifts()) {
    const IntervalShifts& s = b.shifts();
    return side_mass(s.t_left, side) + side_mass(s.t_right, side);
  }
  if (b.is_radial_graph()) {
    const RadialGraph& rg = b.radial();
    const double dtheta = 2.0 * kPi / static_cast<double>(rg.h.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rg.h.size(); ++i) {
      total += side_mass(rg.h[i], side) * rg.weight[i] * dtheta;
    }
    return total;
  }
  const GridIndicator& g = b.grid_indicator();
  const double ds = (g.s_max - g.s_min) / static_cast<double>(g.s_cells);
  double total = 0.0;
  for (int bi = 0; bi < g.boundary_cells; ++bi) {
    for (int si = 0; si < g.s_cells; ++si) {
      if (!g.cells[static_cast<std::size_t>(bi) * g.s_cells + si]) continue;
      const double s_mid = g.s_min + (si + 0.5) * ds;
      if (side == Side::plus && !(s_mid > 0.0)) continue;
      if (side == Side::minus && s_mid > 0.0) continue;
      total += g.boundary_weight[bi] * ds;
    }
  }
  return total;
}

}  // namespace

double m_measure(const CylinderSet& b) { return measure_impl(b, Side::both); }
double m_measure_plus(const CylinderSet& b) { return measure_impl(b, Side::plus); }
double m_measure_minus(const CylinderSet& b) { return measure_impl(b, Side::minus); }

double d_metric(const CylinderSet& a, const CylinderSet& b) {
  if (a.is_interval_shifts() && b.is_interval_shifts()) {
    const IntervalShifts& s = a.shifts();
    const IntervalShifts& u = b.shifts();
    return std::sqrt(segment_symdiff(s.t_left, u.t_left) +
                     segment_symdiff(s.t_right, u.t_right));
  }
  if (a.is_radial_graph() && b.is_radial_graph()) {
    const RadialGraph& ra = a.radial();
    const RadialGraph& rb = b.radial();
    if (ra.h.size() != rb.h.size()) {
      throw IncompatibleRepresentations("radial grids differ in resolution");
    }
    const double dtheta = 2.0 * kPi / static_cast<double>(ra.h.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ra.h.size(); ++i) {
      total += segment_symdiff(ra.h[i], rb.h[i]) * ra.weight[i] * dtheta;
    }
    return std::sqrt(total);
  }
  if (a.is_grid() && b.is_grid()) {
    const GridIndicator& ga = a.grid_indicator();
    const GridIndicator& gb = b.grid_indicator();
    if (ga.boundary_cells != gb.boundary_cells || ga.s_cells != gb.s_cells ||
        ga.s_min != gb.s_min || ga.s_max != gb.s_max) {
      throw IncompatibleRepresentations("grid indicators differ in layout");
    }
    const double ds = (ga.s_max - ga.s_min) / static_cast<double>(ga.s_cells);
    double total = 0.0;
    for (int bi = 0; bi < ga.boundary_cells; ++bi) {
      for (int si = 0; si < ga.s_cells; ++si) {
        const std::size_t idx = static_cast<std::size_t>(bi) * ga.s_cells + si;
        if (ga.cells[idx] != gb.cells[idx]) total += ga.boundary_weight[bi] * ds;
      }
    }
    return std::sqrt(total);
  }
  throw IncompatibleRepresentations("cylinder sets use different charts");
}

double drift_D(const CylinderSet& b, const DriftSpec& spec) {
  if (b.is_interval_shifts()) {
    const IntervalShifts& s = b.shifts();
    const auto endpoint = [&spec](double t, double param) {
      const double slope = t > 0.0 ? spec.f_plus(param) : spec.f_minus(param);
      return 0.5 * slope * t * t;
    };
    return endpoint(s.t_left, 0.0) + endpoint(s.t_right, 1.0);
  }
  if (b.is_radial_graph()) {
    const RadialGraph& rg = b.radial();
    const double dtheta = 2.0 * kPi / static_cast<double>(rg.h.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rg.h.size(); ++i) {
      const double theta = dtheta * static_cast<double>(i);
      const double h = rg.h[i];
      const double slope = h > 0.0 ? spec.f_plus(theta) : spec.f_minus(theta);
      total += 0.5 * slope * h * h * rg.weight[i] * dtheta;
    }
    return total;
  }
  const GridIndicator& g = b.grid_indicator();
  const double ds = (g.s_max - g.s_min) / static_cast<double>(g.s_cells);
  double total = 0.0;
  for (int bi = 0; bi < g.boundary_cells; ++bi) {
    for (int si = 0; si < g.s_cells; ++si) {
      if (!g.cells[static_cast<std::size_t>(bi) * g.s_cells + si]) continue;
      const double s_mid = g.s_min + (si + 0.5) * ds;
      const double slope = s_mid > 0.0 ? spec.f_plus(static_cast<double>(bi))
                                       : spec.f_minus(static_cast<double>(bi));
      total += std::abs(s_mid) * slope * g.boundary_weight[bi] * ds;
    }
  }
  return total;
}

double empirical_drift_Dn(const DensityModel& model, const ConvexBody& a,
                          std::size_t n) {
  const ConvexBody& L = model.oracle().body;
  const double scale = std::pow(static_cast<double>(n), 2.0 / 3.0);

  if (model.dimension() == 1) {
    const Interval l = L.interval();
    const Interval iv = a.interval();
    double cuts[4] = {l.a, l.b, iv.a, iv.b};
    std::sort(cuts, cuts + 4);
    double e_minus = 0.0, e_plus = 0.0;
    for (int piece = 0; piece < 3; ++piece) {
      const double lo = cuts[piece], hi = cuts[piece + 1];
      if (lo >= hi) continue;
      const double mid = 0.5 * (lo + hi);
      const bool in_l = L.contains(mid), in_a = a.contains(mid);
      if (in_l == in_a) continue;
      const double e =
          model.probability_of_interval(lo, hi) - model.lambda() * (hi - lo);
      (in_l ? e_minus : e_plus) += e;
    }
    return scale * (e_minus - e_plus);
  }

  // 2D: decompose each ray from the origin of radial symmetry into pieces
  // belonging to C^- = C intersect L and C^+ = C \ L; the per-angle excess
  // mass uses the closed-form radial mass of the model.
  const auto slice = [&](double theta) {
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    double l0 = 0.0, l1 = 0.0, a0 = 0.0, a1 = 0.0;
    const bool hit_l = L.ray_intersect({0, 0}, dir, &l0, &l1);
    const bool hit_a = a.ray_intersect({0, 0}, dir, &a0, &a1);
    double cuts[4] = {hit_l ? l0 : 0.0, hit_l ? l1 : 0.0, hit_a ? a0 : 0.0,
                      hit_a ? a1 : 0.0};
    std::sort(cuts, cuts + 4);
    double acc = 0.0;
    for (int piece = 0; piece < 3; ++piece) {
      const double lo = cuts[piece], hi = cuts[piece + 1];
      if (lo >= hi) continue;
      const double mid = 0.5 * (lo + hi);
      const bool in_l = hit_l && mid >= l0 && mid <= l1;
      const bool in_a = hit_a && mid >= a0 && mid <= a1;
      if (in_l == in_a) continue;
      const double prob = model.radial_mass(hi) - model.radial_mass(lo);
      const double vol = 0.5 * (hi * hi - lo * lo);
      const double e = prob - model.lambda() * vol;
      acc += in_l ? e : -e;
    }
    return acc;
  };
  return scale * integrate(slice, 0.0, 2.0 * kPi, 1e-10);
}

bool is_in_Bstar(const CylinderSet& b, double tol) {
  if (tol < 0.0) throw InvalidParameter("tol must be >= 0");
  return std::abs(m_measure_plus(b) - m_measure_minus(b)) <= tol;
}

}  // namespace levelset

#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "levelset/estimators.hpp"
#include "levelset/geometry.hpp"
#include "levelset/models.hpp"

namespace levelset {

// Cylinder-space representations of magnified symmetric differences.
// IntervalShifts: 1D, signed outward shifts at the two boundary points.
// RadialGraph: 2D boundary perturbation h(theta) on a uniform angle grid,
//   with the surface-measure density per node in `weight`.
// GridIndicator: computational fallback on a boundary-parameter x s grid.

struct IntervalShifts {
  double t_left = 0.0;
  double t_right = 0.0;
};

struct RadialGraph {
  std::vector<double> h;
  std::vector<double> weight;
};

struct GridIndicator {
  int boundary_cells = 0;
  int s_cells = 0;
  double s_min = 0.0;
  double s_max = 0.0;
  std::vector<double> boundary_weight;  // measure density per boundary cell
  std::vector<std::uint8_t> cells;      // row-major [boundary][s]
};

class CylinderSet {
 public:
  CylinderSet() : repr_(IntervalShifts{}) {}
  static CylinderSet interval_shifts(double t_left, double t_right);
  static CylinderSet radial_graph(std::vector<double> h, std::vector<double> weight);
  static CylinderSet grid(GridIndicator g);

  bool is_interval_shifts() const { return std::holds_alternative<IntervalShifts>(repr_); }
  bool is_radial_graph() const { return std::holds_alternative<RadialGraph>(repr_); }
  bool is_grid() const { return std::holds_alternative<GridIndicator>(repr_); }

  const IntervalShifts& shifts() const;
  const RadialGraph& radial() const;
  const GridIndicator& grid_indicator() const;

  double c_bound() const { return c_bound_; }

 private:
  std::variant<IntervalShifts, RadialGraph, GridIndicator> repr_;
  double c_bound_ = 0.0;
};

// Boundary density slopes feeding the quadratic drift; the boundary
// parameter is the endpoint index in 1D and the angle in 2D.
struct DriftSpec {
  std::function<double(double)> f_plus;
  std::function<double(double)> f_minus;
  double lambda = 0.0;
};

DriftSpec drift_from_model(const DensityModel& model);

struct MagnifyConfig {
  int grid = 1024;     // RadialGraph angle resolution
  double cap = 1e6;    // NotParallel beyond this magnified bound
};

// tau_eps(A (sym diff) L): the magnified symmetric difference of A and L.
CylinderSet magnify(const ConvexBody& L, const ConvexBody& A, double eps,
                    const MagnifyConfig& config = {});

struct DemagnifyResult {
  ConvexBody body;
  double residual = 0.0;  // geometric fit residual (RadialGraph inputs)
};

// phi_eps: the class member A with magnify(L, A, eps) == B; least-squares
// fit when a RadialGraph is not exactly representable.
DemagnifyResult demagnify(const ConvexBody& L, const CylinderSet& B, double eps,
                          double tol = 1e-6, SearchClass cls = SearchClass::balls);

double m_measure(const CylinderSet& b);
double m_measure_plus(const CylinderSet& b);
double m_measure_minus(const CylinderSet& b);

// Cylinder semi-metric d(B, B') = sqrt(M(B symdiff B')).
double d_metric(const CylinderSet& a, const CylinderSet& b);

// Quadratic drift D(B) = integral over B of s f'_+ 1{s>0} - s f'_- 1{s<=0} dM.
double drift_D(const CylinderSet& b, const DriftSpec& spec);

// Finite-n drift D_n(tau_eps(C)) = n^{2/3} (e_lambda(C^-) - e_lambda(C^+))
// for C = A symdiff L_lambda, by model quadrature.
double empirical_drift_Dn(const DensityModel& model, const ConvexBody& a,
                          std::size_t n);

bool is_in_Bstar(const CylinderSet& b, double tol);

}  // namespace levelset

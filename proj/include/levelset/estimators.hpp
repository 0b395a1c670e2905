#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levelset/geometry.hpp"

namespace levelset {

enum class EstimatorTag { excess_mass, min_volume, max_prob, max_prob_equal_vol };

// Which criterion an estimator optimizes, together with the auxiliary
// knowledge it consumes (lambda, p_lambda or v_lambda). A relaxed kind
// accepts the first candidate within slack delta_n * n^{-2/3} of the
// optimum.
struct EstimatorKind {
  EstimatorTag tag = EstimatorTag::excess_mass;
  double param = 0.0;  // lambda / p_lambda / v_lambda depending on tag
  bool relaxed = false;
  double delta_n = 0.0;

  static EstimatorKind excess_mass(double lambda) {
    return {EstimatorTag::excess_mass, lambda, false, 0.0};
  }
  static EstimatorKind min_volume(double p_lambda) {
    return {EstimatorTag::min_volume, p_lambda, false, 0.0};
  }
  static EstimatorKind max_prob(double v_lambda) {
    return {EstimatorTag::max_prob, v_lambda, false, 0.0};
  }
  static EstimatorKind max_prob_equal_vol(double v_lambda) {
    return {EstimatorTag::max_prob_equal_vol, v_lambda, false, 0.0};
  }
  static EstimatorKind relax(EstimatorKind inner, double delta_n) {
    inner.relaxed = true;
    inner.delta_n = delta_n;
    return inner;
  }

  std::string label() const;
};

struct EstimateDiagnostics {
  int tie_count = 0;
  int search_restarts = 0;
  // Empirical mass of the returned set as an exact rational count/n.
  long long mass_num = 0;
  long long mass_den = 0;
  double slack_used = 0.0;
};

struct EstimateResult {
  ConvexBody set;
  double objective = 0.0;
  EstimatorKind kind;
  std::size_t n = 0;
  EstimateDiagnostics diagnostics;
};

// 1D estimators over the class of closed intervals. Samples must be sorted
// ascending. Ties are broken lexicographically: smallest left index, then
// smallest right index.
EstimateResult excess_mass_1d(const std::vector<double>& sorted_sample, double lambda);
EstimateResult min_volume_1d(const std::vector<double>& sorted_sample, double p_lambda);
EstimateResult max_prob_1d(const std::vector<double>& sorted_sample, double v_lambda);
EstimateResult max_prob_equal_vol_1d(const std::vector<double>& sorted_sample,
                                     double v_lambda);

// Exhaustive O(n^2) reference with identical tie-breaking; n <= 200.
EstimateResult brute_force_oracle_1d(const std::vector<double>& sorted_sample,
                                     const EstimatorKind& kind);

// Relaxed 1D estimation: first window in scan order whose objective is
// within delta_n * n^{-2/3} of the optimum, constraints enforced exactly.
EstimateResult relaxed_estimate(const std::vector<double>& sorted_sample,
                                const EstimatorKind& kind);

// Dispatch on kind (1D).
EstimateResult estimate_1d(const std::vector<double>& sorted_sample,
                           const EstimatorKind& kind);

enum class SearchClass { balls, ellipsoids };

struct SearchConfig {
  int restarts = 16;
  double simplex_tol = 1e-8;
  int max_iterations = 2000;
  std::uint64_t seed = 0;
  double initial_penalty = 1e3;  // min-volume count-constraint penalty
};

// 2D estimation by multi-start Nelder-Mead over class parameters
// (ball: center + log radius; ellipsoid: center, log axes, rotation).
// Constraints are enforced exactly on the returned candidate.
EstimateResult estimate_2d(const std::vector<Vec2>& sample, const EstimatorKind& kind,
                           SearchClass cls, const SearchConfig& config = {});

// Derivative-free Nelder-Mead minimizer (shared by the 2D search and the
// limit-simulation refinement). Returns the best vertex.
struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, double scale, double tol,
                          int max_iterations);

}  // namespace levelset

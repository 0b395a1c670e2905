#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "levelset/cylinder.hpp"
#include "levelset/limit.hpp"
#include "levelset/models.hpp"

namespace levelset {

struct ExperimentConfig {
  std::string id = "exp";
  std::string model = "triangular1d";
  double lambda = 0.5;
  std::vector<std::string> estimators = {"L1", "L2", "L3"};
  std::string set_class = "intervals";  // intervals | balls | ellipsoids
  std::vector<std::size_t> n_grid = {1000, 8000, 64000};
  std::size_t replications = 500;
  std::uint64_t seed = 1;
  std::string output_dir;  // empty: in-memory only
  int workers = 0;         // 0: LEVELSET_WORKERS or hardware concurrency
  bool force = false;      // allow overwriting an existing output dir

  // Limit-simulation parameters (epsilon_n is always n^{-1/3}).
  double limit_step = 0.01;
  double limit_c_max = 8.0;
  std::size_t limit_draws = 10000;

  void validate() const;
  std::string canonical_text() const;  // manifest echo / content hash input
};

struct RateRecord {
  std::string experiment_id;
  std::size_t n = 0;
  std::size_t rep = 0;
  std::string estimator;
  double mu_symdiff = 0.0;
  double p_symdiff = 0.0;
  double hausdorff = 0.0;
  double m_magnified = 0.0;
  double pair_mu = 0.0;  // mu(L2 symdiff L3) for the replication
};

struct RateTable {
  std::vector<RateRecord> records;
  long long l2_mass_violations = 0;  // n P_n != ceil(n p_lambda)
  long long l3_volume_violations = 0;

  std::vector<double> column(const std::string& estimator, std::size_t n,
                             double RateRecord::*field) const;
};

// Runs the Monte Carlo grid; writes records.csv + manifest.json when the
// config names an output directory. Deterministic in (config, seed),
// independent of the worker count.
RateTable run_rates(const ExperimentConfig& config);

struct EquivalenceSummary {
  std::vector<std::size_t> n_grid;
  std::vector<double> medians;      // median n^{1/3} mu(L2 symdiff L3) per n
  std::vector<double> q90;
  bool monotone = false;
  double drop_factor = 0.0;         // first median / last median
  bool pass = false;
};

EquivalenceSummary run_equivalence(const ExperimentConfig& config,
                                   const RateTable& table);
EquivalenceSummary run_equivalence(const ExperimentConfig& config);

struct LimitComparison {
  double ks_excess_mass = 0.0;   // L1 magnified M vs M(Z(B))
  double ks_min_volume = 0.0;    // L2 vs M(Z(B*))
  double ks_max_prob = 0.0;      // L3 vs M(Z(B*))
  double ks_min_volume_unconstrained = 0.0;  // L2 vs M(Z(B)) contrast
  std::vector<double> finite_n_m;            // sorted L1 sample at largest n
  std::vector<double> limit_m;               // sorted M(Z(B)) draws
  std::vector<double> limit_m_constrained;   // sorted M(Z(B*)) draws
};

LimitComparison run_limit_comparison(const ExperimentConfig& config,
                                     const RateTable& table);
LimitComparison run_limit_comparison(const ExperimentConfig& config);

// Local boundary empirical process w_n(B) evaluated on one sample.
double boundary_process(const std::vector<double>& sample_1d,
                        const DensityModel& model, const CylinderSet& b,
                        double eps);

// Persistence helpers (schema: records.csv, manifest.json, summary.json).
void write_records_csv(const std::string& path, const RateTable& table);
void write_manifest(const std::string& path, const ExperimentConfig& config);
void write_summary(const std::string& path, const std::string& json_text);

std::string summary_json(const ExperimentConfig& config, const RateTable& table,
                         const EquivalenceSummary* equivalence,
                         const LimitComparison* comparison);

int resolve_worker_count(int configured);

}  // namespace levelset

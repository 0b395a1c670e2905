#include "levelset/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "levelset/errors.hpp"
#include "levelset/estimators.hpp"
#include "levelset/quadrature.hpp"
#include "levelset/rng.hpp"
#include "levelset/stats.hpp"

namespace levelset {

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr const char* kCsvHeader =
    "experiment_id,n,rep,estimator,mu_symdiff,p_symdiff,hausdorff,m_magnified,"
    "pair_mu";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

EstimatorKind kind_from_label(const std::string& label, const LevelSetOracle& o) {
  if (label == "L1") return EstimatorKind::excess_mass(o.lambda);
  if (label == "L2") return EstimatorKind::min_volume(o.p_lambda);
  if (label == "L3") return EstimatorKind::max_prob(o.v_lambda);
  if (label == "L4") return EstimatorKind::max_prob_equal_vol(o.v_lambda);
  throw InvalidParameter("unknown estimator label: " + label);
}

double epsilon_n(std::size_t n) {
  return 1.0 / std::cbrt(static_cast<double>(n));
}

// P(A symdiff L) by quadrature over the symmetric-difference pieces.
double p_symdiff_1d(const DensityModel& model, const Interval& a, const Interval& l) {
  double cuts[4] = {a.a, a.b, l.a, l.b};
  std::sort(cuts, cuts + 4);
  double total = 0.0;
  for (int piece = 0; piece < 3; ++piece) {
    const double lo = cuts[piece], hi = cuts[piece + 1];
    if (lo >= hi) continue;
    const double mid = 0.5 * (lo + hi);
    const bool in_a = a.a <= mid && mid <= a.b;
    const bool in_l = l.a <= mid && mid <= l.b;
    if (in_a != in_l) total += model.probability_of_interval(lo, hi);
  }
  return total;
}

double p_symdiff_2d(const DensityModel& model, const ConvexBody& a,
                    const ConvexBody& l) {
  const auto slice = [&](double theta) {
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    double a0 = 0, a1 = 0, l0 = 0, l1 = 0;
    const bool hit_a = a.ray_intersect({0, 0}, dir, &a0, &a1);
    const bool hit_l = l.ray_intersect({0, 0}, dir, &l0, &l1);
    double cuts[4] = {hit_a ? a0 : 0.0, hit_a ? a1 : 0.0, hit_l ? l0 : 0.0,
                      hit_l ? l1 : 0.0};
    std::sort(cuts, cuts + 4);
    double acc = 0.0;
    for (int piece = 0; piece < 3; ++piece) {
      const double lo = cuts[piece], hi = cuts[piece + 1];
      if (lo >= hi) continue;
      const double mid = 0.5 * (lo + hi);
      const bool in_a = hit_a && mid >= a0 && mid <= a1;
      const bool in_l = hit_l && mid >= l0 && mid <= l1;
      if (in_a != in_l) acc += model.radial_mass(hi) - model.radial_mass(lo);
    }
    return acc;
  };
  return integrate(slice, 0.0, 2.0 * 3.14159265358979323846, 1e-6);
}

struct RepOutput {
  std::vector<RateRecord> rows;
  long long l2_violations = 0;
  long long l3_violations = 0;
};

RepOutput run_replication(const ExperimentConfig& config, const DensityModel& model,
                          std::size_t n, std::size_t rep) {
  const LevelSetOracle& oracle = model.oracle();
  const std::uint64_t rep_seed =
      derive_seed(config.seed, fnv1a64(config.id), static_cast<std::uint64_t>(n),
                  static_cast<std::uint64_t>(rep));
  const double eps = epsilon_n(n);

  RepOutput out;
  std::map<std::string, EstimateResult> results;

  if (model.dimension() == 1) {
    std::vector<double> xs = model.sample_1d(n, rep_seed);
    std::sort(xs.begin(), xs.end());
    for (const std::string& label : config.estimators) {
      results.emplace(label, estimate_1d(xs, kind_from_label(label, oracle)));
    }
    // Feasibility audit against the raw sample.
    for (const auto& [label, res] : results) {
      if (label == "L2") {
        const Interval iv = res.set.interval();
        const auto lo = std::lower_bound(xs.begin(), xs.end(), iv.a);
        const auto hi = std::upper_bound(xs.begin(), xs.end(), iv.b);
        if (hi - lo != res.diagnostics.mass_num) ++out.l2_violations;
      } else if (label == "L3") {
        if (res.set.volume() > oracle.v_lambda) ++out.l3_violations;
      }
    }
  } else {
    std::vector<double> xs, ys;
    model.sample(n, rep_seed, &xs, &ys);
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {xs[i], ys[i]};
    const SearchClass cls = config.set_class == "ellipsoids"
                                ? SearchClass::ellipsoids
                                : SearchClass::balls;
    SearchConfig sc;
    sc.seed = rep_seed;
    for (const std::string& label : config.estimators) {
      results.emplace(label,
                      estimate_2d(pts, kind_from_label(label, oracle), cls, sc));
    }
    for (const auto& [label, res] : results) {
      if (label == "L3" && res.set.volume() > oracle.v_lambda) ++out.l3_violations;
    }
  }

  double pair_mu = 0.0;
  if (results.count("L2") && results.count("L3")) {
    pair_mu = sym_diff_volume(results.at("L2").set, results.at("L3").set);
  }

  for (const std::string& label : config.estimators) {
    const EstimateResult& res = results.at(label);
    RateRecord row;
    row.experiment_id = config.id;
    row.n = n;
    row.rep = rep;
    row.estimator = label;
    row.mu_symdiff = sym_diff_volume(res.set, oracle.body);
    row.p_symdiff = model.dimension() == 1
                        ? p_symdiff_1d(model, res.set.interval(),
                                       oracle.body.interval())
                        : p_symdiff_2d(model, res.set, oracle.body);
    row.hausdorff = hausdorff_distance(res.set, oracle.body);
    row.m_magnified = m_measure(magnify(oracle.body, res.set, eps));
    row.pair_mu = pair_mu;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 1) throw InvalidParameter("replications must be >= 1");
  if (n_grid.empty()) throw InvalidParameter("n_grid must be non-empty");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw InvalidParameter("n_grid must be strictly increasing");
    }
  }
  if (estimators.empty()) throw InvalidParameter("estimators must be non-empty");
  if (set_class != "intervals" && set_class != "balls" &&
      set_class != "ellipsoids") {
    throw InvalidParameter("set_class must be intervals|balls|ellipsoids");
  }
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream os;
  os << "id=" << id << "\nmodel=" << model << "\nlambda=" << fmt_double(lambda)
     << "\nestimators=";
  for (std::size_t i = 0; i < estimators.size(); ++i) {
    os << (i ? "," : "") << estimators[i];
  }
  os << "\nclass=" << set_class << "\nn_grid=";
  for (std::size_t i = 0; i < n_grid.size(); ++i) os << (i ? "," : "") << n_grid[i];
  os << "\nreplications=" << replications << "\nseed=" << seed
     << "\nlimit_step=" << fmt_double(limit_step)
     << "\nlimit_c_max=" << fmt_double(limit_c_max)
     << "\nlimit_draws=" << limit_draws << "\n";
  return os.str();
}

std::vector<double> RateTable::column(const std::string& estimator, std::size_t n,
                                      double RateRecord::*field) const {
  std::vector<double> out;
  for (const RateRecord& r : records) {
    if (r.estimator == estimator && r.n == n) out.push_back(r.*field);
  }
  return out;
}

int resolve_worker_count(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("LEVELSET_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

RateTable run_rates(const ExperimentConfig& config) {
  config.validate();
  const DensityModel model = builtin_model(config.model, config.lambda);
  if (model.dimension() == 1 && config.set_class != "intervals") {
    throw InvalidParameter("1D models use the interval class");
  }
  if (model.dimension() == 2 && config.set_class == "intervals") {
    throw InvalidParameter("2D models need the ball or ellipsoid class");
  }

  struct Task {
    std::size_t n;
    std::size_t rep;
  };
  std::vector<Task> tasks;
  for (std::size_t n : config.n_grid) {
    for (std::size_t rep = 0; rep < config.replications; ++rep) {
      tasks.push_back({n, rep});
    }
  }

  std::vector<RepOutput> outputs(tasks.size());
  const int workers = resolve_worker_count(config.workers);
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      outputs[t] = run_replication(config, model, tasks[t].n, tasks[t].rep);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> futs;
    futs.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      futs.push_back(std::async(std::launch::async, [&]() {
        for (;;) {
          const std::size_t t = next.fetch_add(1);
          if (t >= tasks.size()) return;
          outputs[t] = run_replication(config, model, tasks[t].n, tasks[t].rep);
        }
      }));
    }
    for (auto& f : futs) f.get();
  }

  RateTable table;
  for (const RepOutput& out : outputs) {
    table.l2_mass_violations += out.l2_violations;
    table.l3_volume_violations += out.l3_violations;
    for (const RateRecord& r : out.rows) table.records.push_back(r);
  }

  if (!config.output_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const fs::path records_path = fs::path(config.output_dir) / "records.csv";
    if (fs::exists(records_path) && !config.force) {
      throw InvalidParameter("output exists; pass force to overwrite: " +
                             records_path.string());
    }
    write_records_csv(records_path.string(), table);
    write_manifest((fs::path(config.output_dir) / "manifest.json").string(),
                   config);
  }
  return table;
}

EquivalenceSummary run_equivalence(const ExperimentConfig& config,
                                   const RateTable& table) {
  EquivalenceSummary s;
  s.n_grid = config.n_grid;
  const std::string base =
      std::find(config.estimators.begin(), config.estimators.end(), "L2") !=
              config.estimators.end()
          ? "L2"
          : config.estimators.front();
  for (std::size_t n : config.n_grid) {
    std::vector<double> vals = table.column(base, n, &RateRecord::pair_mu);
    if (vals.empty()) throw InvalidParameter("no records for n in equivalence run");
    const double scale = std::cbrt(static_cast<double>(n));
    for (double& v : vals) v *= scale;
    s.medians.push_back(median(vals));
    s.q90.push_back(quantile(vals, 0.9));
  }
  s.monotone = true;
  for (std::size_t i = 1; i < s.medians.size(); ++i) {
    if (!(s.medians[i] < s.medians[i - 1])) s.monotone = false;
  }
  s.drop_factor = s.medians.back() > 0.0 ? s.medians.front() / s.medians.back()
                                         : std::numeric_limits<double>::infinity();
  s.pass = s.monotone && s.drop_factor >= 1.5;
  return s;
}

EquivalenceSummary run_equivalence(const ExperimentConfig& config) {
  return run_equivalence(config, run_rates(config));
}

LimitComparison run_limit_comparison(const ExperimentConfig& config,
                                     const RateTable& table) {
  const DensityModel model = builtin_model(config.model, config.lambda);
  if (model.dimension() != 1) {
    throw InvalidParameter("limit comparison is defined for 1D models");
  }
  const std::size_t n_top = config.n_grid.back();
  const DriftSpec drift = drift_from_model(model);
  const WienerGrid grid{config.limit_step, config.limit_c_max};
  const std::uint64_t limit_seed = derive_seed(config.seed, fnv1a64("limit"));

  const ZDistribution z_free = z_distribution(
      [&](std::uint64_t s) {
        return draw_Z_interval(drift, config.lambda, grid, s);
      },
      config.limit_draws, limit_seed);
  const ZDistribution z_sym = z_distribution(
      [&](std::uint64_t s) {
        return draw_Z_interval_constrained(drift, config.lambda, grid, s);
      },
      config.limit_draws, derive_seed(limit_seed, 1));

  LimitComparison cmp;
  cmp.limit_m = z_free.m_total;
  cmp.limit_m_constrained = z_sym.m_total;

  const auto finite_sample = [&](const std::string& label) {
    std::vector<double> v = table.column(label, n_top, &RateRecord::m_magnified);
    if (v.size() < 100) {
      throw InsufficientDraws(label + " has fewer than 100 finite-n records");
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  if (cmp.limit_m.size() < 100) {
    throw InsufficientDraws("limit simulation needs at least 100 draws");
  }

  cmp.finite_n_m = finite_sample("L1");
  cmp.ks_excess_mass = ks_two_sample(cmp.finite_n_m, cmp.limit_m);
  const std::vector<double> l2 = finite_sample("L2");
  cmp.ks_min_volume = ks_two_sample(l2, cmp.limit_m_constrained);
  cmp.ks_min_volume_unconstrained = ks_two_sample(l2, cmp.limit_m);
  cmp.ks_max_prob =
      ks_two_sample(finite_sample("L3"), cmp.limit_m_constrained);
  return cmp;
}

LimitComparison run_limit_comparison(const ExperimentConfig& config) {
  return run_limit_comparison(config, run_rates(config));
}

double boundary_process(const std::vector<double>& sample, const DensityModel& model,
                        const CylinderSet& b, double eps) {
  if (model.dimension() != 1 || !b.is_interval_shifts()) {
    throw InvalidParameter("boundary_process covers 1D interval shifts");
  }
  const Interval l = model.oracle().body.interval();
  const IntervalShifts& s = b.shifts();
  const double n = static_cast<double>(sample.size());
  const double scale = std::pow(n, 2.0 / 3.0);

  const auto lambda_n = [&](double lo, double hi) {
    if (lo >= hi) return 0.0;
    long long count = 0;
    for (double x : sample) count += (x >= lo && x <= hi) ? 1 : 0;
    return scale * (static_cast<double>(count) / n -
                    model.probability_of_interval(lo, hi));
  };

  double plus = 0.0, minus = 0.0;
  if (s.t_left > 0.0) {
    plus += lambda_n(l.a - eps * s.t_left, l.a);
  } else if (s.t_left < 0.0) {
    minus += lambda_n(l.a, l.a - eps * s.t_left);
  }
  if (s.t_right > 0.0) {
    plus += lambda_n(l.b, l.b + eps * s.t_right);
  } else if (s.t_right < 0.0) {
    minus += lambda_n(l.b + eps * s.t_right, l.b);
  }
  return plus - minus;
}

void write_records_csv(const std::string& path, const RateTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidParameter("cannot open " + path);
  out << kCsvHeader << "\n";
  for (const RateRecord& r : table.records) {
    out << r.experiment_id << ',' << r.n << ',' << r.rep << ',' << r.estimator
        << ',' << fmt_double(r.mu_symdiff) << ',' << fmt_double(r.p_symdiff)
        << ',' << fmt_double(r.hausdorff) << ',' << fmt_double(r.m_magnified)
        << ',' << fmt_double(r.pair_mu) << "\n";
  }
}

void write_manifest(const std::string& path, const ExperimentConfig& config) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["content_hash"] = fnv1a64(config.canonical_text());
  j["config"]["id"] = config.id;
  j["config"]["model"] = config.model;
  j["config"]["lambda"] = config.lambda;
  j["config"]["estimators"] = config.estimators;
  j["config"]["set_class"] = config.set_class;
  j["config"]["n_grid"] = config.n_grid;
  j["config"]["replications"] = config.replications;
  j["config"]["seed"] = config.seed;
  j["config"]["epsilon_rule"] = "n^(-1/3)";
  j["config"]["limit_step"] = config.limit_step;
  j["config"]["limit_c_max"] = config.limit_c_max;
  j["config"]["limit_draws"] = config.limit_draws;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidParameter("cannot open " + path);
  out << j.dump(2) << "\n";
}

void write_summary(const std::string& path, const std::string& json_text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidParameter("cannot open " + path);
  out << json_text << "\n";
}

std::string summary_json(const ExperimentConfig& config, const RateTable& table,
                         const EquivalenceSummary* equivalence,
                         const LimitComparison* comparison) {
  nlohmann::json j;
  j["experiment_id"] = config.id;
  j["l2_mass_violations"] = table.l2_mass_violations;
  j["l3_volume_violations"] = table.l3_volume_violations;

  for (const std::string& label : config.estimators) {
    for (std::size_t n : config.n_grid) {
      std::vector<double> mu = table.column(label, n, &RateRecord::mu_symdiff);
      if (mu.empty()) continue;
      nlohmann::json cell;
      cell["median_mu_symdiff"] = median(mu);
      for (double& v : mu) v *= std::cbrt(static_cast<double>(n));
      cell["median_normalized_mu"] = median(mu);
      cell["median_m_magnified"] =
          median(table.column(label, n, &RateRecord::m_magnified));
      j["rates"][label][std::to_string(n)] = cell;
    }
  }

  if (equivalence) {
    j["equivalence"]["medians"] = equivalence->medians;
    j["equivalence"]["q90"] = equivalence->q90;
    j["equivalence"]["monotone"] = equivalence->monotone;
    j["equivalence"]["drop_factor"] = equivalence->drop_factor;
    j["equivalence"]["pass"] = equivalence->pass;
  }
  if (comparison) {
    j["limit_comparison"]["ks_excess_mass"] = comparison->ks_excess_mass;
    j["limit_comparison"]["ks_min_volume"] = comparison->ks_min_volume;
    j["limit_comparison"]["ks_max_prob"] = comparison->ks_max_prob;
    j["limit_comparison"]["ks_min_volume_unconstrained"] =
        comparison->ks_min_volume_unconstrained;
  }
  return j.dump(2);
}

}  // namespace levelset

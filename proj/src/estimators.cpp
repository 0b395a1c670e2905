#include "levelset/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "levelset/errors.hpp"
#include "levelset/rng.hpp"

namespace levelset {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void require_nonempty(const std::vector<double>& sample) {
  if (sample.empty()) throw EmptySample("estimator requires n >= 1");
}

long long ceil_count(std::size_t n, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidParameter("p_lambda must be in (0, 1]");
  return static_cast<long long>(std::ceil(static_cast<double>(n) * p));
}

// Candidate interval [X_i, X_j] with the shared lexicographic tie rule:
// higher objective wins, then smaller i, then smaller j.
struct WindowBest {
  double objective = -std::numeric_limits<double>::infinity();
  std::size_t i = 0, j = 0;
  int tie_count = 0;
  bool maximize = true;

  void offer(double obj, std::size_t ii, std::size_t jj) {
    const double delta = maximize ? obj - objective : objective - obj;
    if (delta > 0.0) {
      objective = obj;
      i = ii;
      j = jj;
    } else if (delta == 0.0) {
      ++tie_count;
      if (ii < i || (ii == i && jj < j)) {
        i = ii;
        j = jj;
      }
    }
  }
};

}  // namespace

std::string EstimatorKind::label() const {
  std::string base;
  switch (tag) {
    case EstimatorTag::excess_mass: base = "L1"; break;
    case EstimatorTag::min_volume: base = "L2"; break;
    case EstimatorTag::max_prob: base = "L3"; break;
    case EstimatorTag::max_prob_equal_vol: base = "L4"; break;
  }
  return relaxed ? "R" + base.substr(1) : base;
}

EstimateResult excess_mass_1d(const std::vector<double>& sample, double lambda) {
  require_nonempty(sample);
  if (!(lambda >= 0.0)) throw InvalidParameter("lambda must be >= 0");
  const std::size_t n = sample.size();
  const double dn = static_cast<double>(n);

  // objective(i, j) = (j - i + 1)/n - lambda (X_j - X_i); for fixed j the
  // best i minimizes alpha_i = i/n - lambda X_i, so a prefix argmin gives
  // the optimum in one pass.
  const auto alpha = [&](std::size_t i) {
    return static_cast<double>(i) / dn - lambda * sample[i];
  };
  WindowBest best;
  std::size_t arg_i = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (alpha(j) < alpha(arg_i)) arg_i = j;
    const double obj = static_cast<double>(j - arg_i + 1) / dn -
                       lambda * (sample[j] - sample[arg_i]);
    best.offer(obj, arg_i, j);
  }

  EstimateResult res;
  res.set = Interval{sample[best.i], sample[best.j]};
  res.objective = best.objective;
  res.kind = EstimatorKind::excess_mass(lambda);
  res.n = n;
  res.diagnostics.tie_count = best.tie_count;
  res.diagnostics.mass_num = static_cast<long long>(best.j - best.i + 1);
  res.diagnostics.mass_den = static_cast<long long>(n);
  return res;
}

EstimateResult min_volume_1d(const std::vector<double>& sample, double p_lambda) {
  require_nonempty(sample);
  const std::size_t n = sample.size();
  const long long k = ceil_count(n, p_lambda);

  WindowBest best;
  best.maximize = false;
  for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(k) - 1;
    best.offer(sample[j] - sample[i], i, j);
  }

  EstimateResult res;
  res.set = Interval{sample[best.i], sample[best.j]};
  res.objective = best.objective;
  res.kind = EstimatorKind::min_volume(p_lambda);
  res.n = n;
  res.diagnostics.tie_count = best.tie_count;
  res.diagnostics.mass_num = k;
  res.diagnostics.mass_den = static_cast<long long>(n);
  return res;
}

namespace {

// Max-count window of width v_lambda; shared by the exact and relaxed paths.
WindowBest max_prob_scan(const std::vector<double>& sample, double v_lambda) {
  const std::size_t n = sample.size();
  WindowBest best;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j + 1 < n && sample[j + 1] - sample[i] <= v_lambda) ++j;
    best.offer(static_cast<double>(j - i + 1) / static_cast<double>(n), i, j);
  }
  return best;
}

}  // namespace

EstimateResult max_prob_1d(const std::vector<double>& sample, double v_lambda) {
  require_nonempty(sample);
  if (!(v_lambda > 0.0)) throw InvalidParameter("v_lambda must be positive");
  const WindowBest best = max_prob_scan(sample, v_lambda);

  EstimateResult res;
  res.set = Interval{sample[best.i], sample[best.j]};
  res.objective = best.objective;
  res.kind = EstimatorKind::max_prob(v_lambda);
  res.n = sample.size();
  res.diagnostics.tie_count = best.tie_count;
  res.diagnostics.mass_num = static_cast<long long>(best.j - best.i + 1);
  res.diagnostics.mass_den = static_cast<long long>(sample.size());
  return res;
}

EstimateResult max_prob_equal_vol_1d(const std::vector<double>& sample,
                                     double v_lambda) {
  EstimateResult res = max_prob_1d(sample, v_lambda);
  const Interval tight = res.set.interval();
  const double pad = 0.5 * (v_lambda - (tight.b - tight.a));
  res.set = Interval{tight.a - pad, tight.b + pad};
  res.kind = EstimatorKind::max_prob_equal_vol(v_lambda);
  // Widening cannot capture extra points when the tight window is optimal.
  return res;
}

EstimateResult brute_force_oracle_1d(const std::vector<double>& sample,
                                     const EstimatorKind& kind) {
  require_nonempty(sample);
  if (sample.size() > 200) throw SampleTooLarge("oracle limited to n <= 200");
  if (kind.relaxed) throw InvalidParameter("oracle covers the exact kinds");
  const std::size_t n = sample.size();
  const double dn = static_cast<double>(n);

  EstimateResult res;
  res.kind = kind;
  res.n = n;
  WindowBest best;

  switch (kind.tag) {
    case EstimatorTag::excess_mass: {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          const double obj = static_cast<double>(j - i + 1) / dn -
                             kind.param * (sample[j] - sample[i]);
          best.offer(obj, i, j);
        }
      }
      break;
    }
    case EstimatorTag::min_volume: {
      const long long k = ceil_count(n, kind.param);
      best.maximize = false;
      for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(k) - 1;
        best.offer(sample[j] - sample[i], i, j);
      }
      break;
    }
    case EstimatorTag::max_prob:
    case EstimatorTag::max_prob_equal_vol: {
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i;
        while (j + 1 < n && sample[j + 1] - sample[i] <= kind.param) ++j;
        best.offer(static_cast<double>(j - i + 1) / dn, i, j);
      }
      break;
    }
  }

  res.set = Interval{sample[best.i], sample[best.j]};
  res.objective = best.objective;
  res.diagnostics.tie_count = best.tie_count;
  res.diagnostics.mass_num = static_cast<long long>(best.j - best.i + 1);
  res.diagnostics.mass_den = static_cast<long long>(n);
  if (kind.tag == EstimatorTag::max_prob_equal_vol) {
    const Interval tight = res.set.interval();
    const double pad = 0.5 * (kind.param - (tight.b - tight.a));
    res.set = Interval{tight.a - pad, tight.b + pad};
  }
  if (kind.tag == EstimatorTag::min_volume) {
    res.diagnostics.mass_num = ceil_count(n, kind.param);
  }
  return res;
}

EstimateResult relaxed_estimate(const std::vector<double>& sample,
                                const EstimatorKind& kind) {
  require_nonempty(sample);
  if (!kind.relaxed) throw InvalidParameter("kind is not relaxed");
  if (!(kind.delta_n >= 0.0)) throw InvalidParameter("delta_n must be >= 0");
  const std::size_t n = sample.size();
  const double dn = static_cast<double>(n);
  const double slack = kind.delta_n * std::pow(dn, -2.0 / 3.0);

  EstimatorKind exact = kind;
  exact.relaxed = false;
  exact.delta_n = 0.0;

  EstimateResult res;
  res.kind = kind;
  res.n = n;
  res.diagnostics.slack_used = slack;

  switch (kind.tag) {
    case EstimatorTag::excess_mass: {
      const double target = excess_mass_1d(sample, kind.param).objective - slack;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          const double obj = static_cast<double>(j - i + 1) / dn -
                             kind.param * (sample[j] - sample[i]);
          if (obj >= target) {
            res.set = Interval{sample[i], sample[j]};
            res.objective = obj;
            res.diagnostics.mass_num = static_cast<long long>(j - i + 1);
            res.diagnostics.mass_den = static_cast<long long>(n);
            return res;
          }
        }
      }
      break;
    }
    case EstimatorTag::min_volume: {
      const long long k = ceil_count(n, kind.param);
      const double target = min_volume_1d(sample, kind.param).objective + slack;
      for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(k) - 1;
        const double len = sample[j] - sample[i];
        if (len <= target) {
          res.set = Interval{sample[i], sample[j]};
          res.objective = len;
          res.diagnostics.mass_num = k;
          res.diagnostics.mass_den = static_cast<long long>(n);
          return res;
        }
      }
      break;
    }
    case EstimatorTag::max_prob:
    case EstimatorTag::max_prob_equal_vol: {
      const double target = max_prob_scan(sample, kind.param).objective - slack;
      std::size_t j = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (j < i) j = i;
        while (j + 1 < n && sample[j + 1] - sample[i] <= kind.param) ++j;
        const double obj = static_cast<double>(j - i + 1) / dn;
        if (obj >= target) {
          Interval iv{sample[i], sample[j]};
          if (kind.tag == EstimatorTag::max_prob_equal_vol) {
            const double pad = 0.5 * (kind.param - (iv.b - iv.a));
            iv = {iv.a - pad, iv.b + pad};
          }
          res.set = iv;
          res.objective = obj;
          res.diagnostics.mass_num = static_cast<long long>(j - i + 1);
          res.diagnostics.mass_den = static_cast<long long>(n);
          return res;
        }
      }
      break;
    }
  }
  throw InfeasibleConstraint("relaxed scan found no candidate");
}

EstimateResult estimate_1d(const std::vector<double>& sample,
                           const EstimatorKind& kind) {
  if (kind.relaxed) return relaxed_estimate(sample, kind);
  switch (kind.tag) {
    case EstimatorTag::excess_mass: return excess_mass_1d(sample, kind.param);
    case EstimatorTag::min_volume: return min_volume_1d(sample, kind.param);
    case EstimatorTag::max_prob: return max_prob_1d(sample, kind.param);
    case EstimatorTag::max_prob_equal_vol:
      return max_prob_equal_vol_1d(sample, kind.param);
  }
  throw InvalidParameter("unknown estimator kind");
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, double scale, double tol,
                          int max_iterations) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> xs(dim + 1, start);
  for (std::size_t d = 0; d < dim; ++d) xs[d + 1][d] += scale;
  std::vector<double> fs(dim + 1);
  for (std::size_t v = 0; v <= dim; ++v) fs[v] = f(xs[v]);

  const auto order = [&]() {
    std::vector<std::size_t> idx(dim + 1);
    for (std::size_t v = 0; v <= dim; ++v) idx[v] = v;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> xs2;
    std::vector<double> fs2;
    for (std::size_t v : idx) {
      xs2.push_back(xs[v]);
      fs2.push_back(fs[v]);
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  int iter = 0;
  bool converged = false;
  for (; iter < max_iterations; ++iter) {
    order();
    if (std::abs(fs[dim] - fs[0]) <= tol) {
      converged = true;
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += xs[v][d];
    }
    for (std::size_t d = 0; d < dim; ++d) centroid[d] /= static_cast<double>(dim);

    const auto blend = [&](double t) {
      std::vector<double> p(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        p[d] = centroid[d] + t * (xs[dim][d] - centroid[d]);
      }
      return p;
    };

    const std::vector<double> xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fs[0]) {
      const std::vector<double> xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[dim] = xe;
        fs[dim] = fe;
      } else {
        xs[dim] = xr;
        fs[dim] = fr;
      }
    } else if (fr < fs[dim - 1]) {
      xs[dim] = xr;
      fs[dim] = fr;
    } else {
      const bool outside = fr < fs[dim];
      const std::vector<double> xc = blend(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : fs[dim])) {
        xs[dim] = xc;
        fs[dim] = fc;
      } else {
        for (std::size_t v = 1; v <= dim; ++v) {
          for (std::size_t d = 0; d < dim; ++d) {
            xs[v][d] = xs[0][d] + 0.5 * (xs[v][d] - xs[0][d]);
          }
          fs[v] = f(xs[v]);
        }
      }
    }
  }
  order();
  return {xs[0], fs[0], iter, converged};
}

namespace {

struct Candidate2d {
  ConvexBody body{Ball{{0, 0}, 1}};
  double objective = -std::numeric_limits<double>::infinity();
  std::vector<double> params;
  bool valid = false;
};

long long count_inside(const std::vector<Vec2>& pts, const ConvexBody& body) {
  long long c = 0;
  for (const Vec2& p : pts) c += body.contains(p) ? 1 : 0;
  return c;
}

ConvexBody body_from_params(SearchClass cls, const std::vector<double>& q) {
  if (cls == SearchClass::balls) {
    return Ball{{q[0], q[1]}, std::exp(std::clamp(q[2], -60.0, 60.0))};
  }
  const double a1 = std::exp(std::clamp(q[2], -60.0, 60.0));
  const double a2 = std::exp(std::clamp(q[3], -60.0, 60.0));
  const double c = std::cos(q[4]), s = std::sin(q[4]);
  // shape = R diag(a1^2, a2^2) R^T
  const double l1 = a1 * a1, l2 = a2 * a2;
  Sym2 shape{l1 * c * c + l2 * s * s, (l1 - l2) * c * s,
             l1 * s * s + l2 * c * c};
  return Ellipsoid{{q[0], q[1]}, shape};
}

// Shrink the body (exactly) so that its volume does not exceed cap.
ConvexBody clip_volume(const ConvexBody& body, double cap, bool exact) {
  const double vol = body.volume();
  if (!exact && vol <= cap) return body;
  if (body.is_ball()) {
    double r = body.ball().radius * std::sqrt(cap / vol);
    while (kPi * r * r > cap) r = std::nextafter(r, 0.0);
    if (exact) {
      while (kPi * std::nextafter(r, 1e300) * std::nextafter(r, 1e300) <= cap) {
        r = std::nextafter(r, 1e300);
      }
    }
    return Ball{body.ball().center, r};
  }
  const Ellipsoid& e = body.ellipsoid();
  double t = cap / vol;
  Sym2 shape{e.shape.a * t, e.shape.b * t, e.shape.c * t};
  while (kPi * std::sqrt(shape.det()) > cap) {
    t = std::nextafter(t, 0.0);
    shape = {e.shape.a * t, e.shape.b * t, e.shape.c * t};
  }
  return Ellipsoid{e.center, shape};
}

}  // namespace

EstimateResult estimate_2d(const std::vector<Vec2>& sample, const EstimatorKind& kind,
                           SearchClass cls, const SearchConfig& config) {
  if (sample.empty()) throw EmptySample("estimate_2d requires points");
  if (sample.size() < 3) throw InvalidParameter("estimate_2d requires n >= d + 1");
  if (kind.relaxed) throw InvalidParameter("relaxed kinds are 1D only");
  const std::size_t n = sample.size();
  const double dn = static_cast<double>(n);
  const std::size_t dim = cls == SearchClass::balls ? 3 : 5;

  Vec2 mean{0, 0};
  for (const Vec2& p : sample) mean = mean + p;
  mean = (1.0 / dn) * mean;
  double spread = 0.0;
  for (const Vec2& p : sample) spread = std::max(spread, norm(p - mean));
  spread = std::max(spread, 1e-6);

  const long long k_count =
      kind.tag == EstimatorTag::min_volume ? ceil_count(n, kind.param) : 0;

  // Build the evaluated body for a parameter vector, honoring the volume
  // constraint by rescaling where applicable.
  const auto realize = [&](const std::vector<double>& q) {
    ConvexBody body = body_from_params(cls, q);
    if (kind.tag == EstimatorTag::max_prob) {
      body = clip_volume(body, kind.param, false);
    } else if (kind.tag == EstimatorTag::max_prob_equal_vol) {
      body = clip_volume(body, kind.param, true);
    }
    return body;
  };

  Candidate2d best;
  int converged_restarts = 0;
  for (int restart = 0; restart < config.restarts; ++restart) {
    Rng rng(derive_seed(config.seed, 0x2d5eau, static_cast<std::uint64_t>(restart)));
    const Vec2 anchor = restart == 0 ? mean : sample[rng.next_u64() % n];
    std::vector<double> start;
    const double r0 = spread * (0.3 + 0.7 * rng.uniform01());
    if (cls == SearchClass::balls) {
      start = {anchor.x, anchor.y, std::log(r0)};
    } else {
      start = {anchor.x, anchor.y, std::log(r0), std::log(r0),
               kPi * rng.uniform01()};
    }

    const double penalty =
        std::min(1e12, config.initial_penalty * std::pow(10.0, restart));
    const auto objective = [&](const std::vector<double>& q) {
      const ConvexBody body = realize(q);
      const double count = static_cast<double>(count_inside(sample, body));
      switch (kind.tag) {
        case EstimatorTag::excess_mass:
          return -(count / dn - kind.param * body.volume());
        case EstimatorTag::min_volume:
          return body.volume() +
                 penalty * std::max(0.0, static_cast<double>(k_count) - count);
        case EstimatorTag::max_prob:
        case EstimatorTag::max_prob_equal_vol:
          return -count / dn;
      }
      return 0.0;
    };

    const SimplexResult sr = nelder_mead(objective, start, 0.5 * spread,
                                         config.simplex_tol, config.max_iterations);
    if (sr.converged) ++converged_restarts;

    ConvexBody body = realize(sr.x);
    double obj;
    if (kind.tag == EstimatorTag::min_volume) {
      // Feasibility repair: with the searched center (and orientation),
      // the tightest feasible scaling is the k-th smallest one.
      std::vector<double> scale(n);
      if (cls == SearchClass::balls) {
        const Vec2 c{sr.x[0], sr.x[1]};
        for (std::size_t i = 0; i < n; ++i) scale[i] = norm(sample[i] - c);
        std::nth_element(scale.begin(), scale.begin() + (k_count - 1), scale.end());
        double r = std::max(scale[k_count - 1], 1e-300);
        while (count_inside(sample, ConvexBody(Ball{c, r})) <
               k_count) {  // guard against rounding at the k-th point
          r = std::nextafter(r, 1e300);
        }
        body = Ball{c, r};
      } else {
        const ConvexBody shape_body = body_from_params(cls, sr.x);
        const Ellipsoid& e = shape_body.ellipsoid();
        const Sym2 m = e.shape.inverse();
        for (std::size_t i = 0; i < n; ++i) {
          const Vec2 w = sample[i] - e.center;
          scale[i] = dot(w, m.mul(w));
        }
        std::nth_element(scale.begin(), scale.begin() + (k_count - 1), scale.end());
        double t = std::max(scale[k_count - 1], 1e-300);
        Sym2 sh{e.shape.a * t, e.shape.b * t, e.shape.c * t};
        while (count_inside(sample, ConvexBody(Ellipsoid{e.center, sh})) < k_count) {
          t = std::nextafter(t, 1e300);
          sh = {e.shape.a * t, e.shape.b * t, e.shape.c * t};
        }
        body = Ellipsoid{e.center, sh};
      }
      obj = -body.volume();  // maximize -volume = minimize volume
    } else {
      const double count = static_cast<double>(count_inside(sample, body));
      obj = kind.tag == EstimatorTag::excess_mass
                ? count / dn - kind.param * body.volume()
                : count / dn;
    }

    Candidate2d cand{body, obj, sr.x, true};
    if (!best.valid || cand.objective > best.objective ||
        (cand.objective == best.objective &&
         std::lexicographical_compare(cand.params.begin(), cand.params.end(),
                                      best.params.begin(), best.params.end()))) {
      best = cand;
    }
  }

  if (!best.valid || converged_restarts == 0) {
    throw SearchBudgetExceeded("no restart converged within the iteration budget");
  }

  // Exact feasibility checks on the final candidate.
  const long long final_count = count_inside(sample, best.body);
  if (kind.tag == EstimatorTag::min_volume && final_count < k_count) {
    throw InfeasibleConstraint("min-volume candidate misses the count constraint");
  }
  if ((kind.tag == EstimatorTag::max_prob ||
       kind.tag == EstimatorTag::max_prob_equal_vol) &&
      best.body.volume() > kind.param) {
    throw InfeasibleConstraint("max-prob candidate exceeds the volume cap");
  }

  EstimateResult res;
  res.set = best.body;
  res.objective = kind.tag == EstimatorTag::min_volume ? best.body.volume()
                                                       : best.objective;
  res.kind = kind;
  res.n = n;
  res.diagnostics.search_restarts = config.restarts;
  res.diagnostics.mass_num = final_count;
  res.diagnostics.mass_den = static_cast<long long>(n);
  return res;
}

}  // namespace levelset

#pragma once

#include <algorithm>

#include "levelset/errors.hpp"
#include "levelset/rng.hpp"

namespace levelset {

template <typename DrawFn>
ZDistribution z_distribution(DrawFn&& draw, std::size_t n_draws, std::uint64_t seed) {
  if (n_draws < 1) throw InvalidParameter("n_draws must be >= 1");
  ZDistribution dist;
  dist.m_total.reserve(n_draws);
  dist.m_plus.reserve(n_draws);
  dist.m_minus.reserve(n_draws);
  dist.objective.reserve(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) {
    LimitDraw d;
    try {
      d = draw(derive_seed(seed, static_cast<std::uint64_t>(i)));
    } catch (const TruncationHit& e) {
      throw TruncationHit("draw " + std::to_string(i) + ": " + e.what());
    }
    dist.m_total.push_back(d.m_total);
    dist.m_plus.push_back(d.m_plus);
    dist.m_minus.push_back(d.m_minus);
    dist.objective.push_back(d.objective);
    if (dist.shifts.size() < d.shifts.size()) dist.shifts.resize(d.shifts.size());
    for (std::size_t c = 0; c < d.shifts.size(); ++c) {
      dist.shifts[c].push_back(d.shifts[c]);
    }
  }
  std::sort(dist.m_total.begin(), dist.m_total.end());
  std::sort(dist.m_plus.begin(), dist.m_plus.end());
  std::sort(dist.m_minus.begin(), dist.m_minus.end());
  std::sort(dist.objective.begin(), dist.objective.end());
  for (auto& col : dist.shifts) std::sort(col.begin(), col.end());
  return dist;
}

}  // namespace levelset

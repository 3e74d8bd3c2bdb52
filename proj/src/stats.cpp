/* Copyright 2026 The gazesal Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "gazesal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "gazesal/common.hpp"
#include "stats_detail.hpp"

namespace gazesal::stats {

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("variance needs at least two values");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

namespace {

double clamp_p(double p) { return std::clamp(p, std::numeric_limits<double>::min(), 1.0); }

struct RankSummary {
  double rank_sum_b = 0.0;
  double tie_term = 0.0;
  bool has_ties = false;
};

RankSummary rank_summary(std::span<const double> a, std::span<const double> b) {
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(a.size() + b.size());
  for (double x : a) pooled.emplace_back(x, false);
  for (double x : b) pooled.emplace_back(x, true);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  RankSummary out;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j + 1 < pooled.size() && pooled[j + 1].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i + 1);
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    if (t > 1.0) {
      out.has_ties = true;
      out.tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k <= j; ++k) {
      if (pooled[k].second) out.rank_sum_b += midrank;
    }
    i = j + 1;
  }
  return out;
}

}  // namespace

std::vector<double> mann_whitney_null_counts(std::size_t n_a, std::size_t n_b) {
  // counts[i][j][u]: labelings of i a-values and j b-values with U = u.
  // The largest pooled value is either an a (adds no pairs) or a b (exceeds all i a-values).
  std::vector<std::vector<std::vector<double>>> counts(n_a + 1, std::vector<std::vector<double>>(n_b + 1));
  for (std::size_t i = 0; i <= n_a; ++i) {
    for (std::size_t j = 0; j <= n_b; ++j) {
      auto& cur = counts[i][j];
      cur.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        cur[0] = 1.0;
        continue;
      }
      const auto& from_a = counts[i - 1][j];
      const auto& from_b = counts[i][j - 1];
      for (std::size_t u = 0; u < from_a.size(); ++u) cur[u] += from_a[u];
      for (std::size_t u = 0; u < from_b.size(); ++u) cur[u + i] += from_b[u];
    }
  }
  return counts[n_a][n_b];
}

double mann_whitney_exact_p(double u, std::size_t n_a, std::size_t n_b) {
  const auto counts = mann_whitney_null_counts(n_a, n_b);
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const auto cut = static_cast<std::size_t>(std::llround(u));
  double le = 0.0;
  double ge = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (k <= cut) le += counts[k];
    if (k >= cut) ge += counts[k];
  }
  return detail::two_sided_from_tails(le, ge, total);
}

double mann_whitney_normal_p(double u, std::size_t n_a, std::size_t n_b, double tie_term) {
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double n = na + nb;
  const double mu = 0.5 * na * nb;
  double var = na * nb / 12.0 * (n + 1.0);
  if (n > 1.0) var -= na * nb / 12.0 * tie_term / (n * (n - 1.0));
  if (!(var > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
  return clamp_p(std::erfc(z / std::sqrt(2.0)));
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Mann-Whitney: empty sample");
  const RankSummary ranks = rank_summary(a, b);
  const double nb = static_cast<double>(b.size());
  MannWhitneyResult out;
  out.u = ranks.rank_sum_b - nb * (nb + 1.0) / 2.0;
  if (!ranks.has_ties && std::max(a.size(), b.size()) <= kExactMaxGroupSize) {
    out.p = mann_whitney_exact_p(out.u, a.size(), b.size());
    out.exact = true;
  } else {
    out.p = mann_whitney_normal_p(out.u, a.size(), b.size(), ranks.tie_term);
  }
  return out;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("Cohen's d needs at least two values per group");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double pooled = ((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / (na + nb - 2.0);
  if (!(pooled > 0.0)) throw DegenerateError("Cohen's d: degenerate samples (zero pooled variance)");
  return (mean(a) - mean(b)) / std::sqrt(pooled);
}

double permutation_test(std::span<const double> a, std::span<const double> b, const PermutationConfig& config) {
  if (a.empty() || b.empty()) throw std::invalid_argument("permutation test: empty sample");
  if (config.n_perm < 1) throw std::invalid_argument("permutation test: n_perm must be >= 1");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const detail::MeanGap gap(a.size(), b.size(), pooled);
  const double observed = gap(std::accumulate(a.begin(), a.end(), 0.0));

  const auto n_perm = static_cast<long long>(config.n_perm);
  long long hits = 0;
#pragma omp parallel
  {
    std::vector<double> buffer(pooled.size());
#pragma omp for schedule(static) reduction(+ : hits)
    for (long long k = 0; k < n_perm; ++k) {
      const double s = detail::permuted_sum_a(pooled, a.size(), config.seed, static_cast<std::uint64_t>(k), buffer);
      hits += detail::at_least(gap(s), observed) ? 1 : 0;
    }
  }
  return static_cast<double>(hits + 1) / static_cast<double>(config.n_perm + 1);
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 3) throw DegenerateError("undefined correlation: fewer than 3 pairs");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateError("undefined correlation: zero variance");
  PearsonResult out;
  out.n = x.size();
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(x.size() - 2);
  if (std::abs(out.r) >= 1.0) {
    out.p = 0.0;
    return out;
  }
  const double t = out.r * std::sqrt(df / (1.0 - out.r * out.r));
  boost::math::students_t dist(df);
  out.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
  return out;
}

GroupComparison compare_groups(std::span<const double> case_values, std::span<const double> control_values,
                               const std::string& attribute, const PermutationConfig& config) {
  if (case_values.size() < 2 || control_values.size() < 2) {
    throw DegenerateError("comparison '" + attribute + "': fewer than two values in a group");
  }
  GroupComparison row;
  row.attribute = attribute;
  row.n_case = case_values.size();
  row.n_control = control_values.size();
  row.mean_case = mean(case_values);
  row.mean_control = mean(control_values);
  const auto mw = mann_whitney_u(case_values, control_values);
  row.u = mw.u;
  row.p_mw = mw.p;
  try {
    row.d = cohens_d(case_values, control_values);
  } catch (const DegenerateError&) {
    throw DegenerateError("comparison '" + attribute + "': degenerate samples (zero pooled variance)");
  }
  row.p_perm = permutation_test(case_values, control_values, config);
  row.significant = row.p_mw < kSignificanceLevel;
  return row;
}

}  // namespace gazesal::stats

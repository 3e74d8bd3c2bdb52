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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gazesal::stats {

struct MannWhitneyResult {
  double u = 0.0;  // pairs with a_i < b_j, ties counted one half
  double p = 1.0;  // two-sided
  bool exact = false;
};

/// Largest group size for which the exact null distribution is used.
inline constexpr std::size_t kExactMaxGroupSize = 8;

/// Rank-sum test of location shift. Exact when no ties and both groups have
/// at most kExactMaxGroupSize values; otherwise normal approximation with
/// tie correction and 0.5 continuity correction. Throws on an empty group.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Number of the C(n_a + n_b, n_a) labelings with each U value 0..n_a*n_b,
/// via the Mann-Whitney recurrence.
std::vector<double> mann_whitney_null_counts(std::size_t n_a, std::size_t n_b);

/// Two-sided exact p = min(1, 2 min(P(U <= u), P(U >= u))) for integer u.
double mann_whitney_exact_p(double u, std::size_t n_a, std::size_t n_b);

/// Normal approximation; tie_term = sum over tie groups of t^3 - t.
double mann_whitney_normal_p(double u, std::size_t n_a, std::size_t n_b, double tie_term);

/// (mean_a - mean_b) / pooled sd. Throws DegenerateError on zero pooled variance.
double cohens_d(std::span<const double> a, std::span<const double> b);

struct PermutationConfig {
  std::size_t n_perm = 4999;
  std::uint64_t seed = 1;
};

/// Label-shuffling test on |mean_a - mean_b| with the add-one estimator
/// (count + 1) / (n_perm + 1). Permutation k draws from a substream keyed by
/// (seed, k), so the result does not depend on the thread count.
double permutation_test(std::span<const double> a, std::span<const double> b, const PermutationConfig& config);

struct PearsonResult {
  double r = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Product-moment correlation with a two-sided t-test on n - 2 degrees of
/// freedom. Throws DegenerateError ("undefined correlation") when either
/// coordinate has zero variance or n < 3.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

struct GroupComparison {
  std::string attribute;
  std::size_t n_case = 0;
  std::size_t n_control = 0;
  double mean_case = 0.0;
  double mean_control = 0.0;
  double u = 0.0;
  double p_mw = 1.0;
  double d = 0.0;
  double p_perm = 1.0;
  bool significant = false;
};

inline constexpr double kSignificanceLevel = 0.01;

/// Full battery for one attribute; significant iff p_mw < 0.01.
GroupComparison compare_groups(std::span<const double> case_values, std::span<const double> control_values,
                               const std::string& attribute, const PermutationConfig& config);

double mean(std::span<const double> v);
/// Unbiased sample variance.
double variance(std::span<const double> v);

}  // namespace gazesal::stats

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

#include <span>
#include <vector>

#include "gazesal/pipeline.hpp"
#include "gazesal/salmap.hpp"
#include "gazesal/stats.hpp"

// Single-threaded versions of the OpenMP kernels. They visit data in the
// same per-element order, so results must match the parallel paths bit for bit.
namespace gazesal::reference {

SaliencyMap gaussian_smooth_serial(const SaliencyMap& map, double sigma_px);

double permutation_test_serial(std::span<const double> a, std::span<const double> b,
                               const stats::PermutationConfig& config);

/// Per-trial metrics in (subject id, trial id) order, one trial at a time.
std::vector<TrialMetrics> analyze_trials_serial(const Cohort& cohort, const AnalysisConfig& config,
                                                const PreparedMaps& maps);

}  // namespace gazesal::reference

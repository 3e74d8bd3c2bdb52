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

#include <filesystem>
#include <string>

#include "gazesal/image_io.hpp"
#include "gazesal/pipeline.hpp"

namespace gazesal {

inline constexpr const char* kVersion = "0.1.0";

std::string comparison_csv(const AnalysisResult& result);
std::string comparison_json(const AnalysisResult& result);
std::string subject_metrics_csv(const AnalysisResult& result);
std::string subject_fixations_csv(const AnalysisResult& result);
std::string subject_latency_csv(const AnalysisResult& result);
std::string trial_metrics_csv(const AnalysisResult& result);
std::string correlations_csv(const AnalysisResult& result);

/// Run metadata: configuration, seed and library version. Excludes the job
/// count and anything time-dependent so reports are comparable across runs.
std::string run_metadata_json(const AnalysisResult& result, const AnalysisConfig& config,
                              const std::string& manifest_path);

/// Density rescaled so its peak maps to 255 (all zeros stays all zeros).
Gray8Image quantize_density(const SaliencyMap& density);

/// Writes the full report tree:
///   comparison.csv/json, subject_metrics.csv, subject_fixations.csv,
///   subject_latency.csv, trial_metrics.csv, correlations.csv,
///   run_metadata.json, density/<stimulus>.<group>.{pgm,json,png},
///   events/<trial>.json when events were kept.
void write_report_tree(const AnalysisResult& result, const AnalysisConfig& config, const std::string& manifest_path,
                       const std::filesystem::path& out_dir);

}  // namespace gazesal

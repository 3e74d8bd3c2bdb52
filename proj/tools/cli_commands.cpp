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

#include "cli_commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "gazesal/cohortsim.hpp"
#include "gazesal/image_io.hpp"
#include "gazesal/manifest.hpp"
#include "gazesal/pipeline.hpp"
#include "gazesal/report.hpp"

namespace gazesal::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct AnalyzeOptions {
  std::string manifest;
  std::string out;
  std::string granularity = "subject";
  std::string sampling = "centroid";
  std::size_t n_perm = 4999;
  std::uint64_t seed = 1;
  int jobs = 0;
  std::vector<std::string> attributes;
  bool dump_events = false;
  bool no_density = false;
  DetectionConfig detection;
  double latency_threshold = kDefaultSalientThreshold;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  AnalysisConfig cfg;
  cfg.detection = o.detection;
  cfg.granularity = parse_granularity(o.granularity);
  cfg.sampling = o.sampling == "samples" ? SaliencySampling::Samples : SaliencySampling::FixationCentroid;
  cfg.n_perm = o.n_perm;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.attributes = o.attributes;
  cfg.keep_events = o.dump_events;
  cfg.densities = !o.no_density;
  cfg.latency_threshold = o.latency_threshold;
  if (o.jobs > 0) omp_set_num_threads(o.jobs);

  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw InputError("output directory not writable: " + o.out);

  const CohortManifest manifest = load_manifest(o.manifest);
  const Cohort cohort = load_cohort(manifest);
  const AnalysisResult result = analyze(cohort, cfg);
  write_report_tree(result, cfg, o.manifest, o.out);

  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  for (const auto& c : result.comparisons) {
    out << c.attribute << ": U=" << c.u << " p_mw=" << c.p_mw << " d=" << c.d << " p_perm=" << c.p_perm
        << (c.significant ? " significant" : "") << '\n';
  }
  return kOk;
}

int cmd_simulate(const std::string& profile_path, const std::string& out_dir, std::ostream& out) {
  const CohortSimConfig cfg = parse_sim_config(read_file(profile_path));
  const fs::path manifest = generate_cohort(cfg, out_dir);
  out << "wrote " << manifest.string() << '\n';
  return kOk;
}

}  // namespace

int cmd_validate_maps(const std::string& manifest_path, const std::string& attributes_path, std::ostream& out,
                      std::ostream& err) {
  CohortManifest m = load_manifest(manifest_path);
  if (!attributes_path.empty()) m.attributes = parse_attribute_specs(read_file(attributes_path));
  if (m.attributes.empty()) {
    err << "warning: no attributes declared; nothing to validate\n";
    return kOk;
  }
  std::size_t violations = 0;
  std::size_t checked = 0;
  auto report = [&](const std::string& attr, const std::string& stim, const fs::path& path, const std::string& why) {
    out << "violation: attribute '" << attr << "' stimulus '" << stim << "' " << path.string() << ": " << why << '\n';
    ++violations;
  };
  for (const auto& stim : m.stimuli) {
    for (const auto& attr : m.attributes) {
      for (const auto& part : attr.constituent_names()) {
        const fs::path path = m.base_dir / attr.map_path(stim.id, part);
        ++checked;
        if (!fs::exists(path)) {
          report(attr.name, stim.id, path, "missing");
          continue;
        }
        Gray8Image img;
        try {
          img = read_gray8(path);
        } catch (const std::exception& e) {
          report(attr.name, stim.id, path, std::string("unparseable: ") + e.what());
          continue;
        }
        if (img.size != stim.size) {
          report(attr.name, stim.id, path,
                 "dimensions " + std::to_string(img.size.width) + "x" + std::to_string(img.size.height) +
                     " != " + std::to_string(stim.size.width) + "x" + std::to_string(stim.size.height));
          continue;
        }
        std::vector<double> values(img.pixels.begin(), img.pixels.end());
        const SaliencyMap map(img.size.width, img.size.height, MapKind::Raw, std::move(values));
        if (!map.within_kind_bounds()) report(attr.name, stim.id, path, "values outside [0, 255]");
      }
    }
  }
  err << checked << " map(s) checked, " << violations << " violation(s)\n";
  return violations == 0 ? kOk : kFindings;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gazesal: gaze saliency analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  AnalyzeOptions ao;
  auto* analyze_cmd = app.add_subcommand("analyze", "Detect events, score fixations and compare groups");
  analyze_cmd->add_option("--manifest", ao.manifest, "Cohort manifest JSON")->required();
  analyze_cmd->add_option("--out", ao.out, "Report directory")->required();
  analyze_cmd->add_option("--granularity", ao.granularity, "Comparison unit")
      ->check(CLI::IsMember({"subject", "trial"}));
  analyze_cmd->add_option("--n-perm", ao.n_perm, "Permutations per comparison")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--seed", ao.seed, "Permutation seed");
  analyze_cmd->add_option("--jobs", ao.jobs, "Worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  analyze_cmd->add_option("--attributes", ao.attributes, "Attributes to analyze (default: all)")->delimiter(',');
  analyze_cmd->add_option("--sampling", ao.sampling, "Fixation saliency sampling")
      ->check(CLI::IsMember({"centroid", "samples"}));
  analyze_cmd->add_option("--latency-threshold", ao.latency_threshold, "Salient level for latency");
  analyze_cmd->add_flag("--dump-events", ao.dump_events, "Write per-trial event JSON");
  analyze_cmd->add_flag("--no-density", ao.no_density, "Skip density maps");
  auto& d = ao.detection;
  analyze_cmd->add_option("--dispersion-deg", d.fixation_dispersion_deg, "Fixation dispersion limit");
  analyze_cmd->add_option("--min-fixation-ms", d.fixation_min_ms, "Minimum detected fixation duration");
  analyze_cmd->add_option("--saccade-velocity", d.saccade_velocity_deg_s, "Saccade velocity threshold, deg/s");
  analyze_cmd->add_option("--saccade-amplitude", d.saccade_min_amplitude_deg, "Minimum saccade amplitude");
  analyze_cmd->add_option("--keep-min-ms", d.fixation_keep_min_ms, "Discard fixations shorter than this");
  analyze_cmd->add_option("--oob-fraction", d.oob_discard_fraction, "Discard at this off-image fraction");
  analyze_cmd->add_option("--blink-pad-ms", d.blink_pad_ms, "Blink padding on each side");

  std::string profile_path, sim_out;
  auto* simulate_cmd = app.add_subcommand("simulate", "Write a synthetic cohort");
  simulate_cmd->add_option("--profile", profile_path, "Simulation profile JSON")->required();
  simulate_cmd->add_option("--out", sim_out, "Output directory")->required();

  std::string validate_manifest, validate_attrs;
  auto* validate_cmd = app.add_subcommand("validate-maps", "Check every declared map file");
  validate_cmd->add_option("--manifest", validate_manifest, "Cohort manifest JSON")->required();
  validate_cmd->add_option("--attributes", validate_attrs, "attrs.json replacing the manifest attribute list");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(ao, out, err);
    if (*simulate_cmd) return cmd_simulate(profile_path, sim_out, out);
    return cmd_validate_maps(validate_manifest, validate_attrs, out, err);
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace gazesal::cli

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

#include "gazesal/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include <omp.h>

namespace gazesal {

std::string to_string(Granularity g) { return g == Granularity::Subject ? "subject" : "trial"; }

Granularity parse_granularity(const std::string& s) {
  if (s == "subject") return Granularity::Subject;
  if (s == "trial") return Granularity::Trial;
  throw InputError("granularity must be 'subject' or 'trial', got '" + s + "'");
}

namespace {

std::vector<const AttributeSpec*> selected_specs(const CohortManifest& m, const AnalysisConfig& config) {
  std::vector<const AttributeSpec*> out;
  if (config.attributes.empty()) {
    for (const auto& a : m.attributes) out.push_back(&a);
    return out;
  }
  for (const auto& name : config.attributes) {
    auto it = std::find_if(m.attributes.begin(), m.attributes.end(),
                           [&](const AttributeSpec& a) { return a.name == name; });
    if (it == m.attributes.end()) throw InputError("attribute '" + name + "' is not declared in the manifest");
    out.push_back(&*it);
  }
  return out;
}

int thread_count(const AnalysisConfig& config) { return config.jobs > 0 ? config.jobs : omp_get_max_threads(); }

}  // namespace

PreparedMaps prepare_maps(const Cohort& cohort, const AnalysisConfig& config) {
  PreparedMaps out;
  const auto specs = selected_specs(cohort.manifest, config);
  for (const auto& stim : cohort.manifest.stimuli) {
    for (const auto* spec : specs) {
      std::vector<SaliencyMap> raw;
      for (const auto& part : spec->constituent_names()) {
        auto it = cohort.raw_maps.find(map_key(stim.id, part));
        if (it == cohort.raw_maps.end()) {
          throw InputError("missing map for attribute '" + spec->name + "' stimulus '" + stim.id + "'");
        }
        raw.push_back(it->second);
      }
      out.attribute.emplace(map_key(stim.id, spec->name), prepare_attribute_map(*spec, raw));
    }
    out.center.emplace(stim.id, center_prior_map(stim.size.width, stim.size.height, config.center_prior_sigma_px));
  }
  return out;
}

TrialMetrics analyze_trial(const TrialEntry& trial, const Cohort& cohort, const PreparedMaps& maps,
                           const AnalysisConfig& config, TrialEvents* events_out) {
  const auto& manifest = cohort.manifest;
  const auto& stim = manifest.stimulus(trial.stimulus_id);
  auto rec = cohort.recordings.find(trial.gaze_file);
  if (rec == cohort.recordings.end()) {
    throw InputError("unreadable recording for trial '" + trial.trial_id + "': " + trial.gaze_file);
  }

  const GazeTrace window = clip_to_window(rec->second, trial.onset_ms, trial.offset_ms);
  const EyeTraces eyes = split_eyes(window);
  GazeTrace cyclopean;
  try {
    cyclopean = binocular_average(eyes.left, eyes.right);
  } catch (const InputError& e) {
    throw InputError("trial '" + trial.trial_id + "': " + e.what());
  }

  TrialEvents ev;
  ev.blinks = detect_blinks(cyclopean, config.detection, std::make_pair(trial.onset_ms, trial.offset_ms));
  const GazeTrace clean = excise_blinks(cyclopean, ev.blinks);
  const StimulusFrame frame{trial.display_rect, stim.size};
  ev.detected = detect_events(clean, manifest.geometry, config.detection, frame);
  ev.kept = filter_fixations(ev.detected.fixations, stim.size, config.detection);

  TrialMetrics tm;
  tm.trial_id = trial.trial_id;
  tm.subject_id = trial.subject_id;
  tm.group = manifest.subject(trial.subject_id).group;
  tm.stimulus_id = trial.stimulus_id;
  tm.fixation_count = ev.kept.size();
  tm.center_bias = trial_fixation_saliency(ev.kept, maps.center.at(stim.id), config.sampling);

  for (const auto* spec : selected_specs(manifest, config)) {
    const SaliencyMap& map = maps.attribute.at(map_key(stim.id, spec->name));
    tm.saliency[spec->name] = trial_fixation_saliency(ev.kept, map, config.sampling);
    const double threshold = spec->latency_threshold.value_or(config.latency_threshold);
    tm.latency_ms[spec->name] = latency_to_salient_fixation(ev.kept, map, threshold, trial.onset_ms);
    auto& pairs = tm.fixations[spec->name];
    const auto values = fixation_saliencies(ev.kept, map);
    for (std::size_t i = 0; i < ev.kept.size(); ++i) pairs.push_back({ev.kept[i].duration_ms(), values[i]});
  }
  if (events_out) *events_out = std::move(ev);
  return tm;
}

std::vector<std::string> comparison_metric_names(const std::vector<std::string>& attributes) {
  std::vector<std::string> names = {"fixation_count", "center_bias"};
  for (const auto& a : attributes) names.push_back(a);
  for (const auto& a : attributes) names.push_back("latency:" + a);
  return names;
}

AnalysisResult analyze(const Cohort& cohort, const AnalysisConfig& config) {
  return analyze(cohort, config, prepare_maps(cohort, config));
}

AnalysisResult analyze(const Cohort& cohort, const AnalysisConfig& config, const PreparedMaps& maps) {
  config.detection.validate();
  const auto& manifest = cohort.manifest;
  AnalysisResult result;
  for (const auto* spec : selected_specs(manifest, config)) result.selected_attributes.push_back(spec->name);

  std::vector<std::size_t> order(manifest.trials.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ta = manifest.trials[a];
    const auto& tb = manifest.trials[b];
    return std::tie(ta.subject_id, ta.trial_id) < std::tie(tb.subject_id, tb.trial_id);
  });

  const std::size_t n = order.size();
  result.trials.resize(n);
  std::vector<TrialEvents> events(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(config))
  for (std::size_t i = 0; i < n; ++i) {
    try {
      result.trials[i] = analyze_trial(manifest.trials[order[i]], cohort, maps, config, &events[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw InputError(e);
  }

  // Subject fold in (subject id, trial id) order.
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && result.trials[j].subject_id == result.trials[i].subject_id) ++j;
    auto summary = summarize_subject(std::span(result.trials).subspan(i, j - i));
    if (summary) {
      result.subjects.push_back(std::move(*summary));
    } else {
      result.warnings.push_back("subject '" + result.trials[i].subject_id +
                                "' excluded: no trial with surviving fixations");
    }
    i = j;
  }
  for (const auto& s : manifest.subjects) {
    const bool has_trials = std::any_of(manifest.trials.begin(), manifest.trials.end(),
                                        [&](const TrialEntry& t) { return t.subject_id == s.id; });
    if (!has_trials) result.warnings.push_back("subject '" + s.id + "' excluded: no trials");
  }

  for (Group g : {Group::Case, Group::Control}) {
    const bool empty = config.granularity == Granularity::Subject
                           ? std::none_of(result.subjects.begin(), result.subjects.end(),
                                          [g](const SubjectSummary& s) { return s.group == g; })
                           : std::none_of(result.trials.begin(), result.trials.end(), [g](const TrialMetrics& t) {
                               return t.group == g && t.fixation_count > 0;
                             });
    if (empty) throw DegenerateError("empty group after filtering: " + to_string(g));
  }

  const auto metric_names = comparison_metric_names(result.selected_attributes);
  for (std::size_t row = 0; row < metric_names.size(); ++row) {
    const std::string& metric = metric_names[row];
    std::vector<double> values[2];
    auto push = [&](Group g, std::optional<double> v) {
      if (v) values[g == Group::Case ? 0 : 1].push_back(*v);
    };
    const bool latency = metric.starts_with("latency:");
    const std::string attr = latency ? metric.substr(8) : metric;
    if (config.granularity == Granularity::Subject) {
      for (const auto& s : result.subjects) {
        if (metric == "fixation_count") {
          push(s.group, s.fixation_count);
        } else if (metric == "center_bias") {
          push(s.group, s.center_bias);
        } else {
          const auto& m = latency ? s.latency_ms : s.saliency;
          auto it = m.find(attr);
          push(s.group, it == m.end() ? std::nullopt : std::optional<double>(it->second));
        }
      }
    } else {
      for (const auto& t : result.trials) {
        if (t.fixation_count == 0) continue;
        if (metric == "fixation_count") {
          push(t.group, static_cast<double>(t.fixation_count));
        } else if (metric == "center_bias") {
          push(t.group, t.center_bias);
        } else {
          const auto& m = latency ? t.latency_ms : t.saliency;
          auto it = m.find(attr);
          push(t.group, it == m.end() ? std::nullopt : it->second);
        }
      }
    }
    const stats::PermutationConfig perm{config.n_perm, substream_seed(config.seed, row)};
    try {
      result.comparisons.push_back(stats::compare_groups(values[0], values[1], metric, perm));
    } catch (const DegenerateError& e) {
      result.warnings.push_back(std::string("comparison skipped: ") + e.what());
    }
  }

  for (const auto& attr : result.selected_attributes) {
    for (Group g : {Group::Case, Group::Control}) {
      std::vector<FixationSaliency> pooled;
      for (const auto& t : result.trials) {
        if (t.group != g) continue;
        const auto& fx = t.fixations.at(attr);
        pooled.insert(pooled.end(), fx.begin(), fx.end());
      }
      CorrelationRow row{g, attr, pooled.size(), std::nullopt, std::nullopt};
      try {
        const auto pr = duration_saliency_correlation(pooled);
        row.r = pr.r;
        row.p = pr.p;
      } catch (const DegenerateError&) {
      }
      result.correlations.push_back(row);
    }
  }

  for (const auto& stim : manifest.stimuli) {
    if (!config.densities) break;
    for (Group g : {Group::Case, Group::Control}) {
      std::vector<std::vector<FixationEvent>> sets;
      std::size_t count = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (result.trials[k].stimulus_id != stim.id || result.trials[k].group != g) continue;
        sets.push_back(events[k].kept);
        count += events[k].kept.size();
      }
      const double sigma = config.density_sigma_px.value_or(default_smoothing_sigma(stim.size));
      result.densities.push_back({stim.id, g, count, fixation_density(sets, stim.size, sigma)});
    }
  }

  if (config.keep_events) result.events = std::move(events);
  return result;
}

}  // namespace gazesal

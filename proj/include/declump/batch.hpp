#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "case.hpp"
#include "config.hpp"
#include "evaluate.hpp"
#include "geom.hpp"
#include "pipeline.hpp"

namespace declump {

/// Boundary of a case, from its polygon or by tracing its mask label.
inline ClosedBoundary case_boundary(const ClumpCase& c, const Config& config) {
  const std::vector<Vec2> outline = c.polygon ? *c.polygon : trace_boundary(c.mask, c.label);
  return make_boundary(outline, config.curvature_window, config.curvature_smooth_sigma, config.normal_smooth_sigma);
}

/// Pixels of the case's region: the mask label when a mask is given,
/// otherwise the rasterized polygon on the image (or bounding) raster.
inline std::optional<Mask> case_region(const ClumpCase& c) {
  if (c.polygon) return std::nullopt;
  Mask m(c.mask.width(), c.mask.height(), 0);
  for (std::size_t k = 0; k < m.size(); ++k) m.values()[k] = c.mask.values()[k] == c.label ? 1 : 0;
  return m;
}

struct CaseRun {
  ClosedBoundary boundary;
  PartitionResult result;
};

inline CaseRun partition_case(const ClumpCase& c, const Config& config) {
  CaseRun run{case_boundary(c, config), {}};
  const std::optional<Mask> region = case_region(c);
  run.result = partition_clump(run.boundary, c.seeds, c.image ? &*c.image : nullptr, config, region ? &*region : nullptr);
  return run;
}

struct CaseReport {
  std::string id;
  std::string error;                 // non-empty when the case threw
  int regions = 0;
  int seeds = 0;
  int cuts = 0;
  std::optional<Verdict> verdict;    // present when truth exists (or on error)
  double seconds = 0.0;
  std::optional<CaseRun> run;        // kept only when requested
};

struct EvalReport {
  std::vector<CaseReport> cases;
  int evaluated = 0;
  int correct = 0;
  double total_seconds = 0.0;        // wall clock of the whole batch

  double correct_fraction() const { return evaluated > 0 ? static_cast<double>(correct) / evaluated : 0.0; }
};

inline CaseReport run_case(const ClumpCase& c, const Config& config, bool keep_run) {
  CaseReport rep;
  rep.id = c.id;
  rep.seeds = static_cast<int>(c.seeds.size());
  const auto t0 = std::chrono::steady_clock::now();
  try {
    CaseRun run = partition_case(c, config);
    rep.regions = run.result.region_count;
    rep.cuts = static_cast<int>(run.result.cuts.size());
    if (c.truth) rep.verdict = evaluate_case(run.result.labels, *c.truth, config.iou_threshold);
    if (keep_run) rep.run = std::move(run);
  } catch (const std::exception& e) {
    rep.error = e.what();
    if (c.truth) rep.verdict = Verdict{false, std::string("error: ") + e.what(), 0, 0, {}};
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Partitions every case on up to `jobs` worker threads. Reports are stored
/// by case index, so everything except timing is independent of `jobs`.
inline EvalReport run_batch(const std::vector<ClumpCase>& cases, const Config& config, int jobs = 1, bool keep_runs = false) {
  validate(config);
  EvalReport report;
  report.cases.resize(cases.size());
  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cases.size(); k = next++) report.cases[k] = run_case(cases[k], config, keep_runs);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cases.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const CaseReport& r : report.cases) {
    if (!r.verdict) continue;
    ++report.evaluated;
    if (r.verdict->correct) ++report.correct;
  }
  return report;
}

/// Report document. Timing is included only on request so that the default
/// document is byte-stable.
inline nlohmann::ordered_json report_json(const EvalReport& report, bool with_timing = false) {
  nlohmann::ordered_json cases = nlohmann::ordered_json::array();
  for (const CaseReport& r : report.cases) {
    nlohmann::ordered_json j{{"id", r.id}, {"seeds", r.seeds}, {"regions", r.regions}, {"cuts", r.cuts}};
    if (!r.error.empty()) j["error"] = r.error;
    if (r.verdict) {
      j["verdict"] = r.verdict->correct ? "correct" : "incorrect";
      if (!r.verdict->correct) j["reason"] = r.verdict->reason;
      j["objects"] = r.verdict->objects;
    }
    if (with_timing) j["seconds"] = r.seconds;
    cases.push_back(std::move(j));
  }
  char fraction[32];
  std::snprintf(fraction, sizeof fraction, "%.3f", report.correct_fraction());
  nlohmann::ordered_json out{{"total", report.cases.size()}, {"evaluated", report.evaluated}, {"correct", report.correct}};
  if (report.evaluated > 0) out["correct_fraction"] = fraction;
  if (with_timing) out["seconds"] = report.total_seconds;
  out["cases"] = cases;
  return out;
}

}  // namespace declump

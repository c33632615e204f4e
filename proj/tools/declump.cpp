// Command-line front end: partition one clump, run a directory of cases,
// generate synthetic cases, or validate against ground truth.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "declump/declump.hpp"

namespace fs = std::filesystem;
using namespace declump;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  bool svg = false;
  bool emit_mask = false;
};

Config load_config(const std::string& path) { return path.empty() ? Config{} : io::read_config(path); }

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << text;
}

void write_outputs(const fs::path& dir, const ClumpCase& c, const CaseRun& run, const Common& opt) {
  fs::create_directories(dir);
  write_text(dir / "cuts.json", io::cuts_json(run.result).dump(2) + "\n");
  if (opt.emit_mask) io::write_labels(dir / "labels.pgm", run.result.labels);
  if (opt.svg) {
    write_text(dir / "overlay.svg",
               io::render_svg(run.boundary, run.result, c.seeds, run.result.labels.width(), run.result.labels.height()));
  }
}

int run_partition(const std::string& boundary, const std::string& mask, int label, const std::string& seeds,
                  const std::string& image, const Common& opt) {
  const Config config = load_config(opt.config);
  ClumpCase c;
  c.id = "clump";
  if (!boundary.empty()) {
    c.polygon = io::read_points(boundary, "vertices");
  } else {
    c.mask = io::read_labels(mask);
    c.label = label;
  }
  c.seeds = io::read_points(seeds, "seeds");
  if (!image.empty()) c.image = io::read_intensity(image);
  const CaseRun run = partition_case(c, config);
  write_outputs(opt.out, c, run, opt);
  std::printf("%d regions, %zu cuts\n", run.result.region_count, run.result.cuts.size());
  return 0;
}

int run_directory(const std::string& cases_dir, const Common& opt, int jobs, bool require_truth) {
  const Config config = load_config(opt.config);
  std::vector<ClumpCase> cases;
  for (const fs::path& dir : io::list_case_dirs(cases_dir)) {
    ClumpCase c = io::load_case(dir);
    if (require_truth && !c.truth) throw Error(ErrorCode::IoError, dir.string() + ": no truth.pgm");
    cases.push_back(std::move(c));
  }
  if (cases.empty()) throw Error(ErrorCode::IoError, cases_dir + ": no cases found");
  const bool keep = opt.svg || opt.emit_mask || !require_truth;
  const EvalReport report = run_batch(cases, config, jobs, keep);
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const CaseReport& r = report.cases[k];
    if (r.run) write_outputs(fs::path(opt.out) / r.id, cases[k], *r.run, opt);
  }
  write_text(fs::path(opt.out) / "report.json", report_json(report).dump(2) + "\n");
  std::size_t errors = 0;
  for (const CaseReport& r : report.cases) errors += r.error.empty() ? 0 : 1;
  std::printf("%zu cases, %zu errors", report.cases.size(), errors);
  if (report.evaluated > 0) std::printf(", %d/%d correct (%.3f)", report.correct, report.evaluated, report.correct_fraction());
  std::printf("\n");
  std::fprintf(stderr, "%.2f s\n", report.total_seconds);
  return 0;
}

int run_synth(const std::string& out, int count, std::uint64_t seed, int max_objects) {
  for (ClumpCase& c : generate_corpus(seed, count, max_objects)) io::save_case(fs::path(out) / c.id, c);
  std::printf("wrote %d cases to %s\n", count, out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split clumps of overlapping objects into one region per seed"};
  app.require_subcommand(1);

  Common opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Key/value parameter file");
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_flag("--svg", opt.svg, "Write an SVG overlay");
    sub->add_flag("--emit-mask", opt.emit_mask, "Write the 16-bit label image");
  };

  std::string boundary, mask, seeds, image;
  int label = 1;
  auto* part = app.add_subcommand("partition", "Partition one clump");
  auto* b_opt = part->add_option("--boundary", boundary, "Polygon file with 'vertices'")->check(CLI::ExistingFile);
  auto* m_opt = part->add_option("--mask", mask, "Label image (PGM)")->check(CLI::ExistingFile);
  b_opt->excludes(m_opt);
  part->add_option("--label", label, "Region label in --mask")->needs(m_opt);
  part->add_option("--seeds", seeds, "Seed file with 'seeds'")->required()->check(CLI::ExistingFile);
  part->add_option("--image", image, "Intensity image (PGM)")->check(CLI::ExistingFile);
  add_common(part);

  std::string cases_dir;
  int jobs = 1;
  auto* batch = app.add_subcommand("batch", "Partition every case in a directory");
  auto* validate = app.add_subcommand("validate", "Partition and score cases that carry truth.pgm");
  for (auto* sub : {batch, validate}) {
    sub->add_option("cases", cases_dir, "Directory of case subdirectories")->required()->check(CLI::ExistingDirectory);
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_common(sub);
  }

  int count = 200;
  int max_objects = 5;
  std::uint64_t rng_seed = 42;
  std::string synth_out = "cases";
  auto* synth = app.add_subcommand("synth", "Generate synthetic cases with ground truth");
  synth->add_option("--count", count, "Number of cases")->check(CLI::PositiveNumber);
  synth->add_option("--rng-seed", rng_seed, "Generator seed");
  synth->add_option("--max-objects", max_objects, "Objects per clump cycle through 2..N")->check(CLI::Range(2, 6));
  synth->add_option("--out", synth_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (part->parsed()) {
      if (boundary.empty() && mask.empty()) throw CLI::RequiredError("--boundary or --mask");
      return run_partition(boundary, mask, label, seeds, image, opt);
    }
    if (batch->parsed()) return run_directory(cases_dir, opt, jobs, false);
    if (validate->parsed()) return run_directory(cases_dir, opt, jobs, true);
    if (synth->parsed()) return run_synth(synth_out, count, rng_seed, max_objects);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

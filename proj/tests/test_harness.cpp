#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>

#include "support.hpp"

using namespace declump;
namespace fs = std::filesystem;

namespace {

// Two 10x10 squares side by side in a 20x10 raster, labels 1 and 2.
LabelImage two_squares() {
  LabelImage l(20, 10, 0);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 20; ++x) l(x, y) = x < 10 ? 1 : 2;
  }
  return l;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("declump_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

double brute_force_best(const std::vector<std::vector<double>>& w) {
  std::vector<int> perm(w.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i][static_cast<std::size_t>(perm[i])];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

template <typename Span>
auto vec(Span s) {
  return std::vector<std::remove_cv_t<typename Span::element_type>>(s.begin(), s.end());
}

}  // namespace

TEST(Evaluate, IdenticalIsCorrect) {
  const LabelImage t = two_squares();
  const Verdict v = evaluate_case(t, t);
  EXPECT_TRUE(v.correct);
  EXPECT_EQ(v.regions, 2);
  EXPECT_EQ(v.objects, 2);
  for (double q : v.matched_iou) EXPECT_DOUBLE_EQ(q, 1.0);
}

TEST(Evaluate, MergedRegionsFailOnCount) {
  const LabelImage t = two_squares();
  LabelImage r = t;
  for (auto& v : r.values()) v = v > 0 ? 1 : 0;
  const Verdict v = evaluate_case(r, t);
  EXPECT_FALSE(v.correct);
  EXPECT_EQ(v.reason, "region count 1 != object count 2");
}

TEST(Evaluate, LowOverlapFailsThreshold) {
  const LabelImage t = two_squares();
  // Shift the split three columns: region 1 covers 13 columns, object 1 covers 10.
  LabelImage r = t;
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 20; ++x) r(x, y) = x < 13 ? 1 : 2;
  }
  const Verdict v = evaluate_case(r, t);
  // IoU(object 2, region 2) = 7 / 10.
  EXPECT_NEAR(*std::min_element(v.matched_iou.begin(), v.matched_iou.end()), 0.7, 1e-12);
  EXPECT_TRUE(v.correct);
  for (int y = 0; y < 10; ++y) r(13, y) = 1;  // 6 / 10
  const Verdict w = evaluate_case(r, t);
  EXPECT_FALSE(w.correct);
  EXPECT_NE(w.reason.find("below threshold"), std::string::npos);
}

TEST(Evaluate, LabelPermutationInvariant) {
  const LabelImage t = two_squares();
  LabelImage r = t;
  for (auto& v : r.values()) v = v == 1 ? 7 : (v == 2 ? 3 : 0);
  const Verdict v = evaluate_case(r, t);
  EXPECT_TRUE(v.correct);
}

TEST(Evaluate, ShapeMismatchThrows) {
  try {
    evaluate_case(LabelImage(5, 5, 0), LabelImage(6, 5, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(Evaluate, HungarianMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    std::vector<std::vector<double>> w(n, std::vector<double>(n));
    for (auto& row : w) {
      for (auto& x : row) x = trial % 3 == 0 ? std::floor(U(rng) * 3) : U(rng);
    }
    const std::vector<int> m = max_weight_matching(w);
    std::vector<int> cols = m;
    std::sort(cols.begin(), cols.end());
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(cols[i], static_cast<int>(i));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i][static_cast<std::size_t>(m[i])];
    EXPECT_NEAR(s, brute_force_best(w), 1e-9) << "trial " << trial;
  }
}

TEST(Io, PgmRoundTrip) {
  const fs::path dir = scratch_dir("pgm");
  LabelImage l(7, 5, 0);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) l(x, y) = x * 1000 + y;
  }
  io::write_labels(dir / "l.pgm", l);
  EXPECT_EQ(vec(io::read_labels(dir / "l.pgm").values()), vec(l.values()));

  ScalarField f(4, 3, 0.0);
  for (int k = 0; k < 12; ++k) f.raster().values()[static_cast<std::size_t>(k)] = k / 255.0;
  io::write_intensity(dir / "f.pgm", f);
  const ScalarField g = io::read_intensity(dir / "f.pgm");
  for (std::size_t k = 0; k < 12; ++k) EXPECT_DOUBLE_EQ(g.raster().values()[k], f.raster().values()[k]);

  io::detail::write_file(dir / "ascii.pgm", "P2\n# comment\n3 1\n10\n0 5 10\n");
  const ScalarField a = io::read_intensity(dir / "ascii.pgm");
  EXPECT_DOUBLE_EQ(a(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(2, 0), 1.0);
}

TEST(Io, PointsRoundTrip) {
  const fs::path dir = scratch_dir("points");
  const std::vector<Vec2> pts{{1.25, 2.5}, {-3.0, 4.0625}};
  io::write_points(dir / "s.yaml", pts, "seeds");
  const std::vector<Vec2> back = io::read_points(dir / "s.yaml", "seeds");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].y, 4.0625);
  EXPECT_THROW(io::read_points(dir / "s.yaml", "vertices"), Error);
}

TEST(Io, ConfigKeys) {
  const Config c = io::parse_config(YAML::Load("R_max: 40\nmin_region_area: 5\n"));
  EXPECT_EQ(c.R_max, 40.0);
  EXPECT_EQ(c.min_region_area, 5);
  EXPECT_EQ(c.theta_min, Config{}.theta_min);
  try {
    io::parse_config(YAML::Load("r_max: 40\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
  EXPECT_THROW(io::parse_config(YAML::Load("R_max: -1\n")), Error);
  EXPECT_THROW(io::parse_config(YAML::Load("R_max: abc\n")), Error);
}

TEST(Io, CaseDirectoryRoundTrip) {
  const fs::path dir = scratch_dir("case");
  const ClumpCase c = generate_corpus(42, 1)[0];
  io::save_case(dir / c.id, c);
  const ClumpCase back = io::load_case(dir / c.id);
  EXPECT_EQ(back.id, c.id);
  EXPECT_EQ(vec(back.mask.values()), vec(c.mask.values()));
  EXPECT_EQ(vec(back.truth->values()), vec(c.truth->values()));
  ASSERT_EQ(back.seeds.size(), c.seeds.size());
  for (std::size_t k = 0; k < c.seeds.size(); ++k) EXPECT_NEAR(distance(back.seeds[k], c.seeds[k]), 0.0, 1e-4);
  EXPECT_EQ(io::list_case_dirs(dir).size(), 1u);
}

TEST(Synth, CorpusIsDeterministic) {
  const auto a = generate_corpus(42, 6);
  const auto b = generate_corpus(42, 6);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].id, b[k].id);
    EXPECT_EQ(vec(a[k].mask.values()), vec(b[k].mask.values()));
    EXPECT_EQ(vec(a[k].image->raster().values()), vec(b[k].image->raster().values()));
    EXPECT_EQ(static_cast<int>(a[k].seeds.size()), 2 + static_cast<int>(k) % 4);
  }
  EXPECT_NE(vec(generate_corpus(43, 1)[0].mask.values()), vec(a[0].mask.values()));
}

TEST(Batch, ReportIndependentOfJobs) {
  const auto cases = generate_corpus(42, 12);
  const std::string one = report_json(run_batch(cases, Config{}, 1)).dump(2);
  const std::string four = report_json(run_batch(cases, Config{}, 4)).dump(2);
  EXPECT_EQ(one, four);
}

TEST(Batch, CasesWithoutTruthAreNotEvaluated) {
  auto cases = generate_corpus(42, 3);
  cases[1].truth.reset();
  cases[2].seeds.clear();
  const EvalReport r = run_batch(cases, Config{}, 2);
  // A failed case with truth still counts, as incorrect.
  EXPECT_EQ(r.evaluated, 2);
  EXPECT_FALSE(r.cases[2].error.empty());
  ASSERT_TRUE(r.cases[2].verdict);
  EXPECT_FALSE(r.cases[2].verdict->correct);
  const auto j = report_json(r);
  EXPECT_EQ(j["total"], 3);
  EXPECT_FALSE(j["cases"][1].contains("verdict"));
  EXPECT_TRUE(j["cases"][2].contains("error"));
}

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "declump/declump.hpp"
#include "support.hpp"

using namespace declump;

namespace {

// Pinned tolerances.
constexpr double kBenchmarkFraction = 0.85;
constexpr double kBenchmarkSeconds = 60.0;
constexpr double kObjectiveTol = 1e-12;
constexpr double kBlurTol = 1e-6;
constexpr double kCurvatureRelTol = 0.10;
constexpr double kTurningRelTol = 0.05;
constexpr double kAngleMin = 20.0, kAngleMax = 110.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// ---------------------------------------------------------------------------
// Naive oracles

double walk_arc(const ClosedBoundary& b, int i, int j) {
  const int n = static_cast<int>(b.size());
  double fwd = 0.0, total = 0.0;
  for (int k = 0; k < n; ++k) total += distance(b.vertices[idx(k)], b.vertices[idx((k + 1) % n)]);
  for (int k = i; k != j; k = (k + 1) % n) fwd += distance(b.vertices[idx(k)], b.vertices[idx((k + 1) % n)]);
  return std::min(fwd, total - fwd);
}

double biased(double k, double f) { return k < 0 ? k * f : k; }

double naive_vv_objective(const ClosedBoundary& b, int i, int j, double f) {
  const Vec2 vi = b.vertices[idx(i)], vj = b.vertices[idx(j)];
  const double len = std::hypot(vj.x - vi.x, vj.y - vi.y);
  const double ux = (vj.x - vi.x) / len, uy = (vj.y - vi.y) / len;
  const Vec2 ni = b.normals[idx(i)], nj = b.normals[idx(j)];
  return (ni.x * ux + ni.y * uy - (nj.x * ux + nj.y * uy) + biased(b.curvatures[idx(i)], f) + biased(b.curvatures[idx(j)], f)) / len;
}

double naive_vc_objective(const ClosedBoundary& b, int i, Vec2 c, double f) {
  const Vec2 v = b.vertices[idx(i)];
  const double len = std::hypot(c.x - v.x, c.y - v.y);
  const Vec2 n = b.normals[idx(i)];
  return ((n.x * (c.x - v.x) + n.y * (c.y - v.y)) / len + biased(b.curvatures[idx(i)], f)) / len;
}

double naive_center_objective(const ClosedBoundary& b, const std::vector<int>& verts, const std::vector<Vec2>& mids, Vec2 x) {
  double num = 0.0, den = 0.0;
  for (int i : verts) {
    const Vec2 v = b.vertices[idx(i)];
    const double len = std::hypot(x.x - v.x, x.y - v.y);
    if (len > 0) num += (b.normals[idx(i)].x * (x.x - v.x) + b.normals[idx(i)].y * (x.y - v.y)) / len;
    den += len;
  }
  for (const Vec2& m : mids) den += std::hypot(x.x - m.x, x.y - m.y);
  return num / den;
}

bool chord_inside(const ClosedBoundary& b, Vec2 p, Vec2 q, std::span<const int> skip) {
  return segment_inside_region({p, q}, b, skip);
}

double corner_angle_deg(Vec2 a, Vec2 b, Vec2 c) {
  const double ab = distance(a, b), ac = distance(a, c), bc = distance(b, c);
  return std::acos((ab * ab + ac * ac - bc * bc) / (2 * ab * ac)) * 180.0 / std::numbers::pi;
}

bool empty_circumcircle(const Triangle& t, std::span<const Vec2> pts) {
  const Vec2 a = t.p[0], b = t.p[1], c = t.p[2];
  const double a1 = 2 * (b.x - a.x), b1 = 2 * (b.y - a.y), c1 = b.x * b.x - a.x * a.x + b.y * b.y - a.y * a.y;
  const double a2 = 2 * (c.x - a.x), b2 = 2 * (c.y - a.y), c2 = c.x * c.x - a.x * a.x + c.y * c.y - a.y * a.y;
  const double det = a1 * b2 - a2 * b1;
  const Vec2 o{(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det};
  const double r = distance(o, a);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k == idx(t.v[0]) || k == idx(t.v[1]) || k == idx(t.v[2])) continue;
    if (distance(o, pts[k]) < r * (1.0 - 1e-9)) return false;
  }
  return true;
}

long labeled_area(const LabelImage& l) {
  return std::count_if(l.values().begin(), l.values().end(), [](std::int32_t v) { return v > 0; });
}

long mask_area(const Mask& m) {
  return std::count_if(m.values().begin(), m.values().end(), [](auto v) { return v != 0; });
}

std::string output_bytes(const CaseRun& run, const ClumpCase& c) {
  return io::cuts_json(run.result).dump(2) + io::encode_labels(run.result.labels) +
         io::render_svg(run.boundary, run.result, c.seeds, run.result.labels.width(), run.result.labels.height());
}

// ---------------------------------------------------------------------------
// Criteria

Outcome benchmark(const std::vector<ClumpCase>& cases, const EvalReport& report, double seconds) {
  Outcome o;
  const double frac = report.correct_fraction();
  o.detail = fmt("correct %.3f (%g/200)", frac, report.correct) + fmt(", %.1f s", seconds);
  if (cases.size() != 200 || report.evaluated != 200) o.fail("expected 200 evaluated cases");
  if (frac < kBenchmarkFraction) o.fail(o.detail + fmt(" < %.2f", kBenchmarkFraction));
  if (seconds >= kBenchmarkSeconds) o.fail(o.detail + " exceeds time budget");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const double radius = 7.0, factor = 5.0;
  int vv = 0, vcv = 0, vcc = 0, assign = 0;

  std::mt19937_64 rng(99);
  while (vv < 100) {
    const ClosedBoundary b = make_boundary(test::random_star(rng, {60, 60}, 15, 45));
    const int n = static_cast<int>(b.size());
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int a = pick(rng), c = pick(rng);
    if (walk_arc(b, a, c) <= 2 * radius + 2) continue;
    Cut in;
    in.index_a = a;
    in.index_b = c;
    in.a = b.vertices[idx(a)];
    in.b = b.vertices[idx(c)];
    double best = -std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1, ties = 0;
    for (int i = 0; i < n; ++i) {
      if (walk_arc(b, a, i) > radius) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i || walk_arc(b, c, j) > radius) continue;
        const std::array<int, 2> skip{i, j};
        if (!chord_inside(b, b.vertices[idx(i)], b.vertices[idx(j)], skip)) continue;
        const double f = naive_vv_objective(b, i, j, factor);
        if (f > best) {
          best = f;
          bi = i;
          bj = j;
          ties = 1;
        } else if (f == best) {
          ++ties;
        }
      }
    }
    const Cut out = optimize_vv_cut(in, b, radius, factor);
    if (bi < 0) {
      if (out.index_a != a || out.index_b != c) o.fail("vertex-vertex optimizer moved a cut with no admissible candidate");
    } else if (std::abs(naive_vv_objective(b, out.index_a, out.index_b, factor) - best) > kObjectiveTol ||
               (ties == 1 && (out.index_a != bi || out.index_b != bj))) {
      o.fail(fmt("vertex-vertex optimizer differs from scan on instance %g", vv));
    }
    ++vv;
  }

  rng.seed(17);
  while (vcv < 100) {
    const ClosedBoundary b = make_boundary(test::random_star(rng, {60, 60}, 15, 45));
    const int n = static_cast<int>(b.size());
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_real_distribution<double> U(20, 100);
    const Vec2 center{U(rng), U(rng)};
    if (!b.contains(center)) continue;
    Cut in;
    in.kind = CutKind::VertexCenter;
    in.index_a = pick(rng);
    in.a = b.vertices[idx(in.index_a)];
    in.b = center;
    double best = -std::numeric_limits<double>::infinity();
    int bi = -1, ties = 0;
    for (int i = 0; i < n; ++i) {
      if (walk_arc(b, in.index_a, i) > radius) continue;
      const std::array<int, 1> skip{i};
      if (!chord_inside(b, b.vertices[idx(i)], center, skip)) continue;
      const double f = naive_vc_objective(b, i, center, factor);
      if (f > best) {
        best = f;
        bi = i;
        ties = 1;
      } else if (f == best) {
        ++ties;
      }
    }
    const Cut out = optimize_vc_vertex(in, b, radius, factor);
    if (bi < 0) {
      if (out.index_a != in.index_a) o.fail("vertex-center optimizer moved a cut with no admissible candidate");
    } else if (std::abs(naive_vc_objective(b, out.index_a, center, factor) - best) > kObjectiveTol || (ties == 1 && out.index_a != bi)) {
      o.fail(fmt("vertex-center vertex optimizer differs from scan on instance %g", vcv));
    }
    ++vcv;
  }

  rng.seed(23);
  while (vcc < 100) {
    const ClosedBoundary b = make_boundary(test::random_star(rng, {60, 60}, 30, 50));
    std::uniform_real_distribution<double> U(25, 95);
    std::vector<Vec2> pts(3);
    for (Vec2& p : pts) p = {U(rng), U(rng)};
    const TriangleSet set = delaunay(pts);
    if (set.triangles.size() != 1) continue;
    const Triangle& t = set.triangles[0];
    const int n = static_cast<int>(b.size());
    const std::vector<int> verts{static_cast<int>(rng() % n), static_cast<int>(rng() % n), static_cast<int>(rng() % n)};
    std::vector<Vec2> mids;
    if (rng() % 2) mids.push_back(t.edge_midpoint(0));
    // Lattice points strictly inside the medial triangle, by barycentric coordinates.
    const Vec2 m0 = (t.p[0] + t.p[1]) * 0.5, m1 = (t.p[1] + t.p[2]) * 0.5, m2 = (t.p[2] + t.p[0]) * 0.5;
    const double det = (m1.y - m2.y) * (m0.x - m2.x) + (m2.x - m1.x) * (m0.y - m2.y);
    double best = naive_center_objective(b, verts, mids, t.centroid);
    for (int y = 0; y <= 130; ++y) {
      for (int x = 0; x <= 130; ++x) {
        const Vec2 q{double(x), double(y)};
        const double l0 = ((m1.y - m2.y) * (q.x - m2.x) + (m2.x - m1.x) * (q.y - m2.y)) / det;
        const double l1 = ((m2.y - m0.y) * (q.x - m2.x) + (m0.x - m2.x) * (q.y - m2.y)) / det;
        if (!(l0 > 1e-12 && l1 > 1e-12 && 1 - l0 - l1 > 1e-12) || !b.contains(q)) continue;
        bool visible = true;
        for (int i : verts) {
          const std::array<int, 1> skip{i};
          visible = visible && chord_inside(b, b.vertices[idx(i)], q, skip);
        }
        if (visible) best = std::max(best, naive_center_objective(b, verts, mids, q));
      }
    }
    const Vec2 got = optimize_vc_center(t, verts, mids, b, t.centroid);
    if (std::abs(naive_center_objective(b, verts, mids, got) - best) > kObjectiveTol) {
      o.fail(fmt("center optimizer differs from lattice scan on instance %g", vcc));
    }
    ++vcc;
  }

  rng.seed(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  while (assign < 100) {
    const ClosedBoundary b = make_boundary(test::random_star(rng, {60, 60}, 20, 45));
    std::vector<Vec2> seeds;
    const int m = 2 + static_cast<int>(U(rng) * 4);
    while (static_cast<int>(seeds.size()) < m) {
      const Vec2 p{20 + 80 * U(rng), 20 + 80 * U(rng)};
      if (b.contains(p)) seeds.push_back(p);
    }
    const Assignment a = assign_vertices(score_matrix(b, seeds, {}), b, seeds);
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (a.assigned(i)) segs.push_back({b.vertices[i], seeds[idx(a.center[i])]});
    }
    for (std::size_t x = 0; x < segs.size(); ++x) {
      for (std::size_t y = x + 1; y < segs.size(); ++y) {
        if (segments_properly_intersect(segs[x], segs[y])) o.fail(fmt("assignment segments cross on instance %g", assign));
      }
    }
    ++assign;
  }
  if (o.pass) o.detail = "3 optimizers x 100 instances match exhaustive scans; 100 assignments crossing-free";
  return o;
}

Outcome delaunay_property() {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 100.0);
  std::uniform_int_distribution<int> N(3, 15);
  const ClosedBoundary big = make_boundary(test::circle_polygon({50, 50}, 90, 600));
  AngleFilterParams params;
  params.theta_min_deg = kAngleMin;
  params.theta_max_deg = kAngleMax;
  std::size_t triangles = 0, kept_total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec2> pts(idx(N(rng)));
    for (Vec2& p : pts) p = {U(rng), U(rng)};
    const TriangleSet set = delaunay(pts);
    if (set.status != TriangulationStatus::Ok) o.fail(fmt("set %g not triangulated", trial));
    for (const Triangle& t : set.triangles) {
      ++triangles;
      if (!empty_circumcircle(t, pts)) o.fail(fmt("set %g has a non-empty circumcircle", trial));
    }
    const auto kept = filter_triangles(set, big, params);
    kept_total += kept.size();
    for (const Triangle& t : kept) {
      for (int k = 0; k < 3; ++k) {
        const double a = corner_angle_deg(t.p[k], t.p[(k + 1) % 3], t.p[(k + 2) % 3]);
        if (a < kAngleMin - 1e-9 || a > kAngleMax + 1e-9) o.fail(fmt("kept triangle with angle %.2f", a));
      }
    }
  }
  if (o.pass) o.detail = fmt("%g triangles empty-circle, %g kept within angle bounds", double(triangles), double(kept_total));
  return o;
}

Outcome numerical_kernels() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ScalarField f(23, 17);
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) f(x, y) = U(rng);
  }
  double worst = 0.0;
  for (double sigma : {0.7, 1.0, 2.3}) {
    const ScalarField g = gaussian_blur(f, sigma);
    const int r = static_cast<int>(std::ceil(3 * sigma));
    double z = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) z += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
    }
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) {
        double acc = 0.0;
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx) {
            acc += f(std::clamp(x + dx, 0, f.width() - 1), std::clamp(y + dy, 0, f.height() - 1)) *
                   std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) / z;
          }
        }
        worst = std::max(worst, std::abs(g(x, y) - acc));
      }
    }
  }
  if (worst > kBlurTol) o.fail(fmt("blur deviates from dense convolution by %.2e", worst));

  for (double c : {0.0, 0.37, 1.0, 0.123456789}) {
    const ScalarField g = gradient_magnitude(ScalarField(31, 19, c));
    for (double v : g.raster().values()) {
      if (v != 0.0) o.fail(fmt("gradient of constant %.3f is %.2e", c, v));
    }
  }

  const ScalarField once = morphological_close(f, 3.0);
  if (!(morphological_close(once, 3.0) == once)) o.fail("closing is not idempotent");

  const ClosedBoundary circle = make_boundary(test::circle_polygon({40, 40}, 20, 400));
  double turning = 0.0, worst_k = 0.0;
  for (std::size_t i = 0; i < circle.size(); ++i) {
    worst_k = std::max(worst_k, std::abs(circle.curvatures[i] + 0.05) / 0.05);
    turning += circle.curvatures[i] * circle.edge_length(static_cast<int>(i));
  }
  const double turning_err = std::abs(turning + 2 * std::numbers::pi) / (2 * std::numbers::pi);
  if (worst_k > kCurvatureRelTol) o.fail(fmt("circle curvature off by %.1f%%", 100 * worst_k));
  if (turning_err > kTurningRelTol) o.fail(fmt("total turning %.4f", turning));
  if (o.pass) {
    o.detail = fmt("blur err %.1e; curvature err %.1f%%; turning %.4f", worst, 100 * worst_k, turning);
  }
  return o;
}

Outcome vote_semantics() {
  Outcome o;
  const VoteResult a = vote({0.9, 0.2, 3.0, 40.0}, {0.5, 0.1, 2.0, 20.0});
  if (a.winner != Winner::VertexVertex || a.vv_wins != 4) o.fail("4-0 fixture");
  const VoteResult b = vote({0.4, 0.01, 9.0, 10.0}, {0.5, 0.02, 1.0, 11.0});
  if (b.winner != Winner::VertexCenter || b.vc_wins != 3 || b.vv_wins != 1) o.fail("3-1 fixture");
  const VoteResult c = vote({0.50, 0.11, 1.0, 10.0}, {0.49, 0.10, 3.0, 30.0});
  if (c.winner != Winner::VertexCenter || !c.decided_by_total || c.vv_wins != 2) o.fail("2-2 cumulative fixture");
  const VoteResult d = vote({0.3, -0.05, 2.0, 7.0}, {0.3, -0.05, 2.0, 7.0});
  if (d.winner != Winner::VertexVertex) o.fail("all-tie fixture");

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> S(0.01, 100.0);
  for (int trial = 0; trial < 2000; ++trial) {
    CategoryScores vv{}, vc{};
    for (std::size_t k = 0; k < 4; ++k) {
      vv[k] = U(rng);
      vc[k] = trial % 5 == 0 ? vv[k] : U(rng);
    }
    const VoteResult base = vote(vv, vc);
    for (std::size_t k = 0; k < 4; ++k) {
      const double s = S(rng);
      vv[k] *= s;
      vc[k] *= s;
    }
    const VoteResult scaled = vote(vv, vc);
    if (scaled.winner != base.winner || scaled.outcome != base.outcome) o.fail(fmt("rescaling changed the vote in trial %g", trial));
  }
  if (o.pass) o.detail = "4-0, 3-1, 2-2, all-tie fixtures; 2000 rescaling trials";
  return o;
}

Outcome structural_invariants(const std::vector<ClumpCase>& cases, const EvalReport& serial, const Config& config) {
  Outcome o;
  const EvalReport parallel = run_batch(cases, config, 4, true);
  if (report_json(serial).dump() != report_json(parallel).dump()) o.fail("report differs between 1 and 4 jobs");
  std::size_t cuts = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const ClumpCase& c = cases[k];
    const CaseReport& r = serial.cases[k];
    if (!r.error.empty() || !r.run) {
      o.fail(c.id + " failed: " + r.error);
      continue;
    }
    const CaseRun& run = *r.run;
    const auto& cs = run.result.cuts;
    cuts += cs.size();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = i + 1; j < cs.size(); ++j) {
        if (segments_properly_intersect(cs[i].segment(), cs[j].segment())) o.fail(c.id + ": cuts cross");
      }
      for (int e = 0; e < static_cast<int>(run.boundary.size()); ++e) {
        if (segments_properly_intersect(cs[i].segment(), run.boundary.edge(e))) o.fail(c.id + ": cut crosses the boundary");
      }
    }
    if (labeled_area(run.result.labels) != mask_area(*case_region(c))) o.fail(c.id + ": region areas do not sum to input area");

    const std::string bytes = output_bytes(run, c);
    if (bytes != output_bytes(partition_case(c, config), c)) o.fail(c.id + ": outputs differ across runs");
    if (!parallel.cases[k].run || bytes != output_bytes(*parallel.cases[k].run, c)) o.fail(c.id + ": outputs differ across job counts");
  }
  if (o.pass) o.detail = fmt("%g cases, %g cuts; outputs byte-identical across runs and 1 vs 4 jobs", double(cases.size()), double(cuts));
  return o;
}

Outcome reconstruction_fixtures() {
  Outcome o;
  const Config config;
  const std::vector<Vec2> two{{30, 30}, {60, 30}};
  const ClumpCase pair = make_disk_clump(two, 20.0);
  const CaseRun a = partition_case(pair, config);
  if (a.result.cuts.size() != 1 || a.result.region_count != 2) o.fail(fmt("two-disk: %g cuts", double(a.result.cuts.size())));

  const double r = 20.0, d = 1.4 * r;
  const std::vector<Vec2> three{{30, 30}, {30 + d, 30}, {30 + d / 2, 30 + d * std::sqrt(3.0) / 2}};
  const CaseRun b = partition_case(make_disk_clump(three, r), config);
  const bool vc_won = std::any_of(b.result.pairs.begin(), b.result.pairs.end(),
                                  [](const CompetingPair& p) { return p.vote.winner == Winner::VertexCenter; });
  if (!vc_won || b.result.added_vertices.size() != 1) {
    o.fail(fmt("three-disk: %g pairs, %g added vertices", double(b.result.pairs.size()), double(b.result.added_vertices.size())));
  }

  ClumpCase missing = pair;
  missing.seeds.pop_back();
  const CaseRun m = partition_case(missing, config);
  // The neck of the two disks is the line x = 45.
  const bool neck = m.result.cuts.size() == 1 && std::abs(0.5 * (m.result.cuts[0].a.x + m.result.cuts[0].b.x) - 45.0) <= 3.0 &&
                    m.result.region_count == 2;
  if (!neck) o.fail(fmt("missing seed: %g cuts, %g regions", double(m.result.cuts.size()), m.result.region_count));
  if (o.pass) o.detail = "two-disk neck cut; three-disk vertex-center win with 1 added vertex; missing-seed neck cut";
  return o;
}

}  // namespace

int main() {
  const Config config;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<ClumpCase> cases = generate_corpus(42, 200);
  const EvalReport serial = run_batch(cases, config, 1, true);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"synthetic benchmark", [&] { return benchmark(cases, serial, seconds); }},
      {"optimizer oracle equivalence", oracle_equivalence},
      {"Delaunay empty circle and angle filter", delaunay_property},
      {"numerical kernels", numerical_kernels},
      {"vote semantics", vote_semantics},
      {"structural invariants", [&] { return structural_invariants(cases, serial, config); }},
      {"reconstruction fixtures", reconstruction_fixtures},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s\n", out.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), out.detail.c_str());
    failed += out.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

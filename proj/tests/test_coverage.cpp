#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "synpart/coverage.hpp"
#include "synpart/errors.hpp"
#include "synpart/synth.hpp"

using namespace synpart;

namespace {

// Two half-spaces split at x = split; label 1 left, 2 right.
SegmentationVolume halves(Vec3i shape, Vec3d res, std::int64_t split) {
  VolumeGeometry g(shape, res);
  std::vector<Label> labels(static_cast<std::size_t>(g.num_voxels()));
  for (std::int64_t i = 0; i < g.num_voxels(); ++i) labels[static_cast<std::size_t>(i)] = g.unlinear(i).x < split ? 1 : 2;
  return SegmentationVolume(g, labels);
}

}  // namespace

TEST_CASE("direct hit is covered for any radius") {
  auto seg = halves({80, 20, 4}, {4, 4, 40}, 40);
  const auto& g = seg.geometry();
  SynapticPartnerAnnotation a{0, g.world({25, 10, 2}), g.world({55, 10, 2})};
  for (double r : {0.0, 10.0, 100.0}) CHECK(is_covered(a, OffsetSet({{120, 0, 0}}, r, {4, 4, 40}), seg));
}

TEST_CASE("geometrically unreachable partners are not covered") {
  auto seg = halves({200, 20, 4}, {4, 4, 40}, 100);
  const auto& g = seg.geometry();
  SynapticPartnerAnnotation a{0, g.world({40, 10, 2}), g.world({165, 10, 2})};
  CHECK_FALSE(is_covered(a, OffsetSet({{0, 0, 80}}, 100, {4, 4, 40}), seg));
}

TEST_CASE("background endpoints are uncoverable, not uncovered") {
  auto seg = halves({80, 20, 4}, {4, 4, 40}, 40);
  const auto& g = seg.geometry();
  seg.at({55, 10, 2}) = kBackground;
  SynapticPartnerAnnotation a{0, g.world({25, 10, 2}), g.world({55, 10, 2})};
  OffsetSet o({{120, 0, 0}}, 100, {4, 4, 40});
  CHECK(coverage_status(a, o, seg) == CoverageStatus::uncoverable);
  PointAnnotationSet set{{a}, g};
  CoverageReport r = coverage(set, o, seg);
  CHECK(r.total == 0);
  CHECK(r.vacuous);
  CHECK(r.rate == 1.0);
  CHECK(r.uncoverable_ids == std::vector<std::uint64_t>{0});
}

TEST_CASE("empty annotation set is vacuously covered") {
  auto seg = halves({8, 8, 2}, {4, 4, 40}, 4);
  CoverageReport r = coverage(PointAnnotationSet{{}, seg.geometry()}, OffsetSet({{4, 0, 0}}, 0, {4, 4, 40}), seg);
  CHECK(r.total == 0);
  CHECK(r.rate == 1.0);
  CHECK(r.vacuous);
}

TEST_CASE("one unreachable pair lowers the rate to (n-1)/n and is listed") {
  auto seg = halves({200, 40, 4}, {4, 4, 40}, 100);
  const auto& g = seg.geometry();
  PointAnnotationSet set;
  set.geometry = g;
  for (std::uint64_t i = 0; i < 4; ++i)
    set.annotations.push_back({i, g.world({85, static_cast<std::int64_t>(5 + 8 * i), 2}),
                               g.world({115, static_cast<std::int64_t>(5 + 8 * i), 2})});
  set.annotations.push_back({17, g.world({20, 20, 1}), g.world({195, 20, 1})});
  CoverageReport r = coverage(set, OffsetSet({{120, 0, 0}}, 20, {4, 4, 40}), seg, 3);
  CHECK(r.total == 5);
  CHECK(r.covered == 4);
  CHECK(r.rate == doctest::Approx(0.8));
  CHECK_FALSE(r.vacuous);
  CHECK(r.uncovered_ids == std::vector<std::uint64_t>{17});
}

TEST_CASE("resolution mismatch is rejected") {
  auto seg = halves({8, 8, 2}, {4, 4, 40}, 4);
  SynapticPartnerAnnotation a{0, {0, 0, 0}, {28, 0, 0}};
  CHECK_THROWS_AS(is_covered(a, OffsetSet({{8, 0, 0}}, 0, {8, 8, 40}), seg), ValidationError);
}

TEST_CASE("property: coverage agrees with the voxel-pair oracle") {
  std::mt19937_64 rng(1234);
  for (int t = 0; t < 40; ++t) {
    auto seg = oracle::random_segmentation(rng, {40, 40, 8}, {4, 4, 40}, 4, t % 3 == 0);
    auto anns = oracle::random_annotations(rng, seg, 3, 90);
    auto o = oracle::random_offsets(rng, {4, 4, 40}, 1 + rng() % 6, {25, 25, 3},
                                    std::uniform_real_distribution<double>(0, 60)(rng));
    for (const auto& a : anns) CHECK(is_covered(a, o, seg) == oracle::covered(a, o, seg));
  }
}

TEST_CASE("property: coverage is monotone in offsets and radius") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 25; ++t) {
    auto seg = oracle::random_segmentation(rng, {32, 32, 6}, {4, 4, 40}, 4, false);
    PointAnnotationSet set{oracle::random_annotations(rng, seg, 4, 100), seg.geometry()};
    auto big = oracle::random_offsets(rng, {4, 4, 40}, 6, {20, 20, 2}, 40);
    double prev_rate = -1;
    for (std::size_t n = 1; n <= big.size(); ++n) {
      std::vector<Vec3d> nm(big.offsets_nm().begin(), big.offsets_nm().begin() + static_cast<std::ptrdiff_t>(n));
      double rate = coverage(set, OffsetSet(nm, 40, {4, 4, 40}), seg).rate;
      CHECK(rate >= prev_rate);
      prev_rate = rate;
    }
    prev_rate = -1;
    for (double r : {0.0, 20.0, 45.0, 80.0, 120.0}) {
      double rate = coverage(set, OffsetSet(big.offsets_nm(), r, {4, 4, 40}), seg).rate;
      CHECK(rate >= prev_rate);
      prev_rate = rate;
    }
  }
}

TEST_CASE("grid search: one axis-aligned pair at 120 nm") {
  auto seg = halves({80, 20, 4}, {4, 4, 40}, 40);
  const auto& g = seg.geometry();
  PointAnnotationSet set{{{0, g.world({25, 10, 2}), g.world({55, 10, 2})}}, g};
  GridSearchResult r = grid_search_offsets(set, seg, {80, 120}, {2, 4, 6, 8, 10, 12, 14}, {0});
  CHECK(r.complete);
  CHECK(r.report.rate == 1.0);
  REQUIRE(r.offsets.size() == 2);
  CHECK(r.offsets.offsets_nm()[0] == Vec3d{120, 0, 0});
  CHECK(r.offsets.offsets_nm()[1] == Vec3d{-120, 0, 0});
  REQUIRE(r.blocks.size() == 1);
  CHECK(r.blocks[0].kind == OffsetBlockChoice::Kind::axis_x);
}

TEST_CASE("grid search: zero radius and off-lattice partners stay incomplete") {
  auto seg = halves({80, 20, 4}, {4, 4, 40}, 40);
  const auto& g = seg.geometry();
  PointAnnotationSet set{{{0, g.world({33, 10, 2}), g.world({46, 10, 2})}}, g};
  GridSearchResult r = grid_search_offsets(set, seg, {80, 120}, {2, 4, 6, 8, 10, 12, 14}, {0});
  CHECK_FALSE(r.complete);
  CHECK(r.report.rate < 1.0);
  CHECK(r.configurations_evaluated > 0);
}

TEST_CASE("grid search: synthetic partners reach full coverage confirmed by the oracle") {
  VolumeGeometry g({64, 64, 16}, {4, 4, 40});
  SynthSpec spec;
  spec.geometry = g;
  spec.n_segments = 8;
  spec.n_synapses = 6;
  spec.min_partner_distance_nm = 100;
  spec.max_partner_distance_nm = 140;
  spec.seed = 4;
  spec.coverable_by = paper_offset_set(g);
  SynthVolume v = generate(spec);
  GridSearchResult r = grid_search_offsets(v.annotations, v.segmentation, {80, 120}, {2, 4, 6, 8, 10, 12, 14},
                                           {60, 100}, 2);
  CHECK(r.complete);
  CHECK(r.report.rate == 1.0);
  for (const auto& a : v.annotations.annotations) CHECK(oracle::covered(a, r.offsets, v.segmentation));
}

TEST_CASE("grid search rejects empty candidate lists") {
  auto seg = halves({8, 8, 2}, {4, 4, 40}, 4);
  PointAnnotationSet set{{}, seg.geometry()};
  CHECK_THROWS_AS(grid_search_offsets(set, seg, {}, {2}, {0}), ValidationError);
  CHECK_THROWS_AS(grid_search_offsets(set, seg, {80}, {}, {0}), ValidationError);
  CHECK_THROWS_AS(grid_search_offsets(set, seg, {80}, {2}, {}), ValidationError);
}

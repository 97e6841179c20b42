#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "synpart/coverage.hpp"
#include "synpart/synth.hpp"

using namespace synpart;

namespace {

SynthSpec small_spec(std::uint64_t seed) {
  SynthSpec s;
  s.geometry = VolumeGeometry({96, 96, 24}, {4, 4, 40});
  s.n_segments = 12;
  s.n_synapses = 8;
  s.seed = seed;
  s.coverable_by = paper_offset_set(s.geometry);
  return s;
}

}  // namespace

TEST_CASE("a single segment admits no synapses") {
  SynthSpec s = small_spec(1);
  s.n_segments = 1;
  try {
    generate(s);
    FAIL("expected GenerationError");
  } catch (const GenerationError& e) {
    CHECK(e.achieved() == 0);
  }
}

TEST_CASE("generator settings are validated") {
  SynthSpec s = small_spec(1);
  s.max_partner_distance_nm = 400;  // beyond 120 + 2 * 100
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = small_spec(1);
  s.min_partner_distance_nm = 150;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = small_spec(1);
  s.n_segments = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = small_spec(1);
  s.coverable_by = paper_offset_set(VolumeGeometry({8, 8, 8}, {4, 4, 30}));
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("generation is deterministic and independent of threads") {
  SynthVolume a = generate(small_spec(9), 1);
  SynthVolume b = generate(small_spec(9), 4);
  CHECK(a.segmentation == b.segmentation);
  CHECK(a.annotations == b.annotations);
  SynthVolume c = generate(small_spec(10), 1);
  CHECK_FALSE(a.annotations == c.annotations);
}

TEST_CASE("property: planted synapses satisfy the construction invariants") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SynthSpec spec = small_spec(seed);
    SynthVolume v = generate(spec);
    const auto& g = v.segmentation.geometry();
    REQUIRE(v.annotations.size() == spec.n_synapses);
    v.annotations.validate();
    std::set<Label> labels(v.segmentation.labels().begin(), v.segmentation.labels().end());
    CHECK(labels.count(kBackground) == 0);
    CHECK(*labels.rbegin() <= spec.n_segments);
    for (const auto& a : v.annotations.annotations) {
      Label pre = v.segmentation.at_point(a.pre_location), post = v.segmentation.at_point(a.post_location);
      CHECK(pre != post);
      double d = distance_nm(a.pre_location, a.post_location);
      CHECK(d >= spec.min_partner_distance_nm);
      CHECK(d <= spec.max_partner_distance_nm);
      CHECK(g.world(g.world_to_voxel(a.pre_location)) == a.pre_location);
      CHECK(g.world(g.world_to_voxel(a.post_location)) == a.post_location);
      CHECK(oracle::covered(a, *spec.coverable_by, v.segmentation));
    }
  }
}

TEST_CASE("property: one candidate per planted synapse on noise-free scores") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RoundtripOptions opt;
    opt.synth = small_spec(seed);
    opt.params.t2 = 1e-9;
    opt.matching.tolerance_nm = 200;
    RoundtripResult r = end_to_end_roundtrip(opt);
    CHECK(r.candidates.size() == r.volume.annotations.size());
    std::multiset<SegmentPair> planted, found;
    for (const auto& a : r.volume.annotations.annotations)
      planted.insert({r.volume.segmentation.at_point(a.pre_location), r.volume.segmentation.at_point(a.post_location)});
    for (const auto& c : r.candidates) found.insert({c.source_segment, c.target_segment});
    CHECK(planted == found);
    CHECK(r.report.fscore == 1.0);
    auto counts = planted_edge_counts(r.volume.annotations, paper_offset_set(opt.synth.geometry), r.volume.segmentation);
    for (auto n : counts) CHECK(n >= r.min_planted_confidence);
  }
}

TEST_CASE("dropping every synapse gives zero recall") {
  RoundtripOptions opt;
  opt.synth = small_spec(2);
  opt.noise.drop_synapse_prob = 1.0;
  RoundtripResult r = end_to_end_roundtrip(opt);
  CHECK(r.report.recall == 0.0);
  CHECK(r.candidates.empty());
}

TEST_CASE("property: more spurious blobs never raise mean precision") {
  double prev = 2;
  for (double rate : {0.0, 2e-4, 2e-3}) {
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      RoundtripOptions opt;
      opt.synth = small_spec(seed);
      opt.noise.false_blob_rate = rate;
      opt.noise.seed = seed;
      opt.params.t2 = 1e-9;
      opt.matching.tolerance_nm = 200;
      sum += end_to_end_roundtrip(opt).report.precision;
    }
    CHECK(sum / 4 <= prev);
    prev = sum / 4;
  }
  CHECK(prev < 1.0);
}

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "synpart/errors.hpp"
#include "synpart/offsets.hpp"

using namespace synpart;

TEST_CASE("paper offset set at 4x4x40 nm") {
  VolumeGeometry g({128, 128, 32}, {4, 4, 40});
  OffsetSet o = paper_offset_set(g);
  REQUIRE(o.size() == 14);
  CHECK(o.r_syn_nm() == 100.0);
  std::set<Vec3i> vox(o.offsets_vox().begin(), o.offsets_vox().end());
  CHECK(vox.size() == 14);
  for (Vec3i v : {Vec3i{0, 0, 2}, Vec3i{0, 0, -2}, Vec3i{30, 0, 0}, Vec3i{-30, 0, 0}, Vec3i{0, 30, 0},
                  Vec3i{0, -30, 0}})
    CHECK(vox.count(v) == 1);
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (int sz : {1, -1}) CHECK(vox.count(Vec3i{10 * sx, 15 * sy, sz}) == 1);
  for (const auto& r : o.offsets_nm()) {
    double len = r.norm();
    bool ok = len == 80.0 || len == 120.0 || std::abs(len - std::sqrt(6800.0)) < 1e-12;
    CHECK(ok);
  }
  CHECK(o.max_length_nm() == 120.0);
}

TEST_CASE("offsets rounding to the zero voxel are rejected") {
  CHECK_THROWS_AS(OffsetSet({{1, 1, 10}}, 100, {4, 4, 40}), ValidationError);
  CHECK_THROWS_AS(OffsetSet({{0, 0, 0}}, 100, {4, 4, 40}), ValidationError);
  CHECK_THROWS_AS(paper_offset_set(VolumeGeometry({8, 8, 8}, {400, 400, 400})), ValidationError);
}

TEST_CASE("duplicate offsets and negative radius are rejected") {
  CHECK_THROWS_AS(OffsetSet({{4, 0, 0}, {4, 0, 0}}, 100, {4, 4, 40}), ValidationError);
  CHECK_THROWS_AS(OffsetSet({{4, 0, 0}, {5, 0, 0}}, 100, {4, 4, 40}), ValidationError);
  CHECK_THROWS_AS(OffsetSet({{4, 0, 0}}, -1, {4, 4, 40}), ValidationError);
}

TEST_CASE("offset config round trip") {
  OffsetSet o = paper_offset_set(VolumeGeometry({8, 8, 8}, {4, 4, 40}));
  std::istringstream in(format_offset_config(o, "source=test\nn_e=14"));
  CHECK(read_offset_config(in) == o);
}

TEST_CASE("offset config parse errors") {
  std::istringstream missing_radius("resolution=4,4,40\n0 0 80\n");
  CHECK_THROWS_AS(read_offset_config(missing_radius), Error);
  std::istringstream bad_row("r_syn_nm=100\nresolution=4,4,40\n0 0\n");
  CHECK_THROWS_AS(read_offset_config(bad_row), Error);
}

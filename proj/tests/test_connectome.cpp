#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "synpart/connectome.hpp"
#include "synpart/errors.hpp"

using namespace synpart;

namespace {

// Three stripes along x: labels 1, 2, 3; the last column is background.
SegmentationVolume stripes() {
  VolumeGeometry g({31, 4, 2}, {4, 4, 40});
  std::vector<Label> labels(static_cast<std::size_t>(g.num_voxels()));
  for (std::int64_t i = 0; i < g.num_voxels(); ++i) {
    auto x = g.unlinear(i).x;
    labels[static_cast<std::size_t>(i)] = x == 30 ? kBackground : static_cast<Label>(1 + x / 10);
  }
  return SegmentationVolume(g, labels);
}

Vec3d in(Label l, const VolumeGeometry& g) { return g.world({static_cast<std::int64_t>(10 * (l - 1) + 5), 1, 0}); }

std::vector<SynapticPartnerAnnotation> pairs(const std::vector<std::pair<Label, Label>>& p, const VolumeGeometry& g) {
  std::vector<SynapticPartnerAnnotation> out;
  for (const auto& [a, b] : p) out.push_back({out.size(), in(a, g), in(b, g)});
  return out;
}

}  // namespace

TEST_CASE("empty partner list gives an all-zero matrix") {
  auto seg = stripes();
  ConnectivityMatrix m = build_matrix({}, seg);
  CHECK(m.total() == 0);
  CHECK(m.entries.empty());
  ConnectivityMatrix n = build_matrix({}, seg, std::vector<Label>{1, 2});
  CHECK(n.row_labels == std::vector<Label>{1, 2});
  CHECK(n.at(1, 2) == 0);
}

TEST_CASE("directed counting") {
  auto seg = stripes();
  const auto& g = seg.geometry();
  ConnectivityMatrix m = build_matrix(pairs({{1, 2}, {1, 2}, {1, 2}, {2, 1}}, g), seg);
  CHECK(m.at(1, 2) == 3);
  CHECK(m.at(2, 1) == 1);
  CHECK(m.at(1, 1) == 0);
  CHECK(m.row_labels == std::vector<Label>{1, 2});
  CHECK(m.col_labels == m.row_labels);
}

TEST_CASE("background partners are rejected, not counted") {
  auto seg = stripes();
  const auto& g = seg.geometry();
  auto p = pairs({{1, 2}}, g);
  p.push_back({1, in(1, g), g.world({30, 1, 0})});
  ConnectivityMatrix m = build_matrix(p, seg);
  CHECK(m.total() == 1);
  CHECK(m.rejects == std::vector<std::uint64_t>{1});
}

TEST_CASE("neuron list restricts and orders labels") {
  auto seg = stripes();
  const auto& g = seg.geometry();
  ConnectivityMatrix m = build_matrix(pairs({{1, 2}, {3, 1}, {2, 3}}, g), seg, std::vector<Label>{3, 1});
  CHECK(m.row_labels == std::vector<Label>{3, 1});
  CHECK(m.at(3, 1) == 1);
  CHECK(m.total() == 1);
}

TEST_CASE("diff examples") {
  auto seg = stripes();
  const auto& g = seg.geometry();
  auto gt = build_matrix(pairs({{1, 2}, {2, 3}}, g), seg);
  CHECK(diff_matrix(gt, gt).entries.empty());
  auto extra = build_matrix(pairs({{1, 2}, {2, 3}, {3, 1}}, g), seg);
  auto d = diff_matrix(extra, gt);
  REQUIRE(d.entries.size() == 1);
  CHECK(d.at(3, 1) == 1);
  auto missed = build_matrix(pairs({{1, 2}}, g), seg);
  d = diff_matrix(missed, gt);
  REQUIRE(d.entries.size() == 1);
  CHECK(d.at(2, 3) == -1);
  CHECK(d.row_labels == std::vector<Label>{1, 2, 3});
}

TEST_CASE("property: diff sum equals predicted minus ground-truth counts") {
  std::mt19937_64 rng(12);
  auto seg = stripes();
  const auto& g = seg.geometry();
  for (int t = 0; t < 50; ++t) {
    std::vector<std::pair<Label, Label>> a, b;
    for (std::size_t i = rng() % 12; i > 0; --i) a.push_back({1 + rng() % 3, 1 + rng() % 3});
    for (std::size_t i = rng() % 12; i > 0; --i) b.push_back({1 + rng() % 3, 1 + rng() % 3});
    auto d = diff_matrix(build_matrix(pairs(a, g), seg), build_matrix(pairs(b, g), seg));
    CHECK(d.total() == static_cast<std::int64_t>(a.size()) - static_cast<std::int64_t>(b.size()));
  }
}

TEST_CASE("property: permuting the neuron list permutes rows and columns") {
  std::mt19937_64 rng(3);
  auto seg = stripes();
  const auto& g = seg.geometry();
  std::vector<std::pair<Label, Label>> p;
  for (int i = 0; i < 20; ++i) p.push_back({1 + rng() % 3, 1 + rng() % 3});
  auto partners = pairs(p, g);
  auto base = build_matrix(partners, seg, std::vector<Label>{1, 2, 3});
  std::vector<Label> perm = {1, 2, 3};
  while (std::next_permutation(perm.begin(), perm.end())) {
    auto m = build_matrix(partners, seg, perm);
    CHECK(m.row_labels == perm);
    for (Label r : perm)
      for (Label c : perm) CHECK(m.at(r, c) == base.at(r, c));
  }
}

TEST_CASE("matrix CSV round trip") {
  auto seg = stripes();
  const auto& g = seg.geometry();
  auto m = build_matrix(pairs({{1, 2}, {1, 2}, {3, 1}}, g), seg);
  m.rejects.clear();
  std::string text = format_matrix_csv(m, "command=test\nseed=1");
  CHECK(text.rfind("# command=test\n# seed=1\npre\\post,1,2,3\n", 0) == 0);
  std::istringstream in(text);
  CHECK(read_matrix_csv(in) == m);

  auto d = diff_matrix(build_matrix(pairs({{2, 1}}, g), seg), m);
  std::istringstream din(format_matrix_csv(d));
  CHECK(read_matrix_csv(din) == d);

  std::istringstream bad("pre\\post,1,2\n1,0\n");
  CHECK_THROWS_AS(read_matrix_csv(bad), FormatError);
}

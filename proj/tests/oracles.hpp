// Brute-force reference implementations used by the unit and acceptance
// tests. Deliberately naive: every function scans everything it could
// possibly need and shares no code with the library beyond plain data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "synpart/annotations.hpp"
#include "synpart/evaluation.hpp"
#include "synpart/extractor.hpp"
#include "synpart/offsets.hpp"
#include "synpart/volume.hpp"

namespace oracle {

using namespace synpart;

// Voxel containing a nm point, rounding half away from zero, no library help.
inline Vec3i voxel_of(Vec3d p, const VolumeGeometry& g) {
  Vec3i v;
  for (int a = 0; a < 3; ++a) {
    double t = (p[a] - g.origin()[a]) / g.resolution()[a];
    double r = t < 0 ? -std::floor(-t + 0.5) : std::floor(t + 0.5);
    v[a] = static_cast<std::int64_t>(r);
  }
  return v;
}

inline double center_distance(Vec3i a, Vec3i b, const VolumeGeometry& g) {
  double s = 0;
  for (int ax = 0; ax < 3; ++ax) {
    double d = static_cast<double>(a[ax] - b[ax]) * g.resolution()[ax];
    s += d * d;
  }
  return std::sqrt(s);
}

// Every voxel of the volume inspected: same label as p and within r of p's voxel center.
inline std::set<std::int64_t> region(Vec3d p, double r, const SegmentationVolume& seg) {
  const auto& g = seg.geometry();
  Vec3i c = voxel_of(p, g);
  Label l = seg.at(c);
  std::set<std::int64_t> out;
  for (std::int64_t i = 0; i < g.num_voxels(); ++i) {
    Vec3i v = g.unlinear(i);
    if (seg.at_linear(i) == l && center_distance(v, c, g) <= r) out.insert(i);
  }
  return out;
}

// Label volume: label[k][v] over (voxel x offset x annotation).
inline std::vector<std::vector<std::uint8_t>> encode(const std::vector<SynapticPartnerAnnotation>& anns,
                                                     const OffsetSet& o, const SegmentationVolume& seg) {
  const auto& g = seg.geometry();
  std::vector<std::vector<std::uint8_t>> out(o.size(), std::vector<std::uint8_t>(g.num_voxels(), 0));
  for (const auto& a : anns) {
    auto pre = region(a.pre_location, o.r_syn_nm(), seg);
    auto post = region(a.post_location, o.r_syn_nm(), seg);
    for (std::int64_t i = 0; i < g.num_voxels(); ++i)
      for (std::size_t k = 0; k < o.size(); ++k) {
        Vec3i t = g.unlinear(i) + o.offsets_vox()[k];
        if (!g.contains(t)) continue;
        if (pre.count(i) && post.count(g.linear(t))) out[k][i] = 1;
      }
  }
  return out;
}

// Exhaustive scan over every (voxel v, offset r) pair of the volume: covered
// iff some v lies in the pre-region with v + r in the post-region.
inline bool covered(const SynapticPartnerAnnotation& a, const OffsetSet& o, const SegmentationVolume& seg) {
  const auto& g = seg.geometry();
  if (seg.at(voxel_of(a.pre_location, g)) == kBackground || seg.at(voxel_of(a.post_location, g)) == kBackground)
    return false;
  auto pre = region(a.pre_location, o.r_syn_nm(), seg);
  auto post = region(a.post_location, o.r_syn_nm(), seg);
  for (std::int64_t i = 0; i < g.num_voxels(); ++i)
    for (const auto& r : o.offsets_vox()) {
      Vec3i t = g.unlinear(i) + r;
      if (g.contains(t) && pre.count(i) && post.count(g.linear(t))) return true;
    }
  return false;
}

inline bool adjacent(Vec3i a, Vec3i b, Connectivity c) {
  std::int64_t dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y), dz = std::abs(a.z - b.z);
  if (c == Connectivity::six) return dx + dy + dz == 1;
  return std::max({dx, dy, dz}) == 1;
}

// Components by repeated pairwise merging of groups until nothing merges.
// Returns groups of edge indices, each sorted, groups sorted by first edge's
// minimum target voxel.
inline std::vector<std::vector<std::size_t>> components(const std::vector<Edge>& edges, const VolumeGeometry& g,
                                                        const OffsetSet& o, Connectivity conn) {
  std::vector<std::int64_t> target(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    target[i] = g.linear(g.unlinear(edges[i].source) + o.offsets_vox()[edges[i].offset]);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < edges.size(); ++i) groups.push_back({i});
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < groups.size() && !merged; ++a)
      for (std::size_t b = a + 1; b < groups.size() && !merged; ++b) {
        bool touch = false;
        for (auto i : groups[a])
          for (auto j : groups[b]) {
            Vec3i ti = g.unlinear(target[i]), tj = g.unlinear(target[j]);
            if (ti == tj || adjacent(ti, tj, conn)) touch = true;
          }
        if (touch) {
          groups[a].insert(groups[a].end(), groups[b].begin(), groups[b].end());
          groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
  }
  auto min_target = [&](const std::vector<std::size_t>& grp) {
    std::int64_t m = std::numeric_limits<std::int64_t>::max();
    for (auto i : grp) m = std::min(m, target[i]);
    return m;
  };
  for (auto& grp : groups) std::sort(grp.begin(), grp.end());
  std::sort(groups.begin(), groups.end(), [&](const auto& x, const auto& y) { return min_target(x) < min_target(y); });
  return groups;
}

// Best (cardinality, -cost) over every partial injection of rows into columns.
struct BruteAssignment {
  std::size_t cardinality = 0;
  double cost = 0;
};

inline BruteAssignment assignment(const CostMatrix& m) {
  BruteAssignment best;
  std::vector<bool> used(m.cols, false);
  std::function<void(std::size_t, std::size_t, double)> go = [&](std::size_t row, std::size_t card, double cost) {
    if (row == m.rows) {
      if (card > best.cardinality || (card == best.cardinality && cost < best.cost)) best = {card, cost};
      return;
    }
    go(row + 1, card, cost);
    for (std::size_t c = 0; c < m.cols; ++c)
      if (!used[c] && m(row, c)) {
        used[c] = true;
        go(row + 1, card + 1, cost + *m(row, c));
        used[c] = false;
      }
  };
  go(0, 0, 0.0);
  return best;
}

// Random segmentation: nearest of a few seeds in nm, with a background slab
// sprinkled in when `with_background` is set.
inline SegmentationVolume random_segmentation(std::mt19937_64& rng, Vec3i shape, Vec3d res, int n_labels,
                                              bool with_background) {
  VolumeGeometry g(shape, res);
  std::vector<Vec3d> seeds(static_cast<std::size_t>(n_labels));
  for (auto& s : seeds)
    for (int a = 0; a < 3; ++a)
      s[a] = std::uniform_real_distribution<double>(0, static_cast<double>(shape[a]) * res[a])(rng);
  std::vector<Label> labels(static_cast<std::size_t>(g.num_voxels()));
  for (std::int64_t i = 0; i < g.num_voxels(); ++i) {
    Vec3d p = g.world(g.unlinear(i));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      double d = (p - seeds[s]).norm();
      if (d < best) {
        best = d;
        labels[static_cast<std::size_t>(i)] = s + 1;
      }
    }
  }
  if (with_background) {
    std::int64_t x0 = std::uniform_int_distribution<std::int64_t>(0, shape.x - 1)(rng);
    for (std::int64_t i = 0; i < g.num_voxels(); ++i)
      if (g.unlinear(i).x == x0) labels[static_cast<std::size_t>(i)] = kBackground;
  }
  return SegmentationVolume(g, std::move(labels));
}

// Annotations at random voxel centers; endpoints may share a label.
inline std::vector<SynapticPartnerAnnotation> random_annotations(std::mt19937_64& rng, const SegmentationVolume& seg,
                                                                 std::size_t n, double max_dist_nm) {
  const auto& g = seg.geometry();
  std::vector<SynapticPartnerAnnotation> out;
  std::uniform_int_distribution<std::int64_t> pick(0, g.num_voxels() - 1);
  while (out.size() < n) {
    Vec3i p = g.unlinear(pick(rng));
    if (seg.at(p) == kBackground) continue;
    Vec3i q;
    for (int a = 0; a < 3; ++a) {
      auto reach = static_cast<std::int64_t>(max_dist_nm / g.resolution()[a]);
      q[a] = std::clamp<std::int64_t>(p[a] + std::uniform_int_distribution<std::int64_t>(-reach, reach)(rng), 0,
                                      g.shape()[a] - 1);
    }
    if (q == p || seg.at(q) == kBackground) continue;
    out.push_back({out.size(), g.world(p), g.world(q)});
  }
  return out;
}

// Random offsets of up to `reach` voxels per axis, distinct and nonzero.
inline OffsetSet random_offsets(std::mt19937_64& rng, Vec3d res, std::size_t n, Vec3i reach, double r_syn) {
  std::set<Vec3i> seen;
  std::vector<Vec3d> nm;
  while (nm.size() < n) {
    Vec3i v{std::uniform_int_distribution<std::int64_t>(-reach.x, reach.x)(rng),
            std::uniform_int_distribution<std::int64_t>(-reach.y, reach.y)(rng),
            std::uniform_int_distribution<std::int64_t>(-reach.z, reach.z)(rng)};
    if (v.is_zero() || !seen.insert(v).second) continue;
    nm.push_back({static_cast<double>(v.x) * res.x, static_cast<double>(v.y) * res.y, static_cast<double>(v.z) * res.z});
  }
  return OffsetSet(nm, r_syn, res);
}

}  // namespace oracle

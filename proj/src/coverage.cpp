#include "synpart/coverage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

#include "synpart/errors.hpp"
#include "synpart/parallel.hpp"
#include "synpart/regions.hpp"

namespace synpart {

namespace {

void require_matching_resolution(const OffsetSet& offsets, const SegmentationVolume& seg) {
  if (!(offsets.resolution() == seg.geometry().resolution()))
    throw ValidationError("offset set resolution " + to_string(offsets.resolution()) +
                          " differs from segmentation resolution " + to_string(seg.geometry().resolution()));
}

bool endpoints_labeled(const SynapticPartnerAnnotation& a, const SegmentationVolume& seg) {
  // at_point throws BoundsError for endpoints outside the volume.
  return seg.at_point(a.pre_location) != kBackground && seg.at_point(a.post_location) != kBackground;
}

bool offset_connects(const SynapticRegion& region, const RegionMask& post, Vec3i offset, const VolumeGeometry& g) {
  for (auto i : region.pre)
    if (post.contains(g.unlinear(i) + offset)) return true;
  return false;
}

}  // namespace

CoverageStatus coverage_status(const SynapticPartnerAnnotation& a, const OffsetSet& offsets,
                               const SegmentationVolume& seg) {
  require_matching_resolution(offsets, seg);
  if (!endpoints_labeled(a, seg)) return CoverageStatus::uncoverable;
  const auto& g = seg.geometry();
  SynapticRegion region = synaptic_region(a, offsets.r_syn_nm(), seg);
  RegionMask post(region.post, g);
  for (const auto& r : offsets.offsets_vox())
    if (offset_connects(region, post, r, g)) return CoverageStatus::covered;
  return CoverageStatus::uncovered;
}

CoverageReport coverage(const PointAnnotationSet& annotations, const OffsetSet& offsets,
                        const SegmentationVolume& seg, unsigned threads) {
  require_matching_resolution(offsets, seg);
  const auto& list = annotations.annotations;
  std::vector<CoverageStatus> status(list.size());
  parallel_for(list.size(), threads, [&](std::size_t i) { status[i] = coverage_status(list[i], offsets, seg); });

  CoverageReport rep;
  for (std::size_t i = 0; i < list.size(); ++i) {
    switch (status[i]) {
      case CoverageStatus::covered:
        ++rep.covered;
        ++rep.total;
        break;
      case CoverageStatus::uncovered:
        rep.uncovered_ids.push_back(list[i].id);
        ++rep.total;
        break;
      case CoverageStatus::uncoverable:
        rep.uncoverable_ids.push_back(list[i].id);
        break;
    }
  }
  rep.vacuous = rep.total == 0;
  rep.rate = rep.vacuous ? 1.0 : static_cast<double>(rep.covered) / static_cast<double>(rep.total);
  return rep;
}

namespace {

struct CandidateOffset {
  Vec3i vox;
  Vec3d nm;
};

/// Offsets of one block kind at one length, snapped to the lattice; empty when
/// the block degenerates (some offset rounds to zero or sign variants collide).
std::vector<CandidateOffset> block_offsets(OffsetBlockChoice::Kind kind, double length, Vec3d res) {
  auto snap = [&](Vec3d nm) {
    CandidateOffset c;
    for (int a = 0; a < 3; ++a) {
      c.vox[a] = static_cast<std::int64_t>(std::round(nm[a] / res[a]));
      c.nm[a] = static_cast<double>(c.vox[a]) * res[a];
    }
    return c;
  };
  std::vector<CandidateOffset> out;
  if (kind == OffsetBlockChoice::Kind::diagonal) {
    const double n = std::sqrt(17.0);
    CandidateOffset proto = snap({2 * length / n, 3 * length / n, 2 * length / n});
    if (proto.vox.x == 0 || proto.vox.y == 0 || proto.vox.z == 0) return {};
    for (int sx : {1, -1})
      for (int sy : {1, -1})
        for (int sz : {1, -1})
          out.push_back({{proto.vox.x * sx, proto.vox.y * sy, proto.vox.z * sz},
                         {proto.nm.x * sx, proto.nm.y * sy, proto.nm.z * sz}});
  } else {
    int axis = kind == OffsetBlockChoice::Kind::axis_x ? 0 : kind == OffsetBlockChoice::Kind::axis_y ? 1 : 2;
    Vec3d nm;
    nm[axis] = length;
    CandidateOffset c = snap(nm);
    if (c.vox.is_zero()) return {};
    out.push_back(c);
    out.push_back({-c.vox, c.nm * -1.0});
  }
  return out;
}

constexpr OffsetBlockChoice::Kind kKinds[4] = {OffsetBlockChoice::Kind::axis_x, OffsetBlockChoice::Kind::axis_y,
                                               OffsetBlockChoice::Kind::axis_z, OffsetBlockChoice::Kind::diagonal};

}  // namespace

GridSearchResult grid_search_offsets(const PointAnnotationSet& annotations, const SegmentationVolume& seg,
                                     const std::vector<double>& candidate_lengths,
                                     const std::vector<std::size_t>& candidate_counts,
                                     const std::vector<double>& candidate_radii, unsigned threads) {
  if (candidate_lengths.empty()) throw ValidationError("candidate lengths must not be empty");
  if (candidate_counts.empty()) throw ValidationError("candidate counts must not be empty");
  if (candidate_radii.empty()) throw ValidationError("candidate radii must not be empty");
  for (double l : candidate_lengths)
    if (!(l > 0)) throw ValidationError("candidate lengths must be > 0");
  for (double r : candidate_radii)
    if (!(r >= 0)) throw ValidationError("candidate radii must be >= 0");

  const auto& g = seg.geometry();
  const Vec3d res = g.resolution();
  const auto& list = annotations.annotations;
  const std::size_t n_len = candidate_lengths.size();

  // Universe of candidate offsets, indexed [length][kind] -> offsets.
  std::vector<std::array<std::vector<CandidateOffset>, 4>> family(n_len);
  std::vector<Vec3i> universe;
  std::vector<std::array<std::size_t, 4>> first_index(n_len);
  for (std::size_t li = 0; li < n_len; ++li)
    for (int k = 0; k < 4; ++k) {
      family[li][k] = block_offsets(kKinds[k], candidate_lengths[li], res);
      first_index[li][k] = universe.size();
      for (const auto& c : family[li][k]) universe.push_back(c.vox);
    }

  // Labeled annotations only; the rest are reported as uncoverable.
  std::vector<std::size_t> coverable;
  std::vector<std::uint64_t> uncoverable_ids;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (endpoints_labeled(list[i], seg))
      coverable.push_back(i);
    else
      uncoverable_ids.push_back(list[i].id);
  }

  // hits[ri][ai][u]: offset u connects the regions of annotation ai at radius ri.
  const std::size_t n_rad = candidate_radii.size();
  std::vector<std::vector<std::vector<std::uint8_t>>> hits(
      n_rad, std::vector<std::vector<std::uint8_t>>(coverable.size()));
  parallel_for(n_rad * coverable.size(), threads, [&](std::size_t job) {
    std::size_t ri = job / coverable.size(), ai = job % coverable.size();
    SynapticRegion region = synaptic_region(list[coverable[ai]], candidate_radii[ri], seg);
    RegionMask post(region.post, g);
    auto& h = hits[ri][ai];
    h.resize(universe.size());
    for (std::size_t u = 0; u < universe.size(); ++u) h[u] = offset_connects(region, post, universe[u], g) ? 1 : 0;
  });

  struct Config {
    std::array<int, 4> length_index;  // -1 = block unused
    std::size_t radius_index;
    std::size_t n_e;
    double total_length;
    std::size_t order;
  };
  std::vector<Config> configs;
  std::size_t order = 0;
  const int choices = static_cast<int>(n_len) + 1;
  for (std::size_t ri = 0; ri < n_rad; ++ri) {
    for (int code = 1; code < choices * choices * choices * choices; ++code) {
      Config c{{}, ri, 0, 0.0, order++};
      bool valid = true;
      int rest = code;
      for (int k = 0; k < 4; ++k) {
        c.length_index[k] = rest % choices - 1;
        rest /= choices;
        if (c.length_index[k] < 0) continue;
        const auto& offs = family[static_cast<std::size_t>(c.length_index[k])][k];
        if (offs.empty()) valid = false;
        c.n_e += offs.size();
        for (const auto& o : offs) c.total_length += o.nm.norm();
      }
      if (!valid || c.n_e == 0) continue;
      if (std::find(candidate_counts.begin(), candidate_counts.end(), c.n_e) == candidate_counts.end()) continue;
      configs.push_back(c);
    }
  }

  std::vector<std::size_t> covered(configs.size(), 0);
  parallel_for(configs.size(), threads, [&](std::size_t ci) {
    const Config& c = configs[ci];
    std::size_t count = 0;
    for (std::size_t ai = 0; ai < coverable.size(); ++ai) {
      const auto& h = hits[c.radius_index][ai];
      bool hit = false;
      for (int k = 0; k < 4 && !hit; ++k) {
        if (c.length_index[k] < 0) continue;
        auto li = static_cast<std::size_t>(c.length_index[k]);
        std::size_t base = first_index[li][k];
        for (std::size_t j = 0; j < family[li][k].size() && !hit; ++j) hit = h[base + j] != 0;
      }
      if (hit) ++count;
    }
    covered[ci] = count;
  });

  if (configs.empty()) throw ValidationError("no offset configuration matches the candidate counts");

  auto key = [&](std::size_t ci) {
    const Config& c = configs[ci];
    return std::make_tuple(covered[ci] == coverable.size() ? 0 : 1, coverable.size() - covered[ci], c.n_e,
                           candidate_radii[c.radius_index], c.total_length, c.order);
  };
  std::size_t best = 0;
  for (std::size_t ci = 1; ci < configs.size(); ++ci)
    if (key(ci) < key(best)) best = ci;

  const Config& c = configs[best];
  GridSearchResult result;
  std::vector<Vec3d> nm;
  for (int k = 0; k < 4; ++k) {
    if (c.length_index[k] < 0) continue;
    auto li = static_cast<std::size_t>(c.length_index[k]);
    result.blocks.push_back({kKinds[k], candidate_lengths[li]});
    for (const auto& o : family[li][k]) nm.push_back(o.nm);
  }
  result.offsets = OffsetSet(std::move(nm), candidate_radii[c.radius_index], res);
  result.report.total = coverable.size();
  result.report.covered = covered[best];
  result.report.uncoverable_ids = uncoverable_ids;
  const auto& h = hits[c.radius_index];
  for (std::size_t ai = 0; ai < coverable.size(); ++ai) {
    bool hit = false;
    for (int k = 0; k < 4 && !hit; ++k) {
      if (c.length_index[k] < 0) continue;
      auto li = static_cast<std::size_t>(c.length_index[k]);
      for (std::size_t j = 0; j < family[li][k].size() && !hit; ++j) hit = h[ai][first_index[li][k] + j] != 0;
    }
    if (!hit) result.report.uncovered_ids.push_back(list[coverable[ai]].id);
  }
  result.report.vacuous = coverable.empty();
  result.report.rate = result.report.vacuous ? 1.0
                                             : static_cast<double>(result.report.covered) /
                                                   static_cast<double>(result.report.total);
  result.complete = result.report.covered == result.report.total;
  result.configurations_evaluated = configs.size();
  return result;
}

}  // namespace synpart

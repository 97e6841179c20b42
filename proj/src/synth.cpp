#include "synpart/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "synpart/coverage.hpp"
#include "synpart/errors.hpp"
#include "synpart/parallel.hpp"
#include "synpart/regions.hpp"

namespace synpart {

void SynthSpec::validate() const {
  if (n_segments < 1) throw ValidationError("segments must be >= 1");
  if (!(min_partner_distance_nm > 0) || !(max_partner_distance_nm >= min_partner_distance_nm))
    throw ValidationError("partner distance range must satisfy 0 < min <= max");
  if (coverable_by) {
    if (!(coverable_by->resolution() == geometry.resolution()))
      throw ValidationError("offset set resolution differs from the synthetic volume resolution");
    double reach = coverable_by->max_length_nm() + 2 * coverable_by->r_syn_nm();
    if (max_partner_distance_nm > reach)
      throw ValidationError("max partner distance " + std::to_string(max_partner_distance_nm) +
                            " nm exceeds the offset reach of " + std::to_string(reach) + " nm");
  }
}

namespace {

std::vector<Label> nearest_seed_labels(const VolumeGeometry& g, const std::vector<Vec3d>& seeds, unsigned threads) {
  std::vector<Label> labels(static_cast<std::size_t>(g.num_voxels()));
  const auto n_z = static_cast<std::size_t>(g.shape().z);
  parallel_for(n_z, threads, [&](std::size_t z) {
    for (std::int64_t y = 0; y < g.shape().y; ++y)
      for (std::int64_t x = 0; x < g.shape().x; ++x) {
        Vec3i v{x, y, static_cast<std::int64_t>(z)};
        Vec3d p = g.world(v);
        double best = std::numeric_limits<double>::infinity();
        Label label = kBackground;
        for (std::size_t s = 0; s < seeds.size(); ++s) {
          Vec3d d = p - seeds[s];
          double d2 = d.x * d.x + d.y * d.y + d.z * d.z;
          if (d2 < best) {
            best = d2;
            label = static_cast<Label>(s + 1);
          }
        }
        labels[static_cast<std::size_t>(g.linear(v))] = label;
      }
  });
  return labels;
}

constexpr Vec3i kFaceNeighbors[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

// True when the target voxels of the synapse's own edges form a single
// 26-connected component, so noise-free extraction yields one candidate.
bool single_target_component(const SynapticPartnerAnnotation& a, const OffsetSet& offsets,
                             const SegmentationVolume& seg) {
  const auto& g = seg.geometry();
  SynapticRegion region = synaptic_region(a, offsets.r_syn_nm(), seg);
  RegionMask post(region.post, g);
  std::vector<std::int64_t> targets;
  for (auto v : region.pre)
    for (const auto& r : offsets.offsets_vox()) {
      Vec3i t = g.unlinear(v) + r;
      if (post.contains(t)) targets.push_back(g.linear(t));
    }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (targets.empty()) return false;

  std::vector<std::uint8_t> seen(targets.size(), 0);
  std::vector<std::size_t> stack = {0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vec3i v = g.unlinear(targets[stack.back()]);
    stack.pop_back();
    for (std::int64_t dz = -1; dz <= 1; ++dz)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
          Vec3i w = v + Vec3i{dx, dy, dz};
          if (!g.contains(w)) continue;
          auto it = std::lower_bound(targets.begin(), targets.end(), g.linear(w));
          if (it == targets.end() || *it != g.linear(w)) continue;
          auto k = static_cast<std::size_t>(it - targets.begin());
          if (!seen[k]) {
            seen[k] = 1;
            ++reached;
            stack.push_back(k);
          }
        }
  }
  return reached == targets.size();
}

}  // namespace

SynthVolume generate(const SynthSpec& spec, unsigned threads) {
  spec.validate();
  const auto& g = spec.geometry;
  std::mt19937_64 rng(spec.seed);

  std::vector<Vec3d> seeds(spec.n_segments);
  for (auto& s : seeds)
    for (int a = 0; a < 3; ++a) {
      double lo = g.origin()[a] - 0.5 * g.resolution()[a];
      double hi = lo + static_cast<double>(g.shape()[a]) * g.resolution()[a];
      s[a] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }

  SynthVolume out;
  out.segmentation = SegmentationVolume(g, nearest_seed_labels(g, seeds, threads));
  out.annotations.geometry = g;
  const auto& seg = out.segmentation;

  std::vector<std::int64_t> boundary;
  for (std::int64_t i = 0; i < g.num_voxels(); ++i) {
    Vec3i v = g.unlinear(i);
    for (auto d : kFaceNeighbors) {
      Vec3i w = v + d;
      if (g.contains(w) && seg.at(w) != seg.at(v)) {
        boundary.push_back(i);
        break;
      }
    }
  }

  const double separation =
      (spec.coverable_by ? spec.coverable_by->max_length_nm() + 2 * spec.coverable_by->r_syn_nm()
                         : 2 * spec.max_partner_distance_nm) +
      std::max({g.resolution().x, g.resolution().y, g.resolution().z});

  std::map<std::pair<Label, Label>, std::vector<std::size_t>> by_pair;
  auto& planted = out.annotations.annotations;
  const std::size_t max_attempts = 10 * spec.n_synapses;
  for (std::size_t attempt = 0; attempt < max_attempts && planted.size() < spec.n_synapses; ++attempt) {
    if (boundary.empty()) break;
    Vec3i p = g.unlinear(boundary[std::uniform_int_distribution<std::size_t>(0, boundary.size() - 1)(rng)]);
    Label a = seg.at(p);
    std::set<Label> across;
    for (auto d : kFaceNeighbors) {
      Vec3i w = p + d;
      if (g.contains(w) && seg.at(w) != a) across.insert(seg.at(w));
    }
    std::vector<Label> across_list(across.begin(), across.end());
    Label b = across_list[std::uniform_int_distribution<std::size_t>(0, across_list.size() - 1)(rng)];

    std::vector<Vec3i> shell;
    Vec3i reach;
    for (int ax = 0; ax < 3; ++ax)
      reach[ax] = static_cast<std::int64_t>(std::floor(spec.max_partner_distance_nm / g.resolution()[ax]));
    for (std::int64_t dz = -reach.z; dz <= reach.z; ++dz)
      for (std::int64_t dy = -reach.y; dy <= reach.y; ++dy)
        for (std::int64_t dx = -reach.x; dx <= reach.x; ++dx) {
          Vec3i q = p + Vec3i{dx, dy, dz};
          if (!g.contains(q) || seg.at(q) != b) continue;
          double d = anisotropic_distance_nm(p, q, g);
          if (d >= spec.min_partner_distance_nm && d <= spec.max_partner_distance_nm) shell.push_back(q);
        }
    if (shell.empty()) continue;
    Vec3i q = shell[std::uniform_int_distribution<std::size_t>(0, shell.size() - 1)(rng)];

    SynapticPartnerAnnotation candidate{planted.size(), g.world(p), g.world(q)};
    bool clash = false;
    for (std::size_t other : by_pair[{a, b}]) {
      const auto& o = planted[other];
      if (distance_nm(o.pre_location, candidate.pre_location) <= separation ||
          distance_nm(o.post_location, candidate.post_location) <= separation)
        clash = true;
    }
    if (clash) continue;
    if (spec.coverable_by && (!is_covered(candidate, *spec.coverable_by, seg) ||
                              !single_target_component(candidate, *spec.coverable_by, seg)))
      continue;
    by_pair[{a, b}].push_back(planted.size());
    planted.push_back(candidate);
  }

  if (planted.size() < spec.n_synapses)
    throw GenerationError(planted.size(), "could only plant " + std::to_string(planted.size()) + " of " +
                                              std::to_string(spec.n_synapses) + " synapses in " +
                                              std::to_string(max_attempts) + " attempts");
  return out;
}

std::vector<std::size_t> planted_edge_counts(const PointAnnotationSet& annotations, const OffsetSet& offsets,
                                             const SegmentationVolume& seg, unsigned threads) {
  const auto& g = seg.geometry();
  std::vector<std::size_t> counts(annotations.size(), 0);
  parallel_for(annotations.size(), threads, [&](std::size_t i) {
    SynapticRegion region = synaptic_region(annotations.annotations[i], offsets.r_syn_nm(), seg);
    RegionMask post(region.post, g);
    for (const auto& r : offsets.offsets_vox())
      for (auto v : region.pre)
        if (post.contains(g.unlinear(v) + r)) ++counts[i];
  });
  return counts;
}

RoundtripResult end_to_end_roundtrip(const RoundtripOptions& options, unsigned threads) {
  OffsetSet offsets = options.offsets ? *options.offsets : paper_offset_set(options.synth.geometry);
  SynthSpec spec = options.synth;
  if (!spec.coverable_by) spec.coverable_by = offsets;

  RoundtripResult result;
  result.volume = generate(spec, threads);
  const auto& seg = result.volume.segmentation;
  const auto& planted = result.volume.annotations;

  auto counts = planted_edge_counts(planted, offsets, seg, threads);
  result.min_planted_confidence = counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end());

  ExtractionParams params = options.params;
  if (options.t2_fraction) params.t2 = *options.t2_fraction * static_cast<double>(result.min_planted_confidence);
  result.t2 = params.t2;

  EdgeScoreVolume labels = encode_labels(planted, offsets, seg, threads);
  EdgeScoreVolume scores = labels_to_oracle_scores(labels, options.noise, threads);
  result.candidates = extract(scores, seg, params, threads);
  result.report = evaluate(to_annotations(result.candidates), planted.annotations, seg, options.matching);
  return result;
}

}  // namespace synpart

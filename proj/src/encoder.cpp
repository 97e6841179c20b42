#include "synpart/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "synpart/errors.hpp"
#include "synpart/parallel.hpp"
#include "synpart/regions.hpp"

namespace synpart {

EdgeScoreVolume::EdgeScoreVolume(VolumeGeometry geometry, OffsetSet offsets)
    : geometry_(geometry), offsets_(std::move(offsets)) {
  if (!(offsets_.resolution() == geometry_.resolution()))
    throw ValidationError("offset set resolution " + to_string(offsets_.resolution()) +
                          " differs from volume resolution " + to_string(geometry_.resolution()));
  scores_.assign(offsets_.size() * static_cast<std::size_t>(geometry_.num_voxels()), 0.0f);
}

EdgeScoreVolume::EdgeScoreVolume(VolumeGeometry geometry, OffsetSet offsets, std::vector<float> scores)
    : EdgeScoreVolume(geometry, std::move(offsets)) {
  if (scores.size() != scores_.size())
    throw ValidationError("score array holds " + std::to_string(scores.size()) + " values, expected " +
                          std::to_string(scores_.size()));
  for (float s : scores)
    if (!(s >= 0.0f && s <= 1.0f)) throw ValidationError("edge scores must lie in [0, 1]");
  scores_ = std::move(scores);
}

bool EdgeScoreVolume::is_binary() const {
  return std::all_of(scores_.begin(), scores_.end(), [](float s) { return s == 0.0f || s == 1.0f; });
}

EdgeScoreVolume encode_labels(const PointAnnotationSet& annotations, const OffsetSet& offsets,
                              const SegmentationVolume& seg, unsigned threads) {
  const auto& g = seg.geometry();
  EdgeScoreVolume out(g, offsets);

  std::vector<SynapticRegion> regions(annotations.size());
  parallel_for(annotations.size(), threads, [&](std::size_t i) {
    regions[i] = synaptic_region(annotations.annotations[i], offsets.r_syn_nm(), seg);
  });
  std::vector<RegionMask> post_masks;
  post_masks.reserve(regions.size());
  for (const auto& r : regions) post_masks.emplace_back(r.post, g);

  // Each worker owns whole channels, so writes never overlap.
  parallel_for(offsets.size(), threads, [&](std::size_t k) {
    const Vec3i r = offsets.offsets_vox()[k];
    for (std::size_t a = 0; a < regions.size(); ++a)
      for (auto v : regions[a].pre)
        if (post_masks[a].contains(g.unlinear(v) + r)) out.at(k, v) = 1.0f;
  });
  return out;
}

void NoiseSpec::validate() const {
  if (!(gaussian_sigma >= 0) || !std::isfinite(gaussian_sigma)) throw ValidationError("sigma must be >= 0");
  if (!(false_blob_rate >= 0 && false_blob_rate <= 1)) throw ValidationError("false_blob_rate must be in [0,1]");
  if (!(drop_synapse_prob >= 0 && drop_synapse_prob <= 1))
    throw ValidationError("drop_synapse_prob must be in [0,1]");
}

namespace {

// Distinct, reproducible engine per (seed, stream).
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// 26-connected components of `mask`; returns per-voxel component ids
// (-1 outside) numbered in order of first appearance by linear index.
std::vector<std::int64_t> label_components(const std::vector<std::uint8_t>& mask, const VolumeGeometry& g,
                                           std::int64_t& count) {
  std::vector<std::int64_t> comp(mask.size(), -1);
  std::vector<std::int64_t> stack;
  count = 0;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(mask.size()); ++i) {
    if (!mask[static_cast<std::size_t>(i)] || comp[static_cast<std::size_t>(i)] >= 0) continue;
    comp[static_cast<std::size_t>(i)] = count;
    stack.push_back(i);
    while (!stack.empty()) {
      Vec3i v = g.unlinear(stack.back());
      stack.pop_back();
      for (std::int64_t dz = -1; dz <= 1; ++dz)
        for (std::int64_t dy = -1; dy <= 1; ++dy)
          for (std::int64_t dx = -1; dx <= 1; ++dx) {
            Vec3i w = v + Vec3i{dx, dy, dz};
            if (!g.contains(w)) continue;
            auto j = static_cast<std::size_t>(g.linear(w));
            if (mask[j] && comp[j] < 0) {
              comp[j] = count;
              stack.push_back(static_cast<std::int64_t>(j));
            }
          }
    }
    ++count;
  }
  return comp;
}

}  // namespace

EdgeScoreVolume labels_to_oracle_scores(const EdgeScoreVolume& labels, const NoiseSpec& noise, unsigned threads) {
  noise.validate();
  if (!labels.is_binary()) throw ValidationError("oracle scores require binary labels");
  EdgeScoreVolume out = labels;
  const auto& g = labels.geometry();
  const auto n_vox = static_cast<std::size_t>(g.num_voxels());
  const std::size_t n_ch = labels.channels();

  if (noise.drop_synapse_prob > 0) {
    std::vector<std::uint8_t> active(n_vox, 0);
    for (std::size_t k = 0; k < n_ch; ++k)
      for (std::size_t v = 0; v < n_vox; ++v)
        if (labels.at(k, static_cast<std::int64_t>(v)) > 0) active[v] = 1;
    std::int64_t n_comp = 0;
    auto comp = label_components(active, g, n_comp);
    auto rng = make_engine(noise.seed, 0);
    std::bernoulli_distribution drop(noise.drop_synapse_prob);
    std::vector<std::uint8_t> dropped(static_cast<std::size_t>(n_comp));
    for (auto& d : dropped) d = drop(rng) ? 1 : 0;
    for (std::size_t v = 0; v < n_vox; ++v)
      if (comp[v] >= 0 && dropped[static_cast<std::size_t>(comp[v])])
        for (std::size_t k = 0; k < n_ch; ++k) out.at(k, static_cast<std::int64_t>(v)) = 0.0f;
  }

  if (noise.false_blob_rate > 0 && n_ch > 0) {
    auto rng = make_engine(noise.seed, 1);
    std::uniform_int_distribution<std::size_t> pick_channel(0, n_ch - 1);
    std::uniform_real_distribution<double> blob_score(0.6, 1.0);
    // Geometric skipping keeps the cost proportional to the number of blobs.
    std::geometric_distribution<std::int64_t> gap(noise.false_blob_rate);
    std::int64_t v = noise.false_blob_rate >= 1 ? 0 : gap(rng);
    while (v < static_cast<std::int64_t>(n_vox)) {
      std::size_t k = pick_channel(rng);
      float s = static_cast<float>(blob_score(rng));
      Vec3i c = g.unlinear(v);
      for (std::int64_t dy = -2; dy <= 2; ++dy)
        for (std::int64_t dx = -2; dx <= 2; ++dx) {
          Vec3i w = c + Vec3i{dx, dy, 0};
          if (g.contains(w)) out.at(k, g.linear(w)) = std::max(out.at(k, g.linear(w)), s);
        }
      v += 1 + (noise.false_blob_rate >= 1 ? 0 : gap(rng));
    }
  }

  if (noise.gaussian_sigma > 0) {
    parallel_for(n_ch, threads, [&](std::size_t k) {
      auto rng = make_engine(noise.seed, 2 + k);
      std::normal_distribution<double> normal(0.0, noise.gaussian_sigma);
      for (std::size_t v = 0; v < n_vox; ++v) {
        float& s = out.at(k, static_cast<std::int64_t>(v));
        s = static_cast<float>(std::clamp(static_cast<double>(s) + normal(rng), 0.0, 1.0));
      }
    });
  }
  return out;
}

}  // namespace synpart

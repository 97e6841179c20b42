#pragma once

#include <cstdint>
#include <vector>

#include "synpart/annotations.hpp"
#include "synpart/offsets.hpp"
#include "synpart/volume.hpp"

namespace synpart {

/// Per-voxel, per-offset edge scores in [0, 1]; channel k of voxel v scores
/// the directed edge v -> v + offsets_vox[k].
class EdgeScoreVolume {
 public:
  EdgeScoreVolume() = default;
  /// All-zero volume. Throws ValidationError when the offset resolution
  /// differs from the geometry.
  EdgeScoreVolume(VolumeGeometry geometry, OffsetSet offsets);
  /// Throws ValidationError on size mismatch or values outside [0, 1].
  EdgeScoreVolume(VolumeGeometry geometry, OffsetSet offsets, std::vector<float> scores);

  const VolumeGeometry& geometry() const { return geometry_; }
  const OffsetSet& offsets() const { return offsets_; }
  std::size_t channels() const { return offsets_.size(); }

  float at(std::size_t channel, std::int64_t voxel) const { return scores_[index(channel, voxel)]; }
  float& at(std::size_t channel, std::int64_t voxel) { return scores_[index(channel, voxel)]; }
  const std::vector<float>& scores() const { return scores_; }
  std::vector<float>& scores() { return scores_; }

  /// True when every entry is 0 or 1.
  bool is_binary() const;

  friend bool operator==(const EdgeScoreVolume&, const EdgeScoreVolume&) = default;

 private:
  std::size_t index(std::size_t channel, std::int64_t voxel) const {
    return channel * static_cast<std::size_t>(geometry_.num_voxels()) + static_cast<std::size_t>(voxel);
  }

  VolumeGeometry geometry_;
  OffsetSet offsets_;
  std::vector<float> scores_;
};

/// Binary edge targets: channel k of voxel v is 1 iff for some annotation v
/// lies in its pre-region and v + offsets_vox[k] lies in its post-region.
/// Edges leaving the volume are 0. Parallel over channels.
EdgeScoreVolume encode_labels(const PointAnnotationSet& annotations, const OffsetSet& offsets,
                              const SegmentationVolume& seg, unsigned threads = 1);

/// Degradation applied to binary labels to simulate a classifier.
struct NoiseSpec {
  /// Standard deviation of additive zero-mean Gaussian noise.
  double gaussian_sigma = 0.0;
  /// Per-voxel probability of seeding a spurious positive blob.
  double false_blob_rate = 0.0;
  /// Probability of erasing each connected positive region.
  double drop_synapse_prob = 0.0;
  std::uint64_t seed = 0;

  /// Throws ValidationError for sigma < 0 or rates outside [0, 1].
  void validate() const;
};

/// clamp(labels + noise, 0, 1) with optional dropped regions and spurious
/// blobs; deterministic for a given seed and independent of `threads`.
///
/// Regions are 26-connected components of voxels with any positive channel;
/// a dropped region loses every positive channel. Blobs are 5x5x1 voxel
/// patches in one random channel with scores drawn from [0.6, 1].
EdgeScoreVolume labels_to_oracle_scores(const EdgeScoreVolume& labels, const NoiseSpec& noise,
                                        unsigned threads = 1);

}  // namespace synpart

#pragma once

#include <cstdint>
#include <vector>

#include "synpart/geometry.hpp"

namespace synpart {

using Label = std::uint64_t;
inline constexpr Label kBackground = 0;

/// Integer neuron labels on an anisotropic grid. Label 0 is background.
class SegmentationVolume {
 public:
  SegmentationVolume() = default;
  explicit SegmentationVolume(VolumeGeometry geometry)
      : geometry_(geometry), labels_(static_cast<std::size_t>(geometry.num_voxels()), kBackground) {}
  /// Throws ValidationError when labels.size() != geometry.num_voxels().
  SegmentationVolume(VolumeGeometry geometry, std::vector<Label> labels);

  const VolumeGeometry& geometry() const { return geometry_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::vector<Label>& labels() { return labels_; }

  Label at(Vec3i v) const { return labels_[static_cast<std::size_t>(geometry_.linear(v))]; }
  Label& at(Vec3i v) { return labels_[static_cast<std::size_t>(geometry_.linear(v))]; }
  Label at_linear(std::int64_t i) const { return labels_[static_cast<std::size_t>(i)]; }
  /// Label under a nm point; throws BoundsError outside the volume.
  Label at_point(Vec3d p) const { return at(geometry_.world_to_voxel(p)); }

  friend bool operator==(const SegmentationVolume&, const SegmentationVolume&) = default;

 private:
  VolumeGeometry geometry_;
  std::vector<Label> labels_;
};

}  // namespace synpart

#pragma once

#include <cstdint>
#include <vector>

#include "synpart/annotations.hpp"
#include "synpart/volume.hpp"

namespace synpart {

/// Voxels of a synaptic region as ascending linear indices.
using VoxelSet = std::vector<std::int64_t>;

/// All voxels whose center lies within r_syn nm (closed ball) of the center
/// of the voxel containing p and whose label equals the label at p.
///
/// Throws BoundsError if p is outside the volume and ValidationError if p
/// lies on background.
VoxelSet expand_region(Vec3d p, double r_syn_nm, const SegmentationVolume& seg);

/// Dense membership bitmap over the bounding box of a voxel set.
class RegionMask {
 public:
  RegionMask() = default;
  RegionMask(const VoxelSet& voxels, const VolumeGeometry& geometry);

  bool contains(Vec3i v) const {
    if (empty_ || v.x < lo_.x || v.y < lo_.y || v.z < lo_.z || v.x > hi_.x || v.y > hi_.y || v.z > hi_.z)
      return false;
    return bits_[static_cast<std::size_t>((v.x - lo_.x) + dims_.x * ((v.y - lo_.y) + dims_.y * (v.z - lo_.z)))] != 0;
  }

 private:
  bool empty_ = true;
  Vec3i lo_, hi_, dims_;
  std::vector<std::uint8_t> bits_;
};

/// Pre- and post-synaptic regions of one annotation.
struct SynapticRegion {
  std::uint64_t annotation_id = 0;
  Label pre_label = kBackground;
  Label post_label = kBackground;
  VoxelSet pre;
  VoxelSet post;
};

/// expand_region for both endpoints. Errors name the annotation.
SynapticRegion synaptic_region(const SynapticPartnerAnnotation& a, double r_syn_nm, const SegmentationVolume& seg);

}  // namespace synpart

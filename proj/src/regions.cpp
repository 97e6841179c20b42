#include "synpart/regions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synpart/errors.hpp"

namespace synpart {

VoxelSet expand_region(Vec3d p, double r_syn_nm, const SegmentationVolume& seg) {
  const auto& g = seg.geometry();
  const Vec3i c = g.world_to_voxel(p);
  const Label label = seg.at(c);
  if (label == kBackground) throw ValidationError("point " + to_string(p) + " nm lies on background");

  Vec3i lo, hi;
  for (int a = 0; a < 3; ++a) {
    auto reach = static_cast<std::int64_t>(std::floor(r_syn_nm / g.resolution()[a]));
    lo[a] = std::max<std::int64_t>(0, c[a] - reach);
    hi[a] = std::min<std::int64_t>(g.shape()[a] - 1, c[a] + reach);
  }
  VoxelSet out;
  // z-major iteration yields ascending linear indices.
  for (std::int64_t z = lo.z; z <= hi.z; ++z)
    for (std::int64_t y = lo.y; y <= hi.y; ++y)
      for (std::int64_t x = lo.x; x <= hi.x; ++x) {
        Vec3i v{x, y, z};
        if (seg.at(v) == label && anisotropic_distance_nm(v, c, g) <= r_syn_nm) out.push_back(g.linear(v));
      }
  return out;
}

RegionMask::RegionMask(const VoxelSet& voxels, const VolumeGeometry& geometry) {
  if (voxels.empty()) return;
  empty_ = false;
  lo_ = hi_ = geometry.unlinear(voxels.front());
  for (auto i : voxels) {
    Vec3i v = geometry.unlinear(i);
    for (int a = 0; a < 3; ++a) {
      lo_[a] = std::min(lo_[a], v[a]);
      hi_[a] = std::max(hi_[a], v[a]);
    }
  }
  dims_ = hi_ - lo_ + Vec3i{1, 1, 1};
  bits_.assign(static_cast<std::size_t>(dims_.x * dims_.y * dims_.z), 0);
  for (auto i : voxels) {
    Vec3i v = geometry.unlinear(i) - lo_;
    bits_[static_cast<std::size_t>(v.x + dims_.x * (v.y + dims_.y * v.z))] = 1;
  }
}

SynapticRegion synaptic_region(const SynapticPartnerAnnotation& a, double r_syn_nm, const SegmentationVolume& seg) {
  SynapticRegion r;
  r.annotation_id = a.id;
  const std::string who = "annotation " + std::to_string(a.id);
  try {
    r.pre = expand_region(a.pre_location, r_syn_nm, seg);
    r.pre_label = seg.at_point(a.pre_location);
  } catch (const BoundsError& e) {
    throw BoundsError(e.axis(), who + " (pre): " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(who + " (pre): " + e.what());
  }
  try {
    r.post = expand_region(a.post_location, r_syn_nm, seg);
    r.post_label = seg.at_point(a.post_location);
  } catch (const BoundsError& e) {
    throw BoundsError(e.axis(), who + " (post): " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(who + " (post): " + e.what());
  }
  return r;
}

}  // namespace synpart

#include "synpart/geometry.hpp"

#include <sstream>

#include "synpart/errors.hpp"

namespace synpart {

namespace {
constexpr const char* kAxisName[3] = {"x", "y", "z"};
}

std::string to_string(Vec3i v) {
  std::ostringstream os;
  os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
  return os.str();
}

std::string to_string(Vec3d v) {
  std::ostringstream os;
  os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
  return os.str();
}

VolumeGeometry::VolumeGeometry(Vec3i shape, Vec3d resolution, Vec3d origin)
    : shape_(shape), resolution_(resolution), origin_(origin) {
  for (int a = 0; a < 3; ++a) {
    if (shape[a] < 1)
      throw ValidationError(std::string("volume shape along ") + kAxisName[a] + " must be >= 1");
    if (!(resolution[a] > 0) || !std::isfinite(resolution[a]))
      throw ValidationError(std::string("resolution along ") + kAxisName[a] + " must be > 0");
    if (!std::isfinite(origin[a]))
      throw ValidationError(std::string("origin along ") + kAxisName[a] + " must be finite");
  }
}

Vec3d VolumeGeometry::world(Vec3i v) const {
  return {origin_.x + static_cast<double>(v.x) * resolution_.x,
          origin_.y + static_cast<double>(v.y) * resolution_.y,
          origin_.z + static_cast<double>(v.z) * resolution_.z};
}

Vec3i VolumeGeometry::nearest_voxel_unchecked(Vec3d p) const {
  Vec3i v;
  for (int a = 0; a < 3; ++a) {
    // std::round rounds halfway cases away from zero.
    double r = std::round((p[a] - origin_[a]) / resolution_[a]);
    if (!std::isfinite(r) || r > 9e15 || r < -9e15) r = -1;
    v[a] = static_cast<std::int64_t>(r);
  }
  return v;
}

Vec3i VolumeGeometry::world_to_voxel(Vec3d p) const {
  Vec3i v = nearest_voxel_unchecked(p);
  for (int a = 0; a < 3; ++a) {
    if (v[a] < 0 || v[a] >= shape_[a]) {
      std::ostringstream os;
      os << "point " << to_string(p) << " nm lies outside the volume along " << kAxisName[a]
         << " (voxel " << v[a] << ", extent " << shape_[a] << ")";
      throw BoundsError(a, os.str());
    }
  }
  return v;
}

double anisotropic_distance_nm(Vec3i a, Vec3i b, const VolumeGeometry& g) {
  const Vec3d& r = g.resolution();
  double dx = static_cast<double>(a.x - b.x) * r.x;
  double dy = static_cast<double>(a.y - b.y) * r.y;
  double dz = static_cast<double>(a.z - b.z) * r.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace synpart

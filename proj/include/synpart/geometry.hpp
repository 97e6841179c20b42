#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace synpart {

/// Integer triple in (x, y, z) order.
struct Vec3i {
  std::int64_t x = 0, y = 0, z = 0;

  constexpr std::int64_t operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  constexpr std::int64_t& operator[](int axis) { return axis == 0 ? x : axis == 1 ? y : z; }
  friend constexpr Vec3i operator+(Vec3i a, Vec3i b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3i operator-(Vec3i a, Vec3i b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3i operator-(Vec3i a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr auto operator<=>(const Vec3i&, const Vec3i&) = default;
  constexpr bool is_zero() const { return x == 0 && y == 0 && z == 0; }
};

/// Real triple in (x, y, z) order; used for nm positions and resolutions.
struct Vec3d {
  double x = 0, y = 0, z = 0;

  constexpr double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  constexpr double& operator[](int axis) { return axis == 0 ? x : axis == 1 ? y : z; }
  friend constexpr Vec3d operator+(Vec3d a, Vec3d b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3d operator-(Vec3d a, Vec3d b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3d operator*(Vec3d a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr bool operator==(const Vec3d&, const Vec3d&) = default;
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

std::string to_string(Vec3i v);
std::string to_string(Vec3d v);

/// Anisotropic voxel grid placed in nm world space.
///
/// Voxel v sits at world(v) = origin + v * resolution (componentwise).
/// Linear indices run x fastest, then y, then z, which is the C order of a
/// (z, y, x) array as stored in CREMI containers.
class VolumeGeometry {
 public:
  VolumeGeometry() = default;
  /// Throws ValidationError unless every shape entry is >= 1 and every
  /// resolution entry is > 0.
  VolumeGeometry(Vec3i shape, Vec3d resolution, Vec3d origin = {});

  const Vec3i& shape() const { return shape_; }
  const Vec3d& resolution() const { return resolution_; }
  const Vec3d& origin() const { return origin_; }

  std::int64_t num_voxels() const { return shape_.x * shape_.y * shape_.z; }

  bool contains(Vec3i v) const {
    return v.x >= 0 && v.y >= 0 && v.z >= 0 && v.x < shape_.x && v.y < shape_.y && v.z < shape_.z;
  }
  std::int64_t linear(Vec3i v) const { return v.x + shape_.x * (v.y + shape_.y * v.z); }
  Vec3i unlinear(std::int64_t i) const {
    return {i % shape_.x, (i / shape_.x) % shape_.y, i / (shape_.x * shape_.y)};
  }

  Vec3d world(Vec3i v) const;
  /// Nearest voxel of a nm point, rounding half away from zero per axis.
  /// Throws BoundsError naming the first offending axis.
  Vec3i world_to_voxel(Vec3d p) const;
  /// Same rounding as world_to_voxel, without the bounds check.
  Vec3i nearest_voxel_unchecked(Vec3d p) const;
  bool contains_point(Vec3d p) const { return contains(nearest_voxel_unchecked(p)); }

  friend bool operator==(const VolumeGeometry&, const VolumeGeometry&) = default;

 private:
  Vec3i shape_{1, 1, 1};
  Vec3d resolution_{1, 1, 1};
  Vec3d origin_{};
};

/// Free-function spelling of VolumeGeometry::world_to_voxel.
inline Vec3i world_to_voxel(Vec3d p, const VolumeGeometry& g) { return g.world_to_voxel(p); }

/// Euclidean distance in nm between the centers of two voxels.
double anisotropic_distance_nm(Vec3i a, Vec3i b, const VolumeGeometry& g);

/// Euclidean distance between two nm points.
inline double distance_nm(Vec3d a, Vec3d b) { return (a - b).norm(); }

}  // namespace synpart

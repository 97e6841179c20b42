#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "synpart/geometry.hpp"

namespace synpart {

/// The n_e directed candidate-edge offsets and the synaptic region radius.
///
/// offsets_vox[i] is offsets_nm[i] divided by the resolution and rounded half
/// away from zero. Construction rejects offsets that round to the zero voxel
/// and duplicates in either nm or voxel space.
class OffsetSet {
 public:
  OffsetSet() = default;
  OffsetSet(std::vector<Vec3d> offsets_nm, double r_syn_nm, Vec3d resolution);

  const std::vector<Vec3d>& offsets_nm() const { return offsets_nm_; }
  const std::vector<Vec3i>& offsets_vox() const { return offsets_vox_; }
  double r_syn_nm() const { return r_syn_nm_; }
  const Vec3d& resolution() const { return resolution_; }
  std::size_t size() const { return offsets_nm_.size(); }

  /// Largest |r| in nm.
  double max_length_nm() const;
  /// Sum of |r| in nm.
  double total_length_nm() const;

  friend bool operator==(const OffsetSet&, const OffsetSet&) = default;

 private:
  std::vector<Vec3d> offsets_nm_;
  std::vector<Vec3i> offsets_vox_;
  double r_syn_nm_ = 0;
  Vec3d resolution_{1, 1, 1};
};

/// The 14 offsets found for CREMI: (0,0,+-80), (+-120,0,0), (0,+-120,0) and
/// the eight sign variants of (40,60,40) nm, with r_syn = 100 nm.
OffsetSet paper_offset_set(const VolumeGeometry& geometry);

/// Plain-text offset config:
///   r_syn_nm=<v>
///   resolution=<x,y,z>
///   <x_nm> <y_nm> <z_nm>      (one line per offset)
/// Extra `key=value` header lines and '#' comments are accepted and ignored.
OffsetSet read_offset_config(std::istream& in);
OffsetSet read_offset_config(const std::filesystem::path& path);
std::string format_offset_config(const OffsetSet& offsets, const std::string& extra_header = {});

}  // namespace synpart

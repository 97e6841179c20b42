#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "synpart/geometry.hpp"

namespace synpart {

/// One ground-truth (or predicted) synaptic partner pair, locations in nm.
struct SynapticPartnerAnnotation {
  std::uint64_t id = 0;
  Vec3d pre_location;
  Vec3d post_location;

  friend bool operator==(const SynapticPartnerAnnotation&, const SynapticPartnerAnnotation&) = default;
};

struct PointAnnotationSet {
  std::vector<SynapticPartnerAnnotation> annotations;
  VolumeGeometry geometry;

  std::size_t size() const { return annotations.size(); }
  bool empty() const { return annotations.empty(); }

  /// Throws ValidationError on duplicate ids, coincident endpoints or
  /// endpoints outside the geometry.
  void validate() const;

  friend bool operator==(const PointAnnotationSet&, const PointAnnotationSet&) = default;
};

/// Plain-text partner list: one `id pre_x pre_y pre_z post_x post_y post_z`
/// row per partner, tab separated, nm. Lines starting with '#' are ignored.
std::vector<SynapticPartnerAnnotation> read_annotation_text(std::istream& in);
std::vector<SynapticPartnerAnnotation> read_annotation_text(const std::filesystem::path& path);
void write_annotation_text(std::ostream& out, const std::vector<SynapticPartnerAnnotation>& annotations);

}  // namespace synpart

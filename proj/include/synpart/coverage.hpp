#pragma once

#include <cstdint>
#include <vector>

#include "synpart/annotations.hpp"
#include "synpart/offsets.hpp"
#include "synpart/volume.hpp"

namespace synpart {

enum class CoverageStatus {
  covered,
  uncovered,
  /// An endpoint lies on background, so the annotation has no region.
  uncoverable,
};

/// Whether some offset connects a voxel of the pre-region to a voxel of the
/// post-region. Throws BoundsError for endpoints outside the volume and
/// ValidationError when offsets and segmentation disagree on resolution.
CoverageStatus coverage_status(const SynapticPartnerAnnotation& a, const OffsetSet& offsets,
                               const SegmentationVolume& seg);

inline bool is_covered(const SynapticPartnerAnnotation& a, const OffsetSet& offsets, const SegmentationVolume& seg) {
  return coverage_status(a, offsets, seg) == CoverageStatus::covered;
}

struct CoverageReport {
  std::size_t covered = 0;
  /// Annotations with both endpoints on labeled voxels.
  std::size_t total = 0;
  std::vector<std::uint64_t> uncovered_ids;
  /// Reported apart from `uncovered_ids` and excluded from `total`.
  std::vector<std::uint64_t> uncoverable_ids;
  /// covered / total, or 1 when total == 0.
  double rate = 1.0;
  /// Set when total == 0 and the rate of 1 holds vacuously.
  bool vacuous = true;

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

CoverageReport coverage(const PointAnnotationSet& annotations, const OffsetSet& offsets,
                        const SegmentationVolume& seg, unsigned threads = 1);

/// One offset family member chosen by the grid search.
struct OffsetBlockChoice {
  enum class Kind { axis_x, axis_y, axis_z, diagonal };
  Kind kind;
  double length_nm;
};

struct GridSearchResult {
  OffsetSet offsets;
  CoverageReport report;
  std::vector<OffsetBlockChoice> blocks;
  /// True when the selected configuration covers every coverable annotation.
  bool complete = false;
  std::size_t configurations_evaluated = 0;
};

/// Exhaustive search over structured offset families.
///
/// For every candidate length L the family holds axis-aligned +-L pairs on
/// each axis and the eight sign variants of L * (2,3,2)/|(2,3,2)|; every
/// offset is snapped to the voxel lattice. A configuration picks, for each
/// of the four blocks (x pair, y pair, z pair, diagonal orbit), either no
/// offsets or one candidate length, together with one radius. Only
/// configurations whose n_e is listed in candidate_counts are considered.
///
/// Returns the configuration with full coverage minimizing (n_e, r_syn,
/// summed |r|, enumeration order); if none reaches full coverage, the one
/// covering the most annotations under the same ordering.
GridSearchResult grid_search_offsets(const PointAnnotationSet& annotations, const SegmentationVolume& seg,
                                     const std::vector<double>& candidate_lengths,
                                     const std::vector<std::size_t>& candidate_counts,
                                     const std::vector<double>& candidate_radii, unsigned threads = 1);

}  // namespace synpart

#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "synpart/encoder.hpp"
#include "synpart/volume.hpp"

namespace synpart {

/// One directed voxel edge: source voxel (linear index) and offset channel.
struct Edge {
  std::int64_t source = 0;
  std::uint32_t offset = 0;
  float score = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Ordered (source segment, target segment) pair.
using SegmentPair = std::pair<Label, Label>;
using EdgeGroups = std::map<SegmentPair, std::vector<Edge>>;

enum class Connectivity { six = 6, twenty_six = 26 };

struct ExtractionParams {
  /// Edges with score >= t1 count as evidence.
  double t1 = 0.5;
  /// Candidates with confidence > t2 are kept.
  double t2 = 0.0;
  Connectivity connectivity = Connectivity::twenty_six;

  /// Throws ValidationError("t1 must be in [0,1]") etc.
  void validate() const;
};

struct CandidateSynapse {
  Label source_segment = kBackground;
  Label target_segment = kBackground;
  std::vector<Edge> edges;
  double confidence = 0;
  Vec3d pre_location;
  Vec3d post_location;
  /// Smallest linear index among the target voxels; canonical component id.
  std::int64_t component_id = 0;

  friend bool operator==(const CandidateSynapse&, const CandidateSynapse&) = default;
};

/// Target voxel of an edge, or nullopt-like {-1} when it leaves the volume.
std::int64_t edge_target(const Edge& e, const VolumeGeometry& g, const OffsetSet& offsets);

/// All in-bounds edges with score >= t1 joining two different labeled
/// segments, grouped by (seg(source), seg(target)); edges inside a group are
/// ordered by (source, offset).
EdgeGroups threshold_edges(const EdgeScoreVolume& scores, const SegmentationVolume& seg, double t1,
                           unsigned threads = 1);

/// Splits one group into candidates whose target voxels form connected
/// components. Candidates come back ordered by component id; confidence and
/// locations are left unset.
std::vector<CandidateSynapse> split_components(SegmentPair pair, const std::vector<Edge>& edges,
                                               const SegmentationVolume& seg, const OffsetSet& offsets,
                                               Connectivity connectivity);

/// Sum of edge scores.
double confidence(const std::vector<Edge>& edges);

/// Fills in confidence and keeps candidates with confidence > t2.
std::vector<CandidateSynapse> score_and_filter(std::vector<CandidateSynapse> candidates, double t2);

/// Unweighted centroids of the unique source and target voxels, each snapped
/// to the nearest member voxel (ties: smallest linear index), in nm.
std::pair<Vec3d, Vec3d> localize(const CandidateSynapse& c, const VolumeGeometry& g, const OffsetSet& offsets);

/// threshold_edges -> split_components -> score_and_filter -> localize.
/// Output is sorted by (source_segment, target_segment, confidence desc,
/// component id) and does not depend on `threads`.
std::vector<CandidateSynapse> extract(const EdgeScoreVolume& scores, const SegmentationVolume& seg,
                                      const ExtractionParams& params, unsigned threads = 1);

}  // namespace synpart

namespace synpart {

/// One row of the partner TSV.
struct PartnerRecord {
  Vec3d pre_location;
  Vec3d post_location;
  Label pre_segment = kBackground;
  Label post_segment = kBackground;
  double confidence = 0;
  std::size_t n_edges = 0;

  friend bool operator==(const PartnerRecord&, const PartnerRecord&) = default;
};

PartnerRecord to_record(const CandidateSynapse& c);
/// Partner pairs with ids equal to their position in the list.
std::vector<SynapticPartnerAnnotation> to_annotations(const std::vector<PartnerRecord>& records);
std::vector<SynapticPartnerAnnotation> to_annotations(const std::vector<CandidateSynapse>& candidates);

/// Tab-separated rows `pre_x pre_y pre_z post_x post_y post_z pre_seg
/// post_seg confidence n_edges`, preceded by '#' comment lines.
std::string format_partner_tsv(const std::vector<PartnerRecord>& records, const std::string& header_comment = {});
std::vector<PartnerRecord> read_partner_tsv(std::istream& in);

}  // namespace synpart

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "synpart/annotations.hpp"
#include "synpart/encoder.hpp"
#include "synpart/errors.hpp"
#include "synpart/evaluation.hpp"
#include "synpart/extractor.hpp"
#include "synpart/offsets.hpp"
#include "synpart/volume.hpp"

namespace synpart {

struct SynthSpec {
  VolumeGeometry geometry{{128, 128, 32}, {4, 4, 40}, {}};
  std::size_t n_segments = 20;
  std::size_t n_synapses = 15;
  double min_partner_distance_nm = 80;
  double max_partner_distance_nm = 140;
  std::uint64_t seed = 0;
  /// When set, every planted synapse must be covered by these offsets, the
  /// target voxels of its edges must form one 26-connected component, and
  /// the distance range must fit within their reach (max |r| + 2 r_syn).
  std::optional<OffsetSet> coverable_by;

  void validate() const;
};

/// Thrown when the requested synapse count cannot be planted.
class GenerationError : public ValidationError {
 public:
  GenerationError(std::size_t achieved, const std::string& what) : ValidationError(what), achieved_(achieved) {}
  std::size_t achieved() const noexcept { return achieved_; }

 private:
  std::size_t achieved_;
};

struct SynthVolume {
  SegmentationVolume segmentation;
  PointAnnotationSet annotations;
};

/// Nearest-seed (nm metric) segmentation with labels 1..n_segments, plus
/// planted partner pairs at voxel centers straddling segment boundaries.
///
/// Synapses sharing an ordered segment pair are kept further apart
/// than the offset reach so their edge sets stay disjoint. Deterministic for a
/// given spec; labeling uses up to `threads` workers.
SynthVolume generate(const SynthSpec& spec, unsigned threads = 1);

/// Number of positive edges each annotation contributes on its own; this is
/// its confidence under noise-free oracle scores.
std::vector<std::size_t> planted_edge_counts(const PointAnnotationSet& annotations, const OffsetSet& offsets,
                                             const SegmentationVolume& seg, unsigned threads = 1);

struct RoundtripResult {
  SynthVolume volume;
  std::vector<CandidateSynapse> candidates;
  EvalReport report;
  /// Smallest planted_edge_counts entry.
  std::size_t min_planted_confidence = 0;
  /// t2 actually used.
  double t2 = 0;
};

struct RoundtripOptions {
  SynthSpec synth;
  std::optional<OffsetSet> offsets;  // default: paper_offset_set(synth.geometry)
  ExtractionParams params;
  NoiseSpec noise;
  MatchingConstraint matching;
  /// When set, t2 = fraction * min planted confidence (overrides params.t2).
  std::optional<double> t2_fraction;
};

/// generate -> encode_labels -> labels_to_oracle_scores -> extract -> evaluate.
RoundtripResult end_to_end_roundtrip(const RoundtripOptions& options, unsigned threads = 1);

}  // namespace synpart

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "synpart/annotations.hpp"
#include "synpart/volume.hpp"

namespace synpart {

enum class ToleranceMode {
  /// Each endpoint within d of its counterpart.
  per_endpoint,
  /// Pre and post displacements summed within d.
  sum,
};

struct MatchingConstraint {
  double tolerance_nm = 400.0;
  bool require_segment_match = true;
  ToleranceMode mode = ToleranceMode::per_endpoint;

  void validate() const;
};

/// Whether a predicted pair may be matched to a ground-truth pair.
bool feasible(const SynapticPartnerAnnotation& pred, const SynapticPartnerAnnotation& gt,
              const SegmentationVolume& seg, const MatchingConstraint& c);

/// Cost of matching two pairs: summed pre and post endpoint distances in nm.
double matching_cost(const SynapticPartnerAnnotation& pred, const SynapticPartnerAnnotation& gt);

/// Rectangular cost matrix in row-major order; nullopt marks a forbidden entry.
struct CostMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::optional<double>> entries;

  CostMatrix() = default;
  CostMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
  std::optional<double>& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const std::optional<double>& operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

struct Assignment {
  /// (row, column) pairs, ascending by row; only allowed entries.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double total_cost = 0;
};

/// Maximum-cardinality assignment over allowed entries; among those, the one
/// with minimal total cost. Forbidden entries are never matched.
/// Throws ValidationError for non-finite allowed costs.
Assignment hungarian_assign(const CostMatrix& cost);

struct Match {
  std::uint64_t predicted_id = 0;
  std::uint64_t ground_truth_id = 0;
  double cost = 0;

  friend bool operator==(const Match&, const Match&) = default;
};

struct EvalReport {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 1, recall = 1, fscore = 1;
  std::vector<Match> matches;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Precision, recall and f-score from counts; P = 1 when tp + fp = 0,
/// R = 1 when tp + fn = 0, F = 0 when P + R = 0.
double precision_of(std::size_t tp, std::size_t fp);
double recall_of(std::size_t tp, std::size_t fn);
double fscore_of(double precision, double recall);

EvalReport evaluate(const std::vector<SynapticPartnerAnnotation>& predicted,
                    const std::vector<SynapticPartnerAnnotation>& ground_truth, const SegmentationVolume& seg,
                    const MatchingConstraint& c);

struct EvalSummary {
  std::size_t reports = 0;
  double mean_fscore = 0;
  double mean_precision = 0;
  double mean_recall = 0;
  std::size_t total_tp = 0, total_fp = 0, total_fn = 0;
  double mean_fp = 0, mean_fn = 0;
};

/// Equal-weight average over reports plus summed and averaged FP/FN.
/// Throws ValidationError for an empty list.
EvalSummary aggregate_reports(const std::vector<EvalReport>& reports);

}  // namespace synpart

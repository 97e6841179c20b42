#include "synpart/evaluation.hpp"

#include <cmath>
#include <limits>

#include "synpart/errors.hpp"

namespace synpart {

void MatchingConstraint::validate() const {
  if (!(tolerance_nm >= 0) || !std::isfinite(tolerance_nm)) throw ValidationError("tolerance must be >= 0 nm");
}

double matching_cost(const SynapticPartnerAnnotation& pred, const SynapticPartnerAnnotation& gt) {
  return distance_nm(pred.pre_location, gt.pre_location) + distance_nm(pred.post_location, gt.post_location);
}

bool feasible(const SynapticPartnerAnnotation& pred, const SynapticPartnerAnnotation& gt,
              const SegmentationVolume& seg, const MatchingConstraint& c) {
  double d_pre = distance_nm(pred.pre_location, gt.pre_location);
  double d_post = distance_nm(pred.post_location, gt.post_location);
  if (c.mode == ToleranceMode::per_endpoint) {
    if (d_pre > c.tolerance_nm || d_post > c.tolerance_nm) return false;
  } else if (d_pre + d_post > c.tolerance_nm) {
    return false;
  }
  if (!c.require_segment_match) return true;
  return seg.at_point(pred.pre_location) == seg.at_point(gt.pre_location) &&
         seg.at_point(pred.post_location) == seg.at_point(gt.post_location);
}

Assignment hungarian_assign(const CostMatrix& cost) {
  Assignment result;
  if (cost.rows == 0 || cost.cols == 0) return result;

  // Forbidden entries (and padding) cost more than any set of allowed
  // entries can differ by, so maximizing cardinality dominates cost.
  double magnitude = 0;
  for (const auto& e : cost.entries) {
    if (!e) continue;
    if (!std::isfinite(*e)) throw ValidationError("allowed assignment costs must be finite");
    magnitude += std::fabs(*e);
  }
  const double big = 2 * magnitude + 1;

  // Square problem of size n; rows are 1-based in the potentials below.
  const std::size_t n = std::max(cost.rows, cost.cols);
  auto at = [&](std::size_t r, std::size_t c) -> double {
    if (r >= cost.rows || c >= cost.cols) return big;
    const auto& e = cost(r, c);
    return e ? *e : big;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = row_of[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(n, 0);
  for (std::size_t j = 1; j <= n; ++j) col_of_row[row_of[j] - 1] = j - 1;
  for (std::size_t r = 0; r < cost.rows; ++r) {
    std::size_t c = col_of_row[r];
    if (c >= cost.cols || !cost(r, c)) continue;
    result.pairs.emplace_back(r, c);
    result.total_cost += *cost(r, c);
  }
  return result;
}

double precision_of(std::size_t tp, std::size_t fp) {
  return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double recall_of(std::size_t tp, std::size_t fn) {
  return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double fscore_of(double precision, double recall) {
  return precision + recall == 0 ? 0.0 : 2 * precision * recall / (precision + recall);
}

EvalReport evaluate(const std::vector<SynapticPartnerAnnotation>& predicted,
                    const std::vector<SynapticPartnerAnnotation>& ground_truth, const SegmentationVolume& seg,
                    const MatchingConstraint& c) {
  c.validate();
  CostMatrix cost(predicted.size(), ground_truth.size());
  for (std::size_t p = 0; p < predicted.size(); ++p)
    for (std::size_t g = 0; g < ground_truth.size(); ++g)
      if (feasible(predicted[p], ground_truth[g], seg, c)) cost(p, g) = matching_cost(predicted[p], ground_truth[g]);

  Assignment a = hungarian_assign(cost);
  EvalReport rep;
  for (auto [p, g] : a.pairs) rep.matches.push_back({predicted[p].id, ground_truth[g].id, *cost(p, g)});
  rep.tp = rep.matches.size();
  rep.fp = predicted.size() - rep.tp;
  rep.fn = ground_truth.size() - rep.tp;
  rep.precision = precision_of(rep.tp, rep.fp);
  rep.recall = recall_of(rep.tp, rep.fn);
  rep.fscore = fscore_of(rep.precision, rep.recall);
  return rep;
}

EvalSummary aggregate_reports(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw ValidationError("cannot aggregate an empty list of reports");
  EvalSummary s;
  s.reports = reports.size();
  for (const auto& r : reports) {
    s.mean_fscore += r.fscore;
    s.mean_precision += r.precision;
    s.mean_recall += r.recall;
    s.total_tp += r.tp;
    s.total_fp += r.fp;
    s.total_fn += r.fn;
  }
  const auto n = static_cast<double>(reports.size());
  s.mean_fscore /= n;
  s.mean_precision /= n;
  s.mean_recall /= n;
  s.mean_fp = static_cast<double>(s.total_fp) / n;
  s.mean_fn = static_cast<double>(s.total_fn) / n;
  return s;
}

}  // namespace synpart

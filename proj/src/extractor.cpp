#include "synpart/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "synpart/errors.hpp"
#include "synpart/parallel.hpp"

namespace synpart {

void ExtractionParams::validate() const {
  if (!(t1 >= 0 && t1 <= 1)) throw ValidationError("t1 must be in [0,1]");
  if (!(t2 >= 0) || !std::isfinite(t2)) throw ValidationError("t2 must be >= 0");
  if (connectivity != Connectivity::six && connectivity != Connectivity::twenty_six)
    throw ValidationError("connectivity must be 6 or 26");
}

std::int64_t edge_target(const Edge& e, const VolumeGeometry& g, const OffsetSet& offsets) {
  Vec3i t = g.unlinear(e.source) + offsets.offsets_vox()[e.offset];
  return g.contains(t) ? g.linear(t) : -1;
}

EdgeGroups threshold_edges(const EdgeScoreVolume& scores, const SegmentationVolume& seg, double t1,
                           unsigned threads) {
  const auto& g = seg.geometry();
  if (!(scores.geometry() == g))
    throw ValidationError("score volume geometry does not match the segmentation geometry");
  const auto& offsets = scores.offsets().offsets_vox();
  const auto n_z = static_cast<std::size_t>(g.shape().z);

  std::vector<EdgeGroups> per_slice(n_z);
  parallel_for(n_z, threads, [&](std::size_t z) {
    auto& groups = per_slice[z];
    for (std::int64_t y = 0; y < g.shape().y; ++y)
      for (std::int64_t x = 0; x < g.shape().x; ++x) {
        Vec3i v{x, y, static_cast<std::int64_t>(z)};
        std::int64_t i = g.linear(v);
        Label src = seg.at_linear(i);
        if (src == kBackground) continue;
        for (std::size_t k = 0; k < offsets.size(); ++k) {
          float s = scores.at(k, i);
          if (!(static_cast<double>(s) >= t1)) continue;
          Vec3i t = v + offsets[k];
          if (!g.contains(t)) continue;
          Label dst = seg.at(t);
          if (dst == kBackground || dst == src) continue;
          groups[{src, dst}].push_back({i, static_cast<std::uint32_t>(k), s});
        }
      }
  });

  EdgeGroups merged;
  for (auto& slice : per_slice)
    for (auto& [pair, edges] : slice) {
      auto& dst = merged[pair];
      dst.insert(dst.end(), edges.begin(), edges.end());
    }
  return merged;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller index as root so roots map to minimum members.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<CandidateSynapse> split_components(SegmentPair pair, const std::vector<Edge>& edges,
                                               const SegmentationVolume& seg, const OffsetSet& offsets,
                                               Connectivity connectivity) {
  const auto& g = seg.geometry();
  std::vector<std::int64_t> target(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    target[e] = edge_target(edges[e], g, offsets);
    if (target[e] < 0) throw ValidationError("edge leaves the volume");
  }
  std::vector<std::int64_t> nodes = target;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto node_of = [&](std::int64_t lin) -> std::ptrdiff_t {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), lin);
    return it != nodes.end() && *it == lin ? it - nodes.begin() : -1;
  };

  DisjointSets sets(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    Vec3i v = g.unlinear(nodes[n]);
    for (std::int64_t dz = -1; dz <= 1; ++dz)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
          int steps = (dx != 0) + (dy != 0) + (dz != 0);
          if (steps == 0 || (connectivity == Connectivity::six && steps > 1)) continue;
          Vec3i w = v + Vec3i{dx, dy, dz};
          if (!g.contains(w)) continue;
          auto m = node_of(g.linear(w));
          if (m >= 0) sets.unite(n, static_cast<std::size_t>(m));
        }
  }

  // Roots are the minimum member index, and nodes are sorted, so iterating
  // roots in node order yields components ordered by canonical id.
  std::vector<std::ptrdiff_t> slot(nodes.size(), -1);
  std::vector<CandidateSynapse> out;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    std::size_t r = sets.find(n);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(out.size());
      CandidateSynapse c;
      c.source_segment = pair.first;
      c.target_segment = pair.second;
      c.component_id = nodes[r];
      out.push_back(std::move(c));
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::size_t r = sets.find(static_cast<std::size_t>(node_of(target[e])));
    out[static_cast<std::size_t>(slot[r])].edges.push_back(edges[e]);
  }
  return out;
}

double confidence(const std::vector<Edge>& edges) {
  double sum = 0;
  for (const auto& e : edges) sum += static_cast<double>(e.score);
  return sum;
}

std::vector<CandidateSynapse> score_and_filter(std::vector<CandidateSynapse> candidates, double t2) {
  std::vector<CandidateSynapse> kept;
  for (auto& c : candidates) {
    c.confidence = confidence(c.edges);
    if (c.confidence > t2) kept.push_back(std::move(c));
  }
  return kept;
}

namespace {

Vec3d snapped_centroid(std::vector<std::int64_t> voxels, const VolumeGeometry& g) {
  std::sort(voxels.begin(), voxels.end());
  voxels.erase(std::unique(voxels.begin(), voxels.end()), voxels.end());
  Vec3d sum;
  for (auto i : voxels) sum = sum + g.world(g.unlinear(i));
  Vec3d centroid = sum * (1.0 / static_cast<double>(voxels.size()));
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_voxel = voxels.front();
  for (auto i : voxels) {
    Vec3d d = g.world(g.unlinear(i)) - centroid;
    double d2 = d.x * d.x + d.y * d.y + d.z * d.z;
    if (d2 < best) {
      best = d2;
      best_voxel = i;
    }
  }
  return g.world(g.unlinear(best_voxel));
}

}  // namespace

std::pair<Vec3d, Vec3d> localize(const CandidateSynapse& c, const VolumeGeometry& g, const OffsetSet& offsets) {
  if (c.edges.empty()) throw ValidationError("cannot localize a candidate without edges");
  std::vector<std::int64_t> sources, targets;
  sources.reserve(c.edges.size());
  targets.reserve(c.edges.size());
  for (const auto& e : c.edges) {
    sources.push_back(e.source);
    targets.push_back(edge_target(e, g, offsets));
  }
  return {snapped_centroid(std::move(sources), g), snapped_centroid(std::move(targets), g)};
}

std::vector<CandidateSynapse> extract(const EdgeScoreVolume& scores, const SegmentationVolume& seg,
                                      const ExtractionParams& params, unsigned threads) {
  params.validate();
  EdgeGroups groups = threshold_edges(scores, seg, params.t1, threads);
  std::vector<const EdgeGroups::value_type*> order;
  order.reserve(groups.size());
  for (const auto& entry : groups) order.push_back(&entry);

  std::vector<std::vector<CandidateSynapse>> per_group(order.size());
  parallel_for(order.size(), threads, [&](std::size_t i) {
    auto candidates = split_components(order[i]->first, order[i]->second, seg, scores.offsets(),
                                       params.connectivity);
    candidates = score_and_filter(std::move(candidates), params.t2);
    for (auto& c : candidates) std::tie(c.pre_location, c.post_location) =
        localize(c, seg.geometry(), scores.offsets());
    per_group[i] = std::move(candidates);
  });

  std::vector<CandidateSynapse> out;
  for (auto& g : per_group)
    for (auto& c : g) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](const CandidateSynapse& a, const CandidateSynapse& b) {
    if (a.source_segment != b.source_segment) return a.source_segment < b.source_segment;
    if (a.target_segment != b.target_segment) return a.target_segment < b.target_segment;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.component_id < b.component_id;
  });
  return out;
}

}  // namespace synpart

#include <istream>
#include <sstream>

#include "synpart/text_format.hpp"

namespace synpart {

PartnerRecord to_record(const CandidateSynapse& c) {
  return {c.pre_location, c.post_location, c.source_segment, c.target_segment, c.confidence, c.edges.size()};
}

std::vector<SynapticPartnerAnnotation> to_annotations(const std::vector<PartnerRecord>& records) {
  std::vector<SynapticPartnerAnnotation> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    out.push_back({static_cast<std::uint64_t>(i), records[i].pre_location, records[i].post_location});
  return out;
}

std::vector<SynapticPartnerAnnotation> to_annotations(const std::vector<CandidateSynapse>& candidates) {
  std::vector<PartnerRecord> records;
  records.reserve(candidates.size());
  for (const auto& c : candidates) records.push_back(to_record(c));
  return to_annotations(records);
}

std::string format_partner_tsv(const std::vector<PartnerRecord>& records, const std::string& header_comment) {
  std::ostringstream os;
  std::istringstream comments(header_comment);
  for (std::string line; std::getline(comments, line);) os << "# " << line << '\n';
  os << "# pre_x\tpre_y\tpre_z\tpost_x\tpost_y\tpost_z\tpre_seg\tpost_seg\tconfidence\tn_edges\n";
  for (const auto& r : records) {
    os << format_double(r.pre_location.x) << '\t' << format_double(r.pre_location.y) << '\t'
       << format_double(r.pre_location.z) << '\t' << format_double(r.post_location.x) << '\t'
       << format_double(r.post_location.y) << '\t' << format_double(r.post_location.z) << '\t' << r.pre_segment
       << '\t' << r.post_segment << '\t' << format_double(r.confidence) << '\t' << r.n_edges << '\n';
  }
  return os.str();
}

std::vector<PartnerRecord> read_partner_tsv(std::istream& in) {
  std::vector<PartnerRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto f = split_fields(line, "\t ");
    if (f.empty() || f[0][0] == '#') continue;
    const std::string what = "partner line " + std::to_string(lineno);
    if (f.size() != 10) throw FormatError(what + ": expected 10 fields, got " + std::to_string(f.size()));
    PartnerRecord r;
    r.pre_location = {parse_double(f[0], what), parse_double(f[1], what), parse_double(f[2], what)};
    r.post_location = {parse_double(f[3], what), parse_double(f[4], what), parse_double(f[5], what)};
    r.pre_segment = static_cast<Label>(parse_int(f[6], what));
    r.post_segment = static_cast<Label>(parse_int(f[7], what));
    r.confidence = parse_double(f[8], what);
    r.n_edges = static_cast<std::size_t>(parse_int(f[9], what));
    out.push_back(r);
  }
  return out;
}

}  // namespace synpart

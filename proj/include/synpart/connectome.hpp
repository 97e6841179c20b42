#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synpart/annotations.hpp"
#include "synpart/volume.hpp"

namespace synpart {

/// Neuron-by-neuron synapse counts; rows are presynaptic, columns
/// postsynaptic. Stored sparsely; absent entries are zero.
struct ConnectivityMatrix {
  std::vector<Label> row_labels;
  std::vector<Label> col_labels;
  std::map<std::pair<Label, Label>, std::int64_t> entries;
  /// Ids of partners whose pre or post location lies on background.
  std::vector<std::uint64_t> rejects;

  std::int64_t at(Label pre, Label post) const;
  std::int64_t total() const;

  friend bool operator==(const ConnectivityMatrix&, const ConnectivityMatrix&) = default;
};

/// Counts directed (seg(pre), seg(post)) pairs. Without `neuron_ids` the row
/// and column labels are every segment seen, ascending; with them, partners
/// outside the list are skipped.
ConnectivityMatrix build_matrix(const std::vector<SynapticPartnerAnnotation>& partners,
                                const SegmentationVolume& seg,
                                const std::optional<std::vector<Label>>& neuron_ids = std::nullopt);

/// Entrywise pred - gt over the union of both label sets. The result may
/// hold negative entries (missed synapses) and carries no rejects.
ConnectivityMatrix diff_matrix(const ConnectivityMatrix& pred, const ConnectivityMatrix& gt);

/// Dense CSV: first row `pre\post,<col ids...>`, then one row per row label.
/// `header_comment` lines are emitted first, each prefixed with "# ".
std::string format_matrix_csv(const ConnectivityMatrix& m, const std::string& header_comment = {});
ConnectivityMatrix read_matrix_csv(std::istream& in);
ConnectivityMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace synpart

#include "synpart/connectome.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "synpart/errors.hpp"
#include "synpart/text_format.hpp"

namespace synpart {

std::int64_t ConnectivityMatrix::at(Label pre, Label post) const {
  auto it = entries.find({pre, post});
  return it == entries.end() ? 0 : it->second;
}

std::int64_t ConnectivityMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& [key, count] : entries) t += count;
  return t;
}

ConnectivityMatrix build_matrix(const std::vector<SynapticPartnerAnnotation>& partners,
                                const SegmentationVolume& seg, const std::optional<std::vector<Label>>& neuron_ids) {
  ConnectivityMatrix m;
  std::set<Label> seen;
  std::set<Label> allowed;
  if (neuron_ids) allowed.insert(neuron_ids->begin(), neuron_ids->end());
  for (const auto& p : partners) {
    Label pre = seg.at_point(p.pre_location);
    Label post = seg.at_point(p.post_location);
    if (pre == kBackground || post == kBackground) {
      m.rejects.push_back(p.id);
      continue;
    }
    if (neuron_ids && (!allowed.count(pre) || !allowed.count(post))) continue;
    seen.insert(pre);
    seen.insert(post);
    ++m.entries[{pre, post}];
  }
  if (neuron_ids) {
    m.row_labels = *neuron_ids;
  } else {
    m.row_labels.assign(seen.begin(), seen.end());
  }
  m.col_labels = m.row_labels;
  return m;
}

ConnectivityMatrix diff_matrix(const ConnectivityMatrix& pred, const ConnectivityMatrix& gt) {
  std::set<Label> rows(pred.row_labels.begin(), pred.row_labels.end());
  rows.insert(gt.row_labels.begin(), gt.row_labels.end());
  std::set<Label> cols(pred.col_labels.begin(), pred.col_labels.end());
  cols.insert(gt.col_labels.begin(), gt.col_labels.end());
  ConnectivityMatrix d;
  d.row_labels.assign(rows.begin(), rows.end());
  d.col_labels.assign(cols.begin(), cols.end());
  for (const auto& [key, count] : pred.entries) d.entries[key] += count;
  for (const auto& [key, count] : gt.entries) d.entries[key] -= count;
  std::erase_if(d.entries, [](const auto& e) { return e.second == 0; });
  return d;
}

std::string format_matrix_csv(const ConnectivityMatrix& m, const std::string& header_comment) {
  std::ostringstream os;
  std::istringstream comments(header_comment);
  for (std::string line; std::getline(comments, line);) os << "# " << line << '\n';
  os << "pre\\post";
  for (Label c : m.col_labels) os << ',' << c;
  os << '\n';
  for (Label r : m.row_labels) {
    os << r;
    for (Label c : m.col_labels) os << ',' << m.at(r, c);
    os << '\n';
  }
  return os.str();
}

ConnectivityMatrix read_matrix_csv(std::istream& in) {
  ConnectivityMatrix m;
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    const std::string what = "matrix CSV line " + std::to_string(lineno);
    if (header) {
      for (std::size_t i = 1; i < f.size(); ++i)
        m.col_labels.push_back(static_cast<Label>(parse_int(f[i], what)));
      header = false;
      continue;
    }
    if (f.size() != m.col_labels.size() + 1)
      throw FormatError(what + ": expected " + std::to_string(m.col_labels.size() + 1) + " cells");
    Label r = static_cast<Label>(parse_int(f[0], what));
    m.row_labels.push_back(r);
    for (std::size_t i = 1; i < f.size(); ++i) {
      long long v = parse_int(f[i], what);
      if (v != 0) m.entries[{r, m.col_labels[i - 1]}] = v;
    }
  }
  if (header) throw FormatError("matrix CSV has no header row");
  return m;
}

ConnectivityMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix CSV '" + path.string() + "'");
  try {
    return read_matrix_csv(in);
  } catch (const ValidationError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace synpart

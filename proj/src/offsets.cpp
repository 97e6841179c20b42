#include "synpart/offsets.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>

#include "synpart/errors.hpp"
#include "synpart/text_format.hpp"

namespace synpart {

OffsetSet::OffsetSet(std::vector<Vec3d> offsets_nm, double r_syn_nm, Vec3d resolution)
    : offsets_nm_(std::move(offsets_nm)), r_syn_nm_(r_syn_nm), resolution_(resolution) {
  if (!(r_syn_nm >= 0) || !std::isfinite(r_syn_nm)) throw ValidationError("r_syn_nm must be >= 0");
  for (int a = 0; a < 3; ++a)
    if (!(resolution[a] > 0)) throw ValidationError("offset resolution must be > 0 on every axis");
  std::set<Vec3i> seen_vox;
  std::set<std::tuple<double, double, double>> seen_nm;
  offsets_vox_.reserve(offsets_nm_.size());
  for (const auto& r : offsets_nm_) {
    Vec3i v;
    for (int a = 0; a < 3; ++a) v[a] = static_cast<std::int64_t>(std::round(r[a] / resolution[a]));
    if (v.is_zero())
      throw ValidationError("offset " + to_string(r) + " nm rounds to the zero voxel offset at resolution " +
                            to_string(resolution));
    if (!seen_nm.insert({r.x, r.y, r.z}).second) throw ValidationError("duplicate offset " + to_string(r) + " nm");
    if (!seen_vox.insert(v).second)
      throw ValidationError("offset " + to_string(r) + " nm duplicates voxel offset " + to_string(v));
    offsets_vox_.push_back(v);
  }
}

double OffsetSet::max_length_nm() const {
  double m = 0;
  for (const auto& r : offsets_nm_) m = std::max(m, r.norm());
  return m;
}

double OffsetSet::total_length_nm() const {
  double s = 0;
  for (const auto& r : offsets_nm_) s += r.norm();
  return s;
}

OffsetSet paper_offset_set(const VolumeGeometry& geometry) {
  std::vector<Vec3d> r = {{0, 0, 80}, {0, 0, -80}, {120, 0, 0}, {-120, 0, 0}, {0, 120, 0}, {0, -120, 0}};
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0})
      for (double sz : {1.0, -1.0}) r.push_back({40 * sx, 60 * sy, 40 * sz});
  return OffsetSet(std::move(r), 100.0, geometry.resolution());
}

OffsetSet read_offset_config(std::istream& in) {
  std::optional<double> r_syn;
  std::optional<Vec3d> resolution;
  std::vector<Vec3d> offsets;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::string what = "offset config line " + std::to_string(lineno);
    auto eq = line.find('=');
    if (eq != std::string::npos) {
      auto key = split_fields(line.substr(0, eq));
      std::string value = line.substr(eq + 1);
      if (key.size() != 1) throw FormatError(what + ": malformed header");
      if (key[0] == "r_syn_nm")
        r_syn = parse_double(split_fields(value).at(0), what);
      else if (key[0] == "resolution")
        resolution = parse_vec3d(value, what);
      continue;
    }
    auto f = split_fields(line, " \t,");
    if (f.size() != 3) throw FormatError(what + ": expected `x_nm y_nm z_nm`");
    offsets.push_back({parse_double(f[0], what), parse_double(f[1], what), parse_double(f[2], what)});
  }
  if (!r_syn) throw FormatError("offset config lacks an r_syn_nm= header");
  if (!resolution) throw FormatError("offset config lacks a resolution= header");
  return OffsetSet(std::move(offsets), *r_syn, *resolution);
}

OffsetSet read_offset_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open offset config '" + path.string() + "'");
  return read_offset_config(in);
}

std::string format_offset_config(const OffsetSet& offsets, const std::string& extra_header) {
  std::ostringstream os;
  if (!extra_header.empty()) {
    os << extra_header;
    if (extra_header.back() != '\n') os << '\n';
  }
  os << "r_syn_nm=" << format_double(offsets.r_syn_nm()) << '\n';
  os << "resolution=" << format_vec3d(offsets.resolution()) << '\n';
  for (const auto& r : offsets.offsets_nm())
    os << format_double(r.x) << ' ' << format_double(r.y) << ' ' << format_double(r.z) << '\n';
  return os.str();
}

}  // namespace synpart

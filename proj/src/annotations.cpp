#include "synpart/annotations.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "synpart/errors.hpp"
#include "synpart/text_format.hpp"

namespace synpart {

void PointAnnotationSet::validate() const {
  std::set<std::uint64_t> seen;
  for (const auto& a : annotations) {
    if (!seen.insert(a.id).second)
      throw ValidationError("duplicate annotation id " + std::to_string(a.id));
    if (a.pre_location == a.post_location)
      throw ValidationError("annotation " + std::to_string(a.id) + " has identical pre and post locations");
    if (!geometry.contains_point(a.pre_location))
      throw ValidationError("annotation " + std::to_string(a.id) + ": pre location " +
                            to_string(a.pre_location) + " lies outside the volume");
    if (!geometry.contains_point(a.post_location))
      throw ValidationError("annotation " + std::to_string(a.id) + ": post location " +
                            to_string(a.post_location) + " lies outside the volume");
  }
}

std::vector<SynapticPartnerAnnotation> read_annotation_text(std::istream& in) {
  std::vector<SynapticPartnerAnnotation> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto f = split_fields(line, "\t ");
    if (f.empty() || f[0][0] == '#') continue;
    if (f.size() != 7)
      throw FormatError("annotation line " + std::to_string(lineno) + ": expected 7 fields, got " +
                        std::to_string(f.size()));
    const std::string what = "annotation line " + std::to_string(lineno);
    long long id = parse_int(f[0], what);
    if (id < 0) throw FormatError(what + ": negative id");
    SynapticPartnerAnnotation a;
    a.id = static_cast<std::uint64_t>(id);
    a.pre_location = {parse_double(f[1], what), parse_double(f[2], what), parse_double(f[3], what)};
    a.post_location = {parse_double(f[4], what), parse_double(f[5], what), parse_double(f[6], what)};
    out.push_back(a);
  }
  return out;
}

std::vector<SynapticPartnerAnnotation> read_annotation_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open annotation file '" + path.string() + "'");
  try {
    return read_annotation_text(in);
  } catch (const ValidationError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_annotation_text(std::ostream& out, const std::vector<SynapticPartnerAnnotation>& annotations) {
  for (const auto& a : annotations) {
    out << a.id << '\t' << format_double(a.pre_location.x) << '\t' << format_double(a.pre_location.y)
        << '\t' << format_double(a.pre_location.z) << '\t' << format_double(a.post_location.x) << '\t'
        << format_double(a.post_location.y) << '\t' << format_double(a.post_location.z) << '\n';
  }
}

}  // namespace synpart

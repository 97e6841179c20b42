#include "synpart/text_format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "synpart/errors.hpp"

namespace synpart {

std::string format_double(double v) {
  char buf[64];
  if (v == 0) v = 0.0;  // no "-0" in output
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  double v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ValidationError(std::string(what) + ": cannot parse '" + std::string(text) + "' as a number");
  return v;
}

long long parse_int(std::string_view text, std::string_view what) {
  long long v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ValidationError(std::string(what) + ": cannot parse '" + std::string(text) + "' as an integer");
  return v;
}

std::vector<std::string> split_fields(std::string_view line, std::string_view delims) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t j = line.find_first_of(delims, i);
    if (j == std::string_view::npos) j = line.size();
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

Vec3d parse_vec3d(std::string_view text, std::string_view what) {
  auto f = split_fields(text, ", \t");
  if (f.size() != 3) throw ValidationError(std::string(what) + " must be a triple x,y,z");
  return {parse_double(f[0], what), parse_double(f[1], what), parse_double(f[2], what)};
}

Vec3i parse_vec3i(std::string_view text, std::string_view what) {
  auto f = split_fields(text, ", \t");
  if (f.size() != 3) throw ValidationError(std::string(what) + " must be a triple x,y,z");
  return {parse_int(f[0], what), parse_int(f[1], what), parse_int(f[2], what)};
}

std::string format_vec3d(Vec3d v) {
  return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  return tmp;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace synpart

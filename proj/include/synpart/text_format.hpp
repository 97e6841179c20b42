#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "synpart/geometry.hpp"

namespace synpart {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

/// Splits on any of the delimiter characters, dropping empty fields.
std::vector<std::string> split_fields(std::string_view line, std::string_view delims = " \t");

/// "x,y,z" triples.
Vec3d parse_vec3d(std::string_view text, std::string_view what);
Vec3i parse_vec3i(std::string_view text, std::string_view what);
std::string format_vec3d(Vec3d v);

/// Writes `contents` to a temporary sibling of `path` and renames it into
/// place. Throws IoError on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

/// Temporary sibling name used by write_file_atomic and HDF5 writers.
std::filesystem::path temp_sibling(const std::filesystem::path& path);

}  // namespace synpart

#include "synpart/container.hpp"

#include <hdf5.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "synpart/errors.hpp"
#include "synpart/extractor.hpp"
#include "synpart/text_format.hpp"

namespace synpart {

namespace {

// The serial HDF5 build is not thread-safe.
std::recursive_mutex& hdf5_mutex() {
  static std::recursive_mutex m;
  return m;
}

void silence_hdf5() {
  static std::once_flag once;
  std::call_once(once, [] { H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr); });
}

class Handle {
 public:
  using Closer = herr_t (*)(hid_t);
  Handle() = default;
  Handle(hid_t id, Closer close) : id_(id), close_(close) {}
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : id_(o.id_), close_(o.close_) { o.id_ = -1; }
  Handle& operator=(Handle&& o) noexcept {
    std::swap(id_, o.id_);
    std::swap(close_, o.close_);
    return *this;
  }
  ~Handle() {
    if (id_ >= 0 && close_) close_(id_);
  }
  hid_t get() const { return id_; }
  bool valid() const { return id_ >= 0; }

 private:
  hid_t id_ = -1;
  Closer close_ = nullptr;
};

void check(herr_t status, const std::string& what) {
  if (status < 0) throw IoError("HDF5 error: " + what);
}

hid_t checked(hid_t id, const std::string& what) {
  if (id < 0) throw IoError("HDF5 error: " + what);
  return id;
}

bool path_exists(hid_t file, const std::string& path) {
  // Walk component by component; H5Lexists fails on missing intermediates.
  std::string prefix;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '/');) {
    prefix += (prefix.empty() ? "" : "/") + part;
    if (H5Lexists(file, prefix.c_str(), H5P_DEFAULT) <= 0) return false;
  }
  return true;
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : path_(path), tmp_(temp_sibling(path)) {
    silence_hdf5();
    Handle fcpl(checked(H5Pcreate(H5P_FILE_CREATE), "file property list"), H5Pclose);
    check(H5Pset_obj_track_times(fcpl.get(), false), "disable timestamps");
    file_ = Handle(H5Fcreate(tmp_.c_str(), H5F_ACC_TRUNC, fcpl.get(), H5P_DEFAULT), H5Fclose);
    if (!file_.valid()) throw IoError("cannot create HDF5 file '" + tmp_.string() + "'");
    lcpl_ = Handle(checked(H5Pcreate(H5P_LINK_CREATE), "link property list"), H5Pclose);
    check(H5Pset_create_intermediate_group(lcpl_.get(), 1), "intermediate groups");
    gcpl_ = Handle(checked(H5Pcreate(H5P_GROUP_CREATE), "group property list"), H5Pclose);
    check(H5Pset_obj_track_times(gcpl_.get(), false), "disable timestamps");
    dcpl_ = Handle(checked(H5Pcreate(H5P_DATASET_CREATE), "dataset property list"), H5Pclose);
    check(H5Pset_obj_track_times(dcpl_.get(), false), "disable timestamps");
  }
  ~Writer() {
    if (!committed_) {
      file_ = Handle();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

  hid_t file() const { return file_.get(); }

  Handle group(const std::string& path) {
    if (path_exists(file_.get(), path)) return Handle(checked(H5Gopen2(file_.get(), path.c_str(), H5P_DEFAULT), path), H5Gclose);
    return Handle(checked(H5Gcreate2(file_.get(), path.c_str(), lcpl_.get(), gcpl_.get(), H5P_DEFAULT), path),
                  H5Gclose);
  }

  Handle dataset(const std::string& path, hid_t file_type, hid_t mem_type, const std::vector<hsize_t>& dims,
                 const void* data) {
    // Create parents explicitly so they also get the timestamp-free gcpl.
    auto slash = path.rfind('/');
    if (slash != std::string::npos) group(path.substr(0, slash));
    Handle space(checked(H5Screate_simple(static_cast<int>(dims.size()), dims.data(), nullptr), path), H5Sclose);
    Handle ds(checked(H5Dcreate2(file_.get(), path.c_str(), file_type, space.get(), lcpl_.get(), dcpl_.get(),
                                 H5P_DEFAULT),
                      "create " + path),
              H5Dclose);
    check(H5Dwrite(ds.get(), mem_type, H5S_ALL, H5S_ALL, H5P_DEFAULT, data), "write " + path);
    return ds;
  }

  void commit() {
    check(H5Fflush(file_.get(), H5F_SCOPE_GLOBAL), "flush");
    file_ = Handle();
    std::error_code ec;
    std::filesystem::rename(tmp_, path_, ec);
    if (ec) throw IoError("cannot move output into place at '" + path_.string() + "'");
    committed_ = true;
  }

 private:
  std::filesystem::path path_, tmp_;
  Handle file_, lcpl_, gcpl_, dcpl_;
  bool committed_ = false;
};

void write_attr_doubles(hid_t obj, const char* name, const std::vector<double>& values,
                        const std::vector<hsize_t>& dims) {
  Handle space(checked(H5Screate_simple(static_cast<int>(dims.size()), dims.data(), nullptr), name), H5Sclose);
  Handle attr(checked(H5Acreate2(obj, name, H5T_IEEE_F64LE, space.get(), H5P_DEFAULT, H5P_DEFAULT), name),
              H5Aclose);
  check(H5Awrite(attr.get(), H5T_NATIVE_DOUBLE, values.data()), name);
}

void write_attr_triple(hid_t obj, const char* name, Vec3d xyz) {
  write_attr_doubles(obj, name, {xyz.z, xyz.y, xyz.x}, {3});
}

void write_attr_scalar(hid_t obj, const char* name, double v) {
  Handle space(checked(H5Screate(H5S_SCALAR), name), H5Sclose);
  Handle attr(checked(H5Acreate2(obj, name, H5T_IEEE_F64LE, space.get(), H5P_DEFAULT, H5P_DEFAULT), name),
              H5Aclose);
  check(H5Awrite(attr.get(), H5T_NATIVE_DOUBLE, &v), name);
}

void write_attr_string(hid_t obj, const char* name, const std::string& value) {
  Handle type(checked(H5Tcopy(H5T_C_S1), name), H5Tclose);
  check(H5Tset_size(type.get(), std::max<std::size_t>(1, value.size())), name);
  check(H5Tset_strpad(type.get(), H5T_STR_NULLPAD), name);
  Handle space(checked(H5Screate(H5S_SCALAR), name), H5Sclose);
  Handle attr(checked(H5Acreate2(obj, name, type.get(), space.get(), H5P_DEFAULT, H5P_DEFAULT), name), H5Aclose);
  std::string buf = value.empty() ? std::string(1, '\0') : value;
  check(H5Awrite(attr.get(), type.get(), buf.data()), name);
}

void write_geometry_attrs(hid_t obj, const VolumeGeometry& g) {
  write_attr_triple(obj, "resolution", g.resolution());
  write_attr_triple(obj, "offset", g.origin());
}

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path) {
    silence_hdf5();
    if (!std::filesystem::exists(path)) throw IoError("file not found: '" + path.string() + "'");
    if (H5Fis_hdf5(path.c_str()) <= 0) throw IoError("not an HDF5 file: '" + path.string() + "'");
    file_ = Handle(H5Fopen(path.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT), H5Fclose);
    if (!file_.valid()) throw IoError("cannot open HDF5 file '" + path.string() + "'");
  }

  hid_t file() const { return file_.get(); }
  bool has(const std::string& p) const { return path_exists(file_.get(), p); }

  Handle open_dataset(const std::string& p) const {
    if (!has(p)) throw FormatError("missing dataset '" + p + "' in '" + path_.string() + "'");
    return Handle(checked(H5Dopen2(file_.get(), p.c_str(), H5P_DEFAULT), "open " + p), H5Dclose);
  }

  std::vector<hsize_t> dims(hid_t ds) const {
    Handle space(checked(H5Dget_space(ds), "dataspace"), H5Sclose);
    int rank = H5Sget_simple_extent_ndims(space.get());
    std::vector<hsize_t> d(static_cast<std::size_t>(std::max(rank, 0)));
    H5Sget_simple_extent_dims(space.get(), d.data(), nullptr);
    return d;
  }

  template <class T>
  std::vector<T> read(const std::string& p, hid_t mem_type, std::vector<hsize_t>& out_dims) const {
    Handle ds = open_dataset(p);
    out_dims = dims(ds.get());
    std::size_t n = 1;
    for (auto d : out_dims) n *= d;
    std::vector<T> data(n);
    if (n > 0) check(H5Dread(ds.get(), mem_type, H5S_ALL, H5S_ALL, H5P_DEFAULT, data.data()), "read " + p);
    return data;
  }

  std::vector<std::string> read_strings(const std::string& p) const {
    Handle ds = open_dataset(p);
    auto d = dims(ds.get());
    if (d.size() != 1) throw FormatError("dataset '" + p + "' must be one-dimensional");
    Handle ftype(checked(H5Dget_type(ds.get()), p), H5Tclose);
    if (H5Tget_class(ftype.get()) != H5T_STRING) throw FormatError("dataset '" + p + "' must hold strings");
    std::vector<std::string> out(d[0]);
    if (d[0] == 0) return out;
    if (H5Tis_variable_str(ftype.get()) > 0) {
      Handle mtype(checked(H5Tcopy(H5T_C_S1), p), H5Tclose);
      check(H5Tset_size(mtype.get(), H5T_VARIABLE), p);
      std::vector<char*> ptrs(d[0], nullptr);
      check(H5Dread(ds.get(), mtype.get(), H5S_ALL, H5S_ALL, H5P_DEFAULT, ptrs.data()), "read " + p);
      for (std::size_t i = 0; i < ptrs.size(); ++i) out[i] = ptrs[i] ? ptrs[i] : "";
      Handle space(checked(H5Dget_space(ds.get()), p), H5Sclose);
      H5Dvlen_reclaim(mtype.get(), space.get(), H5P_DEFAULT, ptrs.data());
    } else {
      std::size_t size = H5Tget_size(ftype.get());
      Handle mtype(checked(H5Tcopy(H5T_C_S1), p), H5Tclose);
      check(H5Tset_size(mtype.get(), size), p);
      check(H5Tset_strpad(mtype.get(), H5T_STR_NULLPAD), p);
      std::vector<char> buf(size * d[0]);
      check(H5Dread(ds.get(), mtype.get(), H5S_ALL, H5S_ALL, H5P_DEFAULT, buf.data()), "read " + p);
      for (std::size_t i = 0; i < d[0]; ++i) {
        const char* s = buf.data() + i * size;
        out[i] = std::string(s, strnlen(s, size));
      }
    }
    return out;
  }

  std::optional<std::vector<double>> attr_doubles(const std::string& obj, const char* name) const {
    if (!obj.empty() && !has(obj)) return std::nullopt;
    const char* o = obj.empty() ? "/" : obj.c_str();
    if (H5Aexists_by_name(file_.get(), o, name, H5P_DEFAULT) <= 0) return std::nullopt;
    Handle attr(checked(H5Aopen_by_name(file_.get(), o, name, H5P_DEFAULT, H5P_DEFAULT), name), H5Aclose);
    Handle space(checked(H5Aget_space(attr.get()), name), H5Sclose);
    auto n = H5Sget_simple_extent_npoints(space.get());
    std::vector<double> v(static_cast<std::size_t>(std::max<hssize_t>(n, 0)));
    check(H5Aread(attr.get(), H5T_NATIVE_DOUBLE, v.data()), name);
    return v;
  }

  std::optional<Vec3d> attr_triple(const std::string& obj, const char* name) const {
    auto v = attr_doubles(obj, name);
    if (!v) return std::nullopt;
    if (v->size() != 3) throw FormatError(obj + ": attribute '" + name + "' must hold 3 values");
    return Vec3d{(*v)[2], (*v)[1], (*v)[0]};
  }

  std::string attr_string(const char* name) const {
    if (H5Aexists_by_name(file_.get(), "/", name, H5P_DEFAULT) <= 0) return {};
    Handle attr(checked(H5Aopen_by_name(file_.get(), "/", name, H5P_DEFAULT, H5P_DEFAULT), name), H5Aclose);
    Handle ftype(checked(H5Aget_type(attr.get()), name), H5Tclose);
    if (H5Tget_class(ftype.get()) != H5T_STRING) return {};
    if (H5Tis_variable_str(ftype.get()) > 0) {
      Handle mtype(checked(H5Tcopy(H5T_C_S1), name), H5Tclose);
      check(H5Tset_size(mtype.get(), H5T_VARIABLE), name);
      char* p = nullptr;
      check(H5Aread(attr.get(), mtype.get(), &p), name);
      std::string s = p ? p : "";
      H5free_memory(p);
      return s;
    }
    std::size_t size = H5Tget_size(ftype.get());
    std::vector<char> buf(size + 1, '\0');
    check(H5Aread(attr.get(), ftype.get(), buf.data()), name);
    return std::string(buf.data(), strnlen(buf.data(), size));
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  Handle file_;
};

VolumeGeometry geometry_for(const Reader& r, const std::string& dataset, const std::vector<hsize_t>& zyx) {
  Vec3d res = r.attr_triple(dataset, "resolution").value_or(Vec3d{1, 1, 1});
  Vec3d origin = r.attr_triple(dataset, "offset").value_or(Vec3d{});
  try {
    return VolumeGeometry({static_cast<std::int64_t>(zyx[2]), static_cast<std::int64_t>(zyx[1]),
                           static_cast<std::int64_t>(zyx[0])},
                          res, origin);
  } catch (const ValidationError& e) {
    throw FormatError(r.path().string() + ": " + dataset + ": " + e.what());
  }
}

SegmentationVolume read_segmentation(const Reader& r) {
  std::vector<hsize_t> d;
  auto labels = r.read<Label>(kNeuronIdsPath, H5T_NATIVE_UINT64, d);
  if (d.size() != 3) throw FormatError(std::string(kNeuronIdsPath) + " must be three-dimensional");
  return SegmentationVolume(geometry_for(r, kNeuronIdsPath, d), std::move(labels));
}

std::optional<RawVolume> read_raw(const Reader& r) {
  if (!r.has(kRawPath)) return std::nullopt;
  std::vector<hsize_t> d;
  auto voxels = r.read<std::uint8_t>(kRawPath, H5T_NATIVE_UINT8, d);
  if (d.size() != 3) throw FormatError(std::string(kRawPath) + " must be three-dimensional");
  return RawVolume{geometry_for(r, kRawPath, d), std::move(voxels)};
}

PointAnnotationSet read_annotations(const Reader& r, const VolumeGeometry& geometry) {
  PointAnnotationSet set;
  set.geometry = geometry;
  std::vector<hsize_t> d_ids, d_loc, d_partners;
  auto ids = r.read<std::uint64_t>("annotations/ids", H5T_NATIVE_UINT64, d_ids);
  auto types = r.read_strings("annotations/types");
  auto loc = r.read<double>("annotations/locations", H5T_NATIVE_DOUBLE, d_loc);
  auto partners = r.read<std::uint64_t>("annotations/presynaptic_site/partners", H5T_NATIVE_UINT64, d_partners);
  if (types.size() != ids.size()) throw FormatError("annotations/types and annotations/ids differ in length");
  if (d_loc.size() != 2 || d_loc[1] != 3 || d_loc[0] != ids.size())
    throw FormatError("annotations/locations must have shape [n_ids, 3]");
  if (!partners.empty() && (d_partners.size() != 2 || d_partners[1] != 2))
    throw FormatError("annotations/presynaptic_site/partners must have shape [m, 2]");
  std::vector<std::uint64_t> partner_ids;
  if (r.has("annotations/presynaptic_site/partner_ids")) {
    std::vector<hsize_t> d;
    partner_ids = r.read<std::uint64_t>("annotations/presynaptic_site/partner_ids", H5T_NATIVE_UINT64, d);
    if (partner_ids.size() * 2 != partners.size())
      throw FormatError("annotations/presynaptic_site/partner_ids does not match the partner table");
  }
  Vec3d ann_offset = r.attr_triple("annotations", "offset").value_or(Vec3d{});

  struct Site {
    std::string type;
    Vec3d location;
  };
  std::map<std::uint64_t, Site> sites;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Vec3d p{loc[i * 3 + 2], loc[i * 3 + 1], loc[i * 3 + 0]};
    sites[ids[i]] = {types[i], p + ann_offset};
  }
  auto site = [&](std::uint64_t id, const char* expected, std::size_t row) -> const Site& {
    auto it = sites.find(id);
    if (it == sites.end())
      throw FormatError("partner row " + std::to_string(row) + " references unknown annotation id " +
                        std::to_string(id));
    if (it->second.type != expected)
      throw FormatError("annotation id " + std::to_string(id) + " has type '" + it->second.type + "', expected '" +
                        expected + "'");
    return it->second;
  };
  for (std::size_t row = 0; row < partners.size() / 2; ++row) {
    const Site& pre = site(partners[row * 2], "presynaptic_site", row);
    const Site& post = site(partners[row * 2 + 1], "postsynaptic_site", row);
    std::uint64_t id = partner_ids.empty() ? row : partner_ids[row];
    set.annotations.push_back({id, pre.location, post.location});
  }
  try {
    set.validate();
  } catch (const ValidationError& e) {
    throw FormatError(r.path().string() + ": " + e.what());
  }
  return set;
}

void write_annotations(Writer& w, const PointAnnotationSet& set) {
  const auto n = set.annotations.size();
  std::vector<std::uint64_t> ids, partners, partner_ids;
  std::vector<double> loc;
  std::vector<std::string> types;
  const Vec3d origin = set.geometry.origin();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = set.annotations[i];
    ids.push_back(2 * i);
    ids.push_back(2 * i + 1);
    types.emplace_back("presynaptic_site");
    types.emplace_back("postsynaptic_site");
    for (Vec3d p : {a.pre_location - origin, a.post_location - origin}) {
      loc.push_back(p.z);
      loc.push_back(p.y);
      loc.push_back(p.x);
    }
    partners.push_back(2 * i);
    partners.push_back(2 * i + 1);
    partner_ids.push_back(a.id);
  }
  Handle group = w.group("annotations");
  write_attr_triple(group.get(), "offset", origin);
  write_attr_triple(group.get(), "resolution", set.geometry.resolution());
  Vec3i s = set.geometry.shape();
  write_attr_doubles(group.get(), "shape",
                     {static_cast<double>(s.z), static_cast<double>(s.y), static_cast<double>(s.x)}, {3});
  w.dataset("annotations/ids", H5T_STD_U64LE, H5T_NATIVE_UINT64, {ids.size()}, ids.data());

  const std::size_t width = 17;  // strlen("postsynaptic_site")
  std::vector<char> buf(types.size() * width, '\0');
  for (std::size_t i = 0; i < types.size(); ++i) std::memcpy(buf.data() + i * width, types[i].data(), types[i].size());
  Handle stype(checked(H5Tcopy(H5T_C_S1), "string type"), H5Tclose);
  check(H5Tset_size(stype.get(), width), "string type");
  check(H5Tset_strpad(stype.get(), H5T_STR_NULLPAD), "string type");
  w.dataset("annotations/types", stype.get(), stype.get(), {types.size()}, buf.data());
  w.dataset("annotations/locations", H5T_IEEE_F64LE, H5T_NATIVE_DOUBLE, {2 * n, 3}, loc.data());
  w.dataset("annotations/presynaptic_site/partners", H5T_STD_U64LE, H5T_NATIVE_UINT64, {n, 2}, partners.data());
  w.dataset("annotations/presynaptic_site/partner_ids", H5T_STD_U64LE, H5T_NATIVE_UINT64, {n}, partner_ids.data());
}

std::vector<hsize_t> zyx_dims(const VolumeGeometry& g) {
  return {static_cast<hsize_t>(g.shape().z), static_cast<hsize_t>(g.shape().y), static_cast<hsize_t>(g.shape().x)};
}

}  // namespace

bool is_hdf5_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char sig[8] = {};
  in.read(sig, 8);
  return in.gcount() == 8 && std::memcmp(sig, "\x89HDF\r\n\x1a\n", 8) == 0;
}

CremiContainer load_cremi_container(const std::filesystem::path& path) {
  std::lock_guard lock(hdf5_mutex());
  Reader r(path);
  CremiContainer c;
  c.raw = read_raw(r);
  c.segmentation = read_segmentation(r);
  c.annotations = read_annotations(r, c.segmentation.geometry());
  return c;
}

void save_cremi_container(const std::filesystem::path& path, const CremiContainer& c, const std::string& parameters) {
  std::lock_guard lock(hdf5_mutex());
  Writer w(path);
  write_attr_string(w.file(), "parameters", parameters);
  if (c.raw) {
    if (static_cast<std::int64_t>(c.raw->voxels.size()) != c.raw->geometry.num_voxels())
      throw ValidationError("raw volume size does not match its geometry");
    Handle ds = w.dataset(kRawPath, H5T_STD_U8LE, H5T_NATIVE_UINT8, zyx_dims(c.raw->geometry), c.raw->voxels.data());
    write_geometry_attrs(ds.get(), c.raw->geometry);
  }
  const auto& g = c.segmentation.geometry();
  Handle ds = w.dataset(kNeuronIdsPath, H5T_STD_U64LE, H5T_NATIVE_UINT64, zyx_dims(g), c.segmentation.labels().data());
  write_geometry_attrs(ds.get(), g);
  write_annotations(w, c.annotations);
  w.commit();
}

SegmentationVolume load_segmentation(const std::filesystem::path& path) {
  std::lock_guard lock(hdf5_mutex());
  Reader r(path);
  return read_segmentation(r);
}

PointAnnotationSet load_annotations(const std::filesystem::path& path) {
  std::lock_guard lock(hdf5_mutex());
  Reader r(path);
  auto shape = r.attr_doubles("annotations", "shape");
  auto res = r.attr_triple("annotations", "resolution");
  VolumeGeometry g;
  if (shape && res && shape->size() == 3) {
    g = VolumeGeometry({static_cast<std::int64_t>((*shape)[2]), static_cast<std::int64_t>((*shape)[1]),
                        static_cast<std::int64_t>((*shape)[0])},
                       *res, r.attr_triple("annotations", "offset").value_or(Vec3d{}));
  } else {
    Handle ds = r.open_dataset(kNeuronIdsPath);
    g = geometry_for(r, kNeuronIdsPath, r.dims(ds.get()));
  }
  return read_annotations(r, g);
}

void save_annotations(const std::filesystem::path& path, const PointAnnotationSet& annotations,
                      const std::string& parameters) {
  std::lock_guard lock(hdf5_mutex());
  Writer w(path);
  write_attr_string(w.file(), "parameters", parameters);
  write_annotations(w, annotations);
  w.commit();
}

void save_edge_volume(const std::filesystem::path& path, const EdgeScoreVolume& v, EdgeVolumeKind kind,
                      const std::string& parameters) {
  std::lock_guard lock(hdf5_mutex());
  const auto& g = v.geometry();
  auto dims = zyx_dims(g);
  dims.insert(dims.begin(), static_cast<hsize_t>(v.channels()));
  Writer w(path);
  write_attr_string(w.file(), "parameters", parameters);
  Handle ds;
  if (kind == EdgeVolumeKind::labels) {
    if (!v.is_binary()) throw ValidationError("edge labels must be binary");
    std::vector<std::uint8_t> bytes(v.scores().size());
    std::transform(v.scores().begin(), v.scores().end(), bytes.begin(),
                   [](float s) { return static_cast<std::uint8_t>(s != 0.0f); });
    ds = w.dataset(kEdgeLabelsPath, H5T_STD_U8LE, H5T_NATIVE_UINT8, dims, bytes.data());
  } else {
    ds = w.dataset(kScoresPath, H5T_IEEE_F32LE, H5T_NATIVE_FLOAT, dims, v.scores().data());
  }
  write_geometry_attrs(ds.get(), g);
  std::vector<double> offsets;
  for (const auto& r : v.offsets().offsets_nm()) {
    offsets.push_back(r.z);
    offsets.push_back(r.y);
    offsets.push_back(r.x);
  }
  write_attr_doubles(ds.get(), "offsets_nm", offsets, {v.channels(), 3});
  write_attr_scalar(ds.get(), "r_syn_nm", v.offsets().r_syn_nm());
  w.commit();
}

EdgeScoreVolume load_edge_volume(const std::filesystem::path& path, EdgeVolumeKind kind) {
  std::lock_guard lock(hdf5_mutex());
  Reader r(path);
  const std::string p = kind == EdgeVolumeKind::labels ? kEdgeLabelsPath : kScoresPath;
  std::vector<hsize_t> d;
  std::vector<float> scores;
  if (kind == EdgeVolumeKind::labels) {
    auto bytes = r.read<std::uint8_t>(p, H5T_NATIVE_UINT8, d);
    scores.assign(bytes.begin(), bytes.end());
  } else {
    scores = r.read<float>(p, H5T_NATIVE_FLOAT, d);
  }
  if (d.size() != 4) throw FormatError(p + " must be four-dimensional [n_e, z, y, x]");
  VolumeGeometry g = geometry_for(r, p, {d[1], d[2], d[3]});
  auto offsets_attr = r.attr_doubles(p, "offsets_nm");
  auto r_syn = r.attr_doubles(p, "r_syn_nm");
  if (!offsets_attr || !r_syn || r_syn->size() != 1) throw FormatError(p + " lacks offsets_nm / r_syn_nm attributes");
  if (offsets_attr->size() != d[0] * 3) throw FormatError(p + ": offsets_nm does not match the channel count");
  std::vector<Vec3d> offsets;
  for (std::size_t k = 0; k < d[0]; ++k)
    offsets.push_back({(*offsets_attr)[k * 3 + 2], (*offsets_attr)[k * 3 + 1], (*offsets_attr)[k * 3]});
  try {
    return EdgeScoreVolume(g, OffsetSet(std::move(offsets), (*r_syn)[0], g.resolution()), std::move(scores));
  } catch (const ValidationError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string read_parameters(const std::filesystem::path& path) {
  std::lock_guard lock(hdf5_mutex());
  Reader r(path);
  return r.attr_string("parameters");
}

std::vector<SynapticPartnerAnnotation> read_partners(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("file not found: '" + path.string() + "'");
  if (is_hdf5_file(path)) return load_annotations(path).annotations;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t fields = 0;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    auto f = split_fields(line, "\t \r");
    if (f.empty() || f[0][0] == '#') continue;
    fields = f.size();
    break;
  }
  std::istringstream body(text);
  try {
    if (fields == 10) return to_annotations(read_partner_tsv(body));
    return read_annotation_text(body);
  } catch (const ValidationError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace synpart

#include <doctest.h>
#include <hdf5.h>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "synpart/annotations.hpp"
#include "synpart/container.hpp"
#include "synpart/errors.hpp"
#include "synpart/offsets.hpp"
#include "test_util.hpp"

using namespace synpart;

namespace {

CremiContainer sample_container(bool with_raw) {
  std::mt19937_64 rng(5);
  CremiContainer c;
  VolumeGeometry g({12, 9, 5}, {4, 4, 40}, {40, 80, 400});
  c.segmentation = oracle::random_segmentation(rng, {12, 9, 5}, {4, 4, 40}, 6, true);
  c.segmentation = SegmentationVolume(g, c.segmentation.labels());
  c.segmentation.labels()[3] = 0xFFFFFFFFFFFFull;  // wide ids survive
  if (with_raw) {
    RawVolume raw{g, std::vector<std::uint8_t>(static_cast<std::size_t>(g.num_voxels()))};
    for (std::size_t i = 0; i < raw.voxels.size(); ++i) raw.voxels[i] = static_cast<std::uint8_t>(i * 7);
    c.raw = raw;
  }
  c.annotations.geometry = g;
  c.annotations.annotations = {{0, g.world({1, 1, 1}), g.world({3, 1, 1})},
                               {5, {45.5, 90.25, 440.0}, {60.125, 90.0, 480.0}},
                               {9, g.world({11, 8, 4}), g.world({10, 8, 4})}};
  return c;
}

// Overwrites an existing dataset in place with raw values of the same shape.
void overwrite_dataset(const std::filesystem::path& path, const char* name, hid_t type, const void* data) {
  hid_t f = H5Fopen(path.c_str(), H5F_ACC_RDWR, H5P_DEFAULT);
  REQUIRE(f >= 0);
  hid_t d = H5Dopen2(f, name, H5P_DEFAULT);
  REQUIRE(d >= 0);
  REQUIRE(H5Dwrite(d, type, H5S_ALL, H5S_ALL, H5P_DEFAULT, data) >= 0);
  H5Dclose(d);
  H5Fclose(f);
}

}  // namespace

TEST_CASE("container save then load is the identity") {
  testutil::TempDir dir("container");
  for (bool raw : {false, true}) {
    CremiContainer c = sample_container(raw);
    auto path = dir / (raw ? "with_raw.h5" : "plain.h5");
    save_cremi_container(path, c, "command=test\n");
    CHECK(is_hdf5_file(path));
    CremiContainer back = load_cremi_container(path);
    CHECK(back.segmentation == c.segmentation);
    CHECK(back.annotations == c.annotations);
    CHECK(back.raw.has_value() == raw);
    if (raw) CHECK(*back.raw == *c.raw);
    CHECK(read_parameters(path) == "command=test\n");
    CHECK(load_segmentation(path) == c.segmentation);
    CHECK(read_partners(path) == c.annotations.annotations);
  }
}

TEST_CASE("container with one annotation pair") {
  testutil::TempDir dir("container");
  CremiContainer c = sample_container(false);
  c.annotations.annotations.resize(1);
  save_cremi_container(dir / "one.h5", c);
  CHECK(load_cremi_container(dir / "one.h5").annotations.size() == 1);
}

TEST_CASE("annotations-only file keeps its own geometry") {
  testutil::TempDir dir("container");
  CremiContainer c = sample_container(false);
  save_annotations(dir / "a.h5", c.annotations);
  CHECK(load_annotations(dir / "a.h5") == c.annotations);
}

TEST_CASE("partner table referencing an unknown id is a load error") {
  testutil::TempDir dir("container");
  CremiContainer c = sample_container(false);
  c.annotations.annotations.resize(1);
  save_cremi_container(dir / "bad.h5", c);
  std::uint64_t partners[2] = {0, 999};
  overwrite_dataset(dir / "bad.h5", "annotations/presynaptic_site/partners", H5T_NATIVE_UINT64, partners);
  CHECK_THROWS_AS(load_cremi_container(dir / "bad.h5"), FormatError);
}

TEST_CASE("location outside the volume is a load error") {
  testutil::TempDir dir("container");
  CremiContainer c = sample_container(false);
  c.annotations.annotations.resize(1);
  save_cremi_container(dir / "bad.h5", c);
  double locations[6] = {0, 0, 0, 1e6, 0, 0};
  overwrite_dataset(dir / "bad.h5", "annotations/locations", H5T_NATIVE_DOUBLE, locations);
  CHECK_THROWS_AS(load_cremi_container(dir / "bad.h5"), FormatError);
}

TEST_CASE("missing files and non-HDF5 files") {
  testutil::TempDir dir("container");
  CHECK_THROWS_AS(load_cremi_container(dir / "nope.h5"), IoError);
  std::ofstream(dir / "text.h5") << "not hdf5\n";
  CHECK_FALSE(is_hdf5_file(dir / "text.h5"));
  CHECK_THROWS_AS(load_segmentation(dir / "text.h5"), IoError);
}

TEST_CASE("missing dataset is a format error") {
  testutil::TempDir dir("container");
  CremiContainer c = sample_container(false);
  save_annotations(dir / "ann.h5", c.annotations);
  CHECK_THROWS_AS(load_segmentation(dir / "ann.h5"), FormatError);
}

TEST_CASE("edge volumes round trip") {
  testutil::TempDir dir("container");
  VolumeGeometry g({6, 5, 3}, {4, 4, 40}, {8, 0, 40});
  OffsetSet o = paper_offset_set(g);
  EdgeScoreVolume labels(g, o);
  EdgeScoreVolume scores(g, o);
  std::mt19937_64 rng(3);
  for (std::size_t i = 0; i < labels.scores().size(); ++i) {
    labels.scores()[i] = static_cast<float>(rng() % 2);
    scores.scores()[i] = std::uniform_real_distribution<float>(0, 1)(rng);
  }
  save_edge_volume(dir / "l.h5", labels, EdgeVolumeKind::labels);
  save_edge_volume(dir / "s.h5", scores, EdgeVolumeKind::scores);
  CHECK(load_edge_volume(dir / "l.h5", EdgeVolumeKind::labels) == labels);
  CHECK(load_edge_volume(dir / "s.h5", EdgeVolumeKind::scores) == scores);
  CHECK_THROWS_AS(save_edge_volume(dir / "x.h5", scores, EdgeVolumeKind::labels), ValidationError);
  CHECK_THROWS_AS(load_edge_volume(dir / "l.h5", EdgeVolumeKind::scores), FormatError);
}

TEST_CASE("annotation text format round trip") {
  std::vector<SynapticPartnerAnnotation> a = {{3, {1.5, 2, 3}, {4, 5, 6.25}}, {7, {0, 0, 0}, {-1, 1e-3, 40}}};
  std::stringstream s;
  write_annotation_text(s, a);
  std::istringstream in("# comment\n" + s.str());
  CHECK(read_annotation_text(in) == a);
}

TEST_CASE("saving twice yields identical bytes") {
  testutil::TempDir dir("container");
  CremiContainer c = sample_container(true);
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  save_cremi_container(dir / "a.h5", c, "k=v\n");
  std::string first = read(dir / "a.h5");
  save_cremi_container(dir / "a.h5", c, "k=v\n");
  CHECK(read(dir / "a.h5") == first);
}

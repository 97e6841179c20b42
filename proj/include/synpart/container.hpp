#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "synpart/annotations.hpp"
#include "synpart/encoder.hpp"
#include "synpart/volume.hpp"

namespace synpart {

// HDF5 container layout (CREMI compatible). Arrays are stored in (z, y, x)
// order and nm triples (resolution, offset, locations) as (z, y, x); the API
// converts to (x, y, z) at this boundary.
//
//   volumes/raw                              uint8  [z,y,x]        optional
//   volumes/labels/neuron_ids                uint64 [z,y,x]        attrs resolution, offset
//   annotations/ids                          uint64 [n]
//   annotations/types                        string [n]  presynaptic_site | postsynaptic_site
//   annotations/locations                    float64 [n,3] nm, relative to the group's offset attr
//   annotations/presynaptic_site/partners    uint64 [m,2] (pre_id, post_id)
//   annotations/presynaptic_site/partner_ids uint64 [m]   annotation ids (absent -> row index)
//   volumes/pred_syn_partner_scores          float32 [n_e,z,y,x]
//   volumes/labels/syn_partner_edges         uint8   [n_e,z,y,x]
//
// Edge volumes carry attrs resolution, offset, offsets_nm [n_e,3] and
// r_syn_nm. Every written file carries a root string attr `parameters`.

inline constexpr const char* kNeuronIdsPath = "volumes/labels/neuron_ids";
inline constexpr const char* kRawPath = "volumes/raw";
inline constexpr const char* kScoresPath = "volumes/pred_syn_partner_scores";
inline constexpr const char* kEdgeLabelsPath = "volumes/labels/syn_partner_edges";

struct RawVolume {
  VolumeGeometry geometry;
  std::vector<std::uint8_t> voxels;

  friend bool operator==(const RawVolume&, const RawVolume&) = default;
};

struct CremiContainer {
  std::optional<RawVolume> raw;
  SegmentationVolume segmentation;
  PointAnnotationSet annotations;

  friend bool operator==(const CremiContainer&, const CremiContainer&) = default;
};

/// True if the file starts with the HDF5 signature.
bool is_hdf5_file(const std::filesystem::path& path);

/// Reads raw (if present), neuron ids and partner annotations.
/// Throws IoError for unreadable files and FormatError for missing datasets,
/// unknown partner ids, mistyped sites or locations outside the volume.
CremiContainer load_cremi_container(const std::filesystem::path& path);
void save_cremi_container(const std::filesystem::path& path, const CremiContainer& c,
                          const std::string& parameters = {});

SegmentationVolume load_segmentation(const std::filesystem::path& path);
/// Annotations from a container; geometry comes from the annotations group
/// attrs or, failing that, from the neuron ids dataset.
PointAnnotationSet load_annotations(const std::filesystem::path& path);
/// Writes only the annotation tables plus geometry attrs.
void save_annotations(const std::filesystem::path& path, const PointAnnotationSet& annotations,
                      const std::string& parameters = {});

enum class EdgeVolumeKind { scores, labels };

/// Labels are written as uint8 and must be binary.
void save_edge_volume(const std::filesystem::path& path, const EdgeScoreVolume& v, EdgeVolumeKind kind,
                      const std::string& parameters = {});
EdgeScoreVolume load_edge_volume(const std::filesystem::path& path, EdgeVolumeKind kind);

/// Root `parameters` attribute, empty if absent.
std::string read_parameters(const std::filesystem::path& path);

/// Reads partner pairs from any supported file: an HDF5 container, the
/// 7-column annotation text format or the extractor's 10-column TSV.
std::vector<SynapticPartnerAnnotation> read_partners(const std::filesystem::path& path);

}  // namespace synpart

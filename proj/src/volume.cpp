#include "synpart/volume.hpp"

#include <string>

#include "synpart/errors.hpp"

namespace synpart {

SegmentationVolume::SegmentationVolume(VolumeGeometry geometry, std::vector<Label> labels)
    : geometry_(geometry), labels_(std::move(labels)) {
  if (static_cast<std::int64_t>(labels_.size()) != geometry_.num_voxels())
    throw ValidationError("label array holds " + std::to_string(labels_.size()) + " voxels, geometry expects " +
                          std::to_string(geometry_.num_voxels()));
}

}  // namespace synpart

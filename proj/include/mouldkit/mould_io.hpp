#pragma once

#include <stdexcept>
#include <string>

#include "mouldkit/mould.hpp"

namespace mouldkit {

struct MouldIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes <stem>.vis.pfm, <stem>.hid.pfm (float32) and <stem>.mould.json
/// with fields z_orig, L, epsilon, width, height, sensor_width_mm,
/// focal_length_mm and camera_pose (4x4 row-major, world to camera).
void write_mould(const MouldPair& pair, const std::string& stem);

/// Reads the triple written by write_mould. Depths come back as the float32
/// values stored on disk. Warnings derivable from the maps (all-background,
/// range violation) are recomputed; watertightness is not stored and reads
/// as clean. Throws MouldIoError on missing or inconsistent files
/// (dimension mismatch between sidecar and images).
MouldPair read_mould(const std::string& stem);

/// Camera as JSON text with fields width, height, sensor_width_mm,
/// focal_length_mm and pose (4x4 row-major, world to camera).
std::string camera_to_json(const Camera& camera);

/// Parses camera JSON. Missing pose means identity; other fields are
/// required. Throws MouldIoError on malformed input.
Camera camera_from_json(const std::string& text);

/// Loads a camera from a JSON file.
Camera load_camera_json(const std::string& path);

}  // namespace mouldkit

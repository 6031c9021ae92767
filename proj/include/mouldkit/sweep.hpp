#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mouldkit/camera.hpp"
#include "mouldkit/mesh.hpp"

namespace mouldkit {

/// Smallest voxel resolution whose cell count reaches the mould's scalar
/// count: min v with v^3 >= 2n^2. Aligns the two representations on the
/// dimensionality axis.
int matched_voxel_resolution(int mould_n);

struct SweepRow {
    std::string representation;  // "mould" or "voxel"
    int n = 0;
    long long dimensionality = 0;  // 2n^2 scalars or n^3 cells, exactly
    double chamfer_m = 0.0;        // mean over meshes
    double encode_ms = 0.0;        // mean wall-clock encode time
};

struct SweepReport {
    std::vector<SweepRow> rows;  // sorted by (dimensionality, representation)

    /// CSV with header representation,N,D,chamfer_m,encode_ms.
    std::string to_csv() const;

    /// Aligned human-readable table.
    std::string to_table() const;
};

struct SweepOptions {
    std::vector<int> mould_resolutions = {32, 64, 128, 256};
    std::vector<int> voxel_resolutions;  // empty: matched to mould_resolutions
    bool include_mould = true;
    bool include_voxel = true;
    std::size_t samples = 30000;  // ground-truth surface samples per mesh
    std::uint64_t seed = 0;
    double background_distance = 1.5;
    double epsilon = 0.01;
    bool vertices_as_ground_truth = false;  // use mesh vertices instead of samples
    bool include_timing = true;  // false writes 0 ms, making reruns byte-identical
    bool place_subject = true;     // pose each mesh at subject_distance before framing
    double subject_distance = 8.0;  // meters from camera center to mesh centroid
};

/// Encodes every mesh at every resolution with both representations,
/// decodes to point clouds, and scores symmetric Chamfer against the
/// ground-truth side. The mould path frames each mesh with a square crop
/// of `base_camera`, first posing the camera at `subject_distance` from
/// the mesh centroid unless `place_subject` is off; the voxel path works
/// on world-space geometry directly. Throws std::invalid_argument for an
/// empty mesh list or empty resolution lists.
SweepReport run_sweep(const std::vector<Mesh>& meshes, const Camera& base_camera,
                      const SweepOptions& options = {});

}  // namespace mouldkit

#pragma once

#include <stdexcept>
#include <string>

#include "mouldkit/mesh.hpp"
#include "mouldkit/point_cloud.hpp"

namespace mouldkit {

struct MeshIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Loads an OBJ or PLY (ASCII or binary little-endian) triangle mesh.
/// Faces with more than three vertices are fan-triangulated; faces with
/// fewer than three are rejected. Degenerate zero-area triangles are
/// dropped by the Mesh constructor (see Mesh::dropped_degenerate_count).
/// Throws MeshIoError on unreadable files or unsupported formats.
Mesh load_mesh(const std::string& path);

void write_obj(const Mesh& mesh, const std::string& path);
void write_ply(const Mesh& mesh, const std::string& path, bool binary = true);

/// Point cloud PLY: float32 x,y,z, optional float32 nx,ny,nz, and an
/// optional uchar provenance channel (0 = visible, 1 = hidden).
void write_point_cloud_ply(const PointCloud& cloud, const std::string& path, bool binary = true);
PointCloud read_point_cloud_ply(const std::string& path);

}  // namespace mouldkit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mouldkit/math.hpp"
#include "mouldkit/mesh.hpp"
#include "mouldkit/point_cloud.hpp"

namespace mouldkit {

/// Surface occupancy grid over the mesh bounding cube. The cube is the mesh
/// AABB expanded to its longest side plus 2% padding per side, so cells are
/// always cubical and every vertex falls strictly inside. Cell (ix, iy, iz)
/// maps to index (iz * N + iy) * N + ix.
struct VoxelGrid {
    int resolution = 0;
    Vec3 origin;               // lower corner of the bounding cube
    double edge_length = 0.0;  // cube edge, meters
    std::vector<std::uint8_t> occupancy;  // one byte per cell, 1 = occupied

    double cell_size() const { return edge_length / resolution; }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(resolution) * resolution * resolution;
    }
    std::size_t cell_index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(iz) * resolution + iy) * resolution + ix;
    }
    bool occupied(int ix, int iy, int iz) const { return occupancy[cell_index(ix, iy, iz)] != 0; }
    std::size_t occupied_count() const;
    Vec3 cell_center(int ix, int iy, int iz) const;
    Aabb cell_box(int ix, int iy, int iz) const;
};

/// Exact triangle/box overlap via the separating axis test (13 axes: 3 box
/// normals, the triangle normal, 9 edge cross products). Closed semantics:
/// touching counts as overlap.
bool triangle_box_overlap(const Vec3& a, const Vec3& b, const Vec3& c,
                          const Vec3& box_center, const Vec3& box_half);

/// Marks every cell whose box overlaps at least one triangle. Throws
/// std::invalid_argument for an empty mesh or resolution < 2.
VoxelGrid voxelize_surface(const Mesh& mesh, int resolution);

/// One point at the center of every occupied cell, in cell-index order.
/// No normals. Throws std::invalid_argument when no cell is occupied.
PointCloud voxel_points(const VoxelGrid& grid);

/// Grid dump: one JSON header line {N, origin, edge_length} followed by the
/// occupancy packed 8 cells per byte, cell index order, LSB first.
void write_voxel_grid(const VoxelGrid& grid, const std::string& path);
VoxelGrid read_voxel_grid(const std::string& path);

}  // namespace mouldkit

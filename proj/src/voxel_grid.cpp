#include "mouldkit/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

#include "mouldkit/parallel.hpp"

namespace mouldkit {

std::size_t VoxelGrid::occupied_count() const {
    std::size_t count = 0;
    for (std::uint8_t cell : occupancy) count += cell != 0;
    return count;
}

Vec3 VoxelGrid::cell_center(int ix, int iy, int iz) const {
    const double s = cell_size();
    return origin + Vec3{(ix + 0.5) * s, (iy + 0.5) * s, (iz + 0.5) * s};
}

Aabb VoxelGrid::cell_box(int ix, int iy, int iz) const {
    const double s = cell_size();
    const Vec3 lo = origin + Vec3{ix * s, iy * s, iz * s};
    return Aabb{lo, lo + Vec3{s, s, s}};
}

namespace {

inline double min3(double a, double b, double c) { return std::min(a, std::min(b, c)); }
inline double max3(double a, double b, double c) { return std::max(a, std::max(b, c)); }

// One separating axis: triangle projections against the box radius.
// Returns true when the axis separates (strict, so touching overlaps).
inline bool axis_separates(const Vec3& axis, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                           const Vec3& half) {
    const double p0 = dot(axis, v0);
    const double p1 = dot(axis, v1);
    const double p2 = dot(axis, v2);
    const double rad = half.x * std::abs(axis.x) + half.y * std::abs(axis.y) +
                       half.z * std::abs(axis.z);
    return min3(p0, p1, p2) > rad || max3(p0, p1, p2) < -rad;
}

}  // namespace

bool triangle_box_overlap(const Vec3& a, const Vec3& b, const Vec3& c,
                          const Vec3& box_center, const Vec3& box_half) {
    const Vec3 v0 = a - box_center;
    const Vec3 v1 = b - box_center;
    const Vec3 v2 = c - box_center;

    // box face normals (the triangle AABB against the box)
    if (min3(v0.x, v1.x, v2.x) > box_half.x || max3(v0.x, v1.x, v2.x) < -box_half.x) return false;
    if (min3(v0.y, v1.y, v2.y) > box_half.y || max3(v0.y, v1.y, v2.y) < -box_half.y) return false;
    if (min3(v0.z, v1.z, v2.z) > box_half.z || max3(v0.z, v1.z, v2.z) < -box_half.z) return false;

    // edge cross products; a zero axis (edge parallel to a box axis) never
    // separates because both projections collapse to zero
    const Vec3 edges[3] = {v1 - v0, v2 - v1, v0 - v2};
    for (const Vec3& e : edges) {
        if (axis_separates(Vec3{0.0, -e.z, e.y}, v0, v1, v2, box_half)) return false;
        if (axis_separates(Vec3{e.z, 0.0, -e.x}, v0, v1, v2, box_half)) return false;
        if (axis_separates(Vec3{-e.y, e.x, 0.0}, v0, v1, v2, box_half)) return false;
    }

    // triangle plane
    const Vec3 normal = cross(edges[0], edges[1]);
    return !axis_separates(normal, v0, v1, v2, box_half);
}

VoxelGrid voxelize_surface(const Mesh& mesh, int resolution) {
    if (mesh.empty()) throw std::invalid_argument("voxelize: empty mesh");
    if (resolution < 2) throw std::invalid_argument("voxelize: resolution must be at least 2");

    const Aabb bounds = mesh.bounds();
    const Vec3 extent = bounds.extent();
    const double side = max3(extent.x, extent.y, extent.z);
    if (side <= 0.0) throw std::invalid_argument("voxelize: degenerate mesh bounds");

    VoxelGrid grid;
    grid.resolution = resolution;
    grid.edge_length = side * 1.04;  // 2% padding per side
    grid.origin = bounds.center() - Vec3{0.5, 0.5, 0.5} * grid.edge_length;
    grid.occupancy.assign(grid.cell_count(), 0);

    const double cell = grid.cell_size();
    const Vec3 half{0.5 * cell, 0.5 * cell, 0.5 * cell};
    const int n = resolution;
    const auto clamp_index = [n](double v) {
        return std::clamp(static_cast<int>(std::floor(v)), 0, n - 1);
    };

    // Each block builds a scratch grid and OR-merges it in; the merge is
    // idempotent and commutative, so the result is scheduling-independent.
    std::mutex merge_mutex;
    parallel_for_blocked(0, mesh.triangle_count(), [&](std::size_t lo, std::size_t hi) {
        std::vector<std::uint8_t> local(grid.cell_count(), 0);
        for (std::size_t t = lo; t < hi; ++t) {
            const int tri = static_cast<int>(t);
            const Vec3 a = mesh.triangle_vertex(tri, 0);
            const Vec3 b = mesh.triangle_vertex(tri, 1);
            const Vec3 c = mesh.triangle_vertex(tri, 2);
            const Aabb tb = mesh.triangle_bounds(tri);
            const int ix0 = clamp_index((tb.lo.x - grid.origin.x) / cell);
            const int ix1 = clamp_index((tb.hi.x - grid.origin.x) / cell);
            const int iy0 = clamp_index((tb.lo.y - grid.origin.y) / cell);
            const int iy1 = clamp_index((tb.hi.y - grid.origin.y) / cell);
            const int iz0 = clamp_index((tb.lo.z - grid.origin.z) / cell);
            const int iz1 = clamp_index((tb.hi.z - grid.origin.z) / cell);
            for (int iz = iz0; iz <= iz1; ++iz) {
                for (int iy = iy0; iy <= iy1; ++iy) {
                    for (int ix = ix0; ix <= ix1; ++ix) {
                        const std::size_t idx = grid.cell_index(ix, iy, iz);
                        if (local[idx]) continue;
                        const Vec3 center = grid.cell_center(ix, iy, iz);
                        if (triangle_box_overlap(a, b, c, center, half)) local[idx] = 1;
                    }
                }
            }
        }
        const std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t i = 0; i < grid.occupancy.size(); ++i) grid.occupancy[i] |= local[i];
    });
    return grid;
}

PointCloud voxel_points(const VoxelGrid& grid) {
    PointCloud cloud;
    const int n = grid.resolution;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                if (grid.occupied(ix, iy, iz)) cloud.points.push_back(grid.cell_center(ix, iy, iz));
    if (cloud.empty()) throw std::invalid_argument("voxel_points: no occupied cells");
    return cloud;
}

void write_voxel_grid(const VoxelGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    const nlohmann::json header = {
        {"N", grid.resolution},
        {"origin", {grid.origin.x, grid.origin.y, grid.origin.z}},
        {"edge_length", grid.edge_length},
    };
    out << header.dump() << "\n";
    std::vector<std::uint8_t> packed((grid.cell_count() + 7) / 8, 0);
    for (std::size_t i = 0; i < grid.occupancy.size(); ++i)
        if (grid.occupancy[i]) packed[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
    out.write(reinterpret_cast<const char*>(packed.data()),
              static_cast<std::streamsize>(packed.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

VoxelGrid read_voxel_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header_line;
    if (!std::getline(in, header_line)) throw std::runtime_error(path + ": missing grid header");
    VoxelGrid grid;
    try {
        const auto header = nlohmann::json::parse(header_line);
        grid.resolution = header.at("N").get<int>();
        const auto& o = header.at("origin");
        grid.origin = Vec3{o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()};
        grid.edge_length = header.at("edge_length").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (grid.resolution < 2) throw std::runtime_error(path + ": invalid grid resolution");
    std::vector<std::uint8_t> packed((grid.cell_count() + 7) / 8);
    if (!in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size())))
        throw std::runtime_error(path + ": truncated grid data");
    grid.occupancy.assign(grid.cell_count(), 0);
    for (std::size_t i = 0; i < grid.occupancy.size(); ++i)
        grid.occupancy[i] = (packed[i >> 3] >> (i & 7)) & 1u;
    return grid;
}

}  // namespace mouldkit

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mouldkit/math.hpp"

namespace mouldkit {

using Triangle = std::array<int, 3>;

/// Indexed triangle surface. Immutable after construction; zero-area
/// triangles are dropped on construction and counted, and the surface
/// centroid (area-weighted average of triangle centroids) is precomputed.
class Mesh {
public:
    Mesh() = default;

    /// Validates indices, drops degenerate (zero-area) triangles and
    /// computes the centroid. Throws std::invalid_argument on an
    /// out-of-range vertex index.
    Mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t triangle_count() const { return triangles_.size(); }
    bool empty() const { return triangles_.empty(); }

    /// Area-weighted average of triangle centroids (the center of mass of
    /// the surface treated as a thin lamina).
    const Vec3& centroid() const { return centroid_; }

    /// Zero-area triangles removed during construction.
    std::size_t dropped_degenerate_count() const { return dropped_degenerate_; }

    double surface_area() const { return total_area_; }

    Vec3 triangle_vertex(int tri, int corner) const {
        return vertices_[static_cast<std::size_t>(triangles_[static_cast<std::size_t>(tri)][corner])];
    }

    double triangle_area(int tri) const;
    Aabb triangle_bounds(int tri) const;
    Aabb bounds() const;

    /// True when every edge is shared by exactly two triangles.
    bool is_watertight() const;

    /// Rigidly transformed copy (used to express a mesh in camera coordinates).
    Mesh transformed(const RigidTransform& t) const;

private:
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    Vec3 centroid_;
    double total_area_ = 0.0;
    std::size_t dropped_degenerate_ = 0;
};

/// Splits every triangle into four by edge midpoints; shared edges get a
/// single midpoint vertex, so watertight input stays watertight.
Mesh subdivide(const Mesh& mesh);

}  // namespace mouldkit

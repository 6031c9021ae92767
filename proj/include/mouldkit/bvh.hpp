#pragma once

#include <optional>
#include <vector>

#include "mouldkit/camera.hpp"
#include "mouldkit/math.hpp"
#include "mouldkit/mesh.hpp"

namespace mouldkit {

/// Hits at or below this ray parameter are discarded by every query, so a
/// ray starting exactly on a surface does not report its own origin.
inline constexpr double kMinHitT = 1e-6;

/// Hits whose parameters differ by at most this are treated as one surface
/// crossing when enumerating all hits (shared triangle edges report twice).
inline constexpr double kHitMergeT = 1e-6;

/// Ray/triangle intersection (Moller-Trumbore, no backface culling).
/// Edges are inclusive within a small tolerance so rays crossing a shared
/// edge register on at least one of the adjacent triangles. On a hit with
/// t > 0, writes the ray parameter and returns true.
bool ray_triangle(const Vec3& origin, const Vec3& direction,
                  const Vec3& a, const Vec3& b, const Vec3& c, double& t_out);

/// Ray/box slab test. On overlap with t in [-inf, inf], writes the entry
/// and exit parameters and returns true. Zero direction components are
/// handled exactly (inside the slab or a miss).
bool ray_aabb(const Vec3& origin, const Vec3& direction, const Aabb& box,
              double& t_enter, double& t_exit);

struct RayHit {
    double t = 0.0;
    int triangle = -1;
};

/// Bounding volume hierarchy over mesh triangles. Interior nodes split the
/// primitive range at the median centroid along the longest axis of the
/// centroid bounds, so the tree depth stays logarithmic. Ties between hits
/// at the same ray parameter resolve to the lower triangle index, making
/// every query independent of traversal order.
class Bvh {
public:
    struct Node {
        Aabb bounds;
        int left = -1;   // interior: child node indices
        int right = -1;
        int first = 0;   // leaf: range into primitive_order()
        int count = 0;   // leaf when count > 0
        bool is_leaf() const { return count > 0; }
    };

    explicit Bvh(const Mesh& mesh, int leaf_size = 4);

    /// Nearest hit with t > kMinHitT, or nullopt.
    std::optional<RayHit> closest_hit(const Ray& ray) const;

    /// Farthest hit with t > kMinHitT, or nullopt. Subtrees whose exit
    /// parameter falls below the current best are pruned.
    std::optional<RayHit> farthest_hit(const Ray& ray) const;

    /// Every hit with t > kMinHitT, sorted by (t, triangle), with hits
    /// closer than kHitMergeT to their predecessor collapsed.
    std::vector<RayHit> all_hits(const Ray& ray) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<int>& primitive_order() const { return order_; }
    const Aabb& bounds() const;
    int max_depth() const;

private:
    const Mesh* mesh_;
    std::vector<Node> nodes_;
    std::vector<int> order_;

    int build(std::vector<int>& tris, int begin, int end, int leaf_size,
              const std::vector<Vec3>& centroids, const std::vector<Aabb>& boxes);
};

}  // namespace mouldkit

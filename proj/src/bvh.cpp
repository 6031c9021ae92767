#include "mouldkit/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mouldkit {

bool ray_triangle(const Vec3& origin, const Vec3& direction,
                  const Vec3& a, const Vec3& b, const Vec3& c, double& t_out) {
    constexpr double kDetEps = 1e-14;
    constexpr double kEdgeEps = 1e-12;

    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 pvec = cross(direction, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < kDetEps) return false;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - a;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < -kEdgeEps || u > 1.0 + kEdgeEps) return false;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(direction, qvec) * inv_det;
    if (v < -kEdgeEps || u + v > 1.0 + kEdgeEps) return false;
    const double t = dot(e2, qvec) * inv_det;
    if (!(t > 0.0)) return false;
    t_out = t;
    return true;
}

bool ray_aabb(const Vec3& origin, const Vec3& direction, const Aabb& box,
              double& t_enter, double& t_exit) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    const double o[3] = {origin.x, origin.y, origin.z};
    const double d[3] = {direction.x, direction.y, direction.z};
    const double lo[3] = {box.lo.x, box.lo.y, box.lo.z};
    const double hi[3] = {box.hi.x, box.hi.y, box.hi.z};
    for (int axis = 0; axis < 3; ++axis) {
        if (d[axis] == 0.0) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return false;
            continue;
        }
        double t1 = (lo[axis] - o[axis]) / d[axis];
        double t2 = (hi[axis] - o[axis]) / d[axis];
        if (t1 > t2) std::swap(t1, t2);
        tmin = std::max(tmin, t1);
        tmax = std::min(tmax, t2);
        if (tmin > tmax) return false;
    }
    t_enter = tmin;
    t_exit = tmax;
    return true;
}

Bvh::Bvh(const Mesh& mesh, int leaf_size) : mesh_(&mesh) {
    if (leaf_size < 1) throw std::invalid_argument("bvh leaf size must be positive");
    const int n = static_cast<int>(mesh.triangle_count());
    if (n == 0) throw std::invalid_argument("cannot build a bvh over an empty mesh");

    std::vector<Vec3> centroids(n);
    std::vector<Aabb> boxes(n);
    for (int i = 0; i < n; ++i) {
        boxes[i] = mesh.triangle_bounds(i);
        centroids[i] = boxes[i].center();
    }
    std::vector<int> tris(n);
    for (int i = 0; i < n; ++i) tris[i] = i;

    nodes_.reserve(static_cast<std::size_t>(2 * n));
    build(tris, 0, n, leaf_size, centroids, boxes);
    order_ = std::move(tris);
}

int Bvh::build(std::vector<int>& tris, int begin, int end, int leaf_size,
               const std::vector<Vec3>& centroids, const std::vector<Aabb>& boxes) {
    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    Aabb bounds;
    Aabb centroid_bounds;
    for (int i = begin; i < end; ++i) {
        bounds.expand(boxes[tris[i]]);
        centroid_bounds.expand(centroids[tris[i]]);
    }
    nodes_[node_index].bounds = bounds;

    const int count = end - begin;
    if (count <= leaf_size) {
        nodes_[node_index].first = begin;
        nodes_[node_index].count = count;
        return node_index;
    }

    const Vec3 extent = centroid_bounds.extent();
    int axis = 0;
    if (extent.y > extent.x) axis = 1;
    if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;

    const int mid = begin + count / 2;
    std::nth_element(tris.begin() + begin, tris.begin() + mid, tris.begin() + end,
                     [&](int lhs, int rhs) {
                         const Vec3& cl = centroids[lhs];
                         const Vec3& cr = centroids[rhs];
                         const double a = axis == 0 ? cl.x : axis == 1 ? cl.y : cl.z;
                         const double b = axis == 0 ? cr.x : axis == 1 ? cr.y : cr.z;
                         if (a != b) return a < b;
                         return lhs < rhs;  // deterministic layout for equal centroids
                     });

    const int left = build(tris, begin, mid, leaf_size, centroids, boxes);
    const int right = build(tris, mid, end, leaf_size, centroids, boxes);
    nodes_[node_index].left = left;
    nodes_[node_index].right = right;
    return node_index;
}

const Aabb& Bvh::bounds() const { return nodes_.front().bounds; }

int Bvh::max_depth() const {
    int deepest = 0;
    // (node, depth) pairs; the tree is balanced so the stack stays small
    std::vector<std::pair<int, int>> stack{{0, 1}};
    while (!stack.empty()) {
        const auto [idx, depth] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, depth);
        const Node& node = nodes_[idx];
        if (!node.is_leaf()) {
            stack.push_back({node.left, depth + 1});
            stack.push_back({node.right, depth + 1});
        }
    }
    return deepest;
}

namespace {

// Lower triangle index wins between equal ray parameters, so results do not
// depend on the order the tree was visited in.
inline bool closer(const RayHit& candidate, const RayHit& best) {
    return candidate.t < best.t || (candidate.t == best.t && candidate.triangle < best.triangle);
}

inline bool farther(const RayHit& candidate, const RayHit& best) {
    return candidate.t > best.t || (candidate.t == best.t && candidate.triangle < best.triangle);
}

}  // namespace

std::optional<RayHit> Bvh::closest_hit(const Ray& ray) const {
    std::optional<RayHit> best;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        double t_enter, t_exit;
        if (!ray_aabb(ray.origin, ray.direction, node.bounds, t_enter, t_exit)) continue;
        if (t_exit < kMinHitT) continue;
        if (best && t_enter > best->t) continue;
        if (node.is_leaf()) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const int tri = order_[i];
                double t;
                if (ray_triangle(ray.origin, ray.direction, mesh_->triangle_vertex(tri, 0),
                                 mesh_->triangle_vertex(tri, 1), mesh_->triangle_vertex(tri, 2),
                                 t) &&
                    t > kMinHitT) {
                    const RayHit hit{t, tri};
                    if (!best || closer(hit, *best)) best = hit;
                }
            }
        } else {
            stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }
    return best;
}

std::optional<RayHit> Bvh::farthest_hit(const Ray& ray) const {
    std::optional<RayHit> best;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        double t_enter, t_exit;
        if (!ray_aabb(ray.origin, ray.direction, node.bounds, t_enter, t_exit)) continue;
        if (t_exit < kMinHitT) continue;
        if (best && t_exit < best->t) continue;  // nothing inside can beat the best
        if (node.is_leaf()) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const int tri = order_[i];
                double t;
                if (ray_triangle(ray.origin, ray.direction, mesh_->triangle_vertex(tri, 0),
                                 mesh_->triangle_vertex(tri, 1), mesh_->triangle_vertex(tri, 2),
                                 t) &&
                    t > kMinHitT) {
                    const RayHit hit{t, tri};
                    if (!best || farther(hit, *best)) best = hit;
                }
            }
        } else {
            stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }
    return best;
}

std::vector<RayHit> Bvh::all_hits(const Ray& ray) const {
    std::vector<RayHit> hits;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        double t_enter, t_exit;
        if (!ray_aabb(ray.origin, ray.direction, node.bounds, t_enter, t_exit)) continue;
        if (t_exit < kMinHitT) continue;
        if (node.is_leaf()) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const int tri = order_[i];
                double t;
                if (ray_triangle(ray.origin, ray.direction, mesh_->triangle_vertex(tri, 0),
                                 mesh_->triangle_vertex(tri, 1), mesh_->triangle_vertex(tri, 2),
                                 t) &&
                    t > kMinHitT) {
                    hits.push_back({t, tri});
                }
            }
        } else {
            stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }
    std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.triangle < b.triangle;
    });
    std::vector<RayHit> merged;
    for (const RayHit& hit : hits) {
        if (merged.empty() || hit.t - merged.back().t > kHitMergeT) merged.push_back(hit);
    }
    return merged;
}

}  // namespace mouldkit

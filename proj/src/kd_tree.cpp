#include "mouldkit/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mouldkit {

namespace {

inline double component(const Vec3& v, int axis) {
    return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
}

}  // namespace

KdIndex::KdIndex(std::vector<Vec3> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("kd index over an empty point set");
    order_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) order_[i] = static_cast<int>(i);
    axis_.assign(points_.size(), 0);
    build(0, static_cast<int>(points_.size()));
}

void KdIndex::build(int lo, int hi) {
    if (hi - lo <= 1) return;
    Aabb bounds;
    for (int i = lo; i < hi; ++i) bounds.expand(points_[static_cast<std::size_t>(order_[i])]);
    const Vec3 extent = bounds.extent();
    int axis = 0;
    if (extent.y > extent.x) axis = 1;
    if (extent.z > component(extent, axis)) axis = 2;

    const int mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](int a, int b) {
                         const double ca = component(points_[static_cast<std::size_t>(a)], axis);
                         const double cb = component(points_[static_cast<std::size_t>(b)], axis);
                         if (ca != cb) return ca < cb;
                         return a < b;
                     });
    axis_[static_cast<std::size_t>(mid)] = static_cast<std::uint8_t>(axis);
    build(lo, mid);
    build(mid + 1, hi);
}

void KdIndex::search(int lo, int hi, const Vec3& query, double& best_sq, int& best_index) const {
    if (lo >= hi) return;
    const int mid = lo + (hi - lo) / 2;
    const int idx = order_[static_cast<std::size_t>(mid)];
    const Vec3& p = points_[static_cast<std::size_t>(idx)];
    const double d_sq = squared_norm(p - query);
    if (d_sq < best_sq || (d_sq == best_sq && idx < best_index)) {
        best_sq = d_sq;
        best_index = idx;
    }
    if (hi - lo == 1) return;

    const int axis = axis_[static_cast<std::size_t>(mid)];
    const double delta = component(query, axis) - component(p, axis);
    const bool left_first = delta < 0.0;
    if (left_first) {
        search(lo, mid, query, best_sq, best_index);
        // equal split distance can still hide an equally near, lower-index point
        if (delta * delta <= best_sq) search(mid + 1, hi, query, best_sq, best_index);
    } else {
        search(mid + 1, hi, query, best_sq, best_index);
        if (delta * delta <= best_sq) search(lo, mid, query, best_sq, best_index);
    }
}

std::size_t KdIndex::nearest(const Vec3& query, double& distance) const {
    double best_sq = std::numeric_limits<double>::infinity();
    int best_index = static_cast<int>(points_.size());
    search(0, static_cast<int>(points_.size()), query, best_sq, best_index);
    distance = std::sqrt(best_sq);
    return static_cast<std::size_t>(best_index);
}

std::size_t KdIndex::nearest(const Vec3& query) const {
    double distance;
    return nearest(query, distance);
}

double KdIndex::nearest_distance(const Vec3& query) const {
    double distance;
    nearest(query, distance);
    return distance;
}

}  // namespace mouldkit

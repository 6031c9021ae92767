#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mouldkit/math.hpp"

namespace mouldkit {

/// Balanced kd-tree over a fixed point set for nearest-neighbor queries.
/// Built by median split on the widest axis of each range. Ties between
/// equally distant points resolve to the lower original index, so results
/// match a linear scan with the same rule.
class KdIndex {
public:
    explicit KdIndex(std::vector<Vec3> points);

    std::size_t size() const { return points_.size(); }

    /// Index (into the original point order) of the nearest point.
    std::size_t nearest(const Vec3& query) const;

    /// Distance to the nearest point.
    double nearest_distance(const Vec3& query) const;

    /// Both at once.
    std::size_t nearest(const Vec3& query, double& distance) const;

private:
    std::vector<Vec3> points_;        // original order
    std::vector<int> order_;          // tree layout: median of each range
    std::vector<std::uint8_t> axis_;  // split axis at each median position

    void build(int lo, int hi);
    void search(int lo, int hi, const Vec3& query, double& best_sq, int& best_index) const;
};

}  // namespace mouldkit

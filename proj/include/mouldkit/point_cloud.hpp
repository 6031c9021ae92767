#pragma once

#include <cstdint>
#include <vector>

#include "mouldkit/math.hpp"

namespace mouldkit {

enum class PointOrigin : std::uint8_t { kVisible = 0, kHidden = 1 };

/// Oriented 3D points. Normals and provenance labels are optional; when
/// present they are index-aligned with points.
struct PointCloud {
    std::vector<Vec3> points;
    std::vector<Vec3> normals;              // empty or points.size(), unit length
    std::vector<PointOrigin> provenance;    // empty or points.size()

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_normals() const { return !normals.empty(); }
    bool has_provenance() const { return !provenance.empty(); }

    PointCloud transformed(const RigidTransform& t) const {
        PointCloud out;
        out.points.reserve(points.size());
        for (const Vec3& p : points) out.points.push_back(t.apply(p));
        out.normals.reserve(normals.size());
        for (const Vec3& n : normals) out.normals.push_back(t.apply_direction(n));
        out.provenance = provenance;
        return out;
    }

    void append(const PointCloud& other) {
        points.insert(points.end(), other.points.begin(), other.points.end());
        normals.insert(normals.end(), other.normals.begin(), other.normals.end());
        provenance.insert(provenance.end(), other.provenance.begin(), other.provenance.end());
    }
};

}  // namespace mouldkit

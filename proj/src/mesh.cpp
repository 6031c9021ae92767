#include "mouldkit/mesh.hpp"

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace mouldkit {

namespace {

double area_of(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

std::uint64_t edge_key(int a, int b) {
    const std::uint64_t lo = static_cast<std::uint32_t>(std::min(a, b));
    const std::uint64_t hi = static_cast<std::uint32_t>(std::max(a, b));
    return (hi << 32) | lo;
}

}  // namespace

Mesh::Mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)) {
    const int vcount = static_cast<int>(vertices_.size());
    triangles_.reserve(triangles.size());
    Vec3 weighted{0, 0, 0};
    for (const Triangle& t : triangles) {
        for (int idx : t) {
            if (idx < 0 || idx >= vcount) throw std::invalid_argument("triangle index out of range");
        }
        const Vec3& a = vertices_[static_cast<std::size_t>(t[0])];
        const Vec3& b = vertices_[static_cast<std::size_t>(t[1])];
        const Vec3& c = vertices_[static_cast<std::size_t>(t[2])];
        const double area = area_of(a, b, c);
        if (area <= 0.0) {
            ++dropped_degenerate_;
            continue;
        }
        triangles_.push_back(t);
        total_area_ += area;
        weighted += (a + b + c) * (area / 3.0);
    }
    centroid_ = total_area_ > 0.0 ? weighted / total_area_ : Vec3{0, 0, 0};
}

double Mesh::triangle_area(int tri) const {
    return area_of(triangle_vertex(tri, 0), triangle_vertex(tri, 1), triangle_vertex(tri, 2));
}

Aabb Mesh::triangle_bounds(int tri) const {
    Aabb b;
    for (int c = 0; c < 3; ++c) b.expand(triangle_vertex(tri, c));
    return b;
}

Aabb Mesh::bounds() const {
    Aabb b;
    for (const Vec3& v : vertices_) b.expand(v);
    return b;
}

bool Mesh::is_watertight() const {
    if (triangles_.empty()) return false;
    std::unordered_map<std::uint64_t, int> edge_use;
    edge_use.reserve(triangles_.size() * 3);
    for (const Triangle& t : triangles_) {
        edge_use[edge_key(t[0], t[1])]++;
        edge_use[edge_key(t[1], t[2])]++;
        edge_use[edge_key(t[2], t[0])]++;
    }
    for (const auto& [key, count] : edge_use) {
        if (count != 2) return false;
    }
    return true;
}

Mesh Mesh::transformed(const RigidTransform& t) const {
    std::vector<Vec3> verts;
    verts.reserve(vertices_.size());
    for (const Vec3& v : vertices_) verts.push_back(t.apply(v));
    return Mesh(std::move(verts), triangles_);
}

Mesh subdivide(const Mesh& mesh) {
    std::vector<Vec3> verts = mesh.vertices();
    std::vector<Triangle> tris;
    tris.reserve(mesh.triangle_count() * 4);
    std::unordered_map<std::uint64_t, int> midpoint;

    auto mid = [&](int a, int b) {
        const std::uint64_t key = edge_key(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(verts.size());
        verts.push_back((verts[static_cast<std::size_t>(a)] + verts[static_cast<std::size_t>(b)]) * 0.5);
        midpoint.emplace(key, idx);
        return idx;
    };

    for (const Triangle& t : mesh.triangles()) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        tris.push_back({t[0], ab, ca});
        tris.push_back({ab, t[1], bc});
        tris.push_back({ca, bc, t[2]});
        tris.push_back({ab, bc, ca});
    }
    return Mesh(std::move(verts), std::move(tris));
}

}  // namespace mouldkit

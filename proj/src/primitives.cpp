#include "mouldkit/primitives.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mouldkit/random.hpp"

namespace mouldkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTau = 2.0 * kPi;

// Orthonormal frame around unit axis w.
void frame_around(const Vec3& w, Vec3& u, Vec3& v) {
    const Vec3 pick = std::abs(w.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    u = normalized(cross(w, pick));
    v = cross(w, u);
}

// Shared lat-long builder: `ring_center(k)` and `ring_radius(k)` describe
// `ring_count` latitudinal rings between the two apexes, ordered from the
// bottom apex to the top one. Produces a closed, outward-oriented surface.
Mesh build_lathe(const Vec3& apex_bottom, const Vec3& apex_top, int segments, int ring_count,
                 const Vec3& u, const Vec3& v,
                 const std::vector<Vec3>& centers, const std::vector<double>& radii) {
    std::vector<Vec3> verts;
    std::vector<Triangle> tris;
    verts.reserve(2 + static_cast<std::size_t>(ring_count) * segments);

    const int bottom = 0;
    verts.push_back(apex_bottom);
    for (int k = 0; k < ring_count; ++k) {
        for (int j = 0; j < segments; ++j) {
            const double theta = kTau * j / segments;
            verts.push_back(centers[k] + (u * std::cos(theta) + v * std::sin(theta)) * radii[k]);
        }
    }
    const int top = static_cast<int>(verts.size());
    verts.push_back(apex_top);

    const auto ring_vertex = [&](int k, int j) { return 1 + k * segments + (j % segments); };

    // (u, v, w) is right-handed, so increasing theta sweeps counterclockwise
    // seen from +w; these windings face outward.
    for (int j = 0; j < segments; ++j)
        tris.push_back({bottom, ring_vertex(0, j + 1), ring_vertex(0, j)});
    for (int k = 0; k + 1 < ring_count; ++k) {
        for (int j = 0; j < segments; ++j) {
            const int a = ring_vertex(k, j);
            const int b = ring_vertex(k, j + 1);
            const int c = ring_vertex(k + 1, j + 1);
            const int d = ring_vertex(k + 1, j);
            tris.push_back({a, b, c});
            tris.push_back({a, c, d});
        }
    }
    for (int j = 0; j < segments; ++j)
        tris.push_back({top, ring_vertex(ring_count - 1, j), ring_vertex(ring_count - 1, j + 1)});

    return Mesh(std::move(verts), std::move(tris));
}

void append_mesh(std::vector<Vec3>& verts, std::vector<Triangle>& tris, const Mesh& part) {
    const int offset = static_cast<int>(verts.size());
    verts.insert(verts.end(), part.vertices().begin(), part.vertices().end());
    for (const Triangle& t : part.triangles())
        tris.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
}

}  // namespace

Mesh make_uv_sphere(const Vec3& center, double radius, int segments, int rings) {
    if (radius <= 0.0) throw std::invalid_argument("sphere radius must be positive");
    if (segments < 3 || rings < 2) throw std::invalid_argument("sphere needs >= 3 segments, >= 2 rings");

    const Vec3 w{0, 1, 0};
    Vec3 u, v;
    frame_around(w, u, v);
    std::vector<Vec3> centers;
    std::vector<double> radii;
    for (int k = 1; k < rings; ++k) {
        const double phi = -0.5 * kPi + kPi * k / rings;
        centers.push_back(center + w * (radius * std::sin(phi)));
        radii.push_back(radius * std::cos(phi));
    }
    return build_lathe(center - w * radius, center + w * radius, segments,
                       static_cast<int>(centers.size()), u, v, centers, radii);
}

Mesh make_box(const Vec3& center, const Vec3& size) {
    if (size.x <= 0.0 || size.y <= 0.0 || size.z <= 0.0)
        throw std::invalid_argument("box size must be positive");
    const Vec3 h = size * 0.5;
    std::vector<Vec3> verts = {
        center + Vec3{-h.x, -h.y, -h.z}, center + Vec3{+h.x, -h.y, -h.z},
        center + Vec3{+h.x, +h.y, -h.z}, center + Vec3{-h.x, +h.y, -h.z},
        center + Vec3{-h.x, -h.y, +h.z}, center + Vec3{+h.x, -h.y, +h.z},
        center + Vec3{+h.x, +h.y, +h.z}, center + Vec3{-h.x, +h.y, +h.z},
    };
    std::vector<Triangle> tris = {
        {0, 2, 1}, {0, 3, 2},  // -z
        {4, 5, 6}, {4, 6, 7},  // +z
        {0, 1, 5}, {0, 5, 4},  // -y
        {3, 6, 2}, {3, 7, 6},  // +y
        {0, 4, 7}, {0, 7, 3},  // -x
        {1, 2, 6}, {1, 6, 5},  // +x
    };
    return Mesh(std::move(verts), std::move(tris));
}

Mesh make_capsule(const Vec3& a, const Vec3& b, double radius, int segments, int cap_rings) {
    if (radius <= 0.0) throw std::invalid_argument("capsule radius must be positive");
    if (segments < 3 || cap_rings < 1)
        throw std::invalid_argument("capsule needs >= 3 segments, >= 1 cap ring");

    const Vec3 span = b - a;
    const double length = norm(span);
    if (length < 1e-12) return make_uv_sphere(a, radius, segments, 2 * cap_rings);

    const Vec3 w = span / length;
    Vec3 u, v;
    frame_around(w, u, v);

    // cap_rings rings up the bottom hemisphere (ending on the equator at a),
    // then cap_rings rings from the equator at b up the top hemisphere
    std::vector<Vec3> centers;
    std::vector<double> radii;
    for (int k = 1; k <= cap_rings; ++k) {
        const double phi = -0.5 * kPi + 0.5 * kPi * k / cap_rings;
        centers.push_back(a + w * (radius * std::sin(phi)));
        radii.push_back(radius * std::cos(phi));
    }
    for (int k = 0; k < cap_rings; ++k) {
        const double phi = 0.5 * kPi * k / cap_rings;
        centers.push_back(b + w * (radius * std::sin(phi)));
        radii.push_back(radius * std::cos(phi));
    }
    return build_lathe(a - w * radius, b + w * radius, segments,
                       static_cast<int>(centers.size()), u, v, centers, radii);
}

Mesh make_humanoid(std::uint64_t seed, HumanoidPose pose) {
    Rng rng(seed);
    // proportional jitter keeps every figure distinct but plausibly human
    const auto wobble = [&](double amount) { return 1.0 + amount * (2.0 * rng.uniform() - 1.0); };
    const double scale = wobble(0.06);
    const double girth = wobble(0.10);

    const auto capsule = [&](Vec3 from, Vec3 to, double r, std::vector<Vec3>& verts,
                             std::vector<Triangle>& tris) {
        append_mesh(verts, tris, make_capsule(from * scale, to * scale, r * girth * scale, 14, 7));
    };

    std::vector<Vec3> verts;
    std::vector<Triangle> tris;

    const double lean = 0.03 * (2.0 * rng.uniform() - 1.0);  // slight forward/back lean
    capsule({0, 1.00, 0}, {lean, 1.42, 0}, 0.15, verts, tris);            // torso
    capsule({-0.08, 0.95, 0}, {0.08, 0.95, 0}, 0.11, verts, tris);        // pelvis
    capsule({lean, 1.54, 0}, {lean, 1.64, 0}, 0.10, verts, tris);         // head

    const double arm_drop = 0.30 * wobble(0.08);
    const double forearm = 0.28 * wobble(0.08);
    for (double side : {-1.0, 1.0}) {
        const Vec3 shoulder{side * 0.21, 1.36, 0};
        if (pose == HumanoidPose::kStanding) {
            const Vec3 elbow{side * 0.26, 1.36 - arm_drop, 0.0};
            const Vec3 wrist{side * 0.29, elbow.y - forearm, 0.0};
            capsule(shoulder, elbow, 0.050, verts, tris);
            capsule(elbow, wrist, 0.045, verts, tris);
        } else {
            // forearm sweeps across the chest, clearly in front of the torso
            const Vec3 elbow{side * 0.24, 1.12, -0.10};
            const Vec3 wrist{-side * 0.08, 1.22, -0.24 * wobble(0.06)};
            capsule(shoulder, elbow, 0.050, verts, tris);
            capsule(elbow, wrist, 0.045, verts, tris);
        }
    }

    const double thigh = 0.43 * wobble(0.06);
    const double shin = 0.41 * wobble(0.06);
    for (double side : {-1.0, 1.0}) {
        const Vec3 hip{side * 0.09, 0.93, 0};
        const Vec3 knee{side * 0.11, 0.93 - thigh, 0.0};
        const Vec3 ankle{side * 0.11, std::max(0.93 - thigh - shin, 0.08), 0.0};
        capsule(hip, knee, 0.075, verts, tris);
        capsule(knee, ankle, 0.055, verts, tris);
        capsule(ankle, ankle + Vec3{0, -0.01, -0.14}, 0.050, verts, tris);  // foot, toes -z
    }

    return Mesh(std::move(verts), std::move(tris));
}

Mesh make_triangle_soup(std::uint64_t seed, int count, const Aabb& bounds) {
    if (count < 1) throw std::invalid_argument("triangle soup needs at least one triangle");
    if (bounds.empty()) throw std::invalid_argument("triangle soup needs non-empty bounds");
    Rng rng(seed);
    const auto sample = [&]() {
        return Vec3{rng.uniform(bounds.lo.x, bounds.hi.x), rng.uniform(bounds.lo.y, bounds.hi.y),
                    rng.uniform(bounds.lo.z, bounds.hi.z)};
    };
    std::vector<Vec3> verts;
    std::vector<Triangle> tris;
    verts.reserve(static_cast<std::size_t>(count) * 3);
    for (int i = 0; i < count; ++i) {
        const int base = static_cast<int>(verts.size());
        verts.push_back(sample());
        verts.push_back(sample());
        verts.push_back(sample());
        tris.push_back({base, base + 1, base + 2});
    }
    return Mesh(std::move(verts), std::move(tris));
}

}  // namespace mouldkit

#pragma once

#include <cstdint>

#include "mouldkit/math.hpp"
#include "mouldkit/mesh.hpp"

namespace mouldkit {

/// Watertight lat-long sphere. `segments` around the equator (>= 3),
/// `rings` from pole to pole (>= 2).
Mesh make_uv_sphere(const Vec3& center, double radius, int segments = 32, int rings = 16);

/// Axis-aligned box, 12 outward-facing triangles.
Mesh make_box(const Vec3& center, const Vec3& size);

/// Watertight capsule from `a` to `b` with hemispherical caps. When a == b
/// this degenerates to a sphere.
Mesh make_capsule(const Vec3& a, const Vec3& b, double radius,
                  int segments = 16, int cap_rings = 8);

enum class HumanoidPose {
    kStanding,     // arms hanging beside the torso
    kCrossedArms,  // forearms crossing in front of the chest (self-occluding)
};

/// Articulated capsule figure, standing along +y with feet near y = 0,
/// roughly 1.7 m tall, facing -z. The seed jitters limb proportions so a
/// set of figures exercises varied geometry deterministically. Watertight
/// by construction (a union of closed capsules, not a boolean merge).
Mesh make_humanoid(std::uint64_t seed, HumanoidPose pose = HumanoidPose::kStanding);

/// Random disconnected triangles inside `bounds`; stress shape for ray
/// casting and voxelization, not watertight.
Mesh make_triangle_soup(std::uint64_t seed, int count, const Aabb& bounds);

}  // namespace mouldkit

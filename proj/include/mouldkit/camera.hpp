#pragma once

#include "mouldkit/math.hpp"

namespace mouldkit {

/// Ray with unit direction. `at(t)` gives origin + t * direction.
struct Ray {
    Vec3 origin;
    Vec3 direction;

    Vec3 at(double t) const { return origin + direction * t; }
};

/// Pinhole camera. `pose` maps world coordinates into the camera frame,
/// where the camera sits at the origin looking down +z with +y pointing
/// down the image and +x to the right. Pixels are square; the sensor
/// height follows from the aspect ratio.
struct Camera {
    int width = 0;
    int height = 0;
    double sensor_width_mm = 0.0;
    double focal_length_mm = 0.0;
    RigidTransform pose;

    double pixel_size_mm() const { return sensor_width_mm / width; }
    double sensor_height_mm() const { return pixel_size_mm() * height; }

    /// Camera center expressed in world coordinates.
    Vec3 center_world() const { return pose.apply_inverse(Vec3{0.0, 0.0, 0.0}); }

    /// Ray through the center of pixel (u, v) in camera coordinates.
    /// The origin is the camera center (0,0,0). Throws std::out_of_range
    /// when (u, v) is outside [0, width) x [0, height).
    Ray pixel_ray(int u, int v) const;

    /// Same ray expressed in world coordinates.
    Ray pixel_ray_world(int u, int v) const;
};

/// 320x240 capture camera: 32 mm sensor, 60 mm focal length, identity pose.
Camera standard_camera();

/// Square-framed camera derived from `base`: keeps the focal length and
/// camera center, rotates the view axis toward the center of `world_bounds`
/// projected footprint, and shrinks the sensor to the tightest square that
/// still contains every corner of the box. The result is n x n pixels.
/// Throws std::invalid_argument when the box is empty or reaches behind
/// the camera.
Camera frame_square(const Camera& base, const Aabb& world_bounds, int n);

class Rng;

/// Subject distance draw for staging a capture: Normal(mean, stddev),
/// clamped to at least 1 m so the subject can never land behind the camera.
double sample_subject_distance(Rng& rng, double mean = 8.0, double stddev = 1.0);

/// Translation-only world-to-camera pose that puts `subject_anchor` on the
/// optical axis at `distance` meters. Anchoring a sequence by its first
/// frame keeps the camera fixed while the subject moves.
RigidTransform subject_placement(const Vec3& subject_anchor, double distance);

}  // namespace mouldkit

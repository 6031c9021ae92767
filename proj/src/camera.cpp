#include "mouldkit/camera.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mouldkit/random.hpp"

namespace mouldkit {

Ray Camera::pixel_ray(int u, int v) const {
    if (u < 0 || u >= width || v < 0 || v >= height)
        throw std::out_of_range("pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                                ") outside " + std::to_string(width) + "x" +
                                std::to_string(height) + " image");
    const double pixel = pixel_size_mm();
    const double sx = (u + 0.5) * pixel - 0.5 * sensor_width_mm;
    const double sy = (v + 0.5) * pixel - 0.5 * sensor_height_mm();
    return Ray{Vec3{0.0, 0.0, 0.0}, normalized(Vec3{sx, sy, focal_length_mm})};
}

Ray Camera::pixel_ray_world(int u, int v) const {
    const Ray cam = pixel_ray(u, v);
    return Ray{pose.apply_inverse(cam.origin), pose.apply_inverse_direction(cam.direction)};
}

Camera standard_camera() {
    Camera cam;
    cam.width = 320;
    cam.height = 240;
    cam.sensor_width_mm = 32.0;
    cam.focal_length_mm = 60.0;
    return cam;
}

namespace {

// Projects a camera-frame point onto the sensor plane (mm). Requires z > 0.
void project_to_sensor(const Vec3& p, double focal, double& sx, double& sy) {
    sx = focal * p.x / p.z;
    sy = focal * p.y / p.z;
}

}  // namespace

Camera frame_square(const Camera& base, const Aabb& world_bounds, int n) {
    if (n <= 0) throw std::invalid_argument("frame_square: pixel count must be positive");
    if (world_bounds.empty()) throw std::invalid_argument("frame_square: empty bounds");

    const auto corners = world_bounds.corners();
    double min_sx = 0.0, max_sx = 0.0, min_sy = 0.0, max_sy = 0.0;
    bool first = true;
    for (const Vec3& corner : corners) {
        const Vec3 p = base.pose.apply(corner);
        if (p.z <= 0.0)
            throw std::invalid_argument("frame_square: bounds reach behind the camera");
        double sx, sy;
        project_to_sensor(p, base.focal_length_mm, sx, sy);
        if (first) {
            min_sx = max_sx = sx;
            min_sy = max_sy = sy;
            first = false;
        } else {
            min_sx = std::min(min_sx, sx);
            max_sx = std::max(max_sx, sx);
            min_sy = std::min(min_sy, sy);
            max_sy = std::max(max_sy, sy);
        }
    }

    // Rotate the camera so the ray through the footprint center becomes the
    // principal axis; the crop is then symmetric about the sensor origin.
    const double cx = 0.5 * (min_sx + max_sx);
    const double cy = 0.5 * (min_sy + max_sy);
    const Vec3 toward_center = normalized(Vec3{cx, cy, base.focal_length_mm});
    const Mat3 adjust = rotation_between(toward_center, Vec3{0.0, 0.0, 1.0});

    Camera framed = base;
    framed.width = n;
    framed.height = n;
    framed.pose.rotation = adjust * base.pose.rotation;
    framed.pose.translation = adjust * base.pose.translation;

    double half = 0.0;
    for (const Vec3& corner : corners) {
        const Vec3 p = framed.pose.apply(corner);
        if (p.z <= 0.0)
            throw std::invalid_argument("frame_square: bounds reach behind the camera");
        double sx, sy;
        project_to_sensor(p, framed.focal_length_mm, sx, sy);
        half = std::max(half, std::max(std::abs(sx), std::abs(sy)));
    }
    if (half <= 0.0) throw std::invalid_argument("frame_square: degenerate footprint");
    framed.sensor_width_mm = 2.0 * half;
    return framed;
}

double sample_subject_distance(Rng& rng, double mean, double stddev) {
    return std::max(rng.normal(mean, stddev), 1.0);
}

RigidTransform subject_placement(const Vec3& subject_anchor, double distance) {
    if (distance <= 0.0)
        throw std::invalid_argument("subject_placement: distance must be positive");
    RigidTransform pose;
    pose.translation = Vec3{0.0, 0.0, distance} - subject_anchor;
    return pose;
}

}  // namespace mouldkit

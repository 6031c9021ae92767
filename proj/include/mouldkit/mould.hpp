#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mouldkit/camera.hpp"
#include "mouldkit/mesh.hpp"
#include "mouldkit/point_cloud.hpp"

namespace mouldkit {

/// Depth-map pair describing a shape from one viewpoint. `visible` holds
/// the nearest surface crossing per pixel ray and `hidden` the farthest,
/// both as radial distance from the camera center minus `z_orig` (the
/// radial distance of the shape's centroid). Pixels whose ray misses the
/// shape store `background_distance` in both maps, a virtual plane behind
/// the shape, so every value lies in [-z_orig, background_distance] unless
/// real geometry crosses the plane (flagged, never clamped).
struct MouldPair {
    int width = 0;
    int height = 0;
    double z_orig = 0.0;
    double background_distance = 0.0;
    double epsilon = 0.0;
    Camera camera;
    std::vector<double> visible;  // row-major, height * width
    std::vector<double> hidden;

    struct Warnings {
        bool all_background = false;   // no ray hit the shape
        bool non_watertight = false;   // open surface, hidden map is unreliable
        bool range_violation = false;  // geometry beyond the background plane
    } warnings;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    double visible_at(int u, int v) const { return visible[static_cast<std::size_t>(v) * width + u]; }
    double hidden_at(int u, int v) const { return hidden[static_cast<std::size_t>(v) * width + u]; }
};

/// Minimal surface interface for encoding: reports the nearest and farthest
/// ray crossings past kMinHitT. Lets tests drive the encoder with analytic
/// shapes instead of a triangle mesh.
class RayCaster {
public:
    virtual ~RayCaster() = default;
    /// On a hit, writes the nearest and farthest ray parameters and returns
    /// true; t_near == t_far for a single crossing.
    virtual bool cast(const Ray& ray, double& t_near, double& t_far) const = 0;
};

/// Encodes `mesh` through `camera`. The mesh is moved into the camera frame,
/// every pixel-center ray is traced for its nearest and farthest crossings,
/// and depths are centered on the centroid distance. Throws
/// std::invalid_argument for an empty mesh, a non-positive background
/// distance, epsilon outside (0, background_distance), or a centroid not in
/// front of the camera.
MouldPair encode(const Mesh& mesh, const Camera& camera,
                 double background_distance = 1.5, double epsilon = 0.01);

/// Encoder core shared with tests: casts one ray per pixel of `camera`
/// against `caster` (camera-frame rays) and centers depths on `z_orig`.
MouldPair encode_with_caster(const RayCaster& caster, const Camera& camera, double z_orig,
                             double background_distance = 1.5, double epsilon = 0.01,
                             bool watertight = true);

/// Foreground test used everywhere: a depth is a surface sample when it
/// lies at least epsilon in front of the background plane.
inline bool is_foreground(double depth, double background_distance, double epsilon) {
    return depth <= background_distance - epsilon;
}

/// Per-pixel foreground mask (1 = surface sample) for one of the two maps.
/// A negative epsilon means "use the pair's own"; otherwise it must lie in
/// (0, background_distance) or std::invalid_argument is thrown.
std::vector<std::uint8_t> foreground_mask(const MouldPair& pair, PointOrigin which,
                                          double epsilon = -1.0);

struct DecodeOptions {
    double epsilon = -1.0;    // negative: use the pair's own epsilon
    bool world_space = true;  // false keeps points in the camera frame
    bool normals = true;
};

/// Reconstructs the oriented point cloud: every foreground pixel of the
/// visible map, then every foreground pixel of the hidden map, both in
/// row-major order. Points lie on their pixel ray at radial distance
/// depth + z_orig. Normals come from screen-space finite differences of
/// the reconstructed points, oriented toward the camera for visible points
/// and away from it for hidden points. Provenance is recorded per point.
PointCloud decode(const MouldPair& pair, const DecodeOptions& options = {});

/// Structural checks for a pair (typically one read back from disk).
/// Returns human-readable problems; empty means the pair is consistent.
std::vector<std::string> validate(const MouldPair& pair);

}  // namespace mouldkit

#include "mouldkit/mould.hpp"

#include <cmath>
#include <stdexcept>

#include "mouldkit/bvh.hpp"
#include "mouldkit/parallel.hpp"

namespace mouldkit {

namespace {

class BvhCaster : public RayCaster {
public:
    explicit BvhCaster(const Mesh& mesh) : bvh_(mesh) {}

    bool cast(const Ray& ray, double& t_near, double& t_far) const override {
        const auto near = bvh_.closest_hit(ray);
        if (!near) return false;
        const auto far = bvh_.farthest_hit(ray);
        t_near = near->t;
        t_far = far ? far->t : near->t;
        return true;
    }

private:
    Bvh bvh_;
};

void check_encode_params(const Camera& camera, double background_distance, double epsilon) {
    if (camera.width <= 0 || camera.height <= 0)
        throw std::invalid_argument("encode: camera has no pixels");
    if (camera.sensor_width_mm <= 0.0 || camera.focal_length_mm <= 0.0)
        throw std::invalid_argument("encode: camera sensor and focal length must be positive");
    if (background_distance <= 0.0)
        throw std::invalid_argument("encode: background distance must be positive");
    if (epsilon <= 0.0 || epsilon >= background_distance)
        throw std::invalid_argument("encode: epsilon must lie in (0, background distance)");
}

}  // namespace

MouldPair encode_with_caster(const RayCaster& caster, const Camera& camera, double z_orig,
                             double background_distance, double epsilon, bool watertight) {
    check_encode_params(camera, background_distance, epsilon);
    if (z_orig <= 0.0)
        throw std::invalid_argument("encode: centroid must be in front of the camera");

    MouldPair pair;
    pair.width = camera.width;
    pair.height = camera.height;
    pair.z_orig = z_orig;
    pair.background_distance = background_distance;
    pair.epsilon = epsilon;
    pair.camera = camera;
    pair.visible.assign(pair.pixel_count(), background_distance);
    pair.hidden.assign(pair.pixel_count(), background_distance);
    pair.warnings.non_watertight = !watertight;

    // Rays are cast in the camera frame, so pixel_ray (origin at the camera
    // center) applies directly and the ray parameter is the radial distance.
    std::vector<std::uint8_t> row_hit(camera.height, 0);
    std::vector<std::uint8_t> row_range(camera.height, 0);
    parallel_for(0, camera.height, [&](int v) {
        bool hit_any = false;
        bool out_of_range = false;
        for (int u = 0; u < camera.width; ++u) {
            const Ray ray = camera.pixel_ray(u, v);
            double t_near, t_far;
            if (!caster.cast(ray, t_near, t_far)) continue;
            hit_any = true;
            const std::size_t idx = static_cast<std::size_t>(v) * camera.width + u;
            pair.visible[idx] = t_near - z_orig;
            pair.hidden[idx] = t_far - z_orig;
            if (pair.hidden[idx] > background_distance) out_of_range = true;
        }
        row_hit[v] = hit_any ? 1 : 0;
        row_range[v] = out_of_range ? 1 : 0;
    });

    bool any_hit = false;
    bool any_range = false;
    for (int v = 0; v < camera.height; ++v) {
        any_hit = any_hit || row_hit[v] != 0;
        any_range = any_range || row_range[v] != 0;
    }
    pair.warnings.all_background = !any_hit;
    pair.warnings.range_violation = any_range;
    return pair;
}

MouldPair encode(const Mesh& mesh, const Camera& camera,
                 double background_distance, double epsilon) {
    check_encode_params(camera, background_distance, epsilon);
    if (mesh.empty()) throw std::invalid_argument("encode: empty mesh");

    const Mesh in_camera = mesh.transformed(camera.pose);
    const double z_orig = norm(in_camera.centroid());
    if (camera.pose.apply(mesh.centroid()).z <= 0.0)
        throw std::invalid_argument("encode: centroid must be in front of the camera");

    const BvhCaster caster(in_camera);
    return encode_with_caster(caster, camera, z_orig, background_distance, epsilon,
                              mesh.is_watertight());
}

namespace {

double resolve_epsilon(const MouldPair& pair, double epsilon) {
    const double eps = epsilon < 0.0 ? pair.epsilon : epsilon;
    if (eps <= 0.0 || eps >= pair.background_distance)
        throw std::invalid_argument("epsilon must lie in (0, background distance)");
    return eps;
}

}  // namespace

std::vector<std::uint8_t> foreground_mask(const MouldPair& pair, PointOrigin which,
                                          double epsilon) {
    const double eps = resolve_epsilon(pair, epsilon);
    const std::vector<double>& depth = which == PointOrigin::kVisible ? pair.visible : pair.hidden;
    std::vector<std::uint8_t> mask(depth.size());
    for (std::size_t i = 0; i < depth.size(); ++i)
        mask[i] = is_foreground(depth[i], pair.background_distance, eps) ? 1 : 0;
    return mask;
}

namespace {

// Screen-space derivative along one axis from already reconstructed points:
// central difference when both neighbors are surface samples, one-sided
// otherwise, nullopt when isolated.
bool axis_derivative(const std::vector<Vec3>& points, const std::vector<std::uint8_t>& mask,
                     int width, int height, int u, int v, int du, int dv, Vec3& out) {
    const auto at = [&](int uu, int vv) { return static_cast<std::size_t>(vv) * width + uu; };
    const bool has_prev = u - du >= 0 && v - dv >= 0 && u - du < width && v - dv < height &&
                          mask[at(u - du, v - dv)];
    const bool has_next = u + du < width && v + dv < height && u + du >= 0 && v + dv >= 0 &&
                          mask[at(u + du, v + dv)];
    const std::size_t here = at(u, v);
    if (has_prev && has_next) {
        out = (points[at(u + du, v + dv)] - points[at(u - du, v - dv)]) * 0.5;
        return true;
    }
    if (has_next) {
        out = points[at(u + du, v + dv)] - points[here];
        return true;
    }
    if (has_prev) {
        out = points[here] - points[at(u - du, v - dv)];
        return true;
    }
    return false;
}

}  // namespace

PointCloud decode(const MouldPair& pair, const DecodeOptions& options) {
    if (pair.width <= 0 || pair.height <= 0)
        throw std::invalid_argument("decode: pair has no pixels");
    if (pair.visible.size() != pair.pixel_count() || pair.hidden.size() != pair.pixel_count())
        throw std::invalid_argument("decode: depth buffers do not match the pixel grid");

    const double epsilon = resolve_epsilon(pair, options.epsilon);
    PointCloud cloud;
    const bool hidden_pass[2] = {false, true};
    for (bool use_hidden : hidden_pass) {
        const std::vector<double>& depth = use_hidden ? pair.hidden : pair.visible;
        const auto mask = foreground_mask(
            pair, use_hidden ? PointOrigin::kHidden : PointOrigin::kVisible, epsilon);

        // Reconstruct every surface pixel in the camera frame first so the
        // normal derivatives can look at neighbors.
        std::vector<Vec3> points(pair.pixel_count());
        std::vector<Vec3> directions(pair.pixel_count());
        for (int v = 0; v < pair.height; ++v) {
            for (int u = 0; u < pair.width; ++u) {
                const std::size_t idx = static_cast<std::size_t>(v) * pair.width + u;
                if (!mask[idx]) continue;
                const Ray ray = pair.camera.pixel_ray(u, v);
                directions[idx] = ray.direction;
                points[idx] = ray.direction * (depth[idx] + pair.z_orig);
            }
        }

        for (int v = 0; v < pair.height; ++v) {
            for (int u = 0; u < pair.width; ++u) {
                const std::size_t idx = static_cast<std::size_t>(v) * pair.width + u;
                if (!mask[idx]) continue;
                Vec3 p = points[idx];
                if (options.world_space) p = pair.camera.pose.apply_inverse(p);
                cloud.points.push_back(p);
                cloud.provenance.push_back(use_hidden ? PointOrigin::kHidden
                                                      : PointOrigin::kVisible);
                if (!options.normals) continue;

                // Hidden surfaces face away from the camera, visible ones
                // toward it; the view ray settles the sign either way.
                const Vec3 view = directions[idx];
                Vec3 normal = use_hidden ? view : view * -1.0;
                Vec3 ddu, ddv;
                if (axis_derivative(points, mask, pair.width, pair.height, u, v, 1, 0, ddu) &&
                    axis_derivative(points, mask, pair.width, pair.height, u, v, 0, 1, ddv)) {
                    const Vec3 raw = cross(ddu, ddv);
                    if (norm(raw) > 1e-12) {
                        normal = normalized(raw);
                        const double toward = dot(normal, view);
                        if (use_hidden ? toward < 0.0 : toward > 0.0) normal = normal * -1.0;
                    }
                }
                if (options.world_space)
                    normal = pair.camera.pose.apply_inverse_direction(normal);
                cloud.normals.push_back(normal);
            }
        }
    }
    return cloud;
}

std::vector<std::string> validate(const MouldPair& pair) {
    std::vector<std::string> problems;
    const auto add = [&](const std::string& msg) { problems.push_back(msg); };

    if (pair.width <= 0 || pair.height <= 0) {
        add("pixel grid is empty");
        return problems;
    }
    if (pair.visible.size() != pair.pixel_count())
        add("visible map size does not match the pixel grid");
    if (pair.hidden.size() != pair.pixel_count())
        add("hidden map size does not match the pixel grid");
    if (!problems.empty()) return problems;

    if (pair.background_distance <= 0.0) add("background distance must be positive");
    if (pair.epsilon <= 0.0 || pair.epsilon >= pair.background_distance)
        add("epsilon must lie in (0, background distance)");
    if (pair.z_orig <= 0.0) add("z_orig must be positive");
    if (pair.camera.width != pair.width || pair.camera.height != pair.height)
        add("camera resolution does not match the pixel grid");

    constexpr double kSlack = 1e-9;
    bool below_range = false, above_range = false, order_violated = false, mask_mismatch = false;
    for (std::size_t i = 0; i < pair.pixel_count(); ++i) {
        const double vis = pair.visible[i];
        const double hid = pair.hidden[i];
        if (vis < -pair.z_orig - kSlack || hid < -pair.z_orig - kSlack) below_range = true;
        if (vis > pair.background_distance + kSlack || hid > pair.background_distance + kSlack)
            above_range = true;
        if (hid < vis - kSlack) order_violated = true;
        const bool vis_fg = is_foreground(vis, pair.background_distance, pair.epsilon);
        const bool hid_fg = is_foreground(hid, pair.background_distance, pair.epsilon);
        // a hidden surface sample without a visible one means the maps
        // disagree about which rays hit the shape
        if (hid_fg && !vis_fg) mask_mismatch = true;
    }
    if (below_range) add("depth below -z_orig");
    if (above_range && !pair.warnings.range_violation)
        add("depth beyond the background plane without a range warning");
    if (order_violated) add("hidden map closer than visible map");
    if (mask_mismatch) add("hidden map has surface pixels the visible map lacks");
    return problems;
}

}  // namespace mouldkit

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mouldkit/bvh.hpp"
#include "mouldkit/kd_tree.hpp"
#include "mouldkit/metrics.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/primitives.hpp"
#include "mouldkit/random.hpp"
#include "oracles.hpp"

using namespace mouldkit;

namespace {

Camera framed_on(const Mesh& mesh, int n) {
    return frame_square(standard_camera(), mesh.bounds(), n);
}

Mesh sphere_at_8m(int segments = 48, int rings = 24) {
    return make_uv_sphere({0.0, 0.0, 8.0}, 0.5, segments, rings);
}

/// World-space pixel footprint at the subject: one pixel of sensor,
/// projected out to `distance`.
double footprint_at(const Camera& camera, double distance) {
    return camera.pixel_size_mm() / camera.focal_length_mm * distance;
}

}  // namespace

TEST_CASE("analytic sphere: principal pixel reads the exact chord") {
    // Odd resolution so the center pixel ray runs down the optical axis:
    // crossings at 7.5 m and 8.5 m, centered on z_orig = 8.
    const oracle::SphereCaster sphere({0.0, 0.0, 8.0}, 0.5);
    const Camera camera = framed_on(sphere_at_8m(), 129);
    const MouldPair pair = encode_with_caster(sphere, camera, 8.0);
    CHECK(pair.visible_at(64, 64) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(pair.hidden_at(64, 64) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(pair.warnings.all_background);
    CHECK(pair.width == 129);
    CHECK(pair.pixel_count() * 2 == 2u * 129u * 129u);  // D = 2N^2 scalars
}

TEST_CASE("mesh encode matches hand-computed box depths") {
    const Mesh box = make_box({0.0, 0.0, 8.0}, {1.0, 1.0, 1.0});
    const Camera camera = framed_on(box, 65);
    const MouldPair pair = encode(box, camera);
    // Symmetric box: centroid exactly (0,0,8), faces at 7.5 and 8.5.
    CHECK(pair.z_orig == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(pair.visible_at(32, 32) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(pair.hidden_at(32, 32) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("background pixels carry the background distance exactly") {
    const Mesh mesh = sphere_at_8m();
    const MouldPair pair = encode(mesh, framed_on(mesh, 64), 1.5, 0.01);
    // The sphere is inscribed in its square crop, so the corners miss.
    CHECK(pair.visible_at(0, 0) == 1.5);
    CHECK(pair.hidden_at(0, 0) == 1.5);
    CHECK(pair.visible_at(63, 63) == 1.5);
    int background = 0;
    for (std::size_t i = 0; i < pair.pixel_count(); ++i) {
        if (pair.visible[i] == 1.5) {
            ++background;
            CHECK(pair.hidden[i] == 1.5);
        }
    }
    CHECK(background > 0);

    // A custom background plane value is carried verbatim.
    const MouldPair far_bg = encode(mesh, framed_on(mesh, 32), 2.25, 0.01);
    CHECK(far_bg.visible_at(0, 0) == 2.25);
}

TEST_CASE("foreground disc area matches the projected silhouette") {
    // The framed sphere silhouette is a disc of sensor radius
    // focal * r / sqrt(d^2 - r^2); compare the mask area against it.
    const Mesh mesh = sphere_at_8m(96, 48);
    const int n = 129;
    const MouldPair pair = encode(mesh, framed_on(mesh, n));
    const auto mask = foreground_mask(pair, PointOrigin::kVisible);
    const double pixels = static_cast<double>(std::count(mask.begin(), mask.end(), 1));
    const double silhouette_mm = 60.0 * 0.5 / std::sqrt(8.0 * 8.0 - 0.5 * 0.5);
    const double disc_fraction =
        3.14159265358979323846 * silhouette_mm * silhouette_mm /
        (pair.camera.sensor_width_mm * pair.camera.sensor_width_mm);
    CHECK(pixels / (static_cast<double>(n) * n) ==
          doctest::Approx(disc_fraction).epsilon(0.02));
}

TEST_CASE("both masks are identical and ordered") {
    const Mesh mesh = make_humanoid(4, HumanoidPose::kCrossedArms);
    Camera base = standard_camera();
    base.pose = subject_placement(mesh.centroid(), 8.0);
    const MouldPair pair = encode(mesh, frame_square(base, mesh.bounds(), 96));
    const auto vis_mask = foreground_mask(pair, PointOrigin::kVisible);
    const auto hid_mask = foreground_mask(pair, PointOrigin::kHidden);
    REQUIRE(vis_mask.size() == hid_mask.size());
    CHECK(std::equal(vis_mask.begin(), vis_mask.end(), hid_mask.begin()));
    int foreground = 0;
    for (std::size_t i = 0; i < pair.pixel_count(); ++i) {
        if (!vis_mask[i]) continue;
        ++foreground;
        CHECK(pair.visible[i] <= pair.hidden[i]);
        CHECK(pair.visible[i] >= -pair.z_orig - 1e-9);
        CHECK(pair.hidden[i] <= pair.background_distance - pair.epsilon);
    }
    CHECK(foreground > 0);
}

TEST_CASE("encode validates its parameters") {
    const Mesh mesh = sphere_at_8m();
    const Camera camera = framed_on(mesh, 32);
    CHECK_THROWS_AS(encode(Mesh(), camera), std::invalid_argument);
    CHECK_THROWS_AS(encode(mesh, camera, 0.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(encode(mesh, camera, -1.5, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(encode(mesh, camera, 1.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(encode(mesh, camera, 1.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(encode(mesh, camera, 1.5, 2.0), std::invalid_argument);
    // Centroid behind the camera: slide the camera past the subject.
    Camera behind = camera;
    behind.pose = RigidTransform::identity();
    behind.pose.translation = {0.0, 0.0, -16.0};
    CHECK_THROWS_AS(encode(mesh, behind), std::invalid_argument);
}

TEST_CASE("warnings flag degenerate captures without corrupting data") {
    SUBCASE("all background") {
        // Narrow the sensor so the whole subject falls outside the crop.
        Camera miss = standard_camera();
        miss.width = 16;
        miss.height = 16;
        miss.sensor_width_mm = 0.05;
        const Mesh mesh = make_box({1.0, 1.0, 8.0}, {0.2, 0.2, 0.2});
        Camera posed = miss;
        posed.pose = subject_placement(Vec3{0.0, 0.0, 8.0}, 8.0);  // aims past the box
        const MouldPair pair = encode(mesh, posed);
        CHECK(pair.warnings.all_background);
        for (std::size_t i = 0; i < pair.pixel_count(); ++i) {
            CHECK(pair.visible[i] == pair.background_distance);
            CHECK(pair.hidden[i] == pair.background_distance);
        }
        CHECK(decode(pair).empty());
        CHECK(validate(pair).empty());
    }
    SUBCASE("non watertight input") {
        Aabb region;
        region.expand({-0.3, -0.3, 7.7});
        region.expand({0.3, 0.3, 8.3});
        const Mesh soup = make_triangle_soup(2, 60, region);
        const MouldPair pair = encode(soup, framed_on(soup, 48));
        CHECK(pair.warnings.non_watertight);
        CHECK(validate(pair).empty());
    }
    SUBCASE("geometry beyond the background plane") {
        // A capsule stretched along the axis: its far cap sits more than
        // L = 0.8 m behind the centroid distance.
        const Mesh rod = make_capsule({0, 0, 7.0}, {0, 0, 10.5}, 0.25, 24, 12);
        const MouldPair pair = encode(rod, framed_on(rod, 65), 0.8, 0.01);
        CHECK(pair.warnings.range_violation);
        double max_hidden = -1e9;
        for (double z : pair.hidden) max_hidden = std::max(max_hidden, z);
        CHECK(max_hidden > pair.background_distance);  // never clamped
        const auto problems = validate(pair);
        CHECK(problems.empty());  // warned overflow is legal
    }
}

TEST_CASE("decode reconstructs points on their pixel rays") {
    const Mesh mesh = sphere_at_8m();
    const MouldPair pair = encode(mesh, framed_on(mesh, 65));
    DecodeOptions camera_frame;
    camera_frame.world_space = false;
    const PointCloud cloud = decode(pair, camera_frame);
    REQUIRE(!cloud.empty());
    REQUIRE(cloud.has_provenance());
    REQUIRE(cloud.has_normals());

    const auto mask = foreground_mask(pair, PointOrigin::kVisible);
    const std::size_t foreground =
        static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
    CHECK(cloud.size() == 2 * foreground);

    // First half visible, second half hidden, row-major within each.
    for (std::size_t i = 0; i < foreground; ++i) {
        CHECK(cloud.provenance[i] == PointOrigin::kVisible);
        CHECK(cloud.provenance[foreground + i] == PointOrigin::kHidden);
    }

    // Every camera-frame point lies at radial distance depth + z_orig.
    std::size_t k = 0;
    for (int v = 0; v < pair.height && k < foreground; ++v) {
        for (int u = 0; u < pair.width && k < foreground; ++u) {
            if (!mask[static_cast<std::size_t>(v) * pair.width + u]) continue;
            const double expected = pair.visible_at(u, v) + pair.z_orig;
            CHECK(norm(cloud.points[k]) == doctest::Approx(expected).epsilon(1e-12));
            ++k;
        }
    }

    // World-space decode is the camera-frame cloud pushed through the pose.
    const PointCloud world = decode(pair);
    const Vec3 sample = pair.camera.pose.apply_inverse(cloud.points[0]);
    CHECK(norm(world.points[0] - sample) < 1e-12);
}

TEST_CASE("decoded points land on the source mesh") {
    const Mesh mesh = make_humanoid(6);
    Camera base = standard_camera();
    base.pose = subject_placement(mesh.centroid(), 8.0);
    const MouldPair pair = encode(mesh, frame_square(base, mesh.bounds(), 64));
    const PointCloud cloud = decode(pair, {.normals = false});
    REQUIRE(!cloud.empty());
    // Decoded points are exact ray hits, so they sit on mesh triangles.
    for (std::size_t i = 0; i < cloud.size(); i += 5) {
        CHECK(oracle::point_mesh_distance(cloud.points[i], mesh) < 1e-9);
    }
}

TEST_CASE("decoded normals are unit, outward, and split by provenance") {
    const Mesh mesh = sphere_at_8m(64, 32);
    const MouldPair pair = encode(mesh, framed_on(mesh, 97));
    const PointCloud cloud = decode(pair);
    const Vec3 camera_center = pair.camera.center_world();
    const Vec3 sphere_center{0.0, 0.0, 8.0};
    std::size_t checked = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(norm(cloud.normals[i]) == doctest::Approx(1.0).epsilon(1e-9));
        const Vec3 view = normalized(cloud.points[i] - camera_center);
        const Vec3 outward = normalized(cloud.points[i] - sphere_center);
        const double facing = dot(outward, view);
        if (cloud.provenance[i] == PointOrigin::kVisible) {
            CHECK(dot(cloud.normals[i], view) < 1e-9);
        } else {
            CHECK(dot(cloud.normals[i], view) > -1e-9);
        }
        // Away from the silhouette the screen-space normal tracks the
        // true radial normal closely.
        if (std::abs(facing) > 0.5) {
            ++checked;
            CHECK(dot(cloud.normals[i], outward) > 0.9);
        }
    }
    CHECK(checked > cloud.size() / 4);
}

TEST_CASE("epsilon override widens or narrows the foreground") {
    const Mesh mesh = sphere_at_8m();
    const MouldPair pair = encode(mesh, framed_on(mesh, 48), 1.5, 0.01);
    const auto strict = foreground_mask(pair, PointOrigin::kVisible, 1.4);
    const auto loose = foreground_mask(pair, PointOrigin::kVisible, 0.001);
    const auto defaulted = foreground_mask(pair, PointOrigin::kVisible);
    const auto own = foreground_mask(pair, PointOrigin::kVisible, pair.epsilon);
    CHECK(std::equal(defaulted.begin(), defaulted.end(), own.begin()));
    int strict_count = static_cast<int>(std::count(strict.begin(), strict.end(), 1));
    int loose_count = static_cast<int>(std::count(loose.begin(), loose.end(), 1));
    CHECK(strict_count <= loose_count);
    CHECK_THROWS_AS(foreground_mask(pair, PointOrigin::kVisible, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(foreground_mask(pair, PointOrigin::kVisible, 0.0), std::invalid_argument);

    DecodeOptions options;
    options.epsilon = 2.0;
    CHECK_THROWS_AS(decode(pair, options), std::invalid_argument);
}

TEST_CASE("validate reports corrupted pairs") {
    const Mesh mesh = sphere_at_8m();
    MouldPair pair = encode(mesh, framed_on(mesh, 33));
    REQUIRE(validate(pair).empty());

    SUBCASE("size mismatch") {
        pair.visible.pop_back();
        CHECK_FALSE(validate(pair).empty());
    }
    SUBCASE("hidden in front of visible") {
        const auto mask = foreground_mask(pair, PointOrigin::kVisible);
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask[i]) {
                std::swap(pair.visible[i], pair.hidden[i]);
                pair.visible[i] += 0.05;
                pair.hidden[i] -= 0.05;
                break;
            }
        }
        CHECK_FALSE(validate(pair).empty());
    }
    SUBCASE("depth below the valid range") {
        pair.visible[0] = -pair.z_orig - 0.5;
        CHECK_FALSE(validate(pair).empty());
    }
    SUBCASE("unflagged overflow past the background plane") {
        const auto mask = foreground_mask(pair, PointOrigin::kVisible);
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask[i]) {
                pair.hidden[i] = pair.background_distance + 0.25;
                break;
            }
        }
        CHECK_FALSE(validate(pair).empty());
    }
    SUBCASE("mask mismatch between the maps") {
        for (std::size_t i = 0; i < pair.pixel_count(); ++i) {
            if (pair.visible[i] == pair.background_distance) {
                pair.hidden[i] = 0.0;  // hidden foreground, visible background
                break;
            }
        }
        CHECK_FALSE(validate(pair).empty());
    }
    SUBCASE("non positive parameters") {
        pair.epsilon = 0.0;
        CHECK_FALSE(validate(pair).empty());
    }
}

TEST_CASE("round-trip error shrinks with resolution and plateaus above zero") {
    const Mesh mesh = make_humanoid(11, HumanoidPose::kCrossedArms);
    Camera base = standard_camera();
    base.pose = subject_placement(mesh.centroid(), 8.0);
    const PointCloud gt = sample_surface(mesh, 12000, 5);
    std::vector<double> errors;
    for (int n : {32, 64, 128}) {
        const MouldPair pair = encode(mesh, frame_square(base, mesh.bounds(), n));
        errors.push_back(chamfer(decode(pair, {.normals = false}), gt));
    }
    CHECK(errors[0] > errors[1]);
    CHECK(errors[1] > errors[2]);
    CHECK(errors[2] > 0.0);
    // Convergence slows as the self-occluded surface dominates what is left.
    CHECK(errors[1] - errors[2] < errors[0] - errors[1]);
}

TEST_CASE("convex completeness: the decoded cloud covers the reachable surface") {
    // Every surface point facing the camera (or facing directly away) must
    // have a decoded neighbor nearby. In the pixel-grid interior the gap is
    // set by the footprint stretched by incidence; inside the silhouette
    // band the chord geometry of the sphere caps it at sqrt(2 r fp).
    const Mesh mesh = sphere_at_8m(96, 48);
    const int n = 128;
    const MouldPair pair = encode(mesh, framed_on(mesh, n));
    const PointCloud decoded = decode(pair, {.normals = false});
    REQUIRE(!decoded.empty());
    const KdIndex index(decoded.points);

    const Vec3 center{0.0, 0.0, 8.0};
    const Vec3 camera_center = pair.camera.center_world();
    const double fp = footprint_at(pair.camera, 8.0);
    const double silhouette_cap = std::sqrt(2.0 * 0.5 * fp) + fp;
    const auto samples = oracle::analytic_sphere_samples(center, 0.5, 4000, 21);
    for (const Vec3& s : samples) {
        const Vec3 outward = normalized(s - center);
        const Vec3 view = normalized(s - camera_center);
        const double cosine = std::abs(dot(outward, view));
        const double gap = index.nearest_distance(s);
        if (cosine >= 0.2) {
            CHECK(gap <= fp * (1.0 / cosine + 1.0));
        } else {
            CHECK(gap <= silhouette_cap);
        }
    }
}

TEST_CASE("randomized encodes keep every pair invariant") {
    Rng rng(99);
    for (int run = 0; run < 25; ++run) {
        const Mesh mesh = (run % 3 == 0)
                              ? make_uv_sphere({0, 0, 0}, 0.3 + 0.4 * rng.uniform(), 24, 12)
                              : make_humanoid(static_cast<std::uint64_t>(run),
                                              run % 2 ? HumanoidPose::kCrossedArms
                                                      : HumanoidPose::kStanding);
        Camera base = standard_camera();
        base.pose = subject_placement(mesh.centroid(), 6.0 + 4.0 * rng.uniform());
        const int n = 24 + static_cast<int>(rng.uniform() * 40.0);
        const double bg = 1.2 + rng.uniform();
        const double eps = 0.005 + 0.02 * rng.uniform();
        const MouldPair pair =
            encode(mesh, frame_square(base, mesh.bounds(), n), bg, eps);
        CHECK(validate(pair).empty());
    }
}

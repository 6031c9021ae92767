#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mouldkit/kd_tree.hpp"
#include "mouldkit/metrics.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/primitives.hpp"
#include "mouldkit/random.hpp"
#include "oracles.hpp"

using namespace mouldkit;

namespace {

std::vector<Vec3> random_points(std::size_t count, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    std::vector<Vec3> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        points.push_back({rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                          rng.uniform(-scale, scale)});
    return points;
}

PointCloud as_cloud(std::vector<Vec3> points) {
    PointCloud cloud;
    cloud.points = std::move(points);
    return cloud;
}

}  // namespace

TEST_CASE("kd-tree nearest neighbor equals a linear scan, ties included") {
    auto points = random_points(300, 41);
    // Duplicates and near-duplicates stress the tie rule.
    points.push_back(points[17]);
    points.push_back(points[17]);
    points.push_back(points[0] + Vec3{1e-15, 0, 0});
    const KdIndex index(points);
    Rng rng(43);
    for (int q = 0; q < 800; ++q) {
        Vec3 query{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
        if (q % 5 == 0) query = points[static_cast<std::size_t>(rng.index(points.size()))];
        int best = -1;
        double best_sq = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double d = squared_norm(points[i] - query);
            if (d < best_sq) {
                best_sq = d;
                best = static_cast<int>(i);
            }
        }
        double kd_distance = 0.0;
        const int kd_best = index.nearest(query, kd_distance);
        CHECK(kd_best == best);
        CHECK(kd_distance == std::sqrt(best_sq));
    }
}

TEST_CASE("chamfer hand cases") {
    const PointCloud a = as_cloud({{0, 0, 0}});
    const PointCloud b = as_cloud({{1, 0, 0}});
    CHECK(chamfer(a, b) == 1.0);
    CHECK(chamfer(a, a) == 0.0);

    // Asymmetric sets: directed means differ, the metric averages them.
    const PointCloud c = as_cloud({{0, 0, 0}, {2, 0, 0}});
    const PointCloud d = as_cloud({{0, 0, 0}});
    // c->d: (0 + 2) / 2 = 1; d->c: 0; symmetric: 0.5.
    CHECK(chamfer(c, d) == doctest::Approx(0.5).epsilon(1e-15));

    ChamferOptions squared;
    squared.squared = true;
    // Squared variant: c->d mean = (0 + 4) / 2 = 2; d->c = 0; half-sum = 1.
    CHECK(chamfer(c, d, squared) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(chamfer(PointCloud{}, a), std::invalid_argument);
    CHECK_THROWS_AS(chamfer(a, PointCloud{}), std::invalid_argument);
}

TEST_CASE("chamfer is symmetric and translation invariant") {
    const auto pa = random_points(400, 7);
    const auto pb = random_points(350, 8);
    const PointCloud a = as_cloud(pa);
    const PointCloud b = as_cloud(pb);
    CHECK(chamfer(a, b) == chamfer(b, a));  // exact: same two directed sums

    const Vec3 shift{10.0, -4.0, 2.5};
    auto pa_shift = pa;
    auto pb_shift = pb;
    for (Vec3& p : pa_shift) p = p + shift;
    for (Vec3& p : pb_shift) p = p + shift;
    CHECK(chamfer(as_cloud(pa_shift), as_cloud(pb_shift)) ==
          doctest::Approx(chamfer(a, b)).epsilon(1e-9));
}

TEST_CASE("chamfer matches the quadratic oracle to 1e-12") {
    const auto pa = random_points(500, 11);
    const auto pb = random_points(500, 12);
    const double fast = chamfer(as_cloud(pa), as_cloud(pb));
    const double slow = oracle::chamfer_quadratic(pa, pb);
    CHECK(std::abs(fast - slow) < 1e-12);

    ChamferOptions squared;
    squared.squared = true;
    const double fast_sq = chamfer(as_cloud(pa), as_cloud(pb), squared);
    const double slow_sq = oracle::chamfer_quadratic(pa, pb, true);
    CHECK(std::abs(fast_sq - slow_sq) < 1e-12);
}

TEST_CASE("surface sampling is deterministic, on-surface, and area weighted") {
    // Two triangles with a 1:9 area split must draw samples 1:9.
    const Mesh lopsided({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {10, 10, 0}, {13, 10, 0}, {10, 16, 0}},
                        {{0, 1, 2}, {3, 4, 5}});
    REQUIRE(lopsided.triangle_area(0) == doctest::Approx(0.5));
    REQUIRE(lopsided.triangle_area(1) == doctest::Approx(9.0));
    const PointCloud samples = sample_surface(lopsided, 40000, 3);
    REQUIRE(samples.size() == 40000);
    int on_small = 0;
    for (const Vec3& p : samples.points) {
        CHECK(p.z == 0.0);
        if (p.x <= 1.0) ++on_small;
    }
    const double expected_fraction = 0.5 / 9.5;
    CHECK(static_cast<double>(on_small) / 40000.0 ==
          doctest::Approx(expected_fraction).epsilon(0.06));

    const PointCloud again = sample_surface(lopsided, 40000, 3);
    CHECK(norm(again.points[123] - samples.points[123]) == 0.0);
    const PointCloud other_seed = sample_surface(lopsided, 40000, 4);
    CHECK(norm(other_seed.points[123] - samples.points[123]) != 0.0);

    CHECK_THROWS_AS(sample_surface(Mesh(), 10, 0), std::invalid_argument);
}

TEST_CASE("samples from a mesh stay on its triangles") {
    const Mesh mesh = make_humanoid(5);
    const PointCloud samples = sample_surface(mesh, 500, 9);
    for (const Vec3& p : samples.points)
        CHECK(oracle::point_mesh_distance(p, mesh) < 1e-12);
}

TEST_CASE("sampling a fine sphere recovers its radius statistics") {
    const Mesh sphere = make_uv_sphere({0, 0, 0}, 1.0, 64, 32);
    const PointCloud samples = sample_surface(sphere, 20000, 6);
    double mean_radius = 0.0;
    for (const Vec3& p : samples.points) mean_radius += norm(p);
    mean_radius /= static_cast<double>(samples.size());
    // Facets sit slightly inside the analytic sphere; the mean radius of
    // uniform facet samples stays within the sagitta of one patch.
    CHECK(mean_radius > 0.997);
    CHECK(mean_radius <= 1.0);
}

TEST_CASE("mesh_vertices exposes the vertex set as a cloud") {
    const Mesh box = make_box({0, 0, 0}, {2, 2, 2});
    const PointCloud cloud = mesh_vertices(box);
    REQUIRE(cloud.size() == box.vertex_count());
    CHECK(norm(cloud.points[0] - box.vertices()[0]) == 0.0);
}

TEST_CASE("depth accuracy counts per-map foreground agreement") {
    const Mesh mesh = make_uv_sphere({0, 0, 8}, 0.5, 48, 24);
    const Camera camera = frame_square(standard_camera(), mesh.bounds(), 64);
    const MouldPair gt = encode(mesh, camera);
    CHECK(depth_accuracy(gt, gt, 0.001).overall == 100.0);

    MouldPair pred = gt;
    const auto mask = foreground_mask(gt, PointOrigin::kVisible);

    SUBCASE("uniform offset crosses its threshold") {
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (!mask[i]) continue;
            pred.visible[i] += 0.040;
            pred.hidden[i] += 0.040;
        }
        const DepthAccuracy low = depth_accuracy(gt, pred, 0.030);
        CHECK(low.overall == 0.0);
        CHECK(low.visible == 0.0);
        CHECK(low.hidden == 0.0);
        const DepthAccuracy high = depth_accuracy(gt, pred, 0.050);
        CHECK(high.overall == 100.0);
    }
    SUBCASE("the threshold itself is inclusive") {
        // Dyadic values keep pred - gt exactly equal to tau; adding 0.040 to
        // an encoded depth would not survive rounding.
        MouldPair exact_gt;
        exact_gt.width = 2;
        exact_gt.height = 1;
        exact_gt.z_orig = 8.0;
        exact_gt.background_distance = 1.5;
        exact_gt.epsilon = 0.01;
        exact_gt.visible = {0.25, 1.5};
        exact_gt.hidden = {0.375, 1.5};
        MouldPair exact_pred = exact_gt;
        exact_pred.visible[0] = 0.28125;  // +2^-5
        exact_pred.hidden[0] = 0.40625;
        CHECK(depth_accuracy(exact_gt, exact_pred, 0.03125).overall == 100.0);
        CHECK(depth_accuracy(exact_gt, exact_pred, 0.03124).overall == 0.0);
    }
    SUBCASE("corrupting one map leaves the other at 100") {
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) pred.hidden[i] += 1.0;
        const DepthAccuracy acc = depth_accuracy(gt, pred, 0.030);
        CHECK(acc.visible == 100.0);
        CHECK(acc.hidden == 0.0);
        CHECK(acc.overall == 50.0);  // equal pixel counts pool to the midpoint
    }
    SUBCASE("prediction-only foreground pixels are not scored") {
        // Turning a GT background pixel into predicted foreground must not
        // change the score: the denominator is the GT mask.
        bool touched = false;
        for (std::size_t i = 0; i < mask.size() && !touched; ++i) {
            if (!mask[i]) {
                pred.visible[i] = 0.0;
                pred.hidden[i] = 0.0;
                touched = true;
            }
        }
        REQUIRE(touched);
        CHECK(depth_accuracy(gt, pred, 0.030).overall == 100.0);
    }
    SUBCASE("monotone in tau") {
        Rng rng(15);
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (!mask[i]) continue;
            pred.visible[i] += rng.normal(0.0, 0.03);
            pred.hidden[i] += rng.normal(0.0, 0.03);
        }
        double last = -1.0;
        for (double tau : {0.005, 0.01, 0.02, 0.04, 0.08, 0.16}) {
            const double overall = depth_accuracy(gt, pred, tau).overall;
            CHECK(overall >= last);
            last = overall;
        }
        CHECK(last == 100.0);
    }
}

TEST_CASE("depth accuracy edge cases") {
    const Mesh mesh = make_box({0.6, 0.6, 8.0}, {0.1, 0.1, 0.1});
    Camera narrow = standard_camera();
    narrow.width = 8;
    narrow.height = 8;
    narrow.sensor_width_mm = 0.05;
    narrow.pose = subject_placement({0, 0, 8}, 8.0);
    const MouldPair empty_gt = encode(mesh, narrow);  // subject outside the crop
    REQUIRE(empty_gt.warnings.all_background);
    const DepthAccuracy acc = depth_accuracy(empty_gt, empty_gt, 0.03);
    CHECK(acc.overall == 100.0);  // vacuous truth by convention
    CHECK(acc.visible == 100.0);
    CHECK(acc.hidden == 100.0);

    const Mesh big = make_uv_sphere({0, 0, 8}, 0.5, 16, 8);
    const MouldPair other = encode(big, frame_square(standard_camera(), big.bounds(), 32));
    CHECK_THROWS_AS(depth_accuracy(empty_gt, other, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(depth_accuracy(other, other, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(depth_accuracy(other, other, -0.1), std::invalid_argument);
}

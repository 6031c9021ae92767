#include "mouldkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mouldkit/kd_tree.hpp"
#include "mouldkit/parallel.hpp"
#include "mouldkit/random.hpp"
#include "mouldkit/summation.hpp"

namespace mouldkit {

namespace {

// Directed mean nearest-neighbor distance from every query point to `index`.
double directed_mean(const std::vector<Vec3>& queries, const KdIndex& index, bool squared) {
    std::vector<double> distances(queries.size());
    parallel_for(0, queries.size(), [&](std::size_t i) {
        const double d = index.nearest_distance(queries[i]);
        distances[i] = squared ? d * d : d;
    });
    return pairwise_sum(distances) / static_cast<double>(distances.size());
}

}  // namespace

double chamfer(const PointCloud& a, const PointCloud& b, const ChamferOptions& options) {
    if (a.empty() || b.empty()) throw std::invalid_argument("chamfer: empty point cloud");
    const KdIndex index_a(a.points);
    const KdIndex index_b(b.points);
    const double a_to_b = directed_mean(a.points, index_b, options.squared);
    const double b_to_a = directed_mean(b.points, index_a, options.squared);
    return 0.5 * (a_to_b + b_to_a);
}

PointCloud sample_surface(const Mesh& mesh, std::size_t count, std::uint64_t seed) {
    if (mesh.empty()) throw std::invalid_argument("sample_surface: empty mesh");
    if (count < 1) throw std::invalid_argument("sample_surface: need at least one sample");

    // inverse-CDF over cumulative triangle areas
    const std::size_t tri_count = mesh.triangle_count();
    std::vector<double> cumulative(tri_count);
    double total = 0.0;
    for (std::size_t t = 0; t < tri_count; ++t) {
        total += mesh.triangle_area(static_cast<int>(t));
        cumulative[t] = total;
    }

    Rng rng(seed);
    PointCloud cloud;
    cloud.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double target = rng.uniform() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        const int tri = static_cast<int>(std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative.begin()), tri_count - 1));

        // sqrt trick: uniform barycentric coordinates over the triangle
        const double r1 = std::sqrt(rng.uniform());
        const double r2 = rng.uniform();
        const double wa = 1.0 - r1;
        const double wb = r1 * (1.0 - r2);
        const double wc = r1 * r2;
        cloud.points.push_back(mesh.triangle_vertex(tri, 0) * wa +
                               mesh.triangle_vertex(tri, 1) * wb +
                               mesh.triangle_vertex(tri, 2) * wc);
    }
    return cloud;
}

PointCloud mesh_vertices(const Mesh& mesh) {
    if (mesh.empty()) throw std::invalid_argument("mesh_vertices: empty mesh");
    PointCloud cloud;
    cloud.points = mesh.vertices();
    return cloud;
}

DepthAccuracy depth_accuracy(const MouldPair& gt, const MouldPair& pred, double tau) {
    if (gt.width != pred.width || gt.height != pred.height)
        throw std::invalid_argument("depth_accuracy: resolution mismatch");
    if (tau <= 0.0) throw std::invalid_argument("depth_accuracy: tau must be positive");
    if (gt.visible.size() != gt.pixel_count() || gt.hidden.size() != gt.pixel_count() ||
        pred.visible.size() != pred.pixel_count() || pred.hidden.size() != pred.pixel_count())
        throw std::invalid_argument("depth_accuracy: depth buffers do not match the pixel grid");

    std::size_t counts[2] = {0, 0};
    std::size_t totals[2] = {0, 0};
    for (int map = 0; map < 2; ++map) {
        const std::vector<double>& gt_depth = map == 0 ? gt.visible : gt.hidden;
        const std::vector<double>& pred_depth = map == 0 ? pred.visible : pred.hidden;
        for (std::size_t i = 0; i < gt_depth.size(); ++i) {
            if (!is_foreground(gt_depth[i], gt.background_distance, gt.epsilon)) continue;
            ++totals[map];
            if (std::abs(gt_depth[i] - pred_depth[i]) <= tau) ++counts[map];
        }
    }

    const auto percent = [](std::size_t hit, std::size_t total) {
        return total == 0 ? 100.0 : 100.0 * static_cast<double>(hit) / static_cast<double>(total);
    };
    DepthAccuracy acc;
    acc.visible = percent(counts[0], totals[0]);
    acc.hidden = percent(counts[1], totals[1]);
    acc.overall = percent(counts[0] + counts[1], totals[0] + totals[1]);
    return acc;
}

}  // namespace mouldkit

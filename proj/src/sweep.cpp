#include "mouldkit/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mouldkit/metrics.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/voxel_grid.hpp"

namespace mouldkit {

int matched_voxel_resolution(int mould_n) {
    if (mould_n < 1) throw std::invalid_argument("matched_voxel_resolution: n must be positive");
    const long long target = 2LL * mould_n * mould_n;
    int v = static_cast<int>(std::floor(std::cbrt(static_cast<double>(target))));
    v = std::max(v - 1, 2);
    while (static_cast<long long>(v) * v * v < target) ++v;
    return v;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

SweepReport run_sweep(const std::vector<Mesh>& meshes, const Camera& base_camera,
                      const SweepOptions& options) {
    if (meshes.empty()) throw std::invalid_argument("run_sweep: no meshes");
    std::vector<int> mould_ns = options.include_mould ? options.mould_resolutions
                                                      : std::vector<int>{};
    std::vector<int> voxel_ns = options.voxel_resolutions;
    if (options.include_voxel && voxel_ns.empty()) {
        for (int n : options.mould_resolutions) voxel_ns.push_back(matched_voxel_resolution(n));
    }
    if (!options.include_voxel) voxel_ns.clear();
    if (mould_ns.empty() && voxel_ns.empty())
        throw std::invalid_argument("run_sweep: nothing to sweep");

    // Ground truth per mesh, shared by every row.
    std::vector<PointCloud> ground_truth;
    ground_truth.reserve(meshes.size());
    for (const Mesh& mesh : meshes) {
        ground_truth.push_back(options.vertices_as_ground_truth
                                   ? mesh_vertices(mesh)
                                   : sample_surface(mesh, options.samples, options.seed));
    }

    SweepReport report;
    const double mesh_count = static_cast<double>(meshes.size());

    for (int n : mould_ns) {
        SweepRow row;
        row.representation = "mould";
        row.n = n;
        row.dimensionality = 2LL * n * n;
        for (std::size_t m = 0; m < meshes.size(); ++m) {
            Camera base = base_camera;
            if (options.place_subject)
                base.pose = subject_placement(meshes[m].centroid(), options.subject_distance);
            const Camera framed = frame_square(base, meshes[m].bounds(), n);
            const auto start = std::chrono::steady_clock::now();
            const MouldPair pair = encode(meshes[m], framed, options.background_distance,
                                          options.epsilon);
            row.encode_ms += elapsed_ms(start);
            const PointCloud decoded = decode(pair, {.normals = false});
            row.chamfer_m += chamfer(decoded, ground_truth[m]);
        }
        row.chamfer_m /= mesh_count;
        row.encode_ms = options.include_timing ? row.encode_ms / mesh_count : 0.0;
        report.rows.push_back(row);
    }

    for (int n : voxel_ns) {
        SweepRow row;
        row.representation = "voxel";
        row.n = n;
        row.dimensionality = static_cast<long long>(n) * n * n;
        for (std::size_t m = 0; m < meshes.size(); ++m) {
            const auto start = std::chrono::steady_clock::now();
            const VoxelGrid grid = voxelize_surface(meshes[m], n);
            row.encode_ms += elapsed_ms(start);
            row.chamfer_m += chamfer(voxel_points(grid), ground_truth[m]);
        }
        row.chamfer_m /= mesh_count;
        row.encode_ms = options.include_timing ? row.encode_ms / mesh_count : 0.0;
        report.rows.push_back(row);
    }

    std::sort(report.rows.begin(), report.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.dimensionality != b.dimensionality) return a.dimensionality < b.dimensionality;
        return a.representation < b.representation;
    });
    return report;
}

std::string SweepReport::to_csv() const {
    std::string csv = "representation,N,D,chamfer_m,encode_ms\n";
    char line[160];
    for (const SweepRow& row : rows) {
        std::snprintf(line, sizeof(line), "%s,%d,%lld,%.9g,%.3f\n", row.representation.c_str(),
                      row.n, row.dimensionality, row.chamfer_m, row.encode_ms);
        csv += line;
    }
    return csv;
}

std::string SweepReport::to_table() const {
    std::string table =
        "representation        N            D   chamfer_m   encode_ms\n"
        "--------------  -------  -----------  ----------  ----------\n";
    char line[160];
    for (const SweepRow& row : rows) {
        std::snprintf(line, sizeof(line), "%-14s  %7d  %11lld  %10.6f  %10.3f\n",
                      row.representation.c_str(), row.n, row.dimensionality, row.chamfer_m,
                      row.encode_ms);
        table += line;
    }
    return table;
}

}  // namespace mouldkit

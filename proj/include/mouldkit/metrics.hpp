#pragma once

#include <cstdint>

#include "mouldkit/mesh.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/point_cloud.hpp"

namespace mouldkit {

struct ChamferOptions {
    bool squared = false;  // mean squared nearest distance instead of mean distance
};

/// Symmetric Chamfer distance in meters: half the sum of the two directed
/// mean nearest-neighbor distances. Exactly symmetric in its arguments.
/// Throws std::invalid_argument when either cloud is empty.
double chamfer(const PointCloud& a, const PointCloud& b, const ChamferOptions& options = {});

/// Area-weighted uniform surface samples, deterministic for a fixed seed.
/// Throws std::invalid_argument for an empty mesh or count < 1.
PointCloud sample_surface(const Mesh& mesh, std::size_t count, std::uint64_t seed);

/// The mesh vertices as a point cloud (the literal protocol alternative to
/// area-weighted sampling).
PointCloud mesh_vertices(const Mesh& mesh);

/// Shares of ground-truth foreground pixels whose absolute centered-depth
/// difference is at most tau, as percentages in [0, 100]. `visible` and
/// `hidden` score each map against the ground truth's own foreground mask;
/// `overall` pools both maps' pixels. A map with no foreground pixels
/// scores 100 (vacuously accurate).
struct DepthAccuracy {
    double overall = 0.0;
    double visible = 0.0;
    double hidden = 0.0;
};

/// Throws std::invalid_argument on resolution mismatch or tau <= 0.
DepthAccuracy depth_accuracy(const MouldPair& gt, const MouldPair& pred, double tau);

}  // namespace mouldkit

#pragma once

#include <cstddef>
#include <vector>

#include "mouldkit/mould.hpp"

namespace mouldkit {

/// Batch of depth-map pairs laid out as B x 2 x N x N (channel 0 visible,
/// channel 1 hidden), row-major within each map. Values are centered
/// depths in meters and must be finite.
struct DepthBatch {
    int batch = 0;
    int resolution = 0;
    std::vector<double> values;  // batch * 2 * resolution * resolution

    std::size_t size() const { return values.size(); }
    bool shape_matches(const DepthBatch& other) const {
        return batch == other.batch && resolution == other.resolution &&
               values.size() == other.values.size();
    }

    /// Stacks square MouldPairs of one resolution into a batch.
    static DepthBatch from_pairs(const std::vector<MouldPair>& pairs);
};

/// Mean absolute difference over every value of both maps across the
/// batch. Throws std::invalid_argument on shape mismatch, empty batches,
/// or non-finite input.
double l1_loss(const DepthBatch& gt, const DepthBatch& pred);

/// Gradient of l1_loss with respect to pred: sign(pred - gt) / P with P
/// the total value count; zero where the difference is exactly zero.
std::vector<double> l1_gradient(const DepthBatch& gt, const DepthBatch& pred);

/// Discriminator outputs for real and generated samples. Values are
/// clamped into [1e-7, 1 - 1e-7] before any logarithm.
struct DiscriminatorScores {
    std::vector<double> real_scores;
    std::vector<double> fake_scores;
};

inline constexpr double kScoreClamp = 1e-7;

/// mean(log real) + mean(log(1 - fake)). Always <= 0; the supremum 0 is
/// approached only by a clamped perfect discriminator. Throws
/// std::invalid_argument when either score vector is empty.
double gan_loss(const DiscriminatorScores& scores);

inline constexpr double kDefaultLambda = 1e4;

/// gan + lambda * l1. Throws std::invalid_argument for lambda < 0.
double combined_objective(double gan, double l1, double lambda = kDefaultLambda);

}  // namespace mouldkit

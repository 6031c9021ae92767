#include "mouldkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mouldkit/summation.hpp"

namespace mouldkit {

DepthBatch DepthBatch::from_pairs(const std::vector<MouldPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("depth batch from no pairs");
    const int n = pairs.front().width;
    DepthBatch batch;
    batch.batch = static_cast<int>(pairs.size());
    batch.resolution = n;
    batch.values.reserve(pairs.size() * 2 * static_cast<std::size_t>(n) * n);
    for (const MouldPair& pair : pairs) {
        if (pair.width != n || pair.height != n)
            throw std::invalid_argument("depth batch needs square pairs of one resolution");
        batch.values.insert(batch.values.end(), pair.visible.begin(), pair.visible.end());
        batch.values.insert(batch.values.end(), pair.hidden.begin(), pair.hidden.end());
    }
    return batch;
}

namespace {

void check_batch_pair(const DepthBatch& gt, const DepthBatch& pred) {
    if (!gt.shape_matches(pred)) throw std::invalid_argument("depth batch shape mismatch");
    if (gt.values.empty()) throw std::invalid_argument("empty depth batch");
    for (double v : gt.values)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite ground-truth depth");
    for (double v : pred.values)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite predicted depth");
}

}  // namespace

double l1_loss(const DepthBatch& gt, const DepthBatch& pred) {
    check_batch_pair(gt, pred);
    std::vector<double> diffs(gt.values.size());
    for (std::size_t i = 0; i < diffs.size(); ++i)
        diffs[i] = std::abs(pred.values[i] - gt.values[i]);
    return pairwise_sum(diffs) / static_cast<double>(diffs.size());
}

std::vector<double> l1_gradient(const DepthBatch& gt, const DepthBatch& pred) {
    check_batch_pair(gt, pred);
    const double inv_count = 1.0 / static_cast<double>(gt.values.size());
    std::vector<double> grad(gt.values.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const double diff = pred.values[i] - gt.values[i];
        grad[i] = diff > 0.0 ? inv_count : diff < 0.0 ? -inv_count : 0.0;
    }
    return grad;
}

double gan_loss(const DiscriminatorScores& scores) {
    if (scores.real_scores.empty() || scores.fake_scores.empty())
        throw std::invalid_argument("gan_loss: empty score vector");
    const auto clamp = [](double s) { return std::clamp(s, kScoreClamp, 1.0 - kScoreClamp); };

    std::vector<double> terms(scores.real_scores.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = std::log(clamp(scores.real_scores[i]));
    const double real_mean = pairwise_sum(terms) / static_cast<double>(terms.size());

    terms.assign(scores.fake_scores.size(), 0.0);
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = std::log(1.0 - clamp(scores.fake_scores[i]));
    const double fake_mean = pairwise_sum(terms) / static_cast<double>(terms.size());

    return real_mean + fake_mean;
}

double combined_objective(double gan, double l1, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("combined_objective: lambda must be >= 0");
    return gan + lambda * l1;
}

}  // namespace mouldkit

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mouldkit/losses.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/primitives.hpp"
#include "mouldkit/random.hpp"

using namespace mouldkit;

namespace {

DepthBatch constant_batch(int batch, int resolution, double value) {
    DepthBatch b;
    b.batch = batch;
    b.resolution = resolution;
    b.values.assign(static_cast<std::size_t>(batch) * 2 * resolution * resolution, value);
    return b;
}

DepthBatch random_batch(int batch, int resolution, std::uint64_t seed) {
    DepthBatch b = constant_batch(batch, resolution, 0.0);
    Rng rng(seed);
    for (double& v : b.values) v = rng.uniform(-1.5, 1.5);
    return b;
}

// Straight accumulation in extended precision; no shared code with the
// library's summation.
double naive_l1(const DepthBatch& gt, const DepthBatch& pred) {
    long double total = 0.0L;
    for (std::size_t i = 0; i < gt.values.size(); ++i)
        total += std::abs(pred.values[i] - gt.values[i]);
    return static_cast<double>(total / static_cast<long double>(gt.values.size()));
}

double naive_gan(const std::vector<double>& real, const std::vector<double>& fake) {
    const auto clamp = [](double s) {
        return std::min(std::max(s, 1e-7), 1.0 - 1e-7);
    };
    long double real_sum = 0.0L, fake_sum = 0.0L;
    for (double s : real) real_sum += std::log(clamp(s));
    for (double s : fake) fake_sum += std::log(1.0 - clamp(s));
    return static_cast<double>(real_sum / static_cast<long double>(real.size()) +
                               fake_sum / static_cast<long double>(fake.size()));
}

}  // namespace

TEST_CASE("depth batches assemble from mould pairs") {
    const Mesh mesh = make_uv_sphere({0, 0, 8}, 0.5, 24, 12);
    const Camera camera = frame_square(standard_camera(), mesh.bounds(), 32);
    const MouldPair a = encode(mesh, camera);
    const MouldPair b = encode(mesh, camera, 1.5, 0.02);
    const DepthBatch batch = DepthBatch::from_pairs({a, b});
    CHECK(batch.batch == 2);
    CHECK(batch.resolution == 32);
    REQUIRE(batch.values.size() == 2u * 2u * 32u * 32u);
    // Layout: per pair, the full visible map then the full hidden map.
    CHECK(batch.values[0] == a.visible[0]);
    CHECK(batch.values[32 * 32] == a.hidden[0]);
    CHECK(batch.values[2 * 32 * 32] == b.visible[0]);

    const Mesh tall = make_humanoid(1);
    Camera posed = standard_camera();
    posed.pose = subject_placement(tall.centroid(), 8.0);
    const MouldPair odd = encode(tall, frame_square(posed, tall.bounds(), 48));
    CHECK_THROWS_AS(DepthBatch::from_pairs({a, odd}), std::invalid_argument);
    CHECK_THROWS_AS(DepthBatch::from_pairs({}), std::invalid_argument);
}

TEST_CASE("l1 loss closed forms") {
    const DepthBatch zeros = constant_batch(2, 8, 0.0);
    const DepthBatch eighth = constant_batch(2, 8, 0.125);
    CHECK(l1_loss(zeros, zeros) == 0.0);
    CHECK(l1_loss(zeros, eighth) == 0.125);  // exact in binary
    CHECK(l1_loss(eighth, zeros) == 0.125);  // symmetric in its arguments

    // Mixed signs: mean |pred - gt| over all values.
    DepthBatch gt = constant_batch(1, 2, 0.0);
    DepthBatch pred = gt;
    pred.values = {1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 0.0, 0.0};
    CHECK(l1_loss(gt, pred) == doctest::Approx(7.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("l1 loss matches the naive oracle on random batches") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const DepthBatch gt = random_batch(3, 16, seed);
        const DepthBatch pred = random_batch(3, 16, seed + 100);
        CHECK(std::abs(l1_loss(gt, pred) - naive_l1(gt, pred)) < 1e-12);
    }
}

TEST_CASE("l1 loss validates shapes and values") {
    const DepthBatch a = constant_batch(1, 8, 0.0);
    const DepthBatch b = constant_batch(2, 8, 0.0);
    const DepthBatch c = constant_batch(1, 16, 0.0);
    CHECK_THROWS_AS(l1_loss(a, b), std::invalid_argument);
    CHECK_THROWS_AS(l1_loss(a, c), std::invalid_argument);
    DepthBatch empty;
    CHECK_THROWS_AS(l1_loss(empty, empty), std::invalid_argument);
    DepthBatch poisoned = a;
    poisoned.values[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(l1_loss(a, poisoned), std::invalid_argument);
    CHECK_THROWS_AS(l1_loss(poisoned, a), std::invalid_argument);
}

TEST_CASE("l1 gradient is the scaled sign pattern") {
    DepthBatch gt = constant_batch(1, 2, 0.0);
    DepthBatch pred = gt;
    pred.values = {1.0, -2.0, 0.0, 3.0, -4.0, 0.0, 5.0, -6.0};
    const auto grad = l1_gradient(gt, pred);
    REQUIRE(grad.size() == 8);
    const double unit = 1.0 / 8.0;
    const std::vector<double> expect = {unit, -unit, 0.0, unit, -unit, 0.0, unit, -unit};
    for (std::size_t i = 0; i < 8; ++i) CHECK(grad[i] == expect[i]);
}

TEST_CASE("l1 gradient matches central finite differences") {
    const DepthBatch gt = random_batch(2, 8, 50);
    DepthBatch pred = random_batch(2, 8, 51);
    const auto grad = l1_gradient(gt, pred);
    const double step = 1e-5;
    Rng rng(52);
    for (int probe = 0; probe < 64; ++probe) {
        const std::size_t i = rng.index(pred.values.size());
        const double saved = pred.values[i];
        pred.values[i] = saved + step;
        const double up = l1_loss(gt, pred);
        pred.values[i] = saved - step;
        const double down = l1_loss(gt, pred);
        pred.values[i] = saved;
        const double fd = (up - down) / (2.0 * step);
        // Random values sit far from the kink at pred == gt, so the
        // finite difference is clean.
        CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("gan loss closed forms and clamping") {
    CHECK(gan_loss({{0.5, 0.5}, {0.5, 0.5}}) ==
          doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-12));
    // Single scores: log(0.8) + log(1 - 0.3).
    CHECK(gan_loss({{0.8}, {0.3}}) ==
          doctest::Approx(std::log(0.8) + std::log(0.7)).epsilon(1e-12));
    // A perfect discriminator saturates at the clamp, not at -inf.
    const double perfect = gan_loss({{1.0}, {0.0}});
    CHECK(std::isfinite(perfect));
    CHECK(perfect == doctest::Approx(2.0 * std::log(1.0 - 1e-7)).epsilon(1e-9));
    // A fully fooled discriminator is finite too.
    CHECK(std::isfinite(gan_loss({{0.0}, {1.0}})));
    CHECK_THROWS_AS(gan_loss({{}, {0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(gan_loss({{0.5}, {}}), std::invalid_argument);
}

TEST_CASE("gan loss matches the naive oracle") {
    Rng rng(60);
    std::vector<double> real, fake;
    for (int i = 0; i < 257; ++i) real.push_back(rng.uniform());
    for (int i = 0; i < 123; ++i) fake.push_back(rng.uniform());
    CHECK(std::abs(gan_loss({real, fake}) - naive_gan(real, fake)) < 1e-12);
}

TEST_CASE("combined objective is exact affine arithmetic") {
    CHECK(combined_objective(0.0, 0.0) == 0.0);
    CHECK(combined_objective(-1.0, 0.0005) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(combined_objective(2.5, 0.25, 8.0) == 2.5 + 8.0 * 0.25);
    CHECK(kDefaultLambda == 1e4);
    CHECK_THROWS_AS(combined_objective(0.0, 0.0, -1.0), std::invalid_argument);
}

// Full-size Monte-Carlo examples. Slow: minutes on one core.
#include <doctest.h>

#include <algorithm>

#include "bistoch/experiments.hpp"
#include "bistoch/noise.hpp"
#include "bistoch/parallel.hpp"

using namespace bistoch;

TEST_CASE("degrees approximate the density") {
    const Dataset ds = sample_dataset(3000, DensityKind::Sinusoidal1D, 1);
    const Affinity a = build_affinity(ds.clean_points, 5e-4, 1, false, Convention::Normalized, thread_count());
    const Vector deg = degree(a);
    std::size_t close = 0;
    for (std::size_t i = 0; i < ds.n; ++i)
        close += std::abs(deg(static_cast<Eigen::Index>(i)) - density(ds.t[i], DensityKind::Sinusoidal1D)) < 0.15;
    MESSAGE("fraction within 0.15: " << static_cast<double>(close) / 3000.0);
    CHECK(close >= 2970);
}

TEST_CASE("scaling converges quickly on the full-size unscaled affinity") {
    const Dataset ds = sample_dataset(3000, DensityKind::Sinusoidal1D, 1);
    const Affinity a = build_affinity(ds.clean_points, 5.0119e-4, 1, true, Convention::Unscaled, thread_count());
    const ScalingResult r = approx_sym_sk(a, SkConfig{});
    MESSAGE("iterations: " << r.iterations);
    CHECK(r.converged);
    CHECK(r.iterations <= 10);
    CHECK(r.projection_hits == 0);
}

TEST_CASE("clean point-wise pipeline") {
    PointwiseConfig cfg;
    const PointwiseResult bi = pointwise_experiment(cfg);
    const Dataset ds = sample_dataset(3000, DensityKind::Sinusoidal1D, 1);
    const Vector ref = population_reference(ds, DensityKind::Sinusoidal1D);
    const double worst = ((bi.eta - ref).cwiseAbs().array() / ref.array()).maxCoeff();
    MESSAGE("relerr2 " << bi.errors.relerr2 << ", max |eta / p^-1/2 - 1| " << worst);
    CHECK(bi.projection_hits == 0);
    CHECK(worst < 0.1);
    CHECK(bi.errors.relerr2 < 0.1);

    cfg.kind = LaplacianKind::DmUn;
    const PointwiseResult dm = pointwise_experiment(cfg);
    MESSAGE("dm relerr2 " << dm.errors.relerr2);
    CHECK(dm.errors.relerr2 < 2.0 * bi.errors.relerr2);
    CHECK(bi.errors.relerr2 < 2.0 * dm.errors.relerr2);
}

TEST_CASE("noisy point-wise pipeline") {
    PointwiseConfig cfg;
    cfg.epsilon = 5e-4;
    cfg.noise = NoiseModel{NoiseKind::Simple, 2000, 0.1, 0.1};
    const PointwiseResult r = pointwise_experiment(cfg);
    MESSAGE("relerr2 " << r.errors.relerr2 << ", min inlier eta " << r.min_inlier_eta);
    CHECK(r.projection_hits == 0);
    CHECK(r.errors.relerr2 < 0.2);
}

TEST_CASE("clean circle embedding") {
    EmbeddingConfig cfg;
    cfg.noise.reset();
    cfg.threads = thread_count();
    const EmbeddingResult res = embedding_experiment(cfg);
    std::size_t sk_small = 0;
    for (const auto& rep : res.replicas) sk_small += rep.mse[0][0] < 0.01;
    MESSAGE("sk pair-1 mean " << res.summary[0].mse_mean << ", dm pair-1 mean " << res.summary[2].mse_mean);
    CHECK(sk_small >= 18);
    CHECK(res.summary[0].mse_mean < 0.005);
    CHECK(res.summary[2].mse_mean < 0.005);
}

TEST_CASE("cross terms shrink with ambient dimension") {
    std::vector<double> low, high;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        low.push_back(cross_term_stats(make_dataset(600, DensityKind::Sinusoidal1D,
                                                    NoiseModel{NoiseKind::Simple, 2000, 0.1, 0.1}, seed))
                          .max_abs_r);
        high.push_back(cross_term_stats(make_dataset(600, DensityKind::Sinusoidal1D,
                                                     NoiseModel{NoiseKind::Simple, 8000, 0.1, 0.1}, seed))
                           .max_abs_r);
    }
    for (std::size_t k = 0; k < low.size(); ++k) CHECK(high[k] < low[k]);
    // O(sqrt(log m / m)) scale for sigma_out = 0.1.
    for (double v : low) CHECK(v < 10.0 * 0.01 * std::sqrt(std::log(2000.0) / 2000.0));
}

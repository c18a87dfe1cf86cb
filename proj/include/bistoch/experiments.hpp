#pragma once

// Monte-Carlo experiments: point-wise convergence of -(1/eps) L f to the
// weighted Laplacian of f, bandwidth sweeps with replicas, log-log slope
// fits, and spectral-embedding error after 2D eigen-space alignment.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bistoch/kernel.hpp"
#include "bistoch/laplacian.hpp"
#include "bistoch/manifold.hpp"
#include "bistoch/noise.hpp"
#include "bistoch/sinkhorn.hpp"

namespace bistoch {

struct RelErrors {
    double relerr2 = 0.0;
    double relerrinf = 0.0;
};

RelErrors rel_errors(const Vector& estimate, const Vector& reference);

// Seed of the noise stream for a replica whose data stream uses `seed`.
std::uint64_t noise_seed(std::uint64_t seed);

// Clean samples, embedded and corrupted when a noise model is given.
Dataset make_dataset(std::size_t n, DensityKind density, const std::optional<NoiseModel>& noise, std::uint64_t seed);

struct PointwiseConfig {
    std::size_t n = 3000;
    DensityKind density = DensityKind::Sinusoidal1D;
    double epsilon = 5.0119e-4;
    SkConfig sk{};
    LaplacianKind kind = LaplacianKind::BistochUn;
    std::optional<NoiseModel> noise;
    Convention convention = Convention::Normalized;
    int intrinsic_dim = 1;
    std::uint64_t seed = 1;
};

struct PointwiseResult {
    RelErrors errors;
    std::size_t sk_iters = 0;  // 0 for diffusion-map kinds
    bool sk_converged = true;
    std::size_t projection_hits = 0;
    double min_inlier_eta = 0.0;  // bistochastic kinds only
    Vector estimate;              // -(1/eps) L f
    Vector reference;             // Delta_p f at the clean coordinates
    Vector eta;                   // empty for diffusion-map kinds
};

PointwiseResult pointwise_experiment(const PointwiseConfig& cfg);

// Same pipeline on an existing dataset with precomputed squared distances of
// its observed points; cfg.n, cfg.noise and cfg.seed are ignored.
PointwiseResult pointwise_on_dataset(const Dataset& ds, const Matrix& sq_dist, const PointwiseConfig& cfg);

struct SweepRecord {
    double epsilon = 0.0;
    double relerr2_mean = 0.0;
    double relerr2_std = 0.0;
    double relerrinf_mean = 0.0;
    double relerrinf_std = 0.0;
    double mean_sk_iters = 0.0;
    std::size_t replicas = 0;
};

struct SweepConfig {
    std::size_t n = 3000;
    DensityKind density = DensityKind::Sinusoidal1D;
    std::vector<double> epsilons;
    std::size_t replicas = 20;
    SkConfig sk{};
    LaplacianKind kind = LaplacianKind::BistochUn;
    std::optional<NoiseModel> noise;
    Convention convention = Convention::Normalized;
    int intrinsic_dim = 1;
    std::uint64_t base_seed = 1;
    std::size_t threads = 1;
};

// Replica r uses seed base_seed + r for every epsilon.
std::vector<SweepRecord> epsilon_sweep(const SweepConfig& cfg);

// OLS slope of y on x over indices [first, last).
double slope_fit(const std::vector<double>& x, const std::vector<double>& y, std::size_t first, std::size_t last);

struct AlignmentResult {
    double mse = 0.0;
    double scale = 0.0;
    Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();  // orthogonal, det may be -1
};

// min over orthogonal Q and scalar s of |s V Q - R|_F^2 / (2n).
AlignmentResult align_pair(const Matrix& v, const Matrix& r);

// Grid search over 3600 angles with and without reflection; used when V^T R
// is rank deficient.
AlignmentResult align_pair_grid(const Matrix& v, const Matrix& r);

enum class EmbedMethod { Bistochastic, DiffusionMap };

std::string to_string(EmbedMethod m);

struct EmbeddingConfig {
    std::size_t n = 1000;
    std::optional<NoiseModel> noise = NoiseModel{NoiseKind::Heteroskedastic, 2000, 0.1, 0.1};
    double epsilon = 5e-4;
    SkConfig sk{0.0, 1e-3, 50, SkInit::InverseSqrtDegree};
    std::size_t replicas = 20;
    std::uint64_t base_seed = 1;
    std::size_t threads = 1;
};

struct EmbeddingReplica {
    // mse[method][pair], method 0 = bistochastic, 1 = diffusion map
    std::array<std::array<double, 2>, 2> mse{};
    std::size_t sk_iters = 0;
    bool sk_converged = true;
};

struct EmbeddingSummaryRow {
    EmbedMethod method = EmbedMethod::Bistochastic;
    int pair = 1;
    double mse_mean = 0.0;
    double mse_std = 0.0;
    std::size_t replicas = 0;
};

struct EmbeddingResult {
    std::vector<EmbeddingReplica> replicas;
    std::vector<EmbeddingSummaryRow> summary;  // (sk,1) (sk,2) (dm,1) (dm,2)
};

// One replica: uniform circle data, optional noise, unscaled zero-diagonal
// affinity, random-walk Laplacians of both normalizations, eigenvectors 2-3
// and 4-5 aligned to the first and second circle harmonics.
EmbeddingReplica embedding_replica(const EmbeddingConfig& cfg, std::uint64_t seed,
                                   EigenPairs* sk_pairs_out = nullptr);

EmbeddingResult embedding_experiment(const EmbeddingConfig& cfg);

// Sample mean and standard deviation (n - 1 denominator; 0 for one value).
std::pair<double, double> mean_std(const std::vector<double>& values);

}  // namespace bistoch

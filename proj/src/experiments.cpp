#include "bistoch/experiments.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "bistoch/errors.hpp"
#include "bistoch/parallel.hpp"

namespace bistoch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix harmonic_pair(const std::vector<double>& t, double frequency) {
    Matrix r(static_cast<Eigen::Index>(t.size()), 2);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        r(row, 0) = std::sin(kTwoPi * frequency * t[i]);
        r(row, 1) = std::cos(kTwoPi * frequency * t[i]);
    }
    return r;
}

AlignmentResult finish_alignment(const Matrix& v, const Matrix& r, double scale, const Eigen::Matrix2d& q) {
    AlignmentResult out;
    out.scale = scale;
    out.rotation = q;
    out.mse = (scale * v * q - r).squaredNorm() / (2.0 * static_cast<double>(v.rows()));
    return out;
}

void check_alignment_inputs(const Matrix& v, const Matrix& r) {
    if (v.cols() != 2 || r.cols() != 2 || v.rows() != r.rows())
        throw DomainError("align_pair: both inputs must be n x 2 with the same n");
    if (v.rows() < 2) throw DomainError("align_pair: need n >= 2");
    if (r.squaredNorm() == 0.0) throw DomainError("align_pair: reference must be nonzero");
}

}  // namespace

RelErrors rel_errors(const Vector& estimate, const Vector& reference) {
    if (estimate.size() != reference.size()) throw DomainError("rel_errors: length mismatch");
    const double ref2 = reference.norm();
    const double refinf = reference.cwiseAbs().maxCoeff();
    if (ref2 == 0.0) throw DomainError("rel_errors: reference has zero norm");
    const Vector diff = estimate - reference;
    return {diff.norm() / ref2, diff.cwiseAbs().maxCoeff() / refinf};
}

std::uint64_t noise_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

Dataset make_dataset(std::size_t n, DensityKind density, const std::optional<NoiseModel>& noise, std::uint64_t seed) {
    Dataset ds = sample_dataset(n, density, seed);
    if (!noise) return ds;
    noise->validate();
    return add_noise(embed_dataset(ds, noise->m), *noise, noise_seed(seed));
}

PointwiseResult pointwise_on_dataset(const Dataset& ds, const Matrix& sq_dist, const PointwiseConfig& cfg) {
    const Affinity w0 = affinity_from_squared_distances(sq_dist, cfg.epsilon, cfg.intrinsic_dim, true, cfg.convention);
    const Eigen::Index n = static_cast<Eigen::Index>(ds.n);

    Vector f(n);
    PointwiseResult out;
    out.reference.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = ds.t[static_cast<std::size_t>(i)];
        f(i) = test_function(t);
        out.reference(i) = delta_p_f(t, cfg.density);
    }

    Affinity k;
    if (is_bistochastic(cfg.kind)) {
        const ScalingResult sk = approx_sym_sk(w0, cfg.sk);
        out.sk_iters = sk.iterations;
        out.sk_converged = sk.converged;
        out.projection_hits = sk.projection_hits;
        out.eta = sk.eta;
        double min_eta = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool outlier = ds.outlier_flags && (*ds.outlier_flags)[static_cast<std::size_t>(i)];
            if (!outlier) min_eta = std::min(min_eta, sk.eta(i));
        }
        out.min_inlier_eta = min_eta;
        k = bistochastic_affinity(w0, sk.eta);
    } else {
        k = dm_affinity(w0);
    }
    const LaplacianOp l = laplacian_from_affinity(k, form_of(cfg.kind));
    out.estimate = apply_rescaled(l, f);
    out.errors = rel_errors(out.estimate, out.reference);
    return out;
}

PointwiseResult pointwise_experiment(const PointwiseConfig& cfg) {
    const Dataset ds = make_dataset(cfg.n, cfg.density, cfg.noise, cfg.seed);
    return pointwise_on_dataset(ds, squared_distances(ds.observed()), cfg);
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::vector<SweepRecord> epsilon_sweep(const SweepConfig& cfg) {
    if (cfg.epsilons.empty()) throw DomainError("epsilon_sweep: empty epsilon list");
    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
        if (!(cfg.epsilons[e] > 0.0)) throw DomainError("epsilon_sweep: epsilons must be positive");
        if (e > 0 && cfg.epsilons[e] < cfg.epsilons[e - 1])
            throw DomainError("epsilon_sweep: epsilons must be ascending");
    }
    if (cfg.replicas < 1) throw DomainError("epsilon_sweep: need at least one replica");
    cfg.sk.validate();

    const std::size_t ne = cfg.epsilons.size();
    // results[r][e]
    std::vector<std::vector<PointwiseResult>> results(cfg.replicas, std::vector<PointwiseResult>(ne));
    parallel_for(cfg.replicas, cfg.threads, [&](std::size_t r) {
        const Dataset ds = make_dataset(cfg.n, cfg.density, cfg.noise, cfg.base_seed + r);
        const Matrix sq = squared_distances(ds.observed());
        PointwiseConfig pc;
        pc.density = cfg.density;
        pc.sk = cfg.sk;
        pc.kind = cfg.kind;
        pc.convention = cfg.convention;
        pc.intrinsic_dim = cfg.intrinsic_dim;
        for (std::size_t e = 0; e < ne; ++e) {
            pc.epsilon = cfg.epsilons[e];
            PointwiseResult res = pointwise_on_dataset(ds, sq, pc);
            res.estimate.resize(0);
            res.reference.resize(0);
            res.eta.resize(0);
            results[r][e] = std::move(res);
        }
    });

    std::vector<SweepRecord> records(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        std::vector<double> e2, einf;
        double iters = 0.0;
        for (std::size_t r = 0; r < cfg.replicas; ++r) {
            e2.push_back(results[r][e].errors.relerr2);
            einf.push_back(results[r][e].errors.relerrinf);
            iters += static_cast<double>(results[r][e].sk_iters);
        }
        auto& rec = records[e];
        rec.epsilon = cfg.epsilons[e];
        std::tie(rec.relerr2_mean, rec.relerr2_std) = mean_std(e2);
        std::tie(rec.relerrinf_mean, rec.relerrinf_std) = mean_std(einf);
        rec.mean_sk_iters = iters / static_cast<double>(cfg.replicas);
        rec.replicas = cfg.replicas;
    }
    return records;
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y, std::size_t first, std::size_t last) {
    if (x.size() != y.size()) throw DomainError("slope_fit: length mismatch");
    if (last > x.size() || first >= last || last - first < 2) throw DomainError("slope_fit: need at least two points");
    const double count = static_cast<double>(last - first);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("slope_fit: all x values coincide");
    return sxy / sxx;
}

AlignmentResult align_pair_grid(const Matrix& v, const Matrix& r) {
    check_alignment_inputs(v, r);
    const double vv = v.squaredNorm();
    if (vv == 0.0) return finish_alignment(v, r, 0.0, Eigen::Matrix2d::Identity());
    const Eigen::Matrix2d m = v.transpose() * r;
    double best = std::numeric_limits<double>::infinity();
    double best_scale = 0.0;
    Eigen::Matrix2d best_q = Eigen::Matrix2d::Identity();
    constexpr int kAngles = 3600;
    for (int k = 0; k < kAngles; ++k) {
        const double theta = kTwoPi * k / kAngles;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (int reflect = 0; reflect < 2; ++reflect) {
            Eigen::Matrix2d q;
            if (reflect)
                q << c, s, s, -c;
            else
                q << c, -s, s, c;
            // tr(Q^T V^T R); optimal scale tr / |V|^2 leaves |R|^2 - tr^2 / |V|^2
            const double tr = (q.transpose() * m).trace();
            const double obj = r.squaredNorm() - tr * tr / vv;
            if (obj < best) {
                best = obj;
                best_scale = tr / vv;
                best_q = q;
            }
        }
    }
    return finish_alignment(v, r, best_scale, best_q);
}

AlignmentResult align_pair(const Matrix& v, const Matrix& r) {
    check_alignment_inputs(v, r);
    const double vv = v.squaredNorm();
    if (vv == 0.0) return finish_alignment(v, r, 0.0, Eigen::Matrix2d::Identity());
    const Eigen::Matrix2d m = v.transpose() * r;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(1) <= 1e-12 * sv(0)) return align_pair_grid(v, r);
    // Polar factor of V^T R maximizes tr(Q^T V^T R) = sigma_1 + sigma_2.
    const Eigen::Matrix2d q = svd.matrixU() * svd.matrixV().transpose();
    return finish_alignment(v, r, (sv(0) + sv(1)) / vv, q);
}

std::string to_string(EmbedMethod m) { return m == EmbedMethod::Bistochastic ? "sk" : "dm"; }

EmbeddingReplica embedding_replica(const EmbeddingConfig& cfg, std::uint64_t seed, EigenPairs* sk_pairs_out) {
    const Dataset ds = make_dataset(cfg.n, DensityKind::UniformCircle, cfg.noise, seed);
    const Affinity g = affinity_from_squared_distances(squared_distances(ds.observed()), cfg.epsilon, 1, true,
                                                       Convention::Unscaled);
    const Matrix first = harmonic_pair(ds.t, 1.0);
    const Matrix second = harmonic_pair(ds.t, 2.0);

    EmbeddingReplica out;
    const ScalingResult sk = approx_sym_sk(g, cfg.sk);
    out.sk_iters = sk.iterations;
    out.sk_converged = sk.converged;

    const std::array<Affinity, 2> kernels = {bistochastic_affinity(g, sk.eta), dm_affinity(g)};
    for (std::size_t method = 0; method < 2; ++method) {
        const LaplacianOp l = laplacian_from_affinity(kernels[method], LaplacianForm::RandomWalk);
        EigenPairs pairs = smallest_eigenpairs(l, 5);
        out.mse[method][0] = align_pair(pairs.vectors.middleCols(1, 2), first).mse;
        out.mse[method][1] = align_pair(pairs.vectors.middleCols(3, 2), second).mse;
        if (method == 0 && sk_pairs_out) *sk_pairs_out = std::move(pairs);
    }
    return out;
}

EmbeddingResult embedding_experiment(const EmbeddingConfig& cfg) {
    if (cfg.replicas < 1) throw DomainError("embedding_experiment: need at least one replica");
    if (cfg.n < 6) throw DomainError("embedding_experiment: need n >= 6");
    if (!(cfg.epsilon > 0.0)) throw DomainError("embedding_experiment: epsilon must be positive");
    cfg.sk.validate();

    EmbeddingResult out;
    out.replicas.resize(cfg.replicas);
    parallel_for(cfg.replicas, cfg.threads,
                 [&](std::size_t r) { out.replicas[r] = embedding_replica(cfg, cfg.base_seed + r); });

    for (std::size_t method = 0; method < 2; ++method) {
        for (std::size_t pair = 0; pair < 2; ++pair) {
            std::vector<double> values;
            for (const auto& rep : out.replicas) values.push_back(rep.mse[method][pair]);
            EmbeddingSummaryRow row;
            row.method = method == 0 ? EmbedMethod::Bistochastic : EmbedMethod::DiffusionMap;
            row.pair = static_cast<int>(pair) + 1;
            std::tie(row.mse_mean, row.mse_std) = mean_std(values);
            row.replicas = cfg.replicas;
            out.summary.push_back(row);
        }
    }
    return out;
}

}  // namespace bistoch

#include "bistoch/noise.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bistoch/errors.hpp"
#include "bistoch/rng.hpp"

namespace bistoch {

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Simple: return "simple";
        case NoiseKind::Heteroskedastic: return "heteroskedastic";
        case NoiseKind::Iid: return "iid";
    }
    return "?";
}

NoiseKind parse_noise_kind(const std::string& name) {
    if (name == "simple") return NoiseKind::Simple;
    if (name == "heteroskedastic") return NoiseKind::Heteroskedastic;
    if (name == "iid") return NoiseKind::Iid;
    throw DomainError("unknown noise kind '" + name + "'");
}

void NoiseModel::validate() const {
    if (m < 4) throw DomainError("noise: ambient dimension must be at least 4");
    if (!(sigma_out > 0.0) || !std::isfinite(sigma_out)) throw DomainError("noise: sigma_out must be positive");
    if (!(p_out >= 0.0 && p_out < 1.0)) throw DomainError("noise: p_out must be in [0, 1)");
}

double heteroskedastic_gamma(double t) {
    const double s = 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * t));
    return std::pow(10.0, 1.0 - s * s);
}

double outlier_probability(const NoiseModel& model, double t, double u) {
    switch (model.kind) {
        case NoiseKind::Simple: return model.p_out;
        case NoiseKind::Heteroskedastic: {
            double frac = std::fmod(1.0 - t + u, 1.0);
            if (frac < 0.0) frac += 1.0;
            return 0.05 + 0.9 * frac;
        }
        case NoiseKind::Iid: return 0.95;
    }
    return 0.0;
}

Dataset add_noise(const Dataset& ds, const NoiseModel& model, std::uint64_t seed) {
    model.validate();
    if (ds.ambient_dim() != model.m)
        throw DomainError("add_noise: dataset has " + std::to_string(ds.ambient_dim()) + " columns, model expects " +
                          std::to_string(model.m));
    Dataset out = ds;
    PointMatrix noisy = ds.clean_points;
    std::vector<bool> flags(ds.n, false);
    Rng rng(seed);
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(model.m));
    const double shift = model.shared_shift && model.kind == NoiseKind::Heteroskedastic ? rng.uniform() : 0.0;
    for (std::size_t i = 0; i < ds.n; ++i) {
        const double u = model.kind == NoiseKind::Heteroskedastic ? (model.shared_shift ? shift : rng.uniform()) : 0.0;
        const bool outlier = rng.bernoulli(outlier_probability(model, ds.t[i], u));
        double gamma = 1.0;
        if (model.kind == NoiseKind::Heteroskedastic)
            gamma = 0.9 * heteroskedastic_gamma(ds.t[i]) + 0.1 * rng.uniform(0.0, 3.0);
        else if (model.kind == NoiseKind::Iid)
            gamma = rng.uniform(0.0, 3.0);
        if (!outlier) continue;
        flags[i] = true;
        const double sd = model.sigma_out * std::sqrt(gamma) * inv_sqrt_m;
        auto row = noisy.row(static_cast<Eigen::Index>(i));
        for (Eigen::Index j = 0; j < row.size(); ++j) row(j) += sd * rng.normal();
    }
    out.noisy_points = std::move(noisy);
    out.outlier_flags = std::move(flags);
    return out;
}

CrossTermStats cross_term_stats(const Dataset& ds) {
    if (!ds.noisy_points || !ds.outlier_flags) throw DomainError("cross_term_stats: dataset has no noise");
    const auto& flags = *ds.outlier_flags;
    std::vector<Eigen::Index> out_idx;
    for (std::size_t i = 0; i < ds.n; ++i)
        if (flags[i]) out_idx.push_back(static_cast<Eigen::Index>(i));

    CrossTermStats stats;
    stats.frac_inliers = 1.0 - static_cast<double>(out_idx.size()) / static_cast<double>(ds.n);
    if (out_idx.empty()) return stats;

    const Eigen::Index n = static_cast<Eigen::Index>(ds.n);
    const Eigen::Index q = static_cast<Eigen::Index>(out_idx.size());
    const PointMatrix& clean = ds.clean_points;
    PointMatrix xi(q, clean.cols());
    for (Eigen::Index a = 0; a < q; ++a) xi.row(a) = ds.noisy_points->row(out_idx[a]) - clean.row(out_idx[a]);

    // cx(j, a) = x_j^c . xi_a,   nn(a, b) = xi_a . xi_b
    const Matrix cx = clean * xi.transpose();
    const Matrix nn = xi * xi.transpose();
    std::vector<Eigen::Index> slot(ds.n, -1);
    for (Eigen::Index a = 0; a < q; ++a) slot[static_cast<std::size_t>(out_idx[a])] = a;

    // For an outlier i (slot a) and any j != i:
    //   (x_i - x_j)^T (xi_i - xi_j) = cx(i,a) - cx(j,a) - cx(i,b) + cx(j,b)   (b = slot of j, if outlier)
    double best = 0.0;
    for (Eigen::Index a = 0; a < q; ++a) {
        const Eigen::Index i = out_idx[a];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const Eigen::Index b = slot[static_cast<std::size_t>(j)];
            if (b >= 0 && b < a) continue;  // outlier pair already visited
            double data_noise = cx(i, a) - cx(j, a);
            double noise_noise = 0.0;
            if (b >= 0) {
                data_noise += cx(j, b) - cx(i, b);
                noise_noise = nn(a, b);
            }
            const double r = -2.0 * data_noise - 2.0 * noise_noise;
            best = std::max(best, std::abs(r));
        }
    }
    stats.max_abs_r = best;
    return stats;
}

}  // namespace bistoch

#include "bistoch/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bistoch/errors.hpp"
#include "bistoch/parallel.hpp"

namespace bistoch {

namespace {

constexpr double kPi = std::numbers::pi;

// Index one past the last nonzero entry of each row.
std::vector<Eigen::Index> row_support(const PointMatrix& points) {
    std::vector<Eigen::Index> support(static_cast<std::size_t>(points.rows()), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        Eigen::Index s = points.cols();
        while (s > 0 && points(i, s - 1) == 0.0) --s;
        support[static_cast<std::size_t>(i)] = s;
    }
    return support;
}

// Four interleaved partial sums, combined as (s0 + s1) + (s2 + s3). Extra
// zero terms leave every partial sum unchanged, so truncating at the joint
// support gives the same value as the full-length sum.
double squared_distance(const double* a, const double* b, Eigen::Index len) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    Eigen::Index k = 0;
    for (; k + 4 <= len; k += 4) {
        const double d0 = a[k] - b[k];
        const double d1 = a[k + 1] - b[k + 1];
        const double d2 = a[k + 2] - b[k + 2];
        const double d3 = a[k + 3] - b[k + 3];
        s0 += d0 * d0;
        s1 += d1 * d1;
        s2 += d2 * d2;
        s3 += d3 * d3;
    }
    if (k < len) { const double d = a[k] - b[k]; s0 += d * d; ++k; }
    if (k < len) { const double d = a[k] - b[k]; s1 += d * d; ++k; }
    if (k < len) { const double d = a[k] - b[k]; s2 += d * d; ++k; }
    return (s0 + s1) + (s2 + s3);
}

}  // namespace

std::string to_string(Convention c) {
    return c == Convention::Normalized ? "normalized" : "unscaled";
}

Convention parse_convention(const std::string& name) {
    if (name == "normalized") return Convention::Normalized;
    if (name == "unscaled") return Convention::Unscaled;
    throw DomainError("unknown affinity convention '" + name + "'");
}

double gaussian_kernel(double xi, int d) {
    if (!(xi >= 0.0)) throw DomainError("gaussian_kernel: xi must be non-negative");
    if (d < 1) throw DomainError("gaussian_kernel: d must be positive");
    return std::pow(4.0 * kPi, -0.5 * d) * std::exp(-xi / 4.0);
}

double normalization_constant(std::size_t n, double epsilon, int d) {
    return 1.0 / (static_cast<double>(n) * std::pow(4.0 * kPi * epsilon, 0.5 * d));
}

Matrix squared_distances(const PointMatrix& points, std::size_t threads) {
    const Eigen::Index n = points.rows();
    const auto support = row_support(points);
    Matrix out(n, n);
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t iu) {
        const auto i = static_cast<Eigen::Index>(iu);
        const double* xi = points.row(i).data();
        out(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Eigen::Index len = std::max(support[iu], support[static_cast<std::size_t>(j)]);
            const double d = squared_distance(xi, points.row(j).data(), len);
            out(i, j) = d;
            out(j, i) = d;
        }
    });
    return out;
}

Affinity affinity_from_squared_distances(const Matrix& sq_dist, double epsilon, int d, bool zero_diag,
                                         Convention convention) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("affinity: epsilon must be positive");
    if (d < 1) throw DomainError("affinity: intrinsic dimension must be positive");
    const Eigen::Index n = sq_dist.rows();
    if (n < 2 || sq_dist.cols() != n) throw DomainError("affinity: need a square distance matrix with n >= 2");

    const double scale =
        convention == Convention::Normalized ? normalization_constant(static_cast<std::size_t>(n), epsilon, d) : 1.0;
    const double inv4eps = 1.0 / (4.0 * epsilon);

    Affinity a;
    a.epsilon = epsilon;
    a.intrinsic_dim = d;
    a.zero_diag = zero_diag;
    a.convention = convention;
    a.matrix.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a.matrix(j, j) = zero_diag ? 0.0 : scale;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double w = std::exp(-sq_dist(i, j) * inv4eps) * scale;
            a.matrix(i, j) = w;
            a.matrix(j, i) = w;
        }
    }
    return a;
}

Affinity build_affinity(const PointMatrix& points, double epsilon, int d, bool zero_diag, Convention convention,
                        std::size_t threads) {
    if (!(epsilon > 0.0)) throw DomainError("build_affinity: epsilon must be positive");
    if (points.rows() < 2) throw DomainError("build_affinity: need n >= 2");
    return affinity_from_squared_distances(squared_distances(points, threads), epsilon, d, zero_diag, convention);
}

Vector degree(const Matrix& a) { return a.rowwise().sum(); }

Vector degree(const Affinity& a) { return degree(a.matrix); }

KernelMoments kernel_moments(int d) {
    if (d < 1 || d > 3) throw DomainError("kernel_moments: d must be 1, 2 or 3");
    using boost::math::quadrature::gauss_kronrod;
    const double radius = std::sqrt(200.0);
    // Surface area of the unit sphere in R^d: 2 pi^(d/2) / Gamma(d/2).
    const double sphere = 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
    auto radial0 = [d](double r) { return std::pow(r, d - 1) * gaussian_kernel(r * r, d); };
    auto radial2 = [d](double r) { return std::pow(r, d + 1) * gaussian_kernel(r * r, d); };
    const double i0 = gauss_kronrod<double, 31>::integrate(radial0, 0.0, radius, 15, 1e-14);
    const double i2 = gauss_kronrod<double, 31>::integrate(radial2, 0.0, radius, 15, 1e-14);
    return {sphere * i0, sphere * i2 / d};
}

}  // namespace bistoch

#include "bistoch/manifold.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "bistoch/csv.hpp"
#include "bistoch/errors.hpp"
#include "bistoch/rng.hpp"

namespace bistoch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCurveFrequency = 2.0;

void require_unit_interval(double t, const char* what) {
    if (!(t >= 0.0 && t < 1.0))
        throw DomainError(std::string(what) + ": intrinsic coordinate outside [0, 1)");
}

}  // namespace

std::string to_string(DensityKind kind) {
    return kind == DensityKind::Sinusoidal1D ? "sinusoidal" : "circle";
}

DensityKind parse_density_kind(const std::string& name) {
    if (name == "sinusoidal") return DensityKind::Sinusoidal1D;
    if (name == "circle") return DensityKind::UniformCircle;
    throw DomainError("unknown density kind '" + name + "'");
}

Eigen::Vector4d curve_point(double t) {
    require_unit_interval(t, "curve_point");
    const double scale = 1.0 / (kTwoPi * std::sqrt(5.0));
    const double a = kTwoPi * t;
    const double b = kCurveFrequency * kTwoPi * t;
    const double r = 2.0 / kCurveFrequency;
    return scale * Eigen::Vector4d(std::cos(a), std::sin(a), r * std::cos(b), r * std::sin(b));
}

Eigen::Vector2d circle_point(double t) {
    require_unit_interval(t, "circle_point");
    const double a = kTwoPi * t;
    return Eigen::Vector2d(std::cos(a), std::sin(a)) / kTwoPi;
}

std::size_t native_dim(DensityKind kind) {
    return kind == DensityKind::Sinusoidal1D ? 4 : 2;
}

double density(double t, DensityKind kind) {
    require_unit_interval(t, "density");
    if (kind == DensityKind::UniformCircle) return 1.0;
    return 1.0 - 0.6 * std::sin(6.0 * kPi * t);
}

double density_derivative(double t, DensityKind kind) {
    require_unit_interval(t, "density_derivative");
    if (kind == DensityKind::UniformCircle) return 0.0;
    return -3.6 * kPi * std::cos(6.0 * kPi * t);
}

double density_cdf(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("density_cdf: t outside [0, 1]");
    return t - (0.1 / kPi) * (1.0 - std::cos(6.0 * kPi * t));
}

double inverse_density_cdf(double u) {
    if (!(u >= 0.0 && u < 1.0)) throw DomainError("inverse_density_cdf: u outside [0, 1)");
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60 && hi - lo >= 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (density_cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return std::min(0.5 * (lo + hi), std::nextafter(1.0, 0.0));
}

Dataset sample_dataset(std::size_t n, DensityKind kind, std::uint64_t seed) {
    if (n < 2) throw DomainError("sample_dataset: need n >= 2");
    Dataset ds;
    ds.n = n;
    ds.seed = seed;
    ds.t.resize(n);
    ds.clean_points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(native_dim(kind)));
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const auto row = static_cast<Eigen::Index>(i);
        if (kind == DensityKind::Sinusoidal1D) {
            ds.t[i] = inverse_density_cdf(u);
            ds.clean_points.row(row) = curve_point(ds.t[i]).transpose();
        } else {
            ds.t[i] = u;
            ds.clean_points.row(row) = circle_point(ds.t[i]).transpose();
        }
    }
    return ds;
}

double test_function(double t) {
    require_unit_interval(t, "test_function");
    return std::sin(kTwoPi * (t + 0.05));
}

double test_function_d1(double t) {
    require_unit_interval(t, "test_function_d1");
    return kTwoPi * std::cos(kTwoPi * (t + 0.05));
}

double test_function_d2(double t) {
    require_unit_interval(t, "test_function_d2");
    return -kTwoPi * kTwoPi * std::sin(kTwoPi * (t + 0.05));
}

double delta_p_f(double t, DensityKind kind) {
    const double drift = density_derivative(t, kind) / density(t, kind);
    return test_function_d2(t) + drift * test_function_d1(t);
}

PointMatrix embed_ambient(const PointMatrix& points, std::size_t m) {
    const auto k = static_cast<std::size_t>(points.cols());
    if (m < k) throw DomainError("embed_ambient: m smaller than the source dimension");
    PointMatrix out = PointMatrix::Zero(points.rows(), static_cast<Eigen::Index>(m));
    out.leftCols(points.cols()) = points;
    return out;
}

Dataset embed_dataset(const Dataset& ds, std::size_t m) {
    Dataset out = ds;
    out.clean_points = embed_ambient(ds.clean_points, m);
    if (ds.noisy_points) out.noisy_points = embed_ambient(*ds.noisy_points, m);
    return out;
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
    const PointMatrix& pts = ds.observed();
    out << 't';
    for (Eigen::Index j = 0; j < pts.cols(); ++j) out << ",x" << (j + 1);
    out << ",outlier\n";
    for (std::size_t i = 0; i < ds.n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        out << csv::format(ds.t[i]);
        for (Eigen::Index j = 0; j < pts.cols(); ++j) out << ',' << csv::format(pts(row, j));
        const bool flag = ds.outlier_flags && (*ds.outlier_flags)[i];
        out << ',' << (flag ? 1 : 0) << '\n';
    }
}

Dataset read_dataset_csv(std::istream& in, DensityKind kind) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("dataset CSV: missing header");
    const auto header = csv::split(line);
    if (header.size() < 3 || header.front() != "t" || header.back() != "outlier")
        throw DomainError("dataset CSV: header must be t,x1..xm,outlier");
    const std::size_t m = header.size() - 2;
    if (m < native_dim(kind)) throw DomainError("dataset CSV: fewer columns than the generator dimension");

    std::vector<double> t;
    std::vector<std::vector<double>> rows;
    std::vector<bool> flags;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split(line);
        if (fields.size() != header.size()) throw DomainError("dataset CSV: ragged row");
        t.push_back(csv::parse_double(fields.front()));
        std::vector<double> row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = csv::parse_double(fields[j + 1]);
        rows.push_back(std::move(row));
        const auto& flag = fields.back();
        if (flag != "0" && flag != "1") throw DomainError("dataset CSV: outlier column must be 0 or 1");
        flags.push_back(flag == "1");
    }
    if (t.size() < 2) throw DomainError("dataset CSV: need at least two rows");

    Dataset ds;
    ds.n = t.size();
    ds.t = t;
    ds.clean_points = PointMatrix::Zero(static_cast<Eigen::Index>(ds.n), static_cast<Eigen::Index>(m));
    PointMatrix observed(static_cast<Eigen::Index>(ds.n), static_cast<Eigen::Index>(m));
    bool any_outlier = false;
    for (std::size_t i = 0; i < ds.n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (kind == DensityKind::Sinusoidal1D)
            ds.clean_points.row(r).head<4>() = curve_point(t[i]).transpose();
        else
            ds.clean_points.row(r).head<2>() = circle_point(t[i]).transpose();
        for (std::size_t j = 0; j < m; ++j) observed(r, static_cast<Eigen::Index>(j)) = rows[i][j];
        any_outlier = any_outlier || flags[i];
    }
    if (any_outlier) {
        for (std::size_t i = 0; i < ds.n; ++i)
            if (!flags[i]) observed.row(static_cast<Eigen::Index>(i)) = ds.clean_points.row(static_cast<Eigen::Index>(i));
        ds.noisy_points = std::move(observed);
        ds.outlier_flags = std::move(flags);
    }
    return ds;
}

}  // namespace bistoch

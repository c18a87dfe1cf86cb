#pragma once

// Synthetic manifold data: a unit-length closed curve in R^4 sampled with a
// non-uniform density, a uniformly sampled unit-length circle, the test
// function f and the analytic weighted Laplacian of f.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bistoch/types.hpp"

namespace bistoch {

enum class DensityKind { Sinusoidal1D, UniformCircle };

std::string to_string(DensityKind kind);
DensityKind parse_density_kind(const std::string& name);

struct Dataset {
    std::size_t n = 0;
    std::vector<double> t;                    // intrinsic coordinate in [0, 1)
    PointMatrix clean_points;                 // n x m
    std::optional<PointMatrix> noisy_points;  // n x m
    std::optional<std::vector<bool>> outlier_flags;
    std::uint64_t seed = 0;

    std::size_t ambient_dim() const { return static_cast<std::size_t>(clean_points.cols()); }
    bool has_noise() const { return noisy_points.has_value(); }
    // Noisy coordinates when present, otherwise the clean ones.
    const PointMatrix& observed() const { return noisy_points ? *noisy_points : clean_points; }
};

// Unit-speed closed curve in R^4 (frequency ratio 2 between the two planes).
Eigen::Vector4d curve_point(double t);

// Unit-length circle in R^2: (cos 2 pi t, sin 2 pi t) / (2 pi).
Eigen::Vector2d circle_point(double t);

// Native ambient dimension of the generator: 4 for the curve, 2 for the circle.
std::size_t native_dim(DensityKind kind);

double density(double t, DensityKind kind);
double density_derivative(double t, DensityKind kind);

// CDF of the sinusoidal density: t - (0.1 / pi) (1 - cos 6 pi t).
double density_cdf(double t);

// Inverse of density_cdf by bisection on [0, 1).
double inverse_density_cdf(double u);

Dataset sample_dataset(std::size_t n, DensityKind kind, std::uint64_t seed);

// f(t) = sin(2 pi (t + 0.05)) and its first two derivatives in t.
double test_function(double t);
double test_function_d1(double t);
double test_function_d2(double t);

// Weighted Laplacian f'' + (p'/p) f' of the test function on the unit-speed curve.
double delta_p_f(double t, DensityKind kind);

PointMatrix embed_ambient(const PointMatrix& points, std::size_t m);

// Pads clean (and noisy, if present) points with zero columns up to m.
Dataset embed_dataset(const Dataset& ds, std::size_t m);

// CSV with header t,x1..xm,outlier. The x columns hold the observed
// coordinates (noisy when present). Floats use 17 significant digits.
void write_dataset_csv(std::ostream& out, const Dataset& ds);

// Reads the CSV above. Clean rows are regenerated from t with the generator
// of `kind` and zero-padded to the file's width; rows flagged as outliers keep
// the file coordinates as their noisy points.
Dataset read_dataset_csv(std::istream& in, DensityKind kind);

}  // namespace bistoch

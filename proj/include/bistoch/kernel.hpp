#pragma once

// Gaussian kernel affinity matrices.
//
//   Normalized:  W_ij = n^-1 eps^(-d/2) (4 pi)^(-d/2) exp(-|x_i - x_j|^2 / (4 eps))
//   Unscaled:    G_ij = exp(-|x_i - x_j|^2 / (4 eps))
//
// Both are assembled once per unordered pair and mirrored, so the stored
// matrix is bitwise symmetric.

#include <cstddef>
#include <string>
#include <utility>

#include "bistoch/types.hpp"

namespace bistoch {

enum class Convention { Normalized, Unscaled };

// What has been applied to a raw kernel matrix. Set by the normalization
// routines in laplacian.hpp and carried into the Laplacian kind.
enum class Normalization { Raw, Bistochastic, DiffusionMap };

std::string to_string(Convention c);
Convention parse_convention(const std::string& name);

struct Affinity {
    Matrix matrix;
    double epsilon = 0.0;
    int intrinsic_dim = 1;
    bool zero_diag = false;
    Convention convention = Convention::Unscaled;
    Normalization normalization = Normalization::Raw;

    Eigen::Index size() const { return matrix.rows(); }
};

// g(xi) = (4 pi)^(-d/2) exp(-xi / 4)
double gaussian_kernel(double xi, int d);

// Constant n^-1 (4 pi eps)^(-d/2) relating the two conventions.
double normalization_constant(std::size_t n, double epsilon, int d);

// Exact pairwise squared Euclidean distances, zero diagonal. Trailing zero
// columns of a row are skipped (they contribute exact zeros), which makes
// zero-padded high-dimensional embeddings cheap.
Matrix squared_distances(const PointMatrix& points, std::size_t threads = 1);

Affinity affinity_from_squared_distances(const Matrix& sq_dist, double epsilon, int d, bool zero_diag,
                                         Convention convention);

Affinity build_affinity(const PointMatrix& points, double epsilon, int d, bool zero_diag, Convention convention,
                        std::size_t threads = 1);

// Row sums.
Vector degree(const Affinity& a);
Vector degree(const Matrix& a);

struct KernelMoments {
    double m0 = 0.0;
    double m2 = 0.0;
};

// m0 = int_{R^d} g(|u|^2) du and m2 = d^-1 int_{R^d} |u|^2 g(|u|^2) du,
// integrated in radius up to |u|^2 = 200. Supports d in {1, 2, 3}.
KernelMoments kernel_moments(int d);

}  // namespace bistoch

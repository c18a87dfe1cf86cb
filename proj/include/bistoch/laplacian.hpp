#pragma once

// Graph Laplacians built from a (normalized) affinity K:
//   Unnormalized:  L = D(K) - K
//   RandomWalk:    L = I - D(K)^-1 K
// with K either the bistochastic affinity D_eta W0 D_eta or the alpha = 1/2
// diffusion-map affinity W0_ij / sqrt(D_i D_j).

#include <optional>
#include <string>

#include "bistoch/kernel.hpp"
#include "bistoch/types.hpp"

namespace bistoch {

enum class LaplacianForm { Unnormalized, RandomWalk };

enum class LaplacianKind { BistochUn, BistochRw, DmUn, DmRw };

std::string to_string(LaplacianKind kind);
LaplacianKind parse_laplacian_kind(const std::string& name);
LaplacianForm form_of(LaplacianKind kind);
bool is_bistochastic(LaplacianKind kind);

struct LaplacianOp {
    Matrix matrix;
    Vector degrees;  // row sums of the affinity the operator was built from
    Normalization normalization = Normalization::Raw;
    LaplacianForm form = LaplacianForm::Unnormalized;
    double epsilon = 0.0;

    // Four-way tag; empty for Laplacians of a raw (unnormalized) affinity.
    std::optional<LaplacianKind> kind() const;
};

struct EigenPairs {
    Vector values;   // ascending
    Matrix vectors;  // n x k, unit 2-norm columns, largest-magnitude entry positive
};

// eta_i A_ij eta_j, computed once per unordered pair.
Affinity bistochastic_affinity(const Affinity& a, const Vector& eta);

// W0_ij / sqrt(D_i D_j) with D the row sums of W0.
Affinity dm_affinity(const Affinity& a);

LaplacianOp laplacian_from_affinity(const Affinity& k, LaplacianForm form);

// -(1/eps) L f
Vector apply_rescaled(const LaplacianOp& l, const Vector& f);

// Smallest k eigenpairs of a random-walk Laplacian, solved through the
// symmetric matrix S = D^-1/2 K D^-1/2 and mapped back as psi = D^-1/2 phi.
EigenPairs smallest_eigenpairs(const LaplacianOp& l, Eigen::Index k);

}  // namespace bistoch

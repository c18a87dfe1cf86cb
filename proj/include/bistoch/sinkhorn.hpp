#pragma once

// Approximate, lower-bounded symmetric matrix scaling.
//
// Given a symmetric non-negative A, find eta > 0 with
//   || diag(eta) A diag(eta) 1 - 1 ||_inf < eps_sk   and   min_i eta_i >= c_sk
// using accelerated symmetric Sinkhorn-Knopp sweeps:
//
//   eta <- 1 / sqrt(A 1), clamp to c_sk
//   for k = 1..max_iter:
//       e = D_eta A D_eta 1 - 1;  stop if |e|_inf < eps_sk
//       u = 1 ./ (A eta);  v = 1 ./ (A u);  eta = sqrt(u .* v);  clamp to c_sk
//
// The residual is tested before each update, so an input that is already
// bistochastic reports k = 1.

#include <cstddef>
#include <string>
#include <vector>

#include "bistoch/kernel.hpp"
#include "bistoch/manifold.hpp"
#include "bistoch/types.hpp"

namespace bistoch {

enum class SkInit { InverseSqrtDegree, Ones };

std::string to_string(SkInit init);
SkInit parse_sk_init(const std::string& name);

struct SkConfig {
    double c_sk = 0.01;     // lower bound on eta, same units as the input matrix; 0 disables the clamp
    double eps_sk = 1e-3;   // infinity-norm tolerance on the row-sum residual
    std::size_t max_iter = 50;
    SkInit init = SkInit::InverseSqrtDegree;

    void validate() const;
};

struct ScalingResult {
    Vector eta;
    std::size_t iterations = 0;
    std::vector<double> residual_history;  // entry j = |e|_inf tested at loop iteration j + 1
    std::size_t projection_hits = 0;       // clamped entries summed over every projection step
    bool converged = false;
};

// e_i = eta_i * sum_j A_ij eta_j - 1
Vector scaling_residual(const Matrix& a, const Vector& eta);
inline Vector scaling_residual(const Affinity& a, const Vector& eta) { return scaling_residual(a.matrix, eta); }

ScalingResult approx_sym_sk(const Matrix& a, const SkConfig& cfg);
inline ScalingResult approx_sym_sk(const Affinity& a, const SkConfig& cfg) { return approx_sym_sk(a.matrix, cfg); }

// Leading-order population scaling factor p^(-1/2)(t_i).
Vector population_reference(const Dataset& ds, DensityKind kind);

}  // namespace bistoch

#pragma once

// Outlier noise in ambient space: x_i = x_i^c + b_i z_i with
// b_i ~ Bern(p_i) and z_i ~ N(0, (sigma_i^2 / m) I_m).
//
//   Simple:          p_i = p_out,  sigma_i = sigma_out
//   Heteroskedastic: p_i = 0.05 + 0.9 ((1 - t_i + u) mod 1),  u ~ U(0, 1)
//                    drawn once per dataset (default) or once per sample
//                    sigma_i = sigma_out sqrt(0.9 g1(t_i) + 0.1 g2),  g2 ~ U(0, 3)
//                    g1(t) = 10^(1 - ((1 + sin 2 pi t) / 2)^2)
//   Iid:             p_i = 0.95,  sigma_i = sigma_out sqrt(g),  g ~ U(0, 3)
//
// Draw order, one stream: the shared u first (Heteroskedastic with
// shared_shift), then per sample in index order: u_i (Heteroskedastic
// without shared_shift), b_i, the uniform gamma draw (Heteroskedastic and
// Iid), then m standard normals for z_i only when b_i = 1.

#include <cstdint>
#include <string>

#include "bistoch/manifold.hpp"

namespace bistoch {

enum class NoiseKind { Simple, Heteroskedastic, Iid };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

struct NoiseModel {
    NoiseKind kind = NoiseKind::Simple;
    std::size_t m = 2000;
    double sigma_out = 0.1;
    double p_out = 0.1;  // Simple only
    bool shared_shift = true;  // Heteroskedastic: one u for all samples

    void validate() const;
};

// Outlier probability p_i for one sample; u is only used by Heteroskedastic.
double outlier_probability(const NoiseModel& model, double t, double u);

// 10^(1 - ((1 + sin 2 pi t) / 2)^2)
double heteroskedastic_gamma(double t);

Dataset add_noise(const Dataset& ds, const NoiseModel& model, std::uint64_t seed);

struct CrossTermStats {
    double max_abs_r = 0.0;   // sup_{i != j} |r_ij|
    double frac_inliers = 1.0;
};

// r_ij = -2 (x_i^c - x_j^c)^T (xi_i - xi_j) - 2 xi_i^T xi_j with xi = noisy - clean.
CrossTermStats cross_term_stats(const Dataset& ds);

}  // namespace bistoch

#include "bistoch/sinkhorn.hpp"

#include <cmath>

#include "bistoch/errors.hpp"

namespace bistoch {

namespace {

std::size_t project(Vector& eta, double floor) {
    if (floor <= 0.0) return 0;
    std::size_t hits = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        if (eta(i) < floor) {
            eta(i) = floor;
            ++hits;
        }
    }
    return hits;
}

Vector reciprocal(const Vector& x, std::size_t iteration, const char* what) {
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double r = 1.0 / x(i);
        if (!(x(i) > 0.0) || !std::isfinite(r))
            throw NumericalFailure(std::string("approx_sym_sk: non-positive or non-finite ") + what, iteration);
        out(i) = r;
    }
    return out;
}

}  // namespace

std::string to_string(SkInit init) {
    return init == SkInit::InverseSqrtDegree ? "degree" : "ones";
}

SkInit parse_sk_init(const std::string& name) {
    if (name == "degree") return SkInit::InverseSqrtDegree;
    if (name == "ones") return SkInit::Ones;
    throw DomainError("unknown SK initialization '" + name + "'");
}

void SkConfig::validate() const {
    if (!(c_sk >= 0.0) || !std::isfinite(c_sk)) throw DomainError("c_sk must be non-negative");
    if (!(eps_sk > 0.0) || !std::isfinite(eps_sk)) throw DomainError("eps_sk must be positive");
    if (max_iter < 1) throw DomainError("max_iter must be at least 1");
}

Vector scaling_residual(const Matrix& a, const Vector& eta) {
    if (a.rows() != a.cols() || a.rows() != eta.size()) throw DomainError("scaling_residual: dimension mismatch");
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        if (!(eta(i) > 0.0)) throw DomainError("scaling_residual: eta must be entrywise positive");
    const Vector a_eta = a * eta;
    return (eta.array() * a_eta.array() - 1.0).matrix();
}

ScalingResult approx_sym_sk(const Matrix& a, const SkConfig& cfg) {
    cfg.validate();
    if (a.rows() != a.cols() || a.rows() < 1) throw DomainError("approx_sym_sk: matrix must be square");
    const Vector row_sums = a.rowwise().sum();
    for (Eigen::Index i = 0; i < row_sums.size(); ++i)
        if (!(row_sums(i) > 0.0))
            throw DegenerateInputError("approx_sym_sk: row " + std::to_string(i) + " has no positive entry");

    ScalingResult result;
    if (cfg.init == SkInit::InverseSqrtDegree)
        result.eta = row_sums.array().rsqrt().matrix();
    else
        result.eta = Vector::Ones(a.rows());
    result.projection_hits += project(result.eta, cfg.c_sk);

    for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
        result.iterations = k;
        const Vector a_eta = a * result.eta;
        const double residual = (result.eta.array() * a_eta.array() - 1.0).abs().maxCoeff();
        if (!std::isfinite(residual)) throw NumericalFailure("approx_sym_sk: non-finite residual", k);
        result.residual_history.push_back(residual);
        if (residual < cfg.eps_sk) {
            result.converged = true;
            break;
        }
        const Vector u = reciprocal(a_eta, k, "A*eta");
        const Vector v = reciprocal(a * u, k, "A*u");
        result.eta = (u.array() * v.array()).sqrt().matrix();
        result.projection_hits += project(result.eta, cfg.c_sk);
    }
    return result;
}

Vector population_reference(const Dataset& ds, DensityKind kind) {
    Vector out(static_cast<Eigen::Index>(ds.n));
    for (std::size_t i = 0; i < ds.n; ++i) out(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(density(ds.t[i], kind));
    return out;
}

}  // namespace bistoch

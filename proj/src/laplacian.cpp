#include "bistoch/laplacian.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bistoch/errors.hpp"

namespace bistoch {

namespace {

void require_zero_diag(const Affinity& a, const char* what) {
    if (!a.zero_diag) throw DomainError(std::string(what) + ": affinity must have a zero diagonal");
}

Vector positive_degrees(const Matrix& k, const char* what) {
    Vector d = degree(k);
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (!(d(i) > 0.0))
            throw DegenerateInputError(std::string(what) + ": row " + std::to_string(i) + " sums to zero");
    return d;
}

}  // namespace

std::string to_string(LaplacianKind kind) {
    switch (kind) {
        case LaplacianKind::BistochUn: return "bistoch-un";
        case LaplacianKind::BistochRw: return "bistoch-rw";
        case LaplacianKind::DmUn: return "dm-un";
        case LaplacianKind::DmRw: return "dm-rw";
    }
    return "?";
}

LaplacianKind parse_laplacian_kind(const std::string& name) {
    if (name == "bistoch-un") return LaplacianKind::BistochUn;
    if (name == "bistoch-rw") return LaplacianKind::BistochRw;
    if (name == "dm-un") return LaplacianKind::DmUn;
    if (name == "dm-rw") return LaplacianKind::DmRw;
    throw DomainError("unknown Laplacian kind '" + name + "'");
}

LaplacianForm form_of(LaplacianKind kind) {
    return kind == LaplacianKind::BistochUn || kind == LaplacianKind::DmUn ? LaplacianForm::Unnormalized
                                                                           : LaplacianForm::RandomWalk;
}

bool is_bistochastic(LaplacianKind kind) {
    return kind == LaplacianKind::BistochUn || kind == LaplacianKind::BistochRw;
}

std::optional<LaplacianKind> LaplacianOp::kind() const {
    const bool un = form == LaplacianForm::Unnormalized;
    switch (normalization) {
        case Normalization::Bistochastic: return un ? LaplacianKind::BistochUn : LaplacianKind::BistochRw;
        case Normalization::DiffusionMap: return un ? LaplacianKind::DmUn : LaplacianKind::DmRw;
        case Normalization::Raw: break;
    }
    return std::nullopt;
}

Affinity bistochastic_affinity(const Affinity& a, const Vector& eta) {
    require_zero_diag(a, "bistochastic_affinity");
    const Eigen::Index n = a.size();
    if (eta.size() != n) throw DomainError("bistochastic_affinity: dimension mismatch");
    Affinity out = a;
    out.normalization = Normalization::Bistochastic;
    for (Eigen::Index j = 0; j < n; ++j) {
        out.matrix(j, j) = 0.0;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double w = eta(i) * a.matrix(i, j) * eta(j);
            out.matrix(i, j) = w;
            out.matrix(j, i) = w;
        }
    }
    return out;
}

Affinity dm_affinity(const Affinity& a) {
    require_zero_diag(a, "dm_affinity");
    const Vector d = positive_degrees(a.matrix, "dm_affinity");
    const Vector inv_sqrt = d.array().rsqrt().matrix();
    const Eigen::Index n = a.size();
    Affinity out = a;
    out.normalization = Normalization::DiffusionMap;
    for (Eigen::Index j = 0; j < n; ++j) {
        out.matrix(j, j) = 0.0;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double w = a.matrix(i, j) * inv_sqrt(i) * inv_sqrt(j);
            out.matrix(i, j) = w;
            out.matrix(j, i) = w;
        }
    }
    return out;
}

LaplacianOp laplacian_from_affinity(const Affinity& k, LaplacianForm form) {
    const Eigen::Index n = k.size();
    LaplacianOp op;
    op.normalization = k.normalization;
    op.form = form;
    op.epsilon = k.epsilon;
    op.degrees = degree(k.matrix);
    op.matrix = -k.matrix;
    if (form == LaplacianForm::Unnormalized) {
        for (Eigen::Index i = 0; i < n; ++i) op.matrix(i, i) += op.degrees(i);
        return op;
    }
    op.degrees = positive_degrees(k.matrix, "laplacian_from_affinity");
    for (Eigen::Index i = 0; i < n; ++i) {
        op.matrix.row(i) /= op.degrees(i);
        op.matrix(i, i) += 1.0;
    }
    return op;
}

Vector apply_rescaled(const LaplacianOp& l, const Vector& f) {
    if (f.size() != l.matrix.cols()) throw DomainError("apply_rescaled: dimension mismatch");
    if (!(l.epsilon > 0.0)) throw DomainError("apply_rescaled: operator has no bandwidth");
    return -(l.matrix * f) / l.epsilon;
}

EigenPairs smallest_eigenpairs(const LaplacianOp& l, Eigen::Index k) {
    if (l.form != LaplacianForm::RandomWalk) throw DomainError("smallest_eigenpairs: needs a random-walk Laplacian");
    const Eigen::Index n = l.matrix.rows();
    if (k < 1 || k > n) throw DomainError("smallest_eigenpairs: k must be in [1, n]");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(l.degrees(i) > 0.0)) throw DegenerateInputError("smallest_eigenpairs: non-positive degree");

    // D^-1 K = I - L, so S = D^1/2 (I - L) D^-1/2.
    const Vector sqrt_d = l.degrees.array().sqrt().matrix();
    Matrix s = -l.matrix;
    s.diagonal().array() += 1.0;
    s = sqrt_d.asDiagonal() * s * sqrt_d.cwiseInverse().asDiagonal();
    s = 0.5 * (s + s.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
    if (solver.info() != Eigen::Success) throw NumericalFailure("smallest_eigenpairs: eigensolver failed", 0);

    EigenPairs out;
    out.values.resize(k);
    out.vectors.resize(n, k);
    const Vector inv_sqrt_d = sqrt_d.cwiseInverse();
    for (Eigen::Index c = 0; c < k; ++c) {
        const Eigen::Index src = n - 1 - c;  // largest eigenvalues of S first
        out.values(c) = 1.0 - solver.eigenvalues()(src);
        Vector psi = inv_sqrt_d.cwiseProduct(solver.eigenvectors().col(src));
        psi /= psi.norm();
        Eigen::Index arg = 0;
        psi.cwiseAbs().maxCoeff(&arg);
        if (psi(arg) < 0.0) psi = -psi;
        out.vectors.col(c) = psi;
    }
    return out;
}

}  // namespace bistoch

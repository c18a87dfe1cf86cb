#include <doctest.h>

#include "bistoch/errors.hpp"
#include "bistoch/laplacian.hpp"
#include "bistoch/sinkhorn.hpp"
#include "oracles.hpp"

using namespace bistoch;

namespace {

Affinity wrap(const Matrix& m, bool zero_diag = true, double eps = 1.0) {
    Affinity a;
    a.matrix = m;
    a.epsilon = eps;
    a.zero_diag = zero_diag;
    return a;
}

Affinity random_affinity(oracle::Gen& gen, int n) {
    Matrix m = gen.symmetric_positive(n, 0.01, 1.0);
    m.diagonal().setZero();
    return wrap(m, true, gen.uniform(1e-3, 1e-1));
}

LaplacianOp build(const Affinity& a, LaplacianKind kind) {
    if (is_bistochastic(kind)) {
        SkConfig cfg;
        cfg.c_sk = 0.0;
        cfg.eps_sk = 1e-12;
        cfg.max_iter = 500;
        return laplacian_from_affinity(bistochastic_affinity(a, approx_sym_sk(a, cfg).eta), form_of(kind));
    }
    return laplacian_from_affinity(dm_affinity(a), form_of(kind));
}

Matrix swap2() {
    Matrix a(2, 2);
    a << 0, 1, 1, 0;
    return a;
}

}  // namespace

TEST_CASE("bistochastic_affinity") {
    oracle::Gen gen(1);
    const Affinity a = random_affinity(gen, 6);
    CHECK(bistochastic_affinity(a, Vector::Ones(6)).matrix == a.matrix);
    Vector eta(2);
    eta << 2, 3;
    const Affinity k = bistochastic_affinity(wrap(swap2()), eta);
    CHECK(k.matrix(0, 1) == 6);
    CHECK(k.matrix(1, 0) == 6);
    CHECK(k.matrix(0, 0) == 0);
    CHECK(k.normalization == Normalization::Bistochastic);

    Vector e(6);
    for (int i = 0; i < 6; ++i) e(i) = gen.uniform(0.5, 2.0);
    const Affinity w = bistochastic_affinity(a, e);
    const Vector row_res = degree(w) - Vector::Ones(6);
    CHECK((row_res - scaling_residual(a, e)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(w.matrix == w.matrix.transpose());
    CHECK_THROWS_AS(bistochastic_affinity(wrap(swap2(), false), Vector::Ones(2)), DomainError);
}

TEST_CASE("dm_affinity") {
    Matrix m(2, 2);
    m << 0, 0.3, 0.3, 0;
    const Affinity k = dm_affinity(wrap(m));
    CHECK(k.matrix(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k.matrix(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k.normalization == Normalization::DiffusionMap);

    oracle::Gen gen(2);
    const Affinity a = random_affinity(gen, 7);
    const Affinity base = dm_affinity(a);
    const Affinity scaled = dm_affinity(wrap(Matrix(3.7 * a.matrix)));
    CHECK((base.matrix - scaled.matrix).cwiseAbs().maxCoeff() < 1e-15);

    const auto p = gen.permutation(7);
    Matrix pm(7, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) pm(i, j) = a.matrix(p[i], p[j]);
    const Affinity pk = dm_affinity(wrap(pm));
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) REQUIRE(pk.matrix(i, j) == doctest::Approx(base.matrix(p[i], p[j])).epsilon(1e-14));

    Matrix z = Matrix::Zero(3, 3);
    z(0, 1) = z(1, 0) = 1.0;
    CHECK_THROWS_AS(dm_affinity(wrap(z)), DegenerateInputError);
    CHECK_THROWS_AS(dm_affinity(wrap(m, false)), DomainError);
}

TEST_CASE("laplacian_from_affinity") {
    const LaplacianOp un = laplacian_from_affinity(wrap(swap2()), LaplacianForm::Unnormalized);
    Matrix expect(2, 2);
    expect << 1, -1, -1, 1;
    CHECK(un.matrix == expect);
    const LaplacianOp rw = laplacian_from_affinity(wrap(Matrix(2.0 * swap2())), LaplacianForm::RandomWalk);
    CHECK(rw.matrix == expect);
    CHECK_FALSE(un.kind().has_value());

    Matrix z = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(laplacian_from_affinity(wrap(z), LaplacianForm::RandomWalk), DegenerateInputError);

    oracle::Gen gen(3);
    const Affinity a = random_affinity(gen, 9);
    CHECK(build(a, LaplacianKind::BistochUn).kind() == LaplacianKind::BistochUn);
    CHECK(build(a, LaplacianKind::BistochRw).kind() == LaplacianKind::BistochRw);
    CHECK(build(a, LaplacianKind::DmUn).kind() == LaplacianKind::DmUn);
    CHECK(build(a, LaplacianKind::DmRw).kind() == LaplacianKind::DmRw);
}

TEST_CASE("every kind annihilates constants") {
    oracle::Gen gen(4);
    for (int trial = 0; trial < 30; ++trial) {
        const Affinity a = random_affinity(gen, gen.integer(2, 25));
        for (auto kind : {LaplacianKind::BistochUn, LaplacianKind::BistochRw, LaplacianKind::DmUn, LaplacianKind::DmRw}) {
            const LaplacianOp l = build(a, kind);
            const double row_norm = l.matrix.cwiseAbs().rowwise().sum().maxCoeff();
            const Vector ones = Vector::Ones(a.size());
            REQUIRE((l.matrix * ones).cwiseAbs().maxCoeff() <= 1e-10 * row_norm);
            REQUIRE(apply_rescaled(l, ones).cwiseAbs().maxCoeff() <= 1e-10 * row_norm / l.epsilon);
        }
    }
}

TEST_CASE("apply_rescaled is linear in the operator") {
    oracle::Gen gen(5);
    const Affinity a = random_affinity(gen, 8);
    LaplacianOp l = laplacian_from_affinity(dm_affinity(a), LaplacianForm::Unnormalized);
    Vector f(8);
    for (int i = 0; i < 8; ++i) f(i) = gen.normal();
    const Vector base = apply_rescaled(l, f);
    CHECK((base + l.matrix * f / l.epsilon).cwiseAbs().maxCoeff() < 1e-12);
    LaplacianOp scaled = l;
    scaled.matrix *= 2.5;
    CHECK((apply_rescaled(scaled, f) - 2.5 * base).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenpairs of small operators") {
    const LaplacianOp l = laplacian_from_affinity(wrap(swap2()), LaplacianForm::RandomWalk);
    const EigenPairs ep = smallest_eigenpairs(l, 2);
    CHECK(std::abs(ep.values(0)) < 1e-14);
    CHECK(ep.values(1) == doctest::Approx(2.0).epsilon(1e-14));

    oracle::Gen gen(6);
    const Affinity a = random_affinity(gen, 10);
    const LaplacianOp b = build(a, LaplacianKind::BistochRw);
    const EigenPairs e = smallest_eigenpairs(b, 4);
    CHECK(std::abs(e.values(0)) < 1e-10);
    const Vector c = e.vectors.col(0);
    CHECK((c.array() - c.mean()).abs().maxCoeff() < 1e-8);
    CHECK_THROWS_AS(smallest_eigenpairs(b, 11), DomainError);
}

TEST_CASE("random-walk spectra lie in [0, 2] and vectors are eigenvectors") {
    oracle::Gen gen(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = gen.integer(2, 20);
        const Affinity a = random_affinity(gen, n);
        for (auto kind : {LaplacianKind::BistochRw, LaplacianKind::DmRw}) {
            const LaplacianOp l = build(a, kind);
            const EigenPairs e = smallest_eigenpairs(l, n);
            for (int k = 0; k < n; ++k) {
                REQUIRE(e.values(k) >= -1e-10);
                REQUIRE(e.values(k) <= 2.0 + 1e-10);
                if (k > 0) REQUIRE(e.values(k) >= e.values(k - 1));
                const Vector v = e.vectors.col(k);
                REQUIRE(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
                Eigen::Index idx;
                v.cwiseAbs().maxCoeff(&idx);
                REQUIRE(v(idx) > 0.0);
                REQUIRE((l.matrix * v - e.values(k) * v).cwiseAbs().maxCoeff() < 1e-9);
            }
        }
    }
}

TEST_CASE("bistochastic Laplacian ignores the affinity convention") {
    oracle::Gen gen(8);
    const PointMatrix pts = gen.points(40, 3, 0.05);
    const double eps = 2e-3;
    const Affinity un = build_affinity(pts, eps, 1, true, Convention::Unscaled);
    const Affinity no = build_affinity(pts, eps, 1, true, Convention::Normalized);
    const LaplacianOp lu = build(un, LaplacianKind::BistochUn);
    const LaplacianOp ln = build(no, LaplacianKind::BistochUn);
    const double scale = lu.matrix.cwiseAbs().maxCoeff();
    CHECK((lu.matrix - ln.matrix).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    const LaplacianOp du = build(un, LaplacianKind::DmRw);
    const LaplacianOp dn = build(no, LaplacianKind::DmRw);
    CHECK((du.matrix - dn.matrix).cwiseAbs().maxCoeff() <= 1e-13);
}

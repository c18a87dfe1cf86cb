#include <doctest.h>

#include "bistoch/errors.hpp"
#include "bistoch/noise.hpp"
#include "oracles.hpp"

using namespace bistoch;

namespace {

Dataset clean(std::size_t n, std::size_t m, std::uint64_t seed, DensityKind kind = DensityKind::Sinusoidal1D) {
    return embed_dataset(sample_dataset(n, kind, seed), m);
}

NoiseModel model(NoiseKind kind, std::size_t m, double p_out = 0.1) {
    NoiseModel nm;
    nm.kind = kind;
    nm.m = m;
    nm.p_out = p_out;
    return nm;
}

}  // namespace

TEST_CASE("model validation") {
    CHECK_THROWS_AS(model(NoiseKind::Simple, 3).validate(), DomainError);
    CHECK_THROWS_AS(model(NoiseKind::Simple, 10, 1.0).validate(), DomainError);
    CHECK_THROWS_AS(model(NoiseKind::Simple, 10, -0.1).validate(), DomainError);
    NoiseModel nm = model(NoiseKind::Simple, 10);
    nm.sigma_out = 0.0;
    CHECK_THROWS_AS(nm.validate(), DomainError);
    CHECK_THROWS_AS(add_noise(clean(10, 8, 1), model(NoiseKind::Simple, 10), 1), DomainError);
}

TEST_CASE("zero outlier probability leaves the data untouched") {
    const Dataset ds = clean(200, 10, 1);
    const Dataset out = add_noise(ds, model(NoiseKind::Simple, 10, 0.0), 5);
    REQUIRE(out.has_noise());
    CHECK(*out.noisy_points == ds.clean_points);
    for (bool b : *out.outlier_flags) REQUIRE_FALSE(b);
    const CrossTermStats st = cross_term_stats(out);
    CHECK(st.max_abs_r == 0.0);
    CHECK(st.frac_inliers == 1.0);
}

TEST_CASE("inliers are bitwise clean and outliers move") {
    for (auto kind : {NoiseKind::Simple, NoiseKind::Heteroskedastic, NoiseKind::Iid}) {
        const Dataset ds = clean(300, 50, 2);
        const Dataset out = add_noise(ds, model(kind, 50), 9);
        std::size_t outliers = 0;
        for (std::size_t i = 0; i < ds.n; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            if ((*out.outlier_flags)[i]) {
                ++outliers;
                REQUIRE(out.noisy_points->row(r) != ds.clean_points.row(r));
            } else {
                REQUIRE(out.noisy_points->row(r) == ds.clean_points.row(r));
            }
        }
        CHECK(outliers > 0);
        CHECK(out.clean_points == ds.clean_points);
    }
}

TEST_CASE("outlier count concentrates") {
    const Dataset out = add_noise(clean(3000, 4, 3), model(NoiseKind::Simple, 4), 4);
    std::size_t count = 0;
    for (bool b : *out.outlier_flags) count += b;
    CHECK(std::abs(static_cast<double>(count) - 300.0) <= 3.0 * std::sqrt(3000 * 0.1 * 0.9));
    const Dataset iid = add_noise(clean(3000, 4, 3), model(NoiseKind::Iid, 4), 4);
    count = 0;
    for (bool b : *iid.outlier_flags) count += b;
    CHECK(std::abs(static_cast<double>(count) - 2850.0) <= 3.0 * std::sqrt(3000 * 0.95 * 0.05));
}

TEST_CASE("noise magnitude") {
    // E|z|^2 = sigma^2 for Simple noise.
    const Dataset ds = clean(2000, 500, 5);
    const Dataset out = add_noise(ds, model(NoiseKind::Simple, 500, 0.5), 6);
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ds.n; ++i)
        if ((*out.outlier_flags)[i]) {
            const auto r = static_cast<Eigen::Index>(i);
            total += (out.noisy_points->row(r) - ds.clean_points.row(r)).squaredNorm();
            ++count;
        }
    CHECK(total / count == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("outlier probabilities") {
    const NoiseModel simple = model(NoiseKind::Simple, 10, 0.3);
    CHECK(outlier_probability(simple, 0.4, 0.9) == 0.3);
    CHECK(outlier_probability(model(NoiseKind::Iid, 10), 0.4, 0.9) == 0.95);
    const NoiseModel het = model(NoiseKind::Heteroskedastic, 10);
    CHECK(outlier_probability(het, 0.25, 0.5) == doctest::Approx(0.05 + 0.9 * 0.25));
    CHECK(outlier_probability(het, 0.75, 0.5) == doctest::Approx(0.05 + 0.9 * 0.75));
    oracle::Gen gen(7);
    for (int k = 0; k < 1000; ++k) {
        const double p = outlier_probability(het, gen.uniform(), gen.uniform());
        REQUIRE(p >= 0.05);
        REQUIRE(p <= 0.95);
    }
    CHECK(heteroskedastic_gamma(0.25) == doctest::Approx(1.0));
    CHECK(heteroskedastic_gamma(0.75) == doctest::Approx(10.0));
    CHECK(heteroskedastic_gamma(0.0) == doctest::Approx(std::pow(10.0, 0.75)));
}

TEST_CASE("per-sample shift option") {
    NoiseModel het = model(NoiseKind::Heteroskedastic, 10);
    const Dataset ds = clean(500, 10, 8, DensityKind::UniformCircle);
    const Dataset a = add_noise(ds, het, 3);
    het.shared_shift = false;
    const Dataset b = add_noise(ds, het, 3);
    CHECK(*a.outlier_flags != *b.outlier_flags);
}

TEST_CASE("determinism") {
    for (auto kind : {NoiseKind::Simple, NoiseKind::Heteroskedastic, NoiseKind::Iid}) {
        const Dataset ds = clean(100, 30, 1);
        const Dataset a = add_noise(ds, model(kind, 30), 77);
        const Dataset b = add_noise(ds, model(kind, 30), 77);
        CHECK(*a.noisy_points == *b.noisy_points);
        CHECK(*a.outlier_flags == *b.outlier_flags);
        const Dataset c = add_noise(ds, model(kind, 30), 78);
        CHECK(*a.noisy_points != *c.noisy_points);
    }
}

TEST_CASE("cross-term statistics match a direct double loop") {
    for (int trial = 0; trial < 5; ++trial) {
        const Dataset ds = clean(60, 40, 10 + trial);
        const Dataset out = add_noise(ds, model(NoiseKind::Simple, 40, 0.3), 20 + trial);
        const CrossTermStats st = cross_term_stats(out);
        const double ref = oracle::cross_term_max(out.clean_points, *out.noisy_points);
        CHECK(st.max_abs_r == doctest::Approx(ref).epsilon(1e-12));
        std::size_t inl = 0;
        for (bool b : *out.outlier_flags) inl += !b;
        CHECK(st.frac_inliers == doctest::Approx(inl / 60.0));
    }
    // Exactly one outlier.
    Dataset one = clean(30, 12, 4);
    PointMatrix noisy = one.clean_points;
    oracle::Gen gen(5);
    for (int k = 0; k < 12; ++k) noisy(7, k) += 0.05 * gen.normal();
    one.noisy_points = noisy;
    one.outlier_flags = std::vector<bool>(30, false);
    (*one.outlier_flags)[7] = true;
    CHECK(cross_term_stats(one).max_abs_r == doctest::Approx(oracle::cross_term_max(one.clean_points, noisy)).epsilon(1e-12));
    CHECK_THROWS_AS(cross_term_stats(clean(5, 4, 1)), DomainError);
}

TEST_CASE("outlier inner products are small in high dimension") {
    const Dataset out = add_noise(clean(400, 2000, 6), model(NoiseKind::Simple, 2000), 7);
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < out.n; ++i)
        if ((*out.outlier_flags)[i]) idx.push_back(static_cast<Eigen::Index>(i));
    REQUIRE(idx.size() > 10);
    double worst = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const auto za = out.noisy_points->row(idx[a]) - out.clean_points.row(idx[a]);
            const auto zb = out.noisy_points->row(idx[b]) - out.clean_points.row(idx[b]);
            worst = std::max(worst, std::abs(za.dot(zb)));
        }
    CHECK(worst < 5.0 * 0.01 * std::sqrt(std::log(2000.0) / 2000.0));
}

#include <cmath>

#include <Eigen/SVD>

#include "doctest.h"
#include "lisbeam/metrics.hpp"
#include "lisbeam/transceiver.hpp"
#include "test_util.hpp"

using namespace lisbeam;
using testutil::random_cmat;

namespace {

// Two-stream water-filling by enumerating both support sizes.
RVec two_stream_water_filling(double s1, double s2, double rho, double noise)
{
    const double f1 = noise / (s1 * s1);
    const double f2 = noise / (s2 * s2);
    const double mu = (rho + f1 + f2) / 2.0;
    RVec p(2);
    if (mu > f1 && mu > f2) {
        p << mu - f1, mu - f2;
        return p;
    }
    // single active stream: the stronger one takes everything
    if (f1 <= f2)
        p << rho, 0.0;
    else
        p << 0.0, rho;
    return p;
}

CMat random_unit_modulus(Rng& rng, int rows, int cols)
{
    std::uniform_real_distribution<double> ph(0.0, 2 * kPi);
    CMat m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            m(r, c) = std::polar(1.0, ph(rng));
    return m;
}

} // namespace

TEST_CASE("truncated_svd examples")
{
    const TruncatedSvd id = truncated_svd(CMat::Identity(3, 3), 2);
    CHECK(id.sigma1[0] == doctest::Approx(1.0));
    CHECK(id.sigma1[1] == doctest::Approx(1.0));

    CMat d = CMat::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 2.0;
    d(2, 2) = 1.0;
    const TruncatedSvd s = truncated_svd(d, 2);
    CHECK(s.sigma1[0] == doctest::Approx(3.0));
    CHECK(s.sigma1[1] == doctest::Approx(2.0));

    CHECK_THROWS_AS(truncated_svd(d, 4), DimensionError);
    CHECK_THROWS_AS(truncated_svd(d, 0), DimensionError);
    d(1, 2) = std::nan("");
    CHECK_THROWS_AS(truncated_svd(d, 2), NumericalError);
}

TEST_CASE("truncated_svd is the best rank-N_s approximation")
{
    Rng rng(41);
    for (int t = 0; t < 10; ++t) {
        const CMat h = random_cmat(rng, 6, 5);
        for (int ns = 1; ns <= 5; ++ns) {
            const TruncatedSvd s = truncated_svd(h, ns);
            CHECK((s.u1.adjoint() * s.u1 - CMat::Identity(ns, ns)).norm() < 1e-10);
            CHECK((s.v1.adjoint() * s.v1 - CMat::Identity(ns, ns)).norm() < 1e-10);
            for (int i = 1; i < ns; ++i)
                CHECK(s.sigma1[i] <= s.sigma1[i - 1]);
            const CMat approx = s.u1 * s.sigma1.cast<cdouble>().asDiagonal() * s.v1.adjoint();
            // independent full decomposition
            Eigen::BDCSVD<CMat> full(h);
            const RVec& sv = full.singularValues();
            double tail = 0.0;
            for (Eigen::Index i = ns; i < sv.size(); ++i)
                tail += sv[i] * sv[i];
            const double err = (h - approx).squaredNorm();
            if (tail > 0.0)
                CHECK(std::abs(err - tail) < 1e-8 * tail);
            else
                CHECK(err < 1e-20 * h.squaredNorm());
        }
    }
}

TEST_CASE("water_filling examples")
{
    SUBCASE("equal singular values split evenly")
    {
        RVec s(2);
        s << 1.3, 1.3;
        const PowerAllocation a = water_filling(s, 2.0, 0.4);
        CHECK(a.powers[0] == doctest::Approx(1.0));
        CHECK(a.powers[1] == doctest::Approx(1.0));
    }
    SUBCASE("two-stream closed form")
    {
        RVec s(2);
        s << std::sqrt(2.0), 1.0;
        const PowerAllocation a = water_filling(s, 1.0, 1.0);
        const RVec want = two_stream_water_filling(std::sqrt(2.0), 1.0, 1.0, 1.0);
        CHECK(a.powers[0] == doctest::Approx(want[0]).epsilon(1e-12));
        CHECK(a.powers[1] == doctest::Approx(want[1]).epsilon(1e-12));
        CHECK(a.powers[0] == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("weak second stream gets nothing")
    {
        RVec s(2);
        s << 100.0, 1e-3;
        const PowerAllocation a = water_filling(s, 0.01, 1.0);
        CHECK(a.powers[0] == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(a.powers[1] == 0.0);
    }
    SUBCASE("no channel")
    {
        CHECK_THROWS_AS(water_filling(RVec::Zero(3), 1.0, 1.0), NoChannelError);
        CHECK_THROWS_AS(water_filling(RVec::Ones(2), 0.0, 1.0), DomainError);
    }
}

TEST_CASE("water_filling against the two-case oracle and KKT conditions")
{
    Rng rng(42);
    std::uniform_real_distribution<double> sv(0.01, 3.0), rho(0.01, 10.0), noise(0.01, 2.0);
    for (int t = 0; t < 200; ++t) {
        double a = sv(rng), b = sv(rng);
        if (a < b)
            std::swap(a, b);
        RVec s(2);
        s << a, b;
        const double r = rho(rng), n = noise(rng);
        const PowerAllocation alloc = water_filling(s, r, n);
        const RVec want = two_stream_water_filling(a, b, r, n);
        CHECK(std::abs(alloc.powers[0] - want[0]) < 1e-10 * r);
        CHECK(std::abs(alloc.powers[1] - want[1]) < 1e-10 * r);
        CHECK(std::abs(alloc.powers.sum() - r) < 1e-10 * r);
        for (int i = 0; i < 2; ++i) {
            const double floor = n / (s[i] * s[i]);
            CHECK(alloc.powers[i] >= 0.0);
            if (alloc.powers[i] > 0.0)
                CHECK(std::abs(alloc.powers[i] + floor - alloc.water_level) < 1e-8 * alloc.water_level);
            else
                CHECK(alloc.water_level <= floor * (1 + 1e-12));
        }
    }
}

TEST_CASE("digital precoder and combiner")
{
    Rng rng(43);
    const CMat h = random_cmat(rng, 7, 6);

    SUBCASE("equal power meets the power budget")
    {
        const TruncatedSvd s = truncated_svd(h, 3);
        CHECK(digital_precoder_equal_power(s, 5.0).squaredNorm() == doctest::Approx(5.0).epsilon(1e-12));
        const PowerAllocation a = water_filling(s.sigma1, 5.0, 0.3);
        CHECK(digital_precoder(s, a).squaredNorm() == doctest::Approx(5.0).epsilon(1e-10));
    }
    SUBCASE("single stream uses the principal right singular vector")
    {
        const TruncatedSvd s = truncated_svd(h, 1);
        const CMat f = digital_precoder_equal_power(s, 4.0);
        Eigen::JacobiSVD<CMat> full(h, Eigen::ComputeThinV);
        const CVec v1 = full.matrixV().col(0);
        CHECK(std::abs(std::abs(v1.dot(f.col(0))) - 2.0) < 1e-10);
    }
    SUBCASE("combiner is orthonormal and recovers noiseless symbols")
    {
        const TruncatedSvd s = truncated_svd(h, 3);
        const CMat w = digital_combiner(s);
        CHECK((w.adjoint() * w - CMat::Identity(3, 3)).norm() < 1e-10);
        CHECK((pseudo_inverse(w) * w - CMat::Identity(3, 3)).norm() < 1e-10);
        const CVec c = testutil::random_cvec(rng, 3);
        CHECK((pseudo_inverse(w) * (w * c) - c).norm() < 1e-12 * c.norm());
    }
    SUBCASE("rate of the optimal transceiver equals the per-stream closed form")
    {
        for (int t = 0; t < 20; ++t) {
            const CMat hh = random_cmat(rng, 6, 8);
            const TruncatedSvd s = truncated_svd(hh, 4);
            const PowerAllocation a = water_filling(s.sigma1, 10.0, 0.5);
            const double closed = spectral_efficiency_digital(s.sigma1, a.powers, 0.5);
            const double full = spectral_efficiency(hh, digital_precoder(s, a), digital_combiner(s), 0.5);
            CHECK(std::abs(full - closed) < 1e-9 * closed);
        }
    }
    CHECK_THROWS_AS(digital_precoder(truncated_svd(h, 2), PowerAllocation{RVec::Ones(3), 1.0}), DimensionError);
}

TEST_CASE("equal power is near-optimal at high effective SNR")
{
    Rng rng(44);
    for (int t = 0; t < 20; ++t) {
        const CMat h = random_cmat(rng, 8, 8);
        const TruncatedSvd s = truncated_svd(h, 4);
        const double rho = 1.0;
        // pick the noise so every stream has rho s_i^2 / (N_s sigma^2) >= 1e3
        const double noise = rho * s.sigma1[3] * s.sigma1[3] / (4 * 1e3);
        const double eq =
            spectral_efficiency_digital(s.sigma1, RVec::Constant(4, rho / 4), noise);
        const double wf = spectral_efficiency_digital(s.sigma1, water_filling(s.sigma1, rho, noise).powers, noise);
        CHECK(wf >= eq - 1e-12);
        CHECK((wf - eq) / wf < 0.01);
    }
}

TEST_CASE("pseudo_inverse")
{
    Rng rng(45);
    const CMat a = random_cmat(rng, 6, 3);
    const CMat p = pseudo_inverse(a);
    CHECK((a * p * a - a).norm() < 1e-12 * a.norm());
    CHECK((p * a * p - p).norm() < 1e-12 * p.norm());

    CMat rank_one = a.col(0) * a.col(1).adjoint();
    const CMat q = pseudo_inverse(rank_one);
    CHECK((rank_one * q * rank_one - rank_one).norm() < 1e-10 * rank_one.norm());
}

TEST_CASE("hybrid residual gradient matches central finite differences")
{
    Rng rng(46);
    for (int t = 0; t < 20; ++t) {
        const CMat target = random_cmat(rng, 6, 2);
        const CMat digital = random_cmat(rng, 3, 2);
        const CVec x = Eigen::Map<const CVec>(random_unit_modulus(rng, 6, 3).data(), 18);
        auto f = [&](const CVec& y) { return hybrid_residual(y, target, digital); };
        CHECK(testutil::gradient_error(f, hybrid_residual_gradient(x, target, digital), x) < 1e-5);
    }
}

TEST_CASE("hybrid_factorize")
{
    Rng rng(47);

    SUBCASE("a full set of RF chains makes the fit exact")
    {
        const CMat target = random_cmat(rng, 6, 2);
        const HybridFactorization fac = hybrid_factorize(target, 6, HybridConfig{}, rng);
        CHECK((target - fac.analog * fac.digital).norm() < 1e-8);
    }
    SUBCASE("residuals never increase and the analog part stays unit modulus")
    {
        for (int t = 0; t < 5; ++t) {
            const CMat target = random_cmat(rng, 16, 3);
            const HybridFactorization fac = hybrid_factorize(target, 4, HybridConfig{}, rng);
            REQUIRE(!fac.residuals.empty());
            for (std::size_t k = 1; k < fac.residuals.size(); ++k)
                CHECK(fac.residuals[k] <= fac.residuals[k - 1] * (1 + 1e-12) + 1e-12);
            double worst = 0.0;
            for (Eigen::Index i = 0; i < fac.analog.size(); ++i)
                worst = std::max(worst, std::abs(std::abs(fac.analog.data()[i]) - 1.0));
            CHECK(worst < 1e-12);
        }
    }
    SUBCASE("precoder is normalized to the power budget")
    {
        const TruncatedSvd s = truncated_svd(random_cmat(rng, 4, 16), 2);
        const CMat f_opt = digital_precoder_equal_power(s, 7.0);
        const HybridPrecoder p = hybrid_precoder(f_opt, 4, 7.0, HybridConfig{}, rng);
        CHECK(std::abs(p.product().squaredNorm() - 7.0) < 1e-8 * 7.0);
        CHECK(p.f_rf.rows() == 16);
        CHECK(p.f_rf.cols() == 4);
        CHECK(p.f_bb.rows() == 4);
        CHECK(p.f_bb.cols() == 2);
        const HybridCombiner w = hybrid_combiner(s.u1, 3, HybridConfig{}, rng);
        CHECK(w.w_rf.rows() == 4);
        CHECK(w.product().cols() == 2);
    }
    SUBCASE("dimension checks")
    {
        const CMat target = random_cmat(rng, 6, 3);
        CHECK_THROWS_AS(hybrid_factorize(target, 2, HybridConfig{}, rng), DimensionError);
        CHECK_THROWS_AS(hybrid_factorize(target, 7, HybridConfig{}, rng), DimensionError);
        CHECK_THROWS_AS(hybrid_factorize(CMat::Zero(6, 2), 3, HybridConfig{}, rng), NoChannelError);
    }
}

TEST_CASE("planted hybrid factorization is recovered")
{
    Rng rng(48);
    HybridConfig cfg;
    cfg.max_alternations = 3000;
    cfg.tolerance = 0.0;
    int recovered = 0;
    for (int t = 0; t < 5; ++t) {
        const CMat f0 = random_unit_modulus(rng, 8, 3);
        const CMat target = f0 * random_cmat(rng, 3, 2);
        const HybridFactorization fac = hybrid_factorize(target, 3, cfg, rng);
        const double rel = (target - fac.analog * fac.digital).norm() / target.norm();
        MESSAGE("planted instance " << t << ": relative residual " << rel);
        recovered += rel < 1e-6;
    }
    CHECK(recovered == 5);
}

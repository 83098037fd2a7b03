// SPDX-License-Identifier: MIT
#include "oracles.hpp"

#include "trom/bench.hpp"
#include "trom/fom.hpp"
#include "trom/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace trom;

namespace {

ParameterGrid burgers_grid(Index k1, Index k2) {
    return ParameterGrid({ParameterAxis::make("a1", 0.01, 0.5, k1, AxisScale::Log),
                          ParameterAxis::make("a2", 0.2, 0.8, k2, AxisScale::Uniform)});
}

OfflineOptions tt(double eps) {
    OfflineOptions o;
    o.eps = eps;
    return o;
}

}  // namespace

TEST(H1Seminorm, BurgersByHand) {
    const BurgersModel model({3, 4, 1.0});
    // h = 1/4; differences 1, 1, 1, -3 including both boundary zeros.
    EXPECT_NEAR(model.h1_seminorm_sq(Vector::LinSpaced(3, 1, 3)), 12.0 * 4.0, 1e-12);
}

TEST(H1Seminorm, AllenCahnByHand) {
    AllenCahnConfig c;
    c.m = 2;
    const AllenCahnModel model(c);
    Vector u(4);
    u << 0, 1, 2, 3;
    // x-links differ by 1, y-links by 2; h^2 cancels in two dimensions.
    EXPECT_NEAR(model.h1_seminorm_sq(u), 1 + 1 + 4 + 4, 1e-12);
}

TEST(H1Integrals, TrapezoidOverWindow) {
    const BurgersModel model({3, 4, 1.0});
    const Vector u = Vector::LinSpaced(3, 1, 3);
    Matrix ref(3, 4), approx(3, 4);
    const double s[4] = {9.0, 1.0, 2.0, 3.0};  // step 0 lies before t = 0.5
    for (Index k = 0; k < 4; ++k) {
        ref.col(k) = u;
        approx.col(k) = (1.0 + s[k]) * u;
    }
    const H1Integrals h = h1_integrals(model, approx, ref, 0.5);
    EXPECT_NEAR(h.reference, 48.0 * 0.5, 1e-12);
    EXPECT_NEAR(h.error, 48.0 * (0.125 * 1 + 0.25 * 4 + 0.125 * 9), 1e-12);
}

TEST(H1Integrals, RejectsShortWindow) {
    const BurgersModel model({3, 4, 1.0});
    const Matrix z = Matrix::Ones(3, 4);
    EXPECT_THROW((void)h1_integrals(model, z, z, 0.9), InvalidArgument);
}

TEST(CompressionFactor, ManualCountOfOnlinePayload) {
    const BurgersModel model({30, 20, 1.0});
    const SnapshotSet s = sample_snapshots(model, burgers_grid(3, 4));
    const OfflineArtifact art = trom_offline(s.phi, s.psi, s.grid, tt(1e-3));
    // Online payload: the parameter cores plus the R x R scaling block.
    Index entries = 0;
    const Container payload = to_container(art.phi.decomposition);
    for (const auto& [name, t] : payload.blobs())
        if (name.rfind("core_", 0) == 0) entries += t.size();
    const Index last = std::get<TTDecomposition>(art.phi.decomposition).ranks().back();
    entries += last * last;
    EXPECT_NEAR(compression_factor(art.phi, art.dims), 30.0 * 3 * 4 * 20 / static_cast<double>(entries), 1e-12);
    EXPECT_GE(compression_factor(art.phi, art.dims), 1.0);
    const double combined = 2.0 * 30 * 12 * 20 / static_cast<double>(art.phi.online_entries() + art.psi.online_entries());
    EXPECT_NEAR(combined_compression_factor(art), combined, 1e-12);
}

TEST(EffectiveRank, TailErrorAndFormats) {
    Vector s(4);
    s << 4, 2, 1, 0;
    EXPECT_NEAR(svd_tail_error(s, 1), std::sqrt(5.0 / 21.0), 1e-15);
    EXPECT_EQ(svd_tail_error(s, 3), 0.0);
    EXPECT_EQ(svd_tail_error(s, 9), 0.0);
    const DenseTensor t = oracle::random_tensor({5, 3, 4}, 1);
    const TTDecomposition d = tt_svd(t, 0.0);
    EXPECT_EQ(effective_rank(Decomposition(d)), d.ranks().back());
}

TEST(EffectiveRank, TensorTrainBeatsTruncatedSvdOnBurgers) {
    const BurgersModel model({60, 40, 1.0});
    const SnapshotSet s = sample_snapshots(model, burgers_grid(4, 8));
    const Vector sv = thin_svd(unfold_mode1(s.psi), false).s;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const Decomposition d = tt_svd(s.psi, eps);
        EXPECT_LE(relative_error(d, s.psi), svd_tail_error(sv, effective_rank(d))) << "eps=" << eps;
    }
}

TEST(PowerFit, RecoversExactLaw) {
    const std::vector<double> delta{0.4, 0.2, 0.1, 0.05};
    std::vector<double> rho;
    for (double d : delta) rho.push_back(3.0 * std::pow(d, 4));
    const PowerFit fit = fit_power_law(delta, rho);
    EXPECT_NEAR(fit.rate, 4.0, 1e-12);
    EXPECT_NEAR(fit.at(0.025), 3.0 * std::pow(0.025, 4), 1e-14);
    EXPECT_THROW((void)fit_power_law({0.1, 0.1}, {1.0, 2.0}), InvalidArgument);
}

TEST(PowerFit, LinearInterpolationRemainderIsSecondOrder) {
    // A smooth field theta(x, a) = sin(x + a) sampled on refining grids:
    // linear interpolation in a converges like delta^2.
    const Index m = 6, n = 3;
    std::vector<double> delta, rho;
    for (Index k : {3, 5, 9, 17}) {
        const ParameterGrid g({ParameterAxis::make("a", 0.0, 1.0, k, AxisScale::Uniform)});
        DenseTensor t({m, k, n});
        for (Index tt = 0; tt < n; ++tt)
            for (Index j = 0; j < k; ++j)
                for (Index i = 0; i < m; ++i) t[i + m * (j + k * tt)] = std::sin(0.3 * static_cast<double>(i + tt) + 2.0 * g.point(j)[0]);
        // Worst case over many query points, so the rate is not tied to
        // where one point happens to sit inside its interval.
        double worst = 0;
        for (Index q = 0; q <= 100; ++q) {
            const double a = static_cast<double>(q) / 100.0;
            Matrix exact(m, n);
            for (Index tt = 0; tt < n; ++tt)
                for (Index i = 0; i < m; ++i) exact(i, tt) = std::sin(0.3 * static_cast<double>(i + tt) + 2.0 * a);
            worst = std::max(worst, interpolation_remainder(t, g, 2, {a}, exact));
        }
        delta.push_back(grid_spacing(g));
        rho.push_back(worst);
    }
    EXPECT_NEAR(fit_power_law(delta, rho).rate, 2.0, 0.3);
}

TEST(GridSpacing, UsesAxisScale) {
    const ParameterGrid g({ParameterAxis::make("a", 0.01, 1.0, 3, AxisScale::Log),
                           ParameterAxis::make("b", 0.0, 0.5, 3, AxisScale::Uniform)});
    // log axis: two decades in two gaps, i.e. one unit of log10 or ln 10.
    EXPECT_NEAR(grid_spacing(g), g.axes()[0].scaled(1.0) - g.axes()[0].scaled(0.1), 1e-12);
}

TEST(VerifyEstimates, InSampleLosslessHasZeroResidual) {
    const BurgersModel model({16, 24, 1.0});
    const SnapshotSet s = sample_snapshots(model, burgers_grid(2, 3));
    const OfflineArtifact art = trom_offline(s.phi, s.psi, s.grid, tt(0.0));
    const Index full = max_local_dim(art.psi);
    const auto rows = verify_estimates(art, s, model, {s.grid.point(1), s.grid.point(4)}, {full});
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_LE(r.lhs, 1e-20 * frobenius_norm(s.psi) * frobenius_norm(s.psi));
        EXPECT_LE(r.remainder, 1e-12);
        EXPECT_FALSE(r.violated);
    }
}

TEST(VerifyEstimates, BoundHoldsAndResidualShrinksWithN) {
    const BurgersModel model({50, 40, 1.0});
    const SnapshotSet s = sample_snapshots(model, burgers_grid(4, 8));
    const OfflineArtifact art = trom_offline(s.phi, s.psi, s.grid, tt(1e-3));
    const auto alphas = random_parameters(s.grid, 3, 17);
    const auto rows = verify_estimates(art, s, model, alphas, {2, 4, 8, 16});
    ASSERT_EQ(rows.size(), 12u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_FALSE(rows[i].violated) << "row " << i << " ratio " << rows[i].ratio;
        EXPECT_LE(rows[i].phi_lhs, rows[i].phi_bound);
        // C* is computed offline once and shared by every alpha.
        EXPECT_EQ(rows[i].c_star, rows[0].c_star);
        if (i % 4 != 0) EXPECT_LE(rows[i].tail, rows[i - 1].tail);
    }
    EXPECT_EQ(rows[0].c_star, interpolation_constant(art.pty));
}

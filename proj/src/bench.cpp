// SPDX-License-Identifier: MIT
#include "trom/bench.hpp"

#include "trom/linalg.hpp"
#include "trom/reduced.hpp"

#include <chrono>
#include <cmath>

namespace trom {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Index> ranks_of(const Decomposition& d) {
    if (const auto* tt = std::get_if<TTDecomposition>(&d)) return tt->ranks();
    if (const auto* tk = std::get_if<TuckerDecomposition>(&d)) return tk->ranks();
    return {std::get<CPDecomposition>(d).rank};
}

double total(const std::vector<Index>& dims) {
    double n = 1.0;
    for (Index d : dims) n *= static_cast<double>(d);
    return n;
}

/// theta x_2 e^1 ... x_{D+1} e^D as an M x N matrix.
Matrix interpolate_slab(const DenseTensor& theta, const std::vector<Vector>& weights) {
    DenseTensor t = theta;
    for (const auto& e : weights) t = mode_vector_product(t, 1, e);
    return t.as_matrix(theta.dim(0), theta.dim(theta.order() - 1));
}

}  // namespace

H1Integrals h1_integrals(const Model& model, const Matrix& approx, const Matrix& reference, double t_from) {
    require(approx.rows() == reference.rows() && approx.cols() == reference.cols(), "trajectory shapes differ");
    const double dt = model.dt();
    std::vector<Index> ks;
    for (Index k = 0; k < reference.cols(); ++k)
        if (static_cast<double>(k + 1) * dt >= t_from - 1e-9 * dt) ks.push_back(k);
    require(ks.size() >= 2, "time window holds fewer than two steps");
    H1Integrals out;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const double w = (j == 0 || j + 1 == ks.size()) ? 0.5 * dt : dt;
        const Index k = ks[j];
        out.error += w * model.h1_seminorm_sq(approx.col(k) - reference.col(k));
        out.reference += w * model.h1_seminorm_sq(reference.col(k));
    }
    return out;
}

double compression_factor(const CompressedTheta& theta, const std::vector<Index>& dims) {
    return total(dims) / static_cast<double>(theta.online_entries());
}

double combined_compression_factor(const OfflineArtifact& art) {
    return 2.0 * total(art.dims) / static_cast<double>(art.phi.online_entries() + art.psi.online_entries());
}

Index effective_rank(const Decomposition& d) {
    if (const auto* tt = std::get_if<TTDecomposition>(&d)) return tt->v.cols();
    if (const auto* tk = std::get_if<TuckerDecomposition>(&d)) return tk->core.dim(tk->core.order() - 1);
    return std::get<CPDecomposition>(d).rank;
}

double svd_tail_error(const Vector& s, Index r) {
    require(r >= 0, "rank must be non-negative");
    const double all = s.squaredNorm();
    require(all > 0, "all singular values are zero");
    if (r >= s.size()) return 0.0;
    return std::sqrt(s.tail(s.size() - r).squaredNorm() / all);
}

std::vector<RefinementRow> refinement_study(const Model& model, const std::vector<ParameterGrid>& grids,
                                            const OfflineOptions& opts, const QuerySettings& q,
                                            const std::vector<Params>& alphas) {
    require(!alphas.empty(), "refinement study needs query parameters");
    std::vector<Matrix> refs;
    for (const auto& a : alphas) refs.push_back(model.solve(a).u);

    std::vector<RefinementRow> rows;
    for (const auto& grid : grids) {
        RefinementRow row;
        row.shape = grid.shape();
        const auto t0 = std::chrono::steady_clock::now();
        const SnapshotSet snaps = sample_snapshots(model, grid);
        const OfflineArtifact art = trom_offline(snaps.phi, snaps.psi, grid, opts, model.affine_terms());
        row.offline_seconds = seconds_since(t0);
        row.phi_ranks = ranks_of(art.phi.decomposition);
        row.psi_ranks = ranks_of(art.psi.decomposition);
        const Index n_phi = std::min(q.n_phi, max_local_dim(art.phi));
        const Index n_psi = std::min(q.n_psi, max_local_dim(art.psi));

        double err_sum = 0.0, ref_sum = 0.0, err_max = 0.0, ref_max = 0.0, l2 = 0.0, online = 0.0;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            const auto t1 = std::chrono::steady_clock::now();
            const ReducedSolution sol = trom_query(art, model, alphas[i], n_phi, n_psi, q.mode);
            online += seconds_since(t1);
            const H1Integrals h = h1_integrals(model, sol.u, refs[i], q.t_from);
            err_sum += h.error;
            ref_sum += h.reference;
            err_max = std::max(err_max, h.error);
            ref_max = std::max(ref_max, h.reference);
            l2 += relative_l2l2(sol.u, refs[i]);
        }
        const auto count = static_cast<double>(alphas.size());
        row.mean_ratio = err_sum / ref_sum;
        row.max_ratio = err_max / ref_max;
        row.mean_l2 = l2 / count;
        row.online_seconds = online / count;
        rows.push_back(std::move(row));
    }
    return rows;
}

double interpolation_remainder(const DenseTensor& theta, const ParameterGrid& grid, Index p, const Params& alpha,
                               const Matrix& trajectory) {
    const Matrix slab = interpolate_slab(theta, interp_weights(grid, alpha, p));
    require(slab.rows() == trajectory.rows() && slab.cols() == trajectory.cols(), "trajectory does not match snapshots");
    return (trajectory - slab).norm();
}

std::vector<EstimateRow> verify_estimates(const OfflineArtifact& art, const SnapshotSet& snaps, const Model& model,
                                          const std::vector<Params>& alphas, const std::vector<Index>& ns,
                                          const std::vector<double>& fitted_remainders) {
    require(fitted_remainders.empty() || fitted_remainders.size() == alphas.size(),
            "need one fitted remainder per parameter");
    require(art.dims == snaps.phi.dims(), "artifact and snapshots disagree in shape");
    const bool is_cp = art.options.format == TromFormat::CP;
    const double psi_norm = frobenius_norm(snaps.psi);
    const double phi_norm = frobenius_norm(snaps.phi);
    const double psi_err = relative_error(art.psi.decomposition, snaps.psi) * psi_norm;
    const double phi_err = relative_error(art.phi.decomposition, snaps.phi) * phi_norm;
    const double c_star = interpolation_constant(art.pty);
    const Matrix& y = art.psi.basis;
    const Matrix& u = art.phi.basis;

    std::vector<EstimateRow> rows;
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const Params& alpha = alphas[ai];
        const Trajectory tr = model.solve(alpha);
        const auto weights = interp_weights(art.grid, alpha, art.options.p);
        double wn = 1.0;
        for (const auto& e : weights) wn *= e.norm();
        const Svd sf = thin_svd(scaled_core_matrix(art.psi, weights), false);
        const Svd sp = thin_svd(scaled_core_matrix(art.phi, weights), false);
        const double rem = interpolation_remainder(snaps.psi, art.grid, art.options.p, alpha, tr.f);
        const double rem_phi = interpolation_remainder(snaps.phi, art.grid, art.options.p, alpha, tr.u);
        const Matrix f_rows = select_rows(tr.f, art.selection);

        for (Index n : ns) {
            if (n < 1 || n > max_local_dim(art.psi)) continue;
            EstimateRow row;
            row.alpha = alpha;
            row.n = n;
            const Matrix yn = sf.u.leftCols(n);
            const Matrix fhat = y * (yn * (pinv(art.pty * yn) * f_rows));
            row.lhs = (tr.f - fhat).squaredNorm();
            row.c_star = c_star;
            row.weight_norm = wn;
            row.eps_term = wn * art.options.eps * psi_norm;
            row.compression_term = wn * psi_err;
            row.tail = n < sf.s.size() ? sf.s.tail(sf.s.size() - n).norm() : 0.0;
            row.remainder = rem;
            if (!fitted_remainders.empty()) row.remainder_fit = fitted_remainders[ai];
            const double structural = is_cp ? row.compression_term : row.eps_term;
            const double r = row.remainder_fit.value_or(rem);
            row.bound = c_star * c_star * (r + structural + row.tail) * (r + structural + row.tail);
            row.ratio = row.bound > 0 ? row.lhs / row.bound : (row.lhs > 0 ? INFINITY : 0.0);
            row.violated = row.lhs > row.bound * (1.0 + 1e-12) + 1e-24;

            const Index np = std::min(n, max_local_dim(art.phi));
            const Matrix v = u * sp.u.leftCols(np);
            row.phi_lhs = (tr.u - v * (v.transpose() * tr.u)).squaredNorm();
            const double tail_phi = np < sp.s.size() ? sp.s.tail(sp.s.size() - np).norm() : 0.0;
            const double structural_phi = wn * (is_cp ? phi_err : art.options.eps * phi_norm);
            row.phi_bound = std::pow(rem_phi + structural_phi + tail_phi, 2);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

double PowerFit::at(double delta) const { return std::exp(log_c + rate * std::log(delta)); }

PowerFit fit_power_law(const std::vector<double>& delta, const std::vector<double>& rho) {
    require(delta.size() == rho.size() && delta.size() >= 2, "power-law fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(delta.size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
        require(delta[i] > 0 && rho[i] > 0, "power-law fit needs positive data");
        const double x = std::log(delta[i]);
        const double yv = std::log(rho[i]);
        sx += x;
        sy += yv;
        sxx += x * x;
        sxy += x * yv;
    }
    const double den = n * sxx - sx * sx;
    require(den > 0, "power-law fit needs distinct spacings");
    PowerFit f;
    f.rate = (n * sxy - sx * sy) / den;
    f.log_c = (sy - f.rate * sx) / n;
    return f;
}

double grid_spacing(const ParameterGrid& grid) {
    double d = 0.0;
    for (const auto& ax : grid.axes())
        for (std::size_t j = 1; j < ax.nodes.size(); ++j) d = std::max(d, ax.scaled(ax.nodes[j]) - ax.scaled(ax.nodes[j - 1]));
    return d;
}

}  // namespace trom

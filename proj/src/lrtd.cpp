// SPDX-License-Identifier: MIT
#include "trom/lrtd.hpp"

#include "trom/linalg.hpp"
#include "trom/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace trom {

namespace {

Index product(const std::vector<Index>& dims, std::size_t from, std::size_t to) {
    Index p = 1;
    for (std::size_t k = from; k < to; ++k) p *= dims[k];
    return p;
}

double tail_energy(const Vector& s, Index r) {
    return s.size() > r ? s.tail(s.size() - r).squaredNorm() : 0.0;
}

void check_eps(double eps) {
    require(eps >= 0.0 && eps < 1.0 && std::isfinite(eps), "eps must lie in [0, 1)");
}

}  // namespace

std::vector<Index> TTDecomposition::ranks() const {
    std::vector<Index> r{u.cols()};
    for (const auto& c : cores) r.push_back(c.dim(2));
    return r;
}

Index TTDecomposition::storage() const {
    Index n = u.size() + v.size();
    for (const auto& c : cores) n += c.size();
    return n;
}

std::vector<Index> TuckerDecomposition::ranks() const { return core.dims(); }

Index TuckerDecomposition::storage() const {
    Index n = core.size();
    for (const auto& f : factors) n += f.size();
    return n;
}

Index CPDecomposition::storage() const {
    Index n = 0;
    for (const auto& f : factors) n += f.size();
    return n;
}

TTDecomposition tt_svd(const DenseTensor& t, double eps) {
    require(t.order() >= 2, "tt_svd needs a tensor of order >= 2");
    check_eps(eps);
    const auto& dims = t.dims();
    const std::size_t d = dims.size();
    const double norm = frobenius_norm(t);
    const double budget = eps * norm / std::sqrt(static_cast<double>(d - 1));

    TTDecomposition out;
    out.dims = dims;
    out.eps = eps;
    double discarded = 0.0;
    Matrix c = t.as_matrix(dims[0], t.size() / dims[0]);
    Index r_prev = 1;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        const bool last = k + 2 == d;
        const Svd svd = thin_svd(c, last);
        const Index r = truncation_rank(svd.s, budget);
        discarded += tail_energy(svd.s, r);
        const Matrix uk = svd.u.leftCols(r);
        if (k == 0) {
            out.u = uk;
        } else {
            out.cores.emplace_back(std::vector<Index>{r_prev, dims[k], r}, std::vector<double>(uk.data(), uk.data() + uk.size()));
        }
        if (last) {
            out.v = svd.v.leftCols(r) * svd.s.head(r).asDiagonal();
        } else {
            const Matrix next = uk.transpose() * c;
            c = Eigen::Map<const Matrix>(next.data(), r * dims[k + 1], next.size() / (r * dims[k + 1]));
        }
        r_prev = r;
    }
    out.error_estimate = norm > 0 ? std::sqrt(discarded) / norm : 0.0;
    return out;
}

TuckerDecomposition hosvd(const DenseTensor& t, double eps) {
    require(t.order() >= 2, "hosvd needs a tensor of order >= 2");
    check_eps(eps);
    const std::size_t d = t.dims().size();
    const double norm = frobenius_norm(t);
    const double budget = eps * norm / std::sqrt(static_cast<double>(d));

    TuckerDecomposition out;
    out.dims = t.dims();
    out.eps = eps;
    double discarded = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const Svd svd = thin_svd(unfold(t, static_cast<Index>(k)), false);
        const Index r = truncation_rank(svd.s, budget);
        discarded += tail_energy(svd.s, r);
        out.factors.push_back(svd.u.leftCols(r));
    }
    DenseTensor core = t;
    for (std::size_t k = 0; k < d; ++k) core = mode_matrix_product(core, static_cast<Index>(k), out.factors[k].transpose());
    out.core = std::move(core);
    out.error_bound = norm > 0 ? std::sqrt(discarded) / norm : 0.0;
    return out;
}

Matrix khatri_rao(const std::vector<const Matrix*>& factors) {
    require(!factors.empty(), "khatri_rao needs at least one factor");
    const Index rank = factors.front()->cols();
    Matrix acc = Matrix::Ones(1, rank);
    for (const Matrix* f : factors) {
        require(f->cols() == rank, "khatri_rao factors need equal column counts");
        Matrix next(acc.rows() * f->rows(), rank);
        for (Index r = 0; r < rank; ++r)
            for (Index j = 0; j < f->rows(); ++j) next.col(r).segment(j * acc.rows(), acc.rows()) = acc.col(r) * (*f)(j, r);
        acc = std::move(next);
    }
    return acc;
}

namespace {

std::vector<const Matrix*> factor_range(const std::vector<Matrix>& f, std::size_t from, std::size_t to) {
    std::vector<const Matrix*> out;
    for (std::size_t k = from; k < to; ++k) out.push_back(&f[k]);
    return out;
}

// Matricized tensor times Khatri-Rao product for mode k.
Matrix mttkrp(const DenseTensor& t, const std::vector<Matrix>& f, std::size_t k) {
    const auto& dims = t.dims();
    const std::size_t d = dims.size();
    const Index rank = f[0].cols();
    const Index left = product(dims, 0, k);
    const Index n = dims[k];
    const Index right = product(dims, k + 1, d);
    if (k == 0) return t.as_matrix(n, right) * khatri_rao(factor_range(f, 1, d));
    const Matrix kl = khatri_rao(factor_range(f, 0, k));
    if (k + 1 == d) return t.as_matrix(left, n).transpose() * kl;
    const Matrix partial = t.as_matrix(left * n, right) * khatri_rao(factor_range(f, k + 1, d));
    Matrix out(n, rank);
    for (Index r = 0; r < rank; ++r)
        out.col(r) = Eigen::Map<const Matrix>(partial.col(r).data(), left, n).transpose() * kl.col(r);
    return out;
}

Matrix random_factor(Index rows, Index cols, SplitMix64& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform();
    return m;
}

}  // namespace

CPDecomposition cp_als(const DenseTensor& t, Index rank, const CpOptions& opts) {
    require(rank >= 1, "cp rank must be at least 1");
    require(t.order() >= 2, "cp_als needs a tensor of order >= 2");
    require(opts.max_iters >= 1, "cp_als needs max_iters >= 1");
    const double norm = frobenius_norm(t);
    require(norm > 0, "cp_als of a zero tensor");
    const auto& dims = t.dims();
    const std::size_t d = dims.size();

    SplitMix64 rng(opts.seed);
    CPDecomposition out;
    out.dims = dims;
    out.rank = rank;
    for (std::size_t k = 0; k < d; ++k) {
        Matrix f = random_factor(dims[k], rank, rng);
        if (opts.init == CpInit::Hosvd) {
            const Svd svd = thin_svd(unfold(t, static_cast<Index>(k)), false);
            const Index m = std::min(rank, svd.u.cols());
            f.leftCols(m) = svd.u.leftCols(m);
        }
        out.factors.push_back(std::move(f));
    }

    double prev = std::numeric_limits<double>::infinity();
    for (Index it = 1; it <= opts.max_iters; ++it) {
        for (std::size_t k = 0; k < d; ++k) {
            Matrix h = Matrix::Ones(rank, rank);
            for (std::size_t j = 0; j < d; ++j)
                if (j != k) h = h.cwiseProduct(out.factors[j].transpose() * out.factors[j]);
            out.factors[k] = mttkrp(t, out.factors, k) * pinv(h);
            if (k + 1 < d) {
                for (Index r = 0; r < rank; ++r) {
                    const double cn = out.factors[k].col(r).norm();
                    if (cn > 0) out.factors[k].col(r) /= cn;
                }
            }
        }
        if (!out.factors.back().allFinite()) throw NumericalError("cp_als diverged (non-finite factors)");
        const double err = relative_error(reconstruct(out), t);
        out.error_history.push_back(err);
        out.iterations = it;
        out.relative_error = err;
        if (prev - err < opts.tol) {
            out.converged = true;
            break;
        }
        prev = err;
    }
    return out;
}

DenseTensor reconstruct(const TTDecomposition& d) {
    require(d.dims.size() == d.cores.size() + 2, "tt dims do not match core count");
    (void)checked_numel(d.dims);
    Matrix g = d.u;
    for (const DenseTensor& core : d.cores) {
        const Matrix next = g * core.as_matrix(core.dim(0), core.dim(1) * core.dim(2));
        g = Eigen::Map<const Matrix>(next.data(), g.rows() * core.dim(1), core.dim(2));
    }
    const Matrix full = g * d.v.transpose();
    return DenseTensor(d.dims, std::vector<double>(full.data(), full.data() + full.size()));
}

DenseTensor reconstruct(const TuckerDecomposition& d) {
    (void)checked_numel(d.dims);
    DenseTensor out = d.core;
    for (std::size_t k = 0; k < d.factors.size(); ++k) out = mode_matrix_product(out, static_cast<Index>(k), d.factors[k]);
    return out;
}

DenseTensor reconstruct(const CPDecomposition& d) {
    (void)checked_numel(d.dims);
    const std::size_t n = d.factors.size();
    require(n >= 2, "cp reconstruction needs at least two factors");
    const Matrix full = d.factors[0] * khatri_rao(factor_range(d.factors, 1, n)).transpose();
    return DenseTensor(d.dims, std::vector<double>(full.data(), full.data() + full.size()));
}

DenseTensor reconstruct(const Decomposition& d) {
    return std::visit([](const auto& x) { return reconstruct(x); }, d);
}

double relative_error(const DenseTensor& approx, const DenseTensor& t) {
    require(approx.dims() == t.dims(), "relative_error needs matching dims");
    const double norm = frobenius_norm(t);
    require(norm > 0, "relative error against a zero tensor is undefined");
    const Eigen::Map<const Vector> a(approx.data().data(), approx.size());
    const Eigen::Map<const Vector> b(t.data().data(), t.size());
    return (a - b).norm() / norm;
}

double relative_error(const Decomposition& d, const DenseTensor& t) { return relative_error(reconstruct(d), t); }

namespace {

Json index_list(const std::vector<Index>& v) {
    Json j = Json::array();
    for (Index x : v) j.push_back(x);
    return j;
}

std::vector<Index> read_index_list(const Json& j) {
    std::vector<Index> v;
    for (const auto& x : j) v.push_back(x.get<Index>());
    return v;
}

}  // namespace

Container to_container(const Decomposition& d) {
    Container c;
    if (const auto* tt = std::get_if<TTDecomposition>(&d)) {
        c.meta = {{"format", "TT"}, {"dims", index_list(tt->dims)}, {"ranks", index_list(tt->ranks())},
                  {"eps", tt->eps}, {"error_estimate", tt->error_estimate}};
        c.add("u", tt->u);
        for (std::size_t i = 0; i < tt->cores.size(); ++i) c.add("core_" + std::to_string(i + 1), tt->cores[i]);
        c.add("v", tt->v);
    } else if (const auto* tk = std::get_if<TuckerDecomposition>(&d)) {
        c.meta = {{"format", "TUCKER"}, {"dims", index_list(tk->dims)}, {"ranks", index_list(tk->ranks())},
                  {"eps", tk->eps}, {"error_bound", tk->error_bound}};
        c.add("core", tk->core);
        for (std::size_t i = 0; i < tk->factors.size(); ++i) c.add("factor_" + std::to_string(i), tk->factors[i]);
    } else {
        const auto& cp = std::get<CPDecomposition>(d);
        c.meta = {{"format", "CP"}, {"dims", index_list(cp.dims)}, {"rank", cp.rank},
                  {"relative_error", cp.relative_error}, {"iterations", cp.iterations},
                  {"converged", cp.converged}, {"error_history", cp.error_history}};
        for (std::size_t i = 0; i < cp.factors.size(); ++i) c.add("factor_" + std::to_string(i), cp.factors[i]);
    }
    return c;
}

Decomposition decomposition_from_container(const Container& c) {
    try {
        const std::string format = c.meta.at("format").get<std::string>();
        const std::vector<Index> dims = read_index_list(c.meta.at("dims"));
        if (dims.size() < 2) throw FormatError("decomposition needs order >= 2");
        if (format == "TT") {
            TTDecomposition tt;
            tt.dims = dims;
            tt.eps = c.meta.at("eps").get<double>();
            tt.error_estimate = c.meta.at("error_estimate").get<double>();
            tt.u = c.matrix("u");
            for (std::size_t i = 1; i + 1 < dims.size(); ++i) tt.cores.push_back(c.tensor("core_" + std::to_string(i)));
            tt.v = c.matrix("v");
            if (tt.ranks() != read_index_list(c.meta.at("ranks"))) throw FormatError("tt ranks do not match blobs");
            return tt;
        }
        if (format == "TUCKER") {
            TuckerDecomposition tk;
            tk.dims = dims;
            tk.eps = c.meta.at("eps").get<double>();
            tk.error_bound = c.meta.at("error_bound").get<double>();
            tk.core = c.tensor("core");
            for (std::size_t i = 0; i < dims.size(); ++i) tk.factors.push_back(c.matrix("factor_" + std::to_string(i)));
            return tk;
        }
        if (format == "CP") {
            CPDecomposition cp;
            cp.dims = dims;
            cp.rank = c.meta.at("rank").get<Index>();
            cp.relative_error = c.meta.at("relative_error").get<double>();
            cp.iterations = c.meta.at("iterations").get<Index>();
            cp.converged = c.meta.at("converged").get<bool>();
            cp.error_history = c.meta.at("error_history").get<std::vector<double>>();
            for (std::size_t i = 0; i < dims.size(); ++i) cp.factors.push_back(c.matrix("factor_" + std::to_string(i)));
            return cp;
        }
        throw FormatError("unknown decomposition format " + format);
    } catch (const Json::exception& e) {
        throw FormatError(std::string("bad decomposition metadata: ") + e.what());
    }
}

}  // namespace trom

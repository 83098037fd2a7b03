// SPDX-License-Identifier: MIT
#pragma once

#include "trom/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace trom {

/// Product of extents, throwing on overflow of the signed index type.
[[nodiscard]] Index checked_numel(std::span<const Index> dims);

/// Dense real tensor stored with the first mode varying fastest
/// (column-major generalization). Mode indices are zero-based throughout
/// the API: mode 0 is the spatial mode of a snapshot tensor.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero-filled tensor.
    explicit DenseTensor(std::vector<Index> dims);
    DenseTensor(std::vector<Index> dims, std::vector<double> data);

    /// Copies a matrix into an order-2 tensor.
    [[nodiscard]] static DenseTensor from_matrix(const Matrix& m);

    [[nodiscard]] Index order() const { return static_cast<Index>(dims_.size()); }
    [[nodiscard]] const std::vector<Index>& dims() const { return dims_; }
    [[nodiscard]] Index dim(Index mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
    [[nodiscard]] Index size() const { return static_cast<Index>(data_.size()); }

    [[nodiscard]] std::span<const double> data() const { return data_; }
    [[nodiscard]] std::span<double> data() { return data_; }

    [[nodiscard]] double operator[](Index linear) const { return data_[static_cast<std::size_t>(linear)]; }
    [[nodiscard]] double& operator[](Index linear) { return data_[static_cast<std::size_t>(linear)]; }

    /// Entry at a multi-index (length must equal the order).
    [[nodiscard]] double at(std::span<const Index> index) const;
    [[nodiscard]] Index linear_index(std::span<const Index> index) const;

    /// View of the storage as a rows x cols column-major matrix.
    /// rows * cols must equal size().
    [[nodiscard]] Eigen::Map<const Matrix> as_matrix(Index rows, Index cols) const;
    [[nodiscard]] Eigen::Map<Matrix> as_matrix(Index rows, Index cols);

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    std::vector<Index> dims_;
    std::vector<double> data_;
};

/// M x (product of remaining dims) matrix of all mode-0 fibers, columns in
/// storage order.
[[nodiscard]] Matrix unfold_mode1(const DenseTensor& t);

/// General mode-k unfolding: dim(k) rows; column index enumerates the other
/// modes with the lowest mode fastest.
[[nodiscard]] Matrix unfold(const DenseTensor& t, Index mode);

/// Inverse of unfold(): rebuilds a tensor with the given dims.
[[nodiscard]] DenseTensor fold(const Matrix& m, Index mode, std::vector<Index> dims);

/// Contraction of mode k with a vector; the result has one mode fewer
/// (an order-1 input yields a single-entry order-1 tensor).
[[nodiscard]] DenseTensor mode_vector_product(const DenseTensor& t, Index mode, const Vector& a);

/// t x_k A: mode k of extent dim(k) is replaced by rows(A).
[[nodiscard]] DenseTensor mode_matrix_product(const DenseTensor& t, Index mode, const Matrix& a);

[[nodiscard]] double frobenius_norm(const DenseTensor& t);

/// Rank-one tensor v0 o v1 o ... o v_{d-1}.
[[nodiscard]] DenseTensor outer_product(std::span<const Vector> factors);

/// Binary format: "TNSR", u32 version, u8 order, u64 dims, f64 entries,
/// all little-endian, entries in storage order.
void write_tensor(std::ostream& os, const DenseTensor& t);
[[nodiscard]] DenseTensor read_tensor(std::istream& is);

void save_tensor(const std::filesystem::path& path, const DenseTensor& t);
[[nodiscard]] DenseTensor load_tensor(const std::filesystem::path& path);

}  // namespace trom

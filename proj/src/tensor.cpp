// SPDX-License-Identifier: MIT
#include "trom/tensor.hpp"

#include "binary_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace trom {

Index checked_numel(std::span<const Index> dims) {
    Index n = 1;
    for (Index d : dims) {
        require(d >= 1, "tensor extents must be positive");
        if (n > std::numeric_limits<Index>::max() / d) throw InvalidArgument("tensor size overflows the index type");
        n *= d;
    }
    return n;
}

DenseTensor::DenseTensor(std::vector<Index> dims)
    : dims_(std::move(dims)), data_(static_cast<std::size_t>(checked_numel(dims_)), 0.0) {
    require(!dims_.empty(), "tensor order must be at least 1");
}

DenseTensor::DenseTensor(std::vector<Index> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    require(!dims_.empty(), "tensor order must be at least 1");
    require(checked_numel(dims_) == static_cast<Index>(data_.size()), "tensor data length does not match dims");
}

DenseTensor DenseTensor::from_matrix(const Matrix& m) {
    require(m.size() > 0, "cannot build a tensor from an empty matrix");
    return DenseTensor({m.rows(), m.cols()}, std::vector<double>(m.data(), m.data() + m.size()));
}

Index DenseTensor::linear_index(std::span<const Index> index) const {
    require(static_cast<Index>(index.size()) == order(), "multi-index length does not match tensor order");
    Index lin = 0;
    Index stride = 1;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        require(index[k] >= 0 && index[k] < dims_[k], "multi-index out of range");
        lin += index[k] * stride;
        stride *= dims_[k];
    }
    return lin;
}

double DenseTensor::at(std::span<const Index> index) const { return data_[static_cast<std::size_t>(linear_index(index))]; }

Eigen::Map<const Matrix> DenseTensor::as_matrix(Index rows, Index cols) const {
    require(rows * cols == size(), "matrix view shape does not match tensor size");
    return {data_.data(), rows, cols};
}

Eigen::Map<Matrix> DenseTensor::as_matrix(Index rows, Index cols) {
    require(rows * cols == size(), "matrix view shape does not match tensor size");
    return {data_.data(), rows, cols};
}

namespace {

struct Split {
    Index left;
    Index mid;
    Index right;
};

// Views the tensor as a left x dim(mode) x right array.
Split split_at(const std::vector<Index>& dims, Index mode) {
    require(mode >= 0 && mode < static_cast<Index>(dims.size()), "mode index out of range");
    Split s{1, dims[static_cast<std::size_t>(mode)], 1};
    for (Index k = 0; k < mode; ++k) s.left *= dims[static_cast<std::size_t>(k)];
    for (Index k = mode + 1; k < static_cast<Index>(dims.size()); ++k) s.right *= dims[static_cast<std::size_t>(k)];
    return s;
}

}  // namespace

Matrix unfold_mode1(const DenseTensor& t) {
    require(t.order() >= 1, "unfold_mode1 needs a non-empty tensor");
    const Index m = t.dim(0);
    return t.as_matrix(m, t.size() / m);
}

Matrix unfold(const DenseTensor& t, Index mode) {
    const Split s = split_at(t.dims(), mode);
    if (s.left == 1) return t.as_matrix(s.mid, s.right);
    Matrix out(s.mid, s.left * s.right);
    const double* src = t.data().data();
    for (Index r = 0; r < s.right; ++r) {
        for (Index j = 0; j < s.mid; ++j) {
            const double* fiber = src + (r * s.mid + j) * s.left;
            for (Index l = 0; l < s.left; ++l) out(j, r * s.left + l) = fiber[l];
        }
    }
    return out;
}

DenseTensor fold(const Matrix& m, Index mode, std::vector<Index> dims) {
    const Split s = split_at(dims, mode);
    require(m.rows() == s.mid && m.cols() == s.left * s.right, "matrix shape does not match fold target");
    DenseTensor out(std::move(dims));
    double* dst = out.data().data();
    for (Index r = 0; r < s.right; ++r) {
        for (Index j = 0; j < s.mid; ++j) {
            double* fiber = dst + (r * s.mid + j) * s.left;
            for (Index l = 0; l < s.left; ++l) fiber[l] = m(j, r * s.left + l);
        }
    }
    return out;
}

DenseTensor mode_vector_product(const DenseTensor& t, Index mode, const Vector& a) {
    const Split s = split_at(t.dims(), mode);
    require(a.size() == s.mid, "vector length does not match mode extent");
    std::vector<Index> dims = t.dims();
    dims.erase(dims.begin() + mode);
    if (dims.empty()) dims.push_back(1);
    DenseTensor out(std::move(dims));
    Eigen::Map<Matrix> dst(out.data().data(), s.left, s.right);
    for (Index r = 0; r < s.right; ++r) {
        Eigen::Map<const Matrix> slab(t.data().data() + r * s.left * s.mid, s.left, s.mid);
        dst.col(r).noalias() = slab * a;
    }
    return out;
}

DenseTensor mode_matrix_product(const DenseTensor& t, Index mode, const Matrix& a) {
    const Split s = split_at(t.dims(), mode);
    require(a.cols() == s.mid, "matrix columns do not match mode extent");
    require(a.rows() >= 1, "mode product with an empty matrix");
    std::vector<Index> dims = t.dims();
    dims[static_cast<std::size_t>(mode)] = a.rows();
    DenseTensor out(std::move(dims));
    const Index rows = a.rows();
    for (Index r = 0; r < s.right; ++r) {
        Eigen::Map<const Matrix> slab(t.data().data() + r * s.left * s.mid, s.left, s.mid);
        Eigen::Map<Matrix> dst(out.data().data() + r * s.left * rows, s.left, rows);
        dst.noalias() = slab * a.transpose();
    }
    return out;
}

double frobenius_norm(const DenseTensor& t) {
    if (t.size() == 0) return 0.0;
    return Eigen::Map<const Vector>(t.data().data(), t.size()).norm();
}

DenseTensor outer_product(std::span<const Vector> factors) {
    require(!factors.empty(), "outer product needs at least one factor");
    std::vector<Index> dims;
    for (const Vector& v : factors) dims.push_back(v.size());
    DenseTensor out(dims);
    auto data = out.data();
    data[0] = 1.0;
    Index filled = 1;
    for (const Vector& v : factors) {
        // Expand in place from the back so earlier entries are read before being overwritten.
        for (Index j = v.size() - 1; j >= 0; --j)
            for (Index i = filled - 1; i >= 0; --i) data[static_cast<std::size_t>(j * filled + i)] = data[static_cast<std::size_t>(i)] * v(j);
        filled *= v.size();
    }
    return out;
}

namespace {
constexpr char kTensorMagic[4] = {'T', 'N', 'S', 'R'};
constexpr std::uint32_t kTensorVersion = 1;
}  // namespace

void write_tensor(std::ostream& os, const DenseTensor& t) {
    require(t.order() >= 1 && t.order() <= 255, "tensor order must fit in one byte");
    os.write(kTensorMagic, 4);
    io::write_u32(os, kTensorVersion);
    io::write_u8(os, static_cast<std::uint8_t>(t.order()));
    for (Index d : t.dims()) io::write_u64(os, static_cast<std::uint64_t>(d));
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(t.data().data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    } else {
        for (double x : t.data()) io::write_f64(os, x);
    }
    if (!os) throw FormatError("failed to write tensor");
}

DenseTensor read_tensor(std::istream& is) {
    char magic[4];
    io::read_exact(is, magic, 4);
    if (!std::equal(magic, magic + 4, kTensorMagic)) throw FormatError("bad tensor magic");
    const std::uint32_t version = io::read_u32(is);
    if (version != kTensorVersion) throw FormatError("unsupported tensor format version " + std::to_string(version));
    const std::uint8_t order = io::read_u8(is);
    if (order == 0) throw FormatError("tensor order 0 in file");
    std::vector<Index> dims(order);
    for (auto& d : dims) {
        const std::uint64_t v = io::read_u64(is);
        if (v == 0 || v > static_cast<std::uint64_t>(std::numeric_limits<Index>::max())) throw FormatError("bad tensor extent");
        d = static_cast<Index>(v);
    }
    Index n = 0;
    try {
        n = checked_numel(dims);
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    std::vector<double> data(static_cast<std::size_t>(n));
    if constexpr (std::endian::native == std::endian::little) {
        io::read_exact(is, reinterpret_cast<char*>(data.data()), data.size() * sizeof(double));
    } else {
        for (auto& x : data) x = io::read_f64(is);
    }
    return DenseTensor(std::move(dims), std::move(data));
}

void save_tensor(const std::filesystem::path& path, const DenseTensor& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    write_tensor(os, t);
}

DenseTensor load_tensor(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    return read_tensor(is);
}

}  // namespace trom

// SPDX-License-Identifier: MIT
#include "trom/container.hpp"

#include "binary_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace trom {

namespace {
constexpr char kMagic[4] = {'T', 'R', 'P', 'K'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kMaxMetaBytes = 1ull << 30;
}  // namespace

void Container::add(std::string name, DenseTensor t) {
    require(!has(name), "duplicate blob name " + name);
    blobs_.emplace_back(std::move(name), std::move(t));
}

void Container::add(std::string name, const Matrix& m) {
    require(m.size() > 0, "cannot store an empty matrix as " + name);
    add(std::move(name), DenseTensor::from_matrix(m));
}

void Container::add(std::string name, const Vector& v) {
    require(v.size() > 0, "cannot store an empty vector as " + name);
    add(std::move(name), DenseTensor({v.size()}, std::vector<double>(v.data(), v.data() + v.size())));
}

bool Container::has(const std::string& name) const {
    return std::any_of(blobs_.begin(), blobs_.end(), [&](const auto& b) { return b.first == name; });
}

const DenseTensor& Container::tensor(const std::string& name) const {
    for (const auto& b : blobs_)
        if (b.first == name) return b.second;
    throw FormatError("missing blob " + name);
}

Matrix Container::matrix(const std::string& name) const {
    const DenseTensor& t = tensor(name);
    if (t.order() == 1) return t.as_matrix(t.size(), 1);
    if (t.order() != 2) throw FormatError("blob " + name + " is not a matrix");
    return t.as_matrix(t.dim(0), t.dim(1));
}

Vector Container::vector(const std::string& name) const {
    const DenseTensor& t = tensor(name);
    if (t.order() != 1) throw FormatError("blob " + name + " is not a vector");
    return Eigen::Map<const Vector>(t.data().data(), t.size());
}

void write_container(std::ostream& os, const Container& c) {
    const std::string text = c.meta.dump();
    os.write(kMagic, 4);
    io::write_u32(os, kVersion);
    io::write_u64(os, text.size());
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    io::write_u32(os, static_cast<std::uint32_t>(c.blobs().size()));
    for (const auto& [name, t] : c.blobs()) {
        std::ostringstream blob;
        write_tensor(blob, t);
        const std::string bytes = std::move(blob).str();
        io::write_u64(os, name.size());
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        io::write_u64(os, bytes.size());
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    if (!os) throw FormatError("failed to write container");
}

Container read_container(std::istream& is) {
    char magic[4];
    io::read_exact(is, magic, 4);
    if (!std::equal(magic, magic + 4, kMagic)) throw FormatError("bad container magic");
    const std::uint32_t version = io::read_u32(is);
    if (version != kVersion) throw FormatError("unsupported container version " + std::to_string(version));
    const std::uint64_t len = io::read_u64(is);
    if (len > kMaxMetaBytes) throw FormatError("container metadata too large");
    std::string text(len, '\0');
    io::read_exact(is, text.data(), len);
    Container c;
    try {
        c.meta = Json::parse(text);
    } catch (const Json::exception& e) {
        throw FormatError(std::string("bad container metadata: ") + e.what());
    }
    const std::uint32_t count = io::read_u32(is);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint64_t name_len = io::read_u64(is);
        if (name_len > 4096) throw FormatError("blob name too long");
        std::string name(name_len, '\0');
        io::read_exact(is, name.data(), name_len);
        const std::uint64_t bytes = io::read_u64(is);
        const auto start = is.tellg();
        DenseTensor t = read_tensor(is);
        if (start != std::streampos(-1) && static_cast<std::uint64_t>(is.tellg() - start) != bytes)
            throw FormatError("blob " + name + " length mismatch");
        c.add(std::move(name), std::move(t));
    }
    return c;
}

void save_container(const std::filesystem::path& path, const Container& c) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    write_container(os, c);
}

Container load_container(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    return read_container(is);
}

std::string container_bytes(const Container& c) {
    std::ostringstream os;
    write_container(os, c);
    return std::move(os).str();
}

}  // namespace trom

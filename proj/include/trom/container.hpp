// SPDX-License-Identifier: MIT
#pragma once

#include "trom/tensor.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace trom {

using Json = nlohmann::json;

/// A JSON metadata document plus named tensor blobs, stored in one file:
/// "TRPK", u32 version, u64 length + JSON text, u32 blob count, then per
/// blob u64 name length + name, u64 byte length + tensor bytes.
/// JSON keys are written sorted and blobs in insertion order, so a
/// read/write round trip reproduces the file byte for byte.
class Container {
public:
    Json meta = Json::object();

    void add(std::string name, DenseTensor t);
    void add(std::string name, const Matrix& m);
    void add(std::string name, const Vector& v);

    [[nodiscard]] bool has(const std::string& name) const;
    [[nodiscard]] const DenseTensor& tensor(const std::string& name) const;
    /// Blob as a matrix; order-1 blobs become a column.
    [[nodiscard]] Matrix matrix(const std::string& name) const;
    [[nodiscard]] Vector vector(const std::string& name) const;

    [[nodiscard]] const std::vector<std::pair<std::string, DenseTensor>>& blobs() const { return blobs_; }

private:
    std::vector<std::pair<std::string, DenseTensor>> blobs_;
};

void write_container(std::ostream& os, const Container& c);
[[nodiscard]] Container read_container(std::istream& is);

void save_container(const std::filesystem::path& path, const Container& c);
[[nodiscard]] Container load_container(const std::filesystem::path& path);

/// Serialized bytes of a container (used for hashing and round-trip checks).
[[nodiscard]] std::string container_bytes(const Container& c);

}  // namespace trom

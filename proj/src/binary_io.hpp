// SPDX-License-Identifier: MIT
#pragma once

#include "trom/core.hpp"

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

// Little-endian primitives shared by the tensor and container formats.
namespace trom::io {

template <typename U>
void write_le(std::ostream& os, U v) {
    char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    os.write(buf, sizeof(U));
}

inline void read_exact(std::istream& is, char* dst, std::size_t n) {
    is.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) throw FormatError("unexpected end of file");
}

template <typename U>
U read_le(std::istream& is) {
    unsigned char buf[sizeof(U)];
    read_exact(is, reinterpret_cast<char*>(buf), sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
}

inline void write_u8(std::ostream& os, std::uint8_t v) { os.put(static_cast<char>(v)); }
inline void write_u32(std::ostream& os, std::uint32_t v) { write_le(os, v); }
inline void write_u64(std::ostream& os, std::uint64_t v) { write_le(os, v); }
inline void write_f64(std::ostream& os, double v) { write_le(os, std::bit_cast<std::uint64_t>(v)); }

inline std::uint8_t read_u8(std::istream& is) { return read_le<std::uint8_t>(is); }
inline std::uint32_t read_u32(std::istream& is) { return read_le<std::uint32_t>(is); }
inline std::uint64_t read_u64(std::istream& is) { return read_le<std::uint64_t>(is); }
inline double read_f64(std::istream& is) { return std::bit_cast<double>(read_le<std::uint64_t>(is)); }

}  // namespace trom::io

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "qtt/errors.hpp"

namespace qtt::detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v >> 16),
                                    static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(bytes), 4);
}

inline void put_f64(std::ostream& os, double x) {
    auto v = std::bit_cast<std::uint64_t>(x);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(bytes), 8);
}

inline void read_exact(std::istream& is, unsigned char* out, std::size_t n, const std::string& path) {
    is.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) throw IoError("truncated file: " + path);
}

inline std::uint32_t get_u32(std::istream& is, const std::string& path) {
    unsigned char b[4];
    read_exact(is, b, 4, path);
    return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 |
           std::uint32_t{b[3]} << 24;
}

inline double get_f64(std::istream& is, const std::string& path) {
    unsigned char b[8];
    read_exact(is, b, 8, path);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return std::bit_cast<double>(v);
}

inline void expect_magic(std::istream& is, const char (&magic)[5], const std::string& path) {
    unsigned char b[4];
    read_exact(is, b, 4, path);
    if (std::memcmp(b, magic, 4) != 0) {
        throw IoError("bad magic in " + path + ", expected " + std::string(magic));
    }
}

inline std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);
    return os;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    return is;
}

}  // namespace qtt::detail

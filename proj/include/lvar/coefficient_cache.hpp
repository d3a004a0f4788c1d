#pragma once

// Binary coefficient cache, little-endian:
//
//   header  "LVARCOEF" (8 bytes) | u32 version = 1 | u32 degree | u64 cutoff | u64 count
//   record  u64 prime | f64 normalized a_F(p) (IEEE 754 bits) | u8 flags (bit 0: bad prime)
//
// Records are 17 bytes, packed, in increasing prime order.

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "lvar/coefficients/tables.hpp"
#include "lvar/error.hpp"

namespace lvar {

namespace detail {

inline void put_le(std::ostream& out, std::uint64_t v, int bytes) {
    std::array<char, 8> b{};
    for (int i = 0; i < bytes; ++i) b[i] = char((v >> (8 * i)) & 0xff);
    out.write(b.data(), bytes);
}

inline bool get_le(std::istream& in, std::uint64_t& v, int bytes) {
    std::array<unsigned char, 8> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), bytes)) return false;
    v = 0;
    for (int i = 0; i < bytes; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return true;
}

inline constexpr char cache_magic[8] = {'L', 'V', 'A', 'R', 'C', 'O', 'E', 'F'};

}  // namespace detail

inline void write_cache(const std::string& path, const PrimeCoefficientTable& t) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw RangeError("cannot write coefficient cache " + tmp);
        out.write(detail::cache_magic, 8);
        detail::put_le(out, 1, 4);
        detail::put_le(out, std::uint64_t(t.degree), 4);
        detail::put_le(out, t.cutoff, 8);
        detail::put_le(out, t.entries.size(), 8);
        for (const auto& e : t.entries) {
            std::uint64_t bits;
            std::memcpy(&bits, &e.a, 8);
            detail::put_le(out, e.p, 8);
            detail::put_le(out, bits, 8);
            detail::put_le(out, e.bad ? 1 : 0, 1);
        }
        if (!out) throw RangeError("short write to coefficient cache " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

// nullopt when the file is absent; ParseError when it exists but is malformed.
inline std::optional<PrimeCoefficientTable> try_read_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, detail::cache_magic, 8) != 0)
        throw ParseError(path + ": not a coefficient cache");
    std::uint64_t version, degree, cutoff, count;
    if (!detail::get_le(in, version, 4) || version != 1) throw ParseError(path + ": unsupported cache version");
    if (!detail::get_le(in, degree, 4) || !detail::get_le(in, cutoff, 8) || !detail::get_le(in, count, 8))
        throw ParseError(path + ": truncated header");
    PrimeCoefficientTable t{path, cutoff, int(degree), {}};
    t.entries.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t p, bits, flag;
        if (!detail::get_le(in, p, 8) || !detail::get_le(in, bits, 8) || !detail::get_le(in, flag, 1))
            throw ParseError(path + ": truncated at record " + std::to_string(i));
        double a;
        std::memcpy(&a, &bits, 8);
        t.entries.push_back({p, a, (flag & 1) != 0});
    }
    return t;
}

// "n,Lambda_F(n)" rows for 1 <= n <= N, 17 significant digits.
inline void write_lambda_csv(const std::string& path, const CoefficientTable& t) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw RangeError("cannot write " + path);
    std::fprintf(f, "n,lambda\n");
    for (std::uint64_t n = 1; n <= t.N; ++n)
        std::fprintf(f, "%llu,%.16e\n", (unsigned long long)n, t.lambda_values[n]);
    std::fclose(f);
}

}  // namespace lvar

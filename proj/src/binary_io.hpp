#pragma once

// Little-endian primitives shared by the snapshot formats.

#include "causalir/errors.hpp"

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace causalir::detail {

class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void bytes(std::string_view data) { out_.write(data.data(), static_cast<std::streamsize>(data.size())); }

    void u32(std::uint32_t v) {
        char buf[4];
        for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        out_.write(buf, 4);
    }

    void u64(std::uint64_t v) {
        char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        out_.write(buf, 8);
    }

    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    void varint(std::uint64_t v) {
        while (v >= 0x80) {
            out_.put(static_cast<char>((v & 0x7F) | 0x80));
            v >>= 7;
        }
        out_.put(static_cast<char>(v));
    }

    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s);
    }

    void check(const std::string& what) {
        out_.flush();
        if (!out_) throw Error(ErrorCode::Io, "write failed: " + what);
    }

private:
    std::ostream& out_;
};

class BinaryReader {
public:
    BinaryReader(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

    void exact(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw Error(ErrorCode::Format, what_ + ": unexpected end of data");
        }
    }

    std::string bytes(std::size_t n) {
        std::string s(n, '\0');
        exact(s.data(), n);
        return s;
    }

    std::uint32_t u32() {
        unsigned char buf[4];
        exact(reinterpret_cast<char*>(buf), 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        unsigned char buf[8];
        exact(reinterpret_cast<char*>(buf), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    }

    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }

    std::uint64_t varint() {
        std::uint64_t v = 0;
        for (int shift = 0; shift < 64; shift += 7) {
            const int c = in_.get();
            if (c == std::char_traits<char>::eof()) {
                throw Error(ErrorCode::Format, what_ + ": unexpected end of data");
            }
            v |= static_cast<std::uint64_t>(c & 0x7F) << shift;
            if ((c & 0x80) == 0) return v;
        }
        throw Error(ErrorCode::Format, what_ + ": varint overflow");
    }

    std::string str(std::size_t max_len = 1u << 20) {
        const auto n = u32();
        if (n > max_len) throw Error(ErrorCode::Format, what_ + ": string length out of range");
        return bytes(n);
    }

    /// Reads a magic tag and a format version and rejects mismatches.
    void header(std::string_view magic, std::uint32_t version) {
        if (bytes(magic.size()) != magic) {
            throw Error(ErrorCode::Format, what_ + ": bad magic, not a " + std::string(magic) + " file");
        }
        const auto found = u32();
        if (found != version) {
            throw Error(ErrorCode::Format, what_ + ": format version " + std::to_string(found) +
                                               " (expected " + std::to_string(version) + ")");
        }
    }

    bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

private:
    std::istream& in_;
    std::string what_;
};

} // namespace causalir::detail

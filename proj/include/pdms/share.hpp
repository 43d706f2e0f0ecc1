// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pdms/digest.hpp"
#include "pdms/errors.hpp"
#include "pdms/io.hpp"
#include "pdms/params.hpp"

namespace pdms {

inline constexpr std::array<std::uint8_t, 4> SHARE_MAGIC = {'P', 'D', 'M', 'S'};
inline constexpr std::uint8_t SHARE_VERSION = 1;

// One node's slice of an encoded file. Byte-exact layout:
//   magic "PDMS" | u8 version | u32 q | u16 n k mu p node_index |
//   u64 stripe_count | u64 original_byte_length | 32-byte scheme digest |
//   stripe_count x u16 symbols
// All integers big-endian. Symbols require q <= 65536.
struct ShareHeader {
    std::uint32_t q = 0;
    std::uint16_t n = 0, k = 0, mu = 0, p = 0;
    std::uint16_t node_index = 0; // 1-based
    std::uint64_t stripe_count = 0;
    std::uint64_t original_byte_length = 0;
    Digest scheme_digest{};

    SchemeParams params() const { return {q, n, k, mu, p}; }

    friend bool operator==(const ShareHeader&, const ShareHeader&) = default;
};

struct Share {
    ShareHeader header;
    std::vector<std::uint32_t> symbols; // this node's coordinate, one per stripe

    friend bool operator==(const Share&, const Share&) = default;
};

namespace detail {

template <typename T>
void put_be(std::vector<std::uint8_t>& out, T value) {
    for (int shift = (sizeof(T) - 1) * 8; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>((value >> shift) & 0xff));
}

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
    T get_be() {
        if (pos_ + sizeof(T) > bytes_.size())
            throw FormatError("share data truncated");
        T value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            value = static_cast<T>((value << 8) | bytes_[pos_ + i]);
        pos_ += sizeof(T);
        return value;
    }

    void get_raw(std::span<std::uint8_t> out) {
        if (pos_ + out.size() > bytes_.size())
            throw FormatError("share data truncated");
        std::copy(bytes_.begin() + pos_, bytes_.begin() + pos_ + out.size(), out.begin());
        pos_ += out.size();
    }

    bool exhausted() const noexcept { return pos_ == bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline std::vector<std::uint8_t> encode_share_bytes(const Share& share) {
    const auto& h = share.header;
    if (h.q > 65536)
        throw FormatError("share symbols are 2 bytes; field size must not exceed 65536");
    if (share.symbols.size() != h.stripe_count)
        throw FormatError("share payload length disagrees with stripe count");
    std::vector<std::uint8_t> out;
    out.reserve(67 + 2 * share.symbols.size());
    out.insert(out.end(), SHARE_MAGIC.begin(), SHARE_MAGIC.end());
    out.push_back(SHARE_VERSION);
    detail::put_be(out, h.q);
    detail::put_be(out, h.n);
    detail::put_be(out, h.k);
    detail::put_be(out, h.mu);
    detail::put_be(out, h.p);
    detail::put_be(out, h.node_index);
    detail::put_be(out, h.stripe_count);
    detail::put_be(out, h.original_byte_length);
    out.insert(out.end(), h.scheme_digest.begin(), h.scheme_digest.end());
    for (std::uint32_t s : share.symbols) {
        if (s >= h.q)
            throw FormatError("share symbol out of field range");
        detail::put_be(out, static_cast<std::uint16_t>(s));
    }
    return out;
}

inline Share parse_share_bytes(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    std::array<std::uint8_t, 4> magic{};
    in.get_raw(magic);
    if (magic != SHARE_MAGIC)
        throw FormatError("not a share file (bad magic)");
    if (in.get_be<std::uint8_t>() != SHARE_VERSION)
        throw FormatError("unsupported share format version");
    Share share;
    auto& h = share.header;
    h.q = in.get_be<std::uint32_t>();
    h.n = in.get_be<std::uint16_t>();
    h.k = in.get_be<std::uint16_t>();
    h.mu = in.get_be<std::uint16_t>();
    h.p = in.get_be<std::uint16_t>();
    h.node_index = in.get_be<std::uint16_t>();
    h.stripe_count = in.get_be<std::uint64_t>();
    h.original_byte_length = in.get_be<std::uint64_t>();
    in.get_raw(h.scheme_digest);
    if (h.node_index == 0 || h.node_index > h.n)
        throw FormatError("share node index out of range");
    share.symbols.reserve(h.stripe_count);
    for (std::uint64_t i = 0; i < h.stripe_count; ++i) {
        std::uint16_t s = in.get_be<std::uint16_t>();
        if (s >= h.q)
            throw FormatError("corrupt share: symbol >= q");
        share.symbols.push_back(s);
    }
    if (!in.exhausted())
        throw FormatError("trailing bytes after share payload");
    return share;
}

inline void write_share(const Share& share, const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = encode_share_bytes(share);
    atomic_write(path, std::span<const std::uint8_t>(bytes));
}

inline Share read_share(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open share file " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return parse_share_bytes(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

} // namespace pdms

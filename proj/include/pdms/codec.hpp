// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdms/descriptor.hpp"
#include "pdms/errors.hpp"
#include "pdms/matrix.hpp"
#include "pdms/random.hpp"
#include "pdms/scheme.hpp"
#include "pdms/share.hpp"

namespace pdms {

// One encoding unit: k - mu file symbols plus mu random masking symbols.
struct Stripe {
    std::vector<std::uint32_t> file_symbols;   // length k - mu
    std::vector<std::uint32_t> random_symbols; // length mu

    friend bool operator==(const Stripe&, const Stripe&) = default;
};

// An observation is a set of (node index, symbol) pairs, node indices 1-based.
using Observation = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

namespace detail {

inline void check_symbols(const CodingScheme& scheme, std::span<const std::uint32_t> symbols) {
    for (auto s : symbols)
        if (!scheme.modulus().canonical(s))
            throw FieldError("symbol " + std::to_string(s) + " out of range for F_" +
                             std::to_string(scheme.params().q));
}

// Validates indices and returns the observation sorted by node index.
inline Observation sorted_observation(const CodingScheme& scheme, Observation observed) {
    std::sort(observed.begin(), observed.end());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        auto [node, symbol] = observed[i];
        if (node < 1 || node > scheme.params().n)
            throw DimensionError("node index " + std::to_string(node) + " out of range [1.." +
                                 std::to_string(scheme.params().n) + "]");
        if (i > 0 && observed[i - 1].first == node)
            throw DimensionError("duplicate node index " + std::to_string(node));
        if (!scheme.modulus().canonical(symbol))
            throw FieldError("observed symbol out of field range");
    }
    return observed;
}

} // namespace detail

// c = (s | r) G with the caller supplying the mu random symbols.
inline std::vector<std::uint32_t> encode_stripe(const CodingScheme& scheme,
                                                std::span<const std::uint32_t> file_symbols,
                                                std::span<const std::uint32_t> random_symbols) {
    const auto& params = scheme.params();
    if (file_symbols.size() != params.file_symbols())
        throw DimensionError("expected " + std::to_string(params.file_symbols()) +
                             " file symbols, got " + std::to_string(file_symbols.size()));
    if (random_symbols.size() != params.mu)
        throw DimensionError("expected " + std::to_string(params.mu) + " random symbols");
    detail::check_symbols(scheme, file_symbols);
    detail::check_symbols(scheme, random_symbols);
    std::vector<std::uint32_t> x;
    x.reserve(params.k);
    x.insert(x.end(), file_symbols.begin(), file_symbols.end());
    x.insert(x.end(), random_symbols.begin(), random_symbols.end());
    ColumnVector c = vec_mat_mul(x, scheme.coding_matrix());
    return {c.values().begin(), c.values().end()};
}

// Draws the mu random symbols from `rng` and returns them alongside the
// codeword. The random symbols exist only for deterministic tests; they are
// never persisted anywhere.
inline std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>
encode_stripe(const CodingScheme& scheme, std::span<const std::uint32_t> file_symbols,
              RandomSource& rng) {
    std::vector<std::uint32_t> random_symbols(scheme.params().mu);
    for (auto& r : random_symbols)
        r = uniform_residue(scheme.modulus(), rng);
    return {encode_stripe(scheme, file_symbols, random_symbols), std::move(random_symbols)};
}

// Full decode from any k observed coordinates: (s | r) = c_E G_E^{-1}.
inline Stripe decode_full(const CodingScheme& scheme, const Observation& observed) {
    const auto& params = scheme.params();
    if (observed.size() != params.k)
        throw DimensionError("full decode needs exactly k = " + std::to_string(params.k) +
                             " distinct shares, got " + std::to_string(observed.size()));
    const Observation obs = detail::sorted_observation(scheme, observed);
    std::vector<std::size_t> cols;
    std::vector<std::uint32_t> c;
    cols.reserve(params.k);
    c.reserve(params.k);
    for (auto [node, symbol] : obs) {
        cols.push_back(node - 1);
        c.push_back(symbol);
    }
    std::vector<std::size_t> all_rows(params.k);
    for (std::size_t i = 0; i < params.k; ++i)
        all_rows[i] = i;
    const FqMatrix g_e = submatrix(scheme.coding_matrix(), all_rows, cols);
    FqMatrix g_e_inv = [&] {
        try {
            return invert(g_e);
        } catch (const SingularMatrixError&) {
            throw FormatError("observed column set is singular; the scheme is not MDS "
                              "(corrupt descriptor?)");
        }
    }();
    ColumnVector x = vec_mat_mul(c, g_e_inv);
    Stripe out;
    out.file_symbols.assign(x.values().begin(), x.values().begin() + params.file_symbols());
    out.random_symbols.assign(x.values().begin() + params.file_symbols(), x.values().end());
    return out;
}

// Access set for partial decode of group r (0-based): nodes {1..mu} plus the
// group's p nodes {mu + r p + 1 .. mu + (r+1) p}. 1-based, ascending.
inline std::vector<std::uint32_t> access_set(const CodingScheme& scheme, std::uint32_t group) {
    const auto& params = scheme.params();
    if (group >= params.group_count())
        throw DimensionError("group " + std::to_string(group) + " out of range [0.." +
                             std::to_string(params.group_count() - 1) + "]");
    std::vector<std::uint32_t> nodes;
    nodes.reserve(params.mu + params.p);
    for (std::uint32_t i = 1; i <= params.mu; ++i)
        nodes.push_back(i);
    for (std::uint32_t i = 1; i <= params.p; ++i)
        nodes.push_back(params.mu + group * params.p + i);
    return nodes;
}

inline const ColumnVector& partial_decode_vector(const CodingScheme& scheme, std::uint32_t group,
                                                 std::uint32_t offset) {
    return scheme.decode_vector(group, offset);
}

// Recover the p file symbols of one group from exactly its access set.
inline std::vector<std::uint32_t> decode_group(const CodingScheme& scheme, std::uint32_t group,
                                               const Observation& observed) {
    const auto& params = scheme.params();
    const std::vector<std::uint32_t> wanted = access_set(scheme, group);
    if (observed.size() != wanted.size())
        throw DimensionError("group decode needs exactly the " + std::to_string(wanted.size()) +
                             " access-set shares");
    const Observation obs = detail::sorted_observation(scheme, observed);
    std::vector<std::uint32_t> c;
    c.reserve(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i].first != wanted[i])
            throw DimensionError("observation does not match the access set of group " +
                                 std::to_string(group));
        c.push_back(obs[i].second);
    }
    std::vector<std::uint32_t> out(params.p);
    for (std::uint32_t i = 1; i <= params.p; ++i)
        out[i - 1] = dot(c, scheme.decode_vector(group, i).values(), scheme.modulus());
    return out;
}

// ---- whole-file byte codec -------------------------------------------------
//
// Byte mode maps each byte to one symbol (so q >= 257 keeps the map injective)
// and pads the last stripe with zero symbols; the original length rides in
// every share header.

namespace detail {

inline void check_byte_mode(const SchemeParams& params) {
    if (params.q < 257)
        throw ParameterError("byte mode needs q >= 257 (one byte per symbol)");
    if (params.q > 65536)
        throw ParameterError("share symbols are 2 bytes; byte mode needs q <= 65536");
}

} // namespace detail

inline std::vector<Share> encode_file(const CodingScheme& scheme, std::span<const std::uint8_t> bytes,
                                      RandomSource& rng) {
    const auto& params = scheme.params();
    detail::check_byte_mode(params);
    const std::uint32_t stride = params.file_symbols();
    const std::uint64_t stripes = (bytes.size() + stride - 1) / stride;
    const Digest digest = scheme_digest(scheme);

    std::vector<Share> shares(params.n);
    for (std::uint32_t i = 0; i < params.n; ++i) {
        shares[i].header = ShareHeader{params.q,
                                       static_cast<std::uint16_t>(params.n),
                                       static_cast<std::uint16_t>(params.k),
                                       static_cast<std::uint16_t>(params.mu),
                                       static_cast<std::uint16_t>(params.p),
                                       static_cast<std::uint16_t>(i + 1),
                                       stripes,
                                       bytes.size(),
                                       digest};
        shares[i].symbols.reserve(stripes);
    }
    std::vector<std::uint32_t> s(stride);
    for (std::uint64_t t = 0; t < stripes; ++t) {
        for (std::uint32_t j = 0; j < stride; ++j) {
            const std::uint64_t pos = t * stride + j;
            s[j] = pos < bytes.size() ? bytes[pos] : 0;
        }
        auto [c, r] = encode_stripe(scheme, s, rng);
        for (std::uint32_t i = 0; i < params.n; ++i)
            shares[i].symbols.push_back(c[i]);
    }
    return shares;
}

namespace detail {

// Headers must agree among themselves and with the scheme.
inline void check_share_headers(const CodingScheme& scheme, const std::vector<Share>& shares) {
    if (shares.empty())
        throw DimensionError("no shares supplied");
    const Digest digest = scheme_digest(scheme);
    const ShareHeader& first = shares.front().header;
    for (const Share& share : shares) {
        const ShareHeader& h = share.header;
        if (h.scheme_digest != digest)
            throw DigestMismatchError("share for node " + std::to_string(h.node_index) +
                                      " belongs to a different scheme (digest mismatch)");
        if (h.params() != scheme.params())
            throw FormatError("share header parameters disagree with the scheme");
        if (h.stripe_count != first.stripe_count ||
            h.original_byte_length != first.original_byte_length)
            throw FormatError("share headers disagree on stripe count or file length");
        if (share.symbols.size() != h.stripe_count)
            throw FormatError("share payload length disagrees with its header");
    }
}

} // namespace detail

inline std::vector<std::uint8_t> decode_file(const CodingScheme& scheme,
                                             const std::vector<Share>& shares) {
    const auto& params = scheme.params();
    detail::check_byte_mode(params);
    if (shares.size() != params.k)
        throw DimensionError("full decode needs exactly k = " + std::to_string(params.k) +
                             " shares, got " + std::to_string(shares.size()));
    detail::check_share_headers(scheme, shares);
    const std::uint64_t stripes = shares.front().header.stripe_count;
    const std::uint64_t total = shares.front().header.original_byte_length;
    const std::uint32_t stride = params.file_symbols();
    if (stripes > UINT64_MAX / stride || stripes * stride < total)
        throw FormatError("share headers cannot cover the declared file length");

    std::vector<std::uint8_t> bytes;
    bytes.reserve(total);
    Observation obs(params.k);
    for (std::uint64_t t = 0; t < stripes && bytes.size() < total; ++t) {
        for (std::size_t i = 0; i < shares.size(); ++i)
            obs[i] = {shares[i].header.node_index, shares[i].symbols[t]};
        const Stripe stripe = decode_full(scheme, obs);
        for (std::uint32_t j = 0; j < stride && bytes.size() < total; ++j) {
            if (stripe.file_symbols[j] > 0xff)
                throw FormatError("decoded symbol does not fit a byte (corrupt shares?)");
            bytes.push_back(static_cast<std::uint8_t>(stripe.file_symbols[j]));
        }
    }
    if (bytes.size() != total)
        throw FormatError("decoded fewer bytes than the declared file length");
    return bytes;
}

// The byte slice recovered by partially decoding one group across all stripes.
struct GroupSlice {
    std::uint32_t group = 0;
    std::uint32_t symbols_per_stripe = 0; // p
    std::uint32_t stride = 0;             // k - mu, file bytes per stripe
    std::uint64_t offset_in_stripe = 0;   // group * p
    std::uint64_t stripe_count = 0;
    std::uint64_t original_byte_length = 0;
    std::vector<std::uint8_t> bytes; // group bytes in stripe order, pad-truncated
};

inline GroupSlice decode_file_group(const CodingScheme& scheme, std::uint32_t group,
                                    const std::vector<Share>& shares) {
    const auto& params = scheme.params();
    detail::check_byte_mode(params);
    const std::vector<std::uint32_t> wanted = access_set(scheme, group);
    if (shares.size() != wanted.size())
        throw DimensionError("partial decode needs exactly the " + std::to_string(wanted.size()) +
                             " access-set shares");
    detail::check_share_headers(scheme, shares);

    std::vector<const Share*> ordered(shares.size());
    for (const Share& share : shares) {
        auto it = std::find(wanted.begin(), wanted.end(), share.header.node_index);
        if (it == wanted.end())
            throw DimensionError("share for node " + std::to_string(share.header.node_index) +
                                 " is not in the access set of group " + std::to_string(group));
        ordered[static_cast<std::size_t>(it - wanted.begin())] = &share;
    }

    GroupSlice slice;
    slice.group = group;
    slice.symbols_per_stripe = params.p;
    slice.stride = params.file_symbols();
    slice.offset_in_stripe = std::uint64_t(group) * params.p;
    slice.stripe_count = shares.front().header.stripe_count;
    slice.original_byte_length = shares.front().header.original_byte_length;

    Observation obs(wanted.size());
    for (std::uint64_t t = 0; t < slice.stripe_count; ++t) {
        for (std::size_t i = 0; i < ordered.size(); ++i)
            obs[i] = {wanted[i], ordered[i]->symbols[t]};
        const std::vector<std::uint32_t> symbols = decode_group(scheme, group, obs);
        for (std::uint32_t j = 0; j < params.p; ++j) {
            const std::uint64_t pos = t * slice.stride + slice.offset_in_stripe + j;
            if (pos >= slice.original_byte_length)
                continue; // zero padding on the final stripe
            if (symbols[j] > 0xff)
                throw FormatError("decoded symbol does not fit a byte (corrupt shares?)");
            slice.bytes.push_back(static_cast<std::uint8_t>(symbols[j]));
        }
    }
    return slice;
}

} // namespace pdms

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdms/digest.hpp"
#include "pdms/errors.hpp"
#include "pdms/io.hpp"
#include "pdms/scheme.hpp"

namespace pdms {

inline constexpr int DESCRIPTOR_VERSION = 1;

namespace detail {

inline std::vector<std::uint32_t> row_major(const FqMatrix& m) {
    return {m.values().begin(), m.values().end()};
}

inline FqMatrix matrix_from_row_major(const FieldModulus& q, std::size_t rows, std::size_t cols,
                                      const std::vector<std::uint32_t>& data) {
    if (data.size() != rows * cols)
        throw FormatError("matrix payload has wrong length");
    FqMatrix out(rows, cols, q);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (!q.canonical(data[r * cols + c]))
                throw FormatError("matrix entry out of field range");
            out.set(r, c, data[r * cols + c]);
        }
    return out;
}

} // namespace detail

// Canonical form: compact JSON with lexicographically sorted keys and integer
// values only. The scheme digest is the SHA-256 of exactly these bytes, and the
// descriptor file contains exactly these bytes.
inline std::string canonical_descriptor(const CodingScheme& scheme) {
    nlohmann::json doc;
    doc["version"] = DESCRIPTOR_VERSION;
    doc["q"] = scheme.params().q;
    doc["n"] = scheme.params().n;
    doc["k"] = scheme.params().k;
    doc["mu"] = scheme.params().mu;
    doc["p"] = scheme.params().p;
    doc["G"] = detail::row_major(scheme.coding_matrix());
    if (scheme.source())
        doc["source"] = detail::row_major(*scheme.source());
    if (scheme.seed())
        doc["seed"] = *scheme.seed();
    return doc.dump();
}

inline Digest scheme_digest(const CodingScheme& scheme) {
    return sha256(canonical_descriptor(scheme));
}

inline CodingScheme descriptor_from_json(const nlohmann::json& doc) {
    try {
        if (!doc.is_object())
            throw FormatError("descriptor is not a JSON object");
        if (doc.at("version").get<int>() != DESCRIPTOR_VERSION)
            throw FormatError("unsupported descriptor version");
        SchemeParams params{doc.at("q").get<std::uint32_t>(), doc.at("n").get<std::uint32_t>(),
                            doc.at("k").get<std::uint32_t>(), doc.at("mu").get<std::uint32_t>(),
                            doc.at("p").get<std::uint32_t>()};
        validate_params(params);
        const FieldModulus q = field_of(params);
        FqMatrix g = detail::matrix_from_row_major(q, params.k, params.n,
                                                   doc.at("G").get<std::vector<std::uint32_t>>());
        std::optional<FqMatrix> source;
        if (doc.contains("source"))
            source = detail::matrix_from_row_major(
                q, params.k, params.n, doc.at("source").get<std::vector<std::uint32_t>>());
        std::optional<std::uint64_t> seed;
        if (doc.contains("seed"))
            seed = doc.at("seed").get<std::uint64_t>();
        return CodingScheme(params, std::move(g), std::move(source), std::nullopt, seed);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed scheme descriptor: ") + e.what());
    }
}

inline void save_descriptor(const CodingScheme& scheme, const std::filesystem::path& path) {
    atomic_write(path, canonical_descriptor(scheme));
}

inline CodingScheme load_descriptor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open scheme descriptor " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("scheme descriptor " + path.string() + " is not valid JSON: " + e.what());
    }
    return descriptor_from_json(doc);
}

} // namespace pdms

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdms/errors.hpp"
#include "pdms/matrix.hpp"
#include "pdms/params.hpp"
#include "pdms/random.hpp"
#include "pdms/superregular.hpp"

namespace pdms {

// Zero out the top-left (k-mu) x mu block by adding, to each of the first
// k-mu rows, the linear combination of the bottom mu rows with coefficients
// lambda = -(row's A-part) * D^{-1}. The bottom mu rows are untouched.
inline FqMatrix step2_zero_topleft(const FqMatrix& source, const SchemeParams& params) {
    validate_params(params);
    if (source.rows() != params.k || source.cols() != params.n)
        throw DimensionError("step 2: source matrix shape does not match parameters");
    if (params.mu == 0)
        return source;
    const FieldModulus m = source.modulus();
    const BlockView blocks(params);
    FqMatrix d_inv = [&] {
        try {
            return invert(blocks.d_block(source));
        } catch (const SingularMatrixError& e) {
            throw SingularMatrixError(std::string("step 2: D block is singular (") + e.what() + ")",
                                      e.pivot_col());
        }
    }();
    const std::size_t top = params.k - params.mu;
    FqMatrix out = source;
    for (std::size_t t = 0; t < top; ++t) {
        std::vector<std::uint32_t> lambda(params.mu, 0);
        for (std::size_t c = 0; c < params.mu; ++c) {
            std::uint32_t acc = 0;
            for (std::size_t j = 0; j < params.mu; ++j)
                acc = m.add(acc, m.mul(source.at(t, j), d_inv.at(j, c)));
            lambda[c] = m.neg(acc);
        }
        for (std::size_t j = 0; j < params.n; ++j) {
            std::uint32_t acc = out.at(t, j);
            for (std::size_t b = 0; b < params.mu; ++b)
                acc = m.add(acc, m.mul(lambda[b], source.at(top + b, j)));
            out.set(t, j, acc);
        }
    }
    return out;
}

struct Step3Result {
    FqMatrix coding_matrix; // G, k x n
    FqMatrix transform;     // T, k x k, bottom-right mu x mu block is the identity
};

// Turn the B region of the step-2 matrix into the block diagonal of the
// source's diagonal p x p blocks: G = T * G' with T = [ B B'^{-1}  O ; O  I ].
inline Step3Result step3_blockdiag(const FqMatrix& step2_matrix, const FqMatrix& source,
                                   const SchemeParams& params) {
    validate_params(params);
    if (step2_matrix.rows() != params.k || step2_matrix.cols() != params.n ||
        source.rows() != params.k || source.cols() != params.n)
        throw DimensionError("step 3: matrix shape does not match parameters");
    detail::require_same_modulus(step2_matrix, source);
    const FieldModulus m = source.modulus();
    const BlockView blocks(params);
    const std::size_t top = params.k - params.mu;

    FqMatrix b(top, top, m);
    for (std::size_t i = 0; i < params.group_count(); ++i) {
        const FqMatrix bi = blocks.b_diag_block(source, i);
        for (std::size_t r = 0; r < params.p; ++r)
            for (std::size_t c = 0; c < params.p; ++c)
                b.set(i * params.p + r, i * params.p + c, bi.at(r, c));
    }
    FqMatrix b_prime_inv = [&] {
        try {
            return invert(blocks.b_block(step2_matrix));
        } catch (const SingularMatrixError& e) {
            throw SingularMatrixError(std::string("step 3: B' block is singular (") + e.what() +
                                          ")",
                                      e.pivot_col());
        }
    }();
    const FqMatrix t_top = mat_mul(b, b_prime_inv);

    FqMatrix t(params.k, params.k, m);
    for (std::size_t r = 0; r < top; ++r)
        for (std::size_t c = 0; c < top; ++c)
            t.set(r, c, t_top.at(r, c));
    for (std::size_t r = 0; r < params.mu; ++r)
        t.set(top + r, top + r, 1 % m.value());

    return {mat_mul(t, step2_matrix), t};
}

// A validated coding matrix together with its block geometry and the cached
// access-set decode vectors. Immutable once built; safe for concurrent readers.
class CodingScheme {
public:
    CodingScheme(SchemeParams params, FqMatrix coding_matrix, std::optional<FqMatrix> source,
                 std::optional<FqMatrix> transform, std::optional<std::uint64_t> seed)
        : params_(params),
          blocks_(params),
          g_(std::move(coding_matrix)),
          source_(std::move(source)),
          transform_(std::move(transform)),
          seed_(seed) {
        verify_structure();
        cache_decode_vectors();
    }

    const SchemeParams& params() const noexcept { return params_; }
    const BlockView& blocks() const noexcept { return blocks_; }
    const FqMatrix& coding_matrix() const noexcept { return g_; }
    const std::optional<FqMatrix>& source() const noexcept { return source_; }
    const std::optional<FqMatrix>& transform() const noexcept { return transform_; }
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }
    FieldModulus modulus() const noexcept { return g_.modulus(); }

    // Access-set vector w = (u | v) for file symbol offset (1-based, in
    // [1..p]) of the given group: v is column `offset` of the group block's
    // inverse and u solves D u = -E_i v. Dotting the access-set observation
    // (nodes 1..mu, then the group's p nodes, ascending) with w yields file
    // symbol s_{group*p + offset}.
    const ColumnVector& decode_vector(std::uint32_t group, std::uint32_t offset) const {
        if (group >= params_.group_count())
            throw DimensionError("decode group out of range");
        if (offset < 1 || offset > params_.p)
            throw DimensionError("decode offset out of range (1-based, in [1..p])");
        return decode_vectors_[group * params_.p + (offset - 1)];
    }

private:
    void verify_structure() {
        validate_params(params_);
        if (g_.modulus().value() != params_.q)
            throw FormatError("coding matrix modulus does not match parameters");
        if (g_.rows() != params_.k || g_.cols() != params_.n)
            throw FormatError("coding matrix shape does not match parameters");
        const std::size_t top = params_.k - params_.mu;
        for (std::size_t r = 0; r < top; ++r)
            for (std::size_t c = 0; c < params_.mu; ++c)
                if (g_.at(r, c) != 0)
                    throw FormatError("coding matrix violates the zero-block structure");
        for (std::size_t r = 0; r < top; ++r) {
            for (std::size_t c = 0; c < top; ++c) {
                if (r / params_.p != c / params_.p && g_.at(r, params_.mu + c) != 0)
                    throw FormatError(
                        "coding matrix violates the block-diagonal structure of its B region");
            }
        }
        if (source_) {
            if (source_->rows() != params_.k || source_->cols() != params_.n ||
                source_->modulus() != g_.modulus())
                throw FormatError("source matrix shape does not match parameters");
            for (std::size_t i = 0; i < params_.group_count(); ++i)
                if (!(blocks_.b_diag_block(g_, i) == blocks_.b_diag_block(*source_, i)))
                    throw FormatError("coding matrix diagonal blocks disagree with source");
            for (std::size_t r = 0; r < params_.mu; ++r)
                for (std::size_t c = 0; c < params_.n; ++c)
                    if (g_.at(top + r, c) != source_->at(top + r, c))
                        throw FormatError("coding matrix bottom rows disagree with source");
        }
        if (rank(g_) != params_.k)
            throw FormatError("coding matrix does not have full rank k");
    }

    void cache_decode_vectors() {
        const FieldModulus m = g_.modulus();
        std::optional<FqMatrix> d_inv;
        if (params_.mu > 0) {
            try {
                d_inv = invert(blocks_.d_block(g_));
            } catch (const SingularMatrixError&) {
                throw FormatError("coding matrix D block is singular; scheme cannot partial-decode");
            }
        }
        decode_vectors_.reserve(std::size_t(params_.group_count()) * params_.p);
        for (std::size_t i = 0; i < params_.group_count(); ++i) {
            FqMatrix bi_inv = [&] {
                try {
                    return invert(blocks_.b_diag_block(g_, i));
                } catch (const SingularMatrixError&) {
                    throw FormatError("coding matrix diagonal block " + std::to_string(i + 1) +
                                      " is singular; scheme cannot partial-decode");
                }
            }();
            const FqMatrix ei = blocks_.e_slice(g_, i);
            for (std::size_t col = 0; col < params_.p; ++col) {
                std::vector<std::uint32_t> v(params_.p);
                for (std::size_t r = 0; r < params_.p; ++r)
                    v[r] = bi_inv.at(r, col);
                std::vector<std::uint32_t> w(params_.mu + params_.p, 0);
                for (std::size_t r = 0; r < params_.mu; ++r) {
                    std::uint32_t acc = 0;
                    for (std::size_t c = 0; c < params_.p; ++c)
                        acc = m.add(acc, m.mul(ei.at(r, c), v[c]));
                    // rhs of D u = -E_i v
                    w[r] = m.neg(acc);
                }
                if (params_.mu > 0) {
                    std::vector<std::uint32_t> u(params_.mu, 0);
                    for (std::size_t r = 0; r < params_.mu; ++r) {
                        std::uint32_t acc = 0;
                        for (std::size_t c = 0; c < params_.mu; ++c)
                            acc = m.add(acc, m.mul(d_inv->at(r, c), w[c]));
                        u[r] = acc;
                    }
                    for (std::size_t r = 0; r < params_.mu; ++r)
                        w[r] = u[r];
                }
                for (std::size_t r = 0; r < params_.p; ++r)
                    w[params_.mu + r] = v[r];
                decode_vectors_.emplace_back(m, std::move(w));
            }
        }
    }

    SchemeParams params_;
    BlockView blocks_;
    FqMatrix g_;
    std::optional<FqMatrix> source_;
    std::optional<FqMatrix> transform_;
    std::optional<std::uint64_t> seed_;
    std::vector<ColumnVector> decode_vectors_;
};

// Run steps 1-3 on the given source matrix. A seed may be recorded as
// provenance (e.g. the seed that found the source).
inline CodingScheme build_scheme(const SchemeParams& params, const FqMatrix& source,
                                 std::optional<std::uint64_t> seed = std::nullopt) {
    validate_params(params);
    if (source.rows() != params.k || source.cols() != params.n)
        throw DimensionError("source matrix shape does not match parameters");
    if (source.modulus().value() != params.q)
        throw FieldError("source matrix modulus does not match parameters");
    FqMatrix step2 = step2_zero_topleft(source, params);
    Step3Result step3 = step3_blockdiag(step2, source, params);
    return CodingScheme(params, std::move(step3.coding_matrix), source, std::move(step3.transform),
                        seed);
}

// Draw a random Cauchy source from a seeded generator and build the scheme.
inline CodingScheme build_scheme_auto(const SchemeParams& params, std::uint64_t seed) {
    validate_params(params);
    if (std::uint64_t(params.k) + params.n > params.q)
        throw ParameterError("auto source needs q >= k + n (" + std::to_string(params.q) + " < " +
                             std::to_string(params.k + params.n) + ")");
    const FieldModulus q = field_of(params);
    SeededRandomSource rng(seed);
    auto points = sample_distinct(q, params.k + params.n, rng);
    CauchySpec spec{q,
                    {points.begin(), points.begin() + params.k},
                    {points.begin() + params.k, points.end()}};
    FqMatrix source = cauchy(spec);
    FqMatrix step2 = step2_zero_topleft(source, params);
    Step3Result step3 = step3_blockdiag(step2, source, params);
    return CodingScheme(params, std::move(step3.coding_matrix), std::move(source),
                        std::move(step3.transform), seed);
}

} // namespace pdms

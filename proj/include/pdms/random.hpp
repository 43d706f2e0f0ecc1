// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "pdms/errors.hpp"
#include "pdms/field.hpp"

namespace pdms {

// A stream of uniformly distributed octets. Confine each instance to one caller;
// draws are ordered and reproducibility depends on that order.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual std::uint8_t next_octet() = 0;
};

// Deterministic source backed by mt19937_64 (bit-exact across platforms).
class SeededRandomSource final : public RandomSource {
public:
    explicit SeededRandomSource(std::uint64_t seed) : gen_(seed) {}

    std::uint8_t next_octet() override {
        if (available_ == 0) {
            buffer_ = gen_();
            available_ = 8;
        }
        auto octet = static_cast<std::uint8_t>(buffer_ & 0xff);
        buffer_ >>= 8;
        --available_;
        return octet;
    }

private:
    std::mt19937_64 gen_;
    std::uint64_t buffer_ = 0;
    int available_ = 0;
};

// OS entropy; for production encodes (no --seed).
class SystemRandomSource final : public RandomSource {
public:
    std::uint8_t next_octet() override {
        if (available_ == 0) {
            buffer_ = dev_();
            available_ = 4;
        }
        auto octet = static_cast<std::uint8_t>(buffer_ & 0xff);
        buffer_ >>= 8;
        --available_;
        return octet;
    }

private:
    std::random_device dev_;
    std::uint32_t buffer_ = 0;
    int available_ = 0;
};

// Uniform residue in [0, q) by rejection sampling: draw the minimal number of
// octets whose range covers q, reject draws at or above the largest multiple
// of q in that range, so no residue is favoured.
inline std::uint32_t uniform_residue(const FieldModulus& q, RandomSource& source) {
    const std::uint64_t modulus = q.value();
    int octets = 1;
    std::uint64_t range = 256;
    while (range < modulus) {
        range <<= 8;
        ++octets;
    }
    const std::uint64_t limit = range - range % modulus;
    for (;;) {
        std::uint64_t draw = 0;
        for (int i = 0; i < octets; ++i)
            draw = (draw << 8) | source.next_octet();
        if (draw < limit)
            return static_cast<std::uint32_t>(draw % modulus);
    }
}

inline FieldElement uniform_element(const FieldModulus& q, RandomSource& source) {
    return {uniform_residue(q, source), q.value()};
}

// count distinct residues, drawn without replacement.
inline std::vector<std::uint32_t> sample_distinct(const FieldModulus& q, std::size_t count,
                                                  RandomSource& source) {
    if (count > q.value())
        throw FieldError("cannot draw " + std::to_string(count) + " distinct residues mod " +
                         std::to_string(q.value()));
    std::vector<std::uint32_t> out;
    out.reserve(count);
    std::unordered_set<std::uint32_t> seen;
    while (out.size() < count) {
        std::uint32_t v = uniform_residue(q, source);
        if (seen.insert(v).second)
            out.push_back(v);
    }
    return out;
}

} // namespace pdms

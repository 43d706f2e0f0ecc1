// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdms/errors.hpp"
#include "pdms/field.hpp"
#include "pdms/matrix.hpp"

namespace pdms {

// Code parameters: n storage nodes, any-k reconstruction, mu-node strong
// security, partial decode in groups of p file symbols.
struct SchemeParams {
    std::uint32_t q = 0;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t mu = 0;
    std::uint32_t p = 0;

    std::uint32_t file_symbols() const noexcept { return k - mu; }
    std::uint32_t group_count() const noexcept { return (k - mu) / p; }

    friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

// Checks every constraint and reports all violations at once.
inline void validate_params(const SchemeParams& params) {
    std::vector<std::string> violations;
    if (params.q > 0x7fffffffu || !detail::is_prime_u32(params.q))
        violations.push_back("q = " + std::to_string(params.q) + " is not a prime in [2, 2^31 - 1]");
    if (params.n == 0)
        violations.push_back("n must be positive");
    if (params.k == 0)
        violations.push_back("k must be positive");
    if (params.k > params.n)
        violations.push_back("k must satisfy k <= n");
    if (params.mu >= params.k)
        violations.push_back("mu must satisfy mu < k");
    if (params.p == 0)
        violations.push_back("p must be positive");
    if (params.p > 0 && params.mu < params.k) {
        if (params.p > params.k - params.mu)
            violations.push_back("p must satisfy p <= k - mu");
        else if ((params.k - params.mu) % params.p != 0)
            violations.push_back("p must divide k - mu (" + std::to_string(params.p) +
                                 " does not divide " + std::to_string(params.k - params.mu) + ")");
    }
    if (params.n > 0xffff || params.k > 0xffff || params.mu > 0xffff || params.p > 0xffff)
        violations.push_back("n, k, mu, p must fit 16 bits (share header layout)");
    if (!violations.empty()) {
        std::string msg = "invalid scheme parameters:";
        for (const auto& v : violations)
            msg += "\n  - " + v;
        throw ParameterError(msg);
    }
}

inline FieldModulus field_of(const SchemeParams& params) { return FieldModulus(params.q); }

// 0-based index geometry of the construction block form over a k x n matrix:
//
//   [ A (k-mu x mu) | B (k-mu x k-mu) | C (k-mu x n-k) ]
//   [ D (mu   x mu) | E (mu   x k-mu) | F (mu   x n-k) ]
//
// B splits into (k-mu)/p diagonal p x p blocks B_i; E into mu x p slices E_i.
class BlockView {
public:
    explicit BlockView(const SchemeParams& params) : p_(params) { validate_params(params); }

    const SchemeParams& params() const noexcept { return p_; }

    FqMatrix a_block(const FqMatrix& m) const {
        return slice(m, 0, p_.k - p_.mu, 0, p_.mu);
    }
    FqMatrix b_block(const FqMatrix& m) const {
        return slice(m, 0, p_.k - p_.mu, p_.mu, p_.k);
    }
    FqMatrix c_block(const FqMatrix& m) const {
        return slice(m, 0, p_.k - p_.mu, p_.k, p_.n);
    }
    FqMatrix d_block(const FqMatrix& m) const {
        return slice(m, p_.k - p_.mu, p_.k, 0, p_.mu);
    }
    FqMatrix e_block(const FqMatrix& m) const {
        return slice(m, p_.k - p_.mu, p_.k, p_.mu, p_.k);
    }
    FqMatrix f_block(const FqMatrix& m) const {
        return slice(m, p_.k - p_.mu, p_.k, p_.k, p_.n);
    }

    // i-th diagonal p x p block of the B region, 0-based i in [0, group_count).
    FqMatrix b_diag_block(const FqMatrix& m, std::size_t i) const {
        check_group(i);
        const std::size_t base = p_.mu + i * p_.p;
        return slice(m, i * p_.p, (i + 1) * p_.p, base, base + p_.p);
    }

    // i-th mu x p slice of the E region.
    FqMatrix e_slice(const FqMatrix& m, std::size_t i) const {
        check_group(i);
        const std::size_t base = p_.mu + i * p_.p;
        return slice(m, p_.k - p_.mu, p_.k, base, base + p_.p);
    }

    // The (p+mu) x (mu+p) access-set matrix [ O  B_i ; D  E_i ] for group i.
    FqMatrix h_block(const FqMatrix& m, std::size_t i) const {
        check_group(i);
        const FqMatrix bi = b_diag_block(m, i);
        const FqMatrix d = d_block(m);
        const FqMatrix ei = e_slice(m, i);
        FqMatrix h(p_.p + p_.mu, p_.mu + p_.p, m.modulus());
        for (std::size_t r = 0; r < p_.p; ++r)
            for (std::size_t c = 0; c < p_.p; ++c)
                h.set(r, p_.mu + c, bi.at(r, c));
        for (std::size_t r = 0; r < p_.mu; ++r) {
            for (std::size_t c = 0; c < p_.mu; ++c)
                h.set(p_.p + r, c, d.at(r, c));
            for (std::size_t c = 0; c < p_.p; ++c)
                h.set(p_.p + r, p_.mu + c, ei.at(r, c));
        }
        return h;
    }

private:
    void check_group(std::size_t i) const {
        if (i >= p_.group_count())
            throw DimensionError("block group index out of range");
    }

    static FqMatrix slice(const FqMatrix& m, std::size_t r0, std::size_t r1, std::size_t c0,
                          std::size_t c1) {
        if (r1 > m.rows() || c1 > m.cols())
            throw DimensionError("block range exceeds matrix shape");
        FqMatrix out(r1 - r0, c1 - c0, m.modulus());
        for (std::size_t r = r0; r < r1; ++r)
            for (std::size_t c = c0; c < c1; ++c)
                out.set(r - r0, c - c0, m.at(r, c));
        return out;
    }

    SchemeParams p_;
};

} // namespace pdms

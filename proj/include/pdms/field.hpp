// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "pdms/errors.hpp"

namespace pdms {

namespace detail {

inline std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t result = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1)
            result = static_cast<unsigned __int128>(result) * base % mod;
        base = static_cast<unsigned __int128>(base) * base % mod;
        exp >>= 1;
    }
    return result;
}

// Deterministic Miller-Rabin; the base set {2,3,5,7} decides primality for all n < 3'215'031'751,
// which covers the full 32-bit modulus range accepted here.
inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2)
        return false;
    for (std::uint32_t small : {2u, 3u, 5u, 7u}) {
        if (n == small)
            return true;
        if (n % small == 0)
            return false;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2u, 3u, 5u, 7u}) {
        std::uint64_t x = pow_mod_u64(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 0; i < r - 1; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

} // namespace detail

// A validated prime modulus q with 2 <= q <= 2^31 - 1. Doubles as the arithmetic
// context for canonical residues in [0, q).
class FieldModulus {
public:
    explicit FieldModulus(std::uint32_t q) : q_(q) {
        if (q > 0x7fffffffu)
            throw FieldError("field modulus " + std::to_string(q) + " exceeds 2^31 - 1");
        if (!detail::is_prime_u32(q))
            throw FieldError("field modulus " + std::to_string(q) + " is not prime");
    }

    std::uint32_t value() const noexcept { return q_; }

    friend bool operator==(const FieldModulus&, const FieldModulus&) = default;

    // The helpers below assume canonical inputs (already in [0, q)).
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
        std::uint64_t s = std::uint64_t(a) + b;
        return static_cast<std::uint32_t>(s >= q_ ? s - q_ : s);
    }

    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
        return a >= b ? a - b : static_cast<std::uint32_t>(a + std::uint64_t(q_) - b);
    }

    std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : q_ - a; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
        return static_cast<std::uint32_t>(std::uint64_t(a) * b % q_);
    }

    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0)
            throw FieldError("inversion of zero in F_" + std::to_string(q_));
        // extended Euclid on (a, q)
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = q_, new_r = a;
        while (new_r != 0) {
            std::int64_t quot = r / new_r;
            std::int64_t tmp = t - quot * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - quot * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (t < 0)
            t += q_;
        return static_cast<std::uint32_t>(t);
    }

    std::uint32_t reduce(std::uint64_t v) const noexcept { return static_cast<std::uint32_t>(v % q_); }

    bool canonical(std::uint32_t v) const noexcept { return v < q_; }

private:
    std::uint32_t q_;
};

// A canonical residue tagged with its ambient modulus.
struct FieldElement {
    std::uint32_t value;
    std::uint32_t modulus;

    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

inline FieldElement make_element(const FieldModulus& q, std::uint32_t value) {
    if (!q.canonical(value))
        throw FieldError("value " + std::to_string(value) + " is not a canonical residue mod " +
                         std::to_string(q.value()));
    return {value, q.value()};
}

namespace detail {
inline void require_same_modulus(const FieldElement& a, const FieldElement& b) {
    if (a.modulus != b.modulus)
        throw FieldError("modulus mismatch: F_" + std::to_string(a.modulus) + " vs F_" +
                         std::to_string(b.modulus));
}
} // namespace detail

inline FieldElement fq_add(const FieldElement& a, const FieldElement& b) {
    detail::require_same_modulus(a, b);
    std::uint64_t s = std::uint64_t(a.value) + b.value;
    return {static_cast<std::uint32_t>(s >= a.modulus ? s - a.modulus : s), a.modulus};
}

inline FieldElement fq_sub(const FieldElement& a, const FieldElement& b) {
    detail::require_same_modulus(a, b);
    std::uint64_t s = std::uint64_t(a.value) + a.modulus - b.value;
    return {static_cast<std::uint32_t>(s >= a.modulus ? s - a.modulus : s), a.modulus};
}

inline FieldElement fq_mul(const FieldElement& a, const FieldElement& b) {
    detail::require_same_modulus(a, b);
    return {static_cast<std::uint32_t>(std::uint64_t(a.value) * b.value % a.modulus), a.modulus};
}

inline FieldElement fq_neg(const FieldElement& a) {
    return {a.value == 0 ? 0 : a.modulus - a.value, a.modulus};
}

inline FieldElement fq_inv(const FieldElement& a) {
    FieldModulus q(a.modulus);
    return {q.inv(a.value), a.modulus};
}

} // namespace pdms

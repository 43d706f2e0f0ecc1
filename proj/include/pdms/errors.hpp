// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdms {

// Field-level misuse: non-prime modulus, modulus mismatch, inverting zero.
class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Shape or index violations on matrices and vectors.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, std::size_t pivot_col)
        : std::runtime_error(what), pivot_col_(pivot_col) {}

    // 0-based column where elimination found no pivot.
    std::size_t pivot_col() const noexcept { return pivot_col_; }

private:
    std::size_t pivot_col_;
};

// Scheme parameter constraint violations; message lists every violated constraint.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A combinatorial or enumeration guard was exceeded.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SearchExhaustedError : public std::runtime_error {
public:
    SearchExhaustedError(const std::string& what, std::uint64_t attempts, std::uint32_t q)
        : std::runtime_error(what), attempts_(attempts), q_(q) {}

    std::uint64_t attempts() const noexcept { return attempts_; }
    std::uint32_t field_size() const noexcept { return q_; }

private:
    std::uint64_t attempts_;
    std::uint32_t q_;
};

// Malformed descriptor or share data.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shares bound to a different scheme than the one supplied.
class DigestMismatchError : public FormatError {
public:
    using FormatError::FormatError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pdms

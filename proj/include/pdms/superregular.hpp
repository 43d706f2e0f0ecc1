// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdms/combinatorics.hpp"
#include "pdms/errors.hpp"
#include "pdms/matrix.hpp"
#include "pdms/params.hpp"
#include "pdms/random.hpp"

namespace pdms {

// Evaluation points for a Cauchy matrix with entries 1/(x_i - y_j).
// All k + n points must be pairwise distinct, hence q >= k + n.
struct CauchySpec {
    FieldModulus q;
    std::vector<std::uint32_t> x; // k row points
    std::vector<std::uint32_t> y; // n column points
};

inline FqMatrix cauchy(const CauchySpec& spec) {
    std::vector<std::uint32_t> all;
    all.reserve(spec.x.size() + spec.y.size());
    all.insert(all.end(), spec.x.begin(), spec.x.end());
    all.insert(all.end(), spec.y.begin(), spec.y.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw FieldError("cauchy: repeated evaluation point");
    FqMatrix out(spec.x.size(), spec.y.size(), spec.q);
    for (std::size_t i = 0; i < spec.x.size(); ++i)
        for (std::size_t j = 0; j < spec.y.size(); ++j)
            out.set(i, j, spec.q.inv(spec.q.sub(spec.x[i], spec.y[j])));
    return out;
}

// A singular square submatrix, identified by its 0-based row/column index sets.
struct MinorWitness {
    std::vector<std::size_t> row_idx;
    std::vector<std::size_t> col_idx;
};

// Exhaustive minor checks are exponential; these limits keep them at desk scale.
struct MinorGuard {
    std::size_t max_min_dim = 10;
    std::size_t max_dim_sum = 24;
    bool unlimited = false;
};

// First singular square submatrix in (order, lexicographic) scan order, or
// nullopt when every minor of every order is invertible.
inline std::optional<MinorWitness> find_singular_minor(const FqMatrix& a,
                                                       const MinorGuard& guard = {}) {
    const std::size_t r = a.rows(), c = a.cols();
    if (!guard.unlimited &&
        (std::min(r, c) > guard.max_min_dim || r + c > guard.max_dim_sum))
        throw GuardError("superregularity check guard exceeded for " + std::to_string(r) + "x" +
                         std::to_string(c) + " matrix (override to proceed)");
    std::optional<MinorWitness> witness;
    for (std::size_t order = 1; order <= std::min(r, c) && !witness; ++order) {
        for_each_combination(r, order, [&](const std::vector<std::size_t>& rows) {
            return for_each_combination(c, order, [&](const std::vector<std::size_t>& cols) {
                if (determinant(submatrix(a, rows, cols)).value == 0) {
                    witness = MinorWitness{rows, cols};
                    return false;
                }
                return true;
            });
        });
    }
    return witness;
}

inline bool is_superregular(const FqMatrix& a, const MinorGuard& guard = {}) {
    return !find_singular_minor(a, guard).has_value();
}

// A failing deletion minor of some access-set block matrix H_i: deleting
// deleted_row (among the first p rows) and deleted_col (among the first mu
// columns) left a singular matrix of order mu + p - 1. All indices 0-based.
struct DeletionWitness {
    std::size_t block;
    std::size_t deleted_row;
    std::size_t deleted_col;
};

// The extra condition on top of superregularity: every single-deletion minor of
// every H_i block matrix must be invertible. Vacuous for mu == 0 or p == 1 (the
// surviving minors are plain submatrices of the source there).
inline std::optional<DeletionWitness> find_singular_deletion_minor(const FqMatrix& source,
                                                                   const SchemeParams& params) {
    validate_params(params);
    if (source.rows() != params.k || source.cols() != params.n)
        throw DimensionError("source matrix shape does not match parameters");
    if (params.mu == 0 || params.p == 1)
        return std::nullopt;
    const BlockView blocks(params);
    const std::size_t side = params.mu + params.p;
    for (std::size_t i = 0; i < params.group_count(); ++i) {
        const FqMatrix h = blocks.h_block(source, i);
        for (std::size_t dr = 0; dr < params.p; ++dr) {
            for (std::size_t dc = 0; dc < params.mu; ++dc) {
                std::vector<std::size_t> rows, cols;
                for (std::size_t r = 0; r < side; ++r)
                    if (r != dr)
                        rows.push_back(r);
                for (std::size_t c = 0; c < side; ++c)
                    if (c != dc)
                        cols.push_back(c);
                if (determinant(submatrix(h, rows, cols)).value == 0)
                    return DeletionWitness{i, dr, dc};
            }
        }
    }
    return std::nullopt;
}

struct PmuVerdict {
    bool ok = false;
    std::optional<MinorWitness> singular_minor;    // superregularity failed
    std::optional<DeletionWitness> deletion_minor; // extra condition failed
};

inline PmuVerdict is_pmu_superregular(const FqMatrix& source, const SchemeParams& params,
                                      const MinorGuard& guard = {}) {
    PmuVerdict verdict;
    verdict.singular_minor = find_singular_minor(source, guard);
    if (verdict.singular_minor)
        return verdict;
    verdict.deletion_minor = find_singular_deletion_minor(source, params);
    verdict.ok = !verdict.deletion_minor.has_value();
    return verdict;
}

struct SearchBudget {
    std::uint64_t max_attempts = 1000;
    std::uint64_t seed = 0;
};

// Randomized search for a source matrix passing is_pmu_superregular.
// Cauchy candidates come first: they are superregular by construction, so only
// the deletion minors need checking. The second half of the budget falls back
// to fully random matrices with full verification. Deterministic under seed.
inline FqMatrix search_pmu_superregular(const SchemeParams& params, const SearchBudget& budget,
                                        const MinorGuard& guard = {}) {
    validate_params(params);
    if (budget.max_attempts == 0)
        throw ParameterError("search budget must allow at least one attempt");
    const FieldModulus q = field_of(params);
    SeededRandomSource rng(budget.seed);
    const bool cauchy_possible = std::uint64_t(params.k) + params.n <= q.value();
    const std::uint64_t cauchy_attempts = cauchy_possible ? (budget.max_attempts + 1) / 2 : 0;
    std::uint64_t attempts = 0;
    while (attempts < cauchy_attempts) {
        ++attempts;
        auto points = sample_distinct(q, params.k + params.n, rng);
        CauchySpec spec{q,
                        {points.begin(), points.begin() + params.k},
                        {points.begin() + params.k, points.end()}};
        FqMatrix candidate = cauchy(spec);
        if (!find_singular_deletion_minor(candidate, params))
            return candidate;
    }
    while (attempts < budget.max_attempts) {
        ++attempts;
        FqMatrix candidate(params.k, params.n, q);
        for (std::size_t r = 0; r < params.k; ++r)
            for (std::size_t c = 0; c < params.n; ++c)
                candidate.set(r, c, uniform_residue(q, rng));
        if (is_pmu_superregular(candidate, params, guard).ok)
            return candidate;
    }
    throw SearchExhaustedError("no (p,mu)-superregular matrix found in " +
                                   std::to_string(attempts) + " attempts over F_" +
                                   std::to_string(params.q) + "; try a larger field",
                               attempts, params.q);
}

} // namespace pdms

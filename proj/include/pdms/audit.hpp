// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdms/combinatorics.hpp"
#include "pdms/errors.hpp"
#include "pdms/matrix.hpp"
#include "pdms/scheme.hpp"

namespace pdms {

// True iff the unit vector e_i (0-based symbol index) lies in the column space
// of M, i.e. rank([M | e_i]) == rank(M). An eavesdropper holding the columns of
// M can then recover file symbol i.
inline bool unit_vector_in_span(const FqMatrix& m, std::size_t symbol_index) {
    if (symbol_index >= m.rows())
        throw DimensionError("unit vector index out of range");
    FqMatrix aug(m.rows(), m.cols() + 1, m.modulus());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            aug.set(r, c, m.at(r, c));
    aug.set(symbol_index, m.cols(), 1 % m.modulus().value());
    return rank(aug) == rank(m);
}

struct AuditBudgets {
    std::uint64_t subset_budget = 1'000'000;  // column subsets per level
    std::uint64_t state_budget = 10'000'000;  // q^k states for the entropy oracle
};

struct WeakWitness {
    std::vector<std::size_t> columns; // 0-based
    std::size_t symbol;               // 0-based
};

struct WeakSecurityResult {
    std::size_t level = 0; // every subset of size <= level leaks no single symbol
    std::optional<WeakWitness> witness;
    bool truncated = false; // enumeration stopped at the subset budget
    std::uint64_t subsets_checked = 0;
};

// Smallest-first scan: returns the largest m <= cap such that no m column
// subset spans any unit vector e_i, i < file_len, along with the first failing
// subset when one exists (lexicographic subsets, symbols ascending).
inline WeakSecurityResult weak_security_level(const FqMatrix& g, std::size_t file_len,
                                              std::size_t cap,
                                              std::uint64_t subset_budget = 1'000'000) {
    if (file_len > g.rows())
        throw DimensionError("file length exceeds matrix rows");
    WeakSecurityResult result;
    std::vector<std::size_t> all_rows(g.rows());
    for (std::size_t i = 0; i < g.rows(); ++i)
        all_rows[i] = i;
    for (std::size_t m = 1; m <= cap; ++m) {
        if (binomial_capped(g.cols(), m, subset_budget) > subset_budget) {
            result.truncated = true;
            return result;
        }
        bool clean = for_each_combination(g.cols(), m, [&](const std::vector<std::size_t>& cols) {
            ++result.subsets_checked;
            const FqMatrix m_e = submatrix(g, all_rows, cols);
            for (std::size_t j = 0; j < file_len; ++j) {
                if (unit_vector_in_span(m_e, j)) {
                    result.witness = WeakWitness{cols, j};
                    return false;
                }
            }
            return true;
        });
        if (!clean) {
            result.level = m - 1;
            return result;
        }
        result.level = m;
    }
    return result;
}

struct StrongSecurityResult {
    bool pass = false;        // the rank condition holds at level mu
    std::size_t verified = 0; // largest m <= mu with every m-subset full rank
    std::optional<std::vector<std::size_t>> witness_columns; // 0-based, first failure
};

// Nested-code condition: every subset of m <= mu columns of the bottom mu rows
// must have rank m, so the random symbols fully mask any mu observations.
// Vacuously true for mu == 0.
inline StrongSecurityResult strong_security_check(const FqMatrix& g, std::size_t mu) {
    if (mu > g.rows())
        throw DimensionError("mu exceeds matrix rows");
    StrongSecurityResult result;
    if (mu == 0) {
        result.pass = true;
        return result;
    }
    std::vector<std::size_t> bottom(mu);
    for (std::size_t i = 0; i < mu; ++i)
        bottom[i] = g.rows() - mu + i;
    std::vector<std::size_t> all_cols(g.cols());
    for (std::size_t i = 0; i < g.cols(); ++i)
        all_cols[i] = i;
    const FqMatrix masks = submatrix(g, bottom, all_cols);
    for (std::size_t m = 1; m <= mu; ++m) {
        std::vector<std::size_t> rows(mu);
        for (std::size_t i = 0; i < mu; ++i)
            rows[i] = i;
        bool clean = for_each_combination(g.cols(), m, [&](const std::vector<std::size_t>& cols) {
            if (rank(submatrix(masks, rows, cols)) != m) {
                result.witness_columns = cols;
                return false;
            }
            return true;
        });
        if (!clean)
            return result;
        result.verified = m;
    }
    result.pass = true;
    return result;
}

struct MdsResult {
    bool pass = false;
    std::uint64_t minors_checked = 0;
    std::optional<std::vector<std::size_t>> witness_columns; // 0-based singular k-set
    bool truncated = false;
};

// Every k x k minor must be invertible.
inline MdsResult mds_check(const FqMatrix& g, std::uint64_t subset_budget = 1'000'000) {
    MdsResult result;
    if (binomial_capped(g.cols(), g.rows(), subset_budget) > subset_budget) {
        result.truncated = true;
        return result;
    }
    std::vector<std::size_t> all_rows(g.rows());
    for (std::size_t i = 0; i < g.rows(); ++i)
        all_rows[i] = i;
    result.pass = for_each_combination(g.cols(), g.rows(), [&](const std::vector<std::size_t>& cols) {
        ++result.minors_checked;
        if (determinant(submatrix(g, all_rows, cols)).value == 0) {
            result.witness_columns = cols;
            return false;
        }
        return true;
    });
    return result;
}

struct PartialDecodabilityResult {
    bool pass = false;
    std::optional<std::pair<std::uint32_t, std::uint32_t>> witness; // (group, offset 1-based)
};

// Verifies H_i w = (e_offset | 0) for every cached decode vector: the access-set
// observation dotted with w must isolate exactly one file symbol.
inline PartialDecodabilityResult p_decodability_check(const CodingScheme& scheme) {
    const auto& params = scheme.params();
    const FieldModulus m = scheme.modulus();
    for (std::uint32_t group = 0; group < params.group_count(); ++group) {
        const FqMatrix h = scheme.blocks().h_block(scheme.coding_matrix(), group);
        for (std::uint32_t offset = 1; offset <= params.p; ++offset) {
            const ColumnVector& w = scheme.decode_vector(group, offset);
            for (std::size_t r = 0; r < h.rows(); ++r) {
                std::uint32_t acc = 0;
                for (std::size_t c = 0; c < h.cols(); ++c)
                    acc = m.add(acc, m.mul(h.at(r, c), w.at(c)));
                const std::uint32_t expected = (r == offset - 1) ? 1 % m.value() : 0;
                if (acc != expected)
                    return {false, std::make_pair(group, offset)};
            }
        }
    }
    return {true, std::nullopt};
}

enum class EntropyMode { joint, per_symbol };

// Exact conditional counts for each file symbol given each observation value.
// counts[j][v * observation_count + o] is the number of (s, r) states with
// s_j = v producing observation index o; all counts over one j sum to q^k.
struct LeakageProfile {
    std::vector<std::uint32_t> eavesdrop_nodes; // 1-based
    std::uint64_t observation_count = 1;
    std::vector<std::vector<std::uint64_t>> counts;
};

struct EntropyResult {
    bool uniform = false;
    std::vector<bool> per_symbol_uniform; // only meaningful in per_symbol mode
    std::uint64_t states = 0;
    LeakageProfile profile;
};

// Brute-force enumeration of all q^k (file, randomness) states with exact
// integer counting; no floating point anywhere. Works on any k x n matrix with
// mu trailing randomness rows; nodes are 1-based column indices.
//   joint:      the conditional distribution of the whole file given each
//               observation value must be uniform over all q^(k-mu) files.
//   per_symbol: the conditional distribution of each file symbol given each
//               observation value must be uniform over F_q.
inline EntropyResult entropy_oracle(const FqMatrix& g, std::uint32_t mu,
                                    const std::vector<std::uint32_t>& nodes, EntropyMode mode,
                                    std::uint64_t state_budget = 10'000'000) {
    if (mu > g.rows())
        throw DimensionError("mu exceeds matrix rows");
    const FieldModulus q = g.modulus();
    const std::size_t k = g.rows();
    const std::size_t file_len = k - mu;

    std::vector<std::size_t> cols;
    cols.reserve(nodes.size());
    {
        std::vector<std::uint32_t> sorted = nodes;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] < 1 || sorted[i] > g.cols())
                throw DimensionError("eavesdrop node out of range");
            if (i > 0 && sorted[i] == sorted[i - 1])
                throw DimensionError("duplicate eavesdrop node");
            cols.push_back(sorted[i] - 1);
        }
    }

    auto checked_pow = [&](std::uint64_t base, std::size_t exp, const char* what) {
        std::uint64_t acc = 1;
        for (std::size_t i = 0; i < exp; ++i) {
            if (acc > state_budget / base)
                throw GuardError(std::string(what) + " exceeds the enumeration budget of " +
                                 std::to_string(state_budget) + " (raise it to proceed)");
            acc *= base;
        }
        return acc;
    };

    EntropyResult result;
    result.states = checked_pow(q.value(), k, "state count q^k");
    const std::uint64_t obs_count = checked_pow(q.value(), cols.size(), "observation count");
    const std::uint64_t file_states =
        mode == EntropyMode::joint ? checked_pow(q.value(), file_len, "file state count") : 0;
    if (mode == EntropyMode::joint && obs_count > state_budget / std::max<std::uint64_t>(file_states, 1))
        throw GuardError("joint counting table exceeds the enumeration budget");

    if (file_len > 0 && obs_count > state_budget / q.value() / file_len + 1)
        throw GuardError("leakage profile table exceeds the enumeration budget");
    result.profile.eavesdrop_nodes = nodes;
    std::sort(result.profile.eavesdrop_nodes.begin(), result.profile.eavesdrop_nodes.end());
    result.profile.observation_count = obs_count;
    result.profile.counts.assign(file_len,
                                 std::vector<std::uint64_t>(q.value() * obs_count, 0));
    std::vector<std::uint64_t> joint_counts;
    if (mode == EntropyMode::joint)
        joint_counts.assign(file_states * obs_count, 0);

    std::vector<std::uint32_t> x(k, 0);
    for (std::uint64_t state = 0;; ++state) {
        std::uint64_t obs = 0;
        for (std::size_t j = cols.size(); j > 0; --j) {
            std::uint32_t v = 0;
            for (std::size_t t = 0; t < k; ++t)
                v = q.add(v, q.mul(x[t], g.at(t, cols[j - 1])));
            obs = obs * q.value() + v;
        }
        for (std::size_t j = 0; j < file_len; ++j)
            ++result.profile.counts[j][std::uint64_t(x[j]) * obs_count + obs];
        if (mode == EntropyMode::joint) {
            std::uint64_t file_index = 0;
            for (std::size_t j = file_len; j > 0; --j)
                file_index = file_index * q.value() + x[j - 1];
            ++joint_counts[file_index * obs_count + obs];
        }
        // odometer over F_q^k
        std::size_t pos = 0;
        while (pos < k && ++x[pos] == q.value()) {
            x[pos] = 0;
            ++pos;
        }
        if (pos == k)
            break;
    }

    if (mode == EntropyMode::joint) {
        result.uniform = true;
        for (std::uint64_t o = 0; o < obs_count && result.uniform; ++o) {
            const std::uint64_t reference = joint_counts[o];
            for (std::uint64_t f = 1; f < file_states; ++f) {
                if (joint_counts[f * obs_count + o] != reference) {
                    result.uniform = false;
                    break;
                }
            }
        }
    } else {
        result.per_symbol_uniform.assign(file_len, true);
        result.uniform = true;
        for (std::size_t j = 0; j < file_len; ++j) {
            for (std::uint64_t o = 0; o < obs_count && result.per_symbol_uniform[j]; ++o) {
                const std::uint64_t reference = result.profile.counts[j][o];
                for (std::uint32_t v = 1; v < q.value(); ++v) {
                    if (result.profile.counts[j][std::uint64_t(v) * obs_count + o] != reference) {
                        result.per_symbol_uniform[j] = false;
                        result.uniform = false;
                        break;
                    }
                }
            }
        }
    }
    return result;
}

inline EntropyResult entropy_oracle(const CodingScheme& scheme,
                                    const std::vector<std::uint32_t>& nodes, EntropyMode mode,
                                    std::uint64_t state_budget = 10'000'000) {
    return entropy_oracle(scheme.coding_matrix(), scheme.params().mu, nodes, mode, state_budget);
}

enum class Verdict { pass, fail, truncated };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    default:
        return "truncated";
    }
}

// Combined audit: MDS + strong security at mu + partial decodability + weak
// security level up to mu + p (one past the perfectness threshold, to detect
// over-achievement). perfect requires all four checks.
struct AuditReport {
    SchemeParams params;
    Verdict mds = Verdict::fail;
    MdsResult mds_detail;
    Verdict strong = Verdict::fail;
    StrongSecurityResult strong_detail;
    Verdict p_decodable = Verdict::fail;
    PartialDecodabilityResult p_decodable_detail;
    std::size_t weak_cap = 0;
    WeakSecurityResult weak_detail;
    bool perfect = false;
    std::vector<std::string> bounds_hit;

    nlohmann::json to_json() const {
        nlohmann::json doc;
        doc["params"] = {{"q", params.q}, {"n", params.n}, {"k", params.k},
                         {"mu", params.mu}, {"p", params.p}};
        doc["mds"] = {{"verdict", to_string(mds)}, {"minors_checked", mds_detail.minors_checked}};
        if (mds_detail.witness_columns)
            doc["mds"]["witness_columns"] = one_based(*mds_detail.witness_columns);
        doc["strong_security"] = {{"verdict", to_string(strong)},
                                  {"mu", params.mu},
                                  {"verified_level", strong_detail.verified}};
        if (strong_detail.witness_columns)
            doc["strong_security"]["witness_columns"] = one_based(*strong_detail.witness_columns);
        doc["p_decodability"] = {{"verdict", to_string(p_decodable)}};
        if (p_decodable_detail.witness)
            doc["p_decodability"]["witness"] = {{"group", p_decodable_detail.witness->first},
                                                {"offset", p_decodable_detail.witness->second}};
        doc["weak_security"] = {{"cap", weak_cap},
                                {"level", weak_detail.level},
                                {"subsets_checked", weak_detail.subsets_checked}};
        if (weak_detail.witness) {
            doc["weak_security"]["witness_columns"] = one_based(weak_detail.witness->columns);
            doc["weak_security"]["witness_symbol"] = weak_detail.witness->symbol + 1;
        }
        doc["perfect"] = perfect;
        doc["bounds_hit"] = bounds_hit;
        return doc;
    }

private:
    static std::vector<std::size_t> one_based(const std::vector<std::size_t>& idx) {
        std::vector<std::size_t> out(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            out[i] = idx[i] + 1;
        return out;
    }
};

inline AuditReport classify(const CodingScheme& scheme, const AuditBudgets& budgets = {}) {
    const auto& params = scheme.params();
    AuditReport report;
    report.params = params;

    report.mds_detail = mds_check(scheme.coding_matrix(), budgets.subset_budget);
    if (report.mds_detail.truncated) {
        report.mds = Verdict::truncated;
        report.bounds_hit.push_back("mds: C(n,k) exceeds the subset budget");
    } else {
        report.mds = report.mds_detail.pass ? Verdict::pass : Verdict::fail;
    }

    report.strong_detail = strong_security_check(scheme.coding_matrix(), params.mu);
    report.strong = report.strong_detail.pass ? Verdict::pass : Verdict::fail;

    report.p_decodable_detail = p_decodability_check(scheme);
    report.p_decodable = report.p_decodable_detail.pass ? Verdict::pass : Verdict::fail;

    report.weak_cap = params.mu + params.p;
    report.weak_detail = weak_security_level(scheme.coding_matrix(), params.file_symbols(),
                                             report.weak_cap, budgets.subset_budget);
    if (report.weak_detail.truncated)
        report.bounds_hit.push_back("weak security: subset budget reached at level " +
                                    std::to_string(report.weak_detail.level + 1));

    const std::size_t threshold = params.mu + params.p - 1;
    report.perfect = report.mds == Verdict::pass && report.strong == Verdict::pass &&
                     report.p_decodable == Verdict::pass &&
                     report.weak_detail.level >= threshold;
    return report;
}

} // namespace pdms

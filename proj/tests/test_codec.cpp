// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "pdms/codec.hpp"
#include "pdms/combinatorics.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace pdms;

namespace {

CodingScheme example_scheme() {
    return build_scheme(fixtures::params_f11(), fixtures::source_f11());
}

} // namespace

TEST_CASE("stripe encoding", "[codec]") {
    const CodingScheme scheme = example_scheme();
    const FqMatrix& g = scheme.coding_matrix();

    // a unit file vector with zero randomness selects a row of G
    const std::vector<std::uint32_t> unit{1, 0, 0, 0}, zero_r{0};
    const auto row = encode_stripe(scheme, unit, zero_r);
    for (std::size_t j = 0; j < 6; ++j)
        CHECK(row[j] == g.at(0, j));

    const std::vector<std::uint32_t> zeros{0, 0, 0, 0};
    CHECK(encode_stripe(scheme, zeros, zero_r) == std::vector<std::uint32_t>(6, 0));

    // independent dot-product oracle coordinate by coordinate
    const std::vector<std::uint32_t> s{2, 3, 4, 5}, r{6};
    const auto c = encode_stripe(scheme, s, r);
    const std::vector<std::uint32_t> x{2, 3, 4, 5, 6};
    for (std::size_t j = 0; j < 6; ++j) {
        std::vector<std::uint32_t> column(5);
        for (std::size_t t = 0; t < 5; ++t)
            column[t] = g.at(t, j);
        CHECK(c[j] == oracles::naive_dot(x, column, 11));
    }

    CHECK_THROWS_AS(encode_stripe(scheme, std::vector<std::uint32_t>{11, 0, 0, 0}, zero_r),
                    FieldError);
    CHECK_THROWS_AS(encode_stripe(scheme, std::vector<std::uint32_t>{1, 2, 3}, zero_r),
                    DimensionError);
}

TEST_CASE("full decode from every k-subset", "[codec]") {
    const CodingScheme scheme = example_scheme();
    SeededRandomSource rng(61);
    const FieldModulus q(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::uint32_t> s(4), r(1);
        for (auto& v : s)
            v = uniform_residue(q, rng);
        for (auto& v : r)
            v = uniform_residue(q, rng);
        const auto c = encode_stripe(scheme, s, r);
        for_each_combination(6, 5, [&](const std::vector<std::size_t>& nodes) {
            Observation obs;
            for (auto node : nodes)
                obs.push_back({static_cast<std::uint32_t>(node + 1), c[node]});
            const Stripe decoded = decode_full(scheme, obs);
            CHECK(decoded.file_symbols == s);
            CHECK(decoded.random_symbols == r);
            return true;
        });
    }

    // k - 1 observations are not enough
    Observation few{{1, 0}, {2, 0}, {3, 0}, {4, 0}};
    CHECK_THROWS_AS(decode_full(scheme, few), DimensionError);

    // duplicate node
    Observation dup{{1, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    CHECK_THROWS_AS(decode_full(scheme, dup), DimensionError);
}

TEST_CASE("access sets", "[codec]") {
    const CodingScheme scheme = example_scheme();
    CHECK(access_set(scheme, 0) == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(access_set(scheme, 1) == std::vector<std::uint32_t>{1, 4, 5});
    CHECK_THROWS_AS(access_set(scheme, 2), DimensionError);

    // systematic-style case: mu = 0, p = 1
    const FieldModulus q(11);
    const SchemeParams flat{11, 6, 4, 0, 1};
    const CodingScheme sys = build_scheme(flat, cauchy({q, {0, 1, 2, 3}, {4, 5, 6, 7, 8, 9}}));
    CHECK(access_set(sys, 2) == std::vector<std::uint32_t>{3});
}

TEST_CASE("group decode recovers exactly its slice", "[codec]") {
    const CodingScheme scheme = example_scheme();
    CHECK(partial_decode_vector(scheme, 0, 1) == ColumnVector(FieldModulus(11), {10, 4, 5}));

    SeededRandomSource rng(71);
    const FieldModulus q(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::uint32_t> s(4), r(1);
        for (auto& v : s)
            v = uniform_residue(q, rng);
        for (auto& v : r)
            v = uniform_residue(q, rng);
        const auto c = encode_stripe(scheme, s, r);

        const auto g0 = decode_group(scheme, 0, {{1, c[0]}, {2, c[1]}, {3, c[2]}});
        CHECK(g0 == std::vector<std::uint32_t>{s[0], s[1]});
        const auto g1 = decode_group(scheme, 1, {{1, c[0]}, {4, c[3]}, {5, c[4]}});
        CHECK(g1 == std::vector<std::uint32_t>{s[2], s[3]});

        // both decode paths agree
        Observation all5{{1, c[0]}, {2, c[1]}, {3, c[2]}, {4, c[3]}, {5, c[4]}};
        const Stripe full = decode_full(scheme, all5);
        CHECK(full.file_symbols[0] == g0[0]);
        CHECK(full.file_symbols[3] == g1[1]);
    }

    // wrong node set
    const auto c = encode_stripe(scheme, std::vector<std::uint32_t>{1, 2, 3, 4},
                                 std::vector<std::uint32_t>{5});
    CHECK_THROWS_AS(decode_group(scheme, 0, {{2, c[1]}, {3, c[2]}, {4, c[3]}}), DimensionError);
}

TEST_CASE("seeded encoding draws the documented randomness stream", "[codec]") {
    const CodingScheme scheme = example_scheme();
    const FieldModulus q(11);

    SeededRandomSource rng(123);
    std::vector<std::uint32_t> s1{1, 2, 3, 4}, s2{5, 6, 7, 8};
    const auto [c1, r1] = encode_stripe(scheme, s1, rng);
    const auto [c2, r2] = encode_stripe(scheme, s2, rng);

    SeededRandomSource replay(123);
    CHECK(r1 == std::vector<std::uint32_t>{uniform_residue(q, replay)});
    CHECK(r2 == std::vector<std::uint32_t>{uniform_residue(q, replay)});
    CHECK(c1 == encode_stripe(scheme, s1, r1));
}

TEST_CASE("file round trip in byte mode", "[codec]") {
    const SchemeParams params{257, 6, 5, 1, 2};
    const CodingScheme scheme = build_scheme_auto(params, 7);

    SeededRandomSource rng(99);
    std::vector<std::uint8_t> data(10);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = static_cast<std::uint8_t>(i * 37 + 1);

    const auto shares = encode_file(scheme, data, rng);
    REQUIRE(shares.size() == 6);
    CHECK(shares[0].header.stripe_count == 3); // 10 bytes over stride 4, 2 pad symbols
    CHECK(shares[0].header.original_byte_length == 10);
    for (const auto& share : shares)
        CHECK(share.symbols.size() == 3);

    // decode from nodes {2,3,4,5,6}
    std::vector<Share> subset(shares.begin() + 1, shares.end());
    CHECK(decode_file(scheme, subset) == data);

    // every k-subset works
    for_each_combination(6, 5, [&](const std::vector<std::size_t>& nodes) {
        std::vector<Share> pick;
        for (auto i : nodes)
            pick.push_back(shares[i]);
        CHECK(decode_file(scheme, pick) == data);
        return true;
    });

    // insufficient shares
    std::vector<Share> four(shares.begin(), shares.begin() + 4);
    CHECK_THROWS_AS(decode_file(scheme, four), DimensionError);

    // shares from a different scheme are rejected by digest
    const CodingScheme other = build_scheme_auto(params, 8);
    SeededRandomSource rng2(99);
    auto foreign = encode_file(other, data, rng2);
    std::vector<Share> mixed(shares.begin(), shares.begin() + 4);
    mixed.push_back(foreign[5]);
    CHECK_THROWS_AS(decode_file(scheme, mixed), DigestMismatchError);

    // empty file
    SeededRandomSource rng3(1);
    const auto empty_shares = encode_file(scheme, std::vector<std::uint8_t>{}, rng3);
    CHECK(empty_shares[0].header.stripe_count == 0);
    std::vector<Share> empty_subset(empty_shares.begin(), empty_shares.begin() + 5);
    CHECK(decode_file(scheme, empty_subset).empty());

    // byte mode needs q >= 257
    const CodingScheme small = example_scheme();
    SeededRandomSource rng4(1);
    CHECK_THROWS_AS(encode_file(small, data, rng4), ParameterError);
}

TEST_CASE("file encoding replays the seeded masking stream per stripe", "[codec]") {
    const SchemeParams params{257, 6, 5, 1, 2};
    const CodingScheme scheme = build_scheme_auto(params, 7);
    const FieldModulus q(257);

    std::vector<std::uint8_t> data{10, 20, 30, 40, 50, 60, 70, 80}; // 2 exact stripes
    SeededRandomSource rng(42);
    const auto shares = encode_file(scheme, data, rng);

    SeededRandomSource replay(42);
    const std::vector<std::uint32_t> r1{uniform_residue(q, replay)};
    const std::vector<std::uint32_t> r2{uniform_residue(q, replay)};
    const auto c1 = encode_stripe(scheme, std::vector<std::uint32_t>{10, 20, 30, 40}, r1);
    const auto c2 = encode_stripe(scheme, std::vector<std::uint32_t>{50, 60, 70, 80}, r2);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(shares[i].symbols[0] == c1[i]);
        CHECK(shares[i].symbols[1] == c2[i]);
    }
}

TEST_CASE("byte mode bounds on the field size", "[codec]") {
    SeededRandomSource rng(1);
    const std::vector<std::uint8_t> data{1, 2, 3};

    // q above the 2-byte symbol ceiling
    const SchemeParams wide{131071, 6, 4, 0, 2}; // 2^17 - 1, prime
    const CodingScheme big = build_scheme_auto(wide, 2);
    CHECK_THROWS_AS(encode_file(big, data, rng), ParameterError);

    // the largest 16-bit prime is fine
    const SchemeParams edge{65521, 6, 4, 0, 2};
    const CodingScheme ok = build_scheme_auto(edge, 2);
    const auto shares = encode_file(ok, data, rng);
    std::vector<Share> subset(shares.begin(), shares.begin() + 4);
    CHECK(decode_file(ok, subset) == data);
}

TEST_CASE("group slices across stripes with pad truncation", "[codec]") {
    const SchemeParams params{257, 6, 5, 1, 2};
    const CodingScheme scheme = build_scheme_auto(params, 7);

    std::vector<std::uint8_t> data(10);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = static_cast<std::uint8_t>(200 + i);

    SeededRandomSource rng(5);
    const auto shares = encode_file(scheme, data, rng);

    // group 1 covers byte positions 2,3 of each 4-byte stripe: 2,3,6,7,10,11;
    // 10 and 11 fall in the zero padding and must be dropped
    const auto nodes = access_set(scheme, 1); // {1, 4, 5}
    std::vector<Share> pick;
    for (auto node : nodes)
        pick.push_back(shares[node - 1]);
    const GroupSlice slice = decode_file_group(scheme, 1, pick);
    CHECK(slice.bytes == std::vector<std::uint8_t>{data[2], data[3], data[6], data[7]});
    CHECK(slice.offset_in_stripe == 2);
    CHECK(slice.stride == 4);
    CHECK(slice.stripe_count == 3);

    // group 0 from its access set {1,2,3}
    std::vector<Share> first3(shares.begin(), shares.begin() + 3);
    const GroupSlice g0 = decode_file_group(scheme, 0, first3);
    CHECK(g0.bytes ==
          std::vector<std::uint8_t>{data[0], data[1], data[4], data[5], data[8], data[9]});

    // wrong node set
    std::vector<Share> wrong{shares[1], shares[2], shares[3]};
    CHECK_THROWS_AS(decode_file_group(scheme, 0, wrong), DimensionError);
}

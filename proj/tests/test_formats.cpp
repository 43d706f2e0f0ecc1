// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <vector>

#include "pdms/codec.hpp"
#include "pdms/descriptor.hpp"
#include "pdms/digest.hpp"
#include "pdms/share.hpp"

#include "fixtures.hpp"

using namespace pdms;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pdms_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

} // namespace

TEST_CASE("sha256 known answer", "[formats]") {
    CHECK(hex(sha256(std::string("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(hex(sha256(std::string(""))) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("descriptor canonical form and digest", "[formats]") {
    const CodingScheme scheme = build_scheme(fixtures::params_f5(), fixtures::source_f5());
    const std::string canonical = canonical_descriptor(scheme);

    // keys appear sorted and exactly once
    const std::vector<std::string> keys{"\"G\"", "\"k\"", "\"mu\"", "\"n\"",
                                        "\"p\"", "\"q\"", "\"source\"", "\"version\""};
    std::size_t last = 0;
    for (const auto& key : keys) {
        const std::size_t pos = canonical.find(key);
        REQUIRE(pos != std::string::npos);
        CHECK(pos >= last);
        last = pos;
    }
    CHECK(canonical.find("seed") == std::string::npos); // none recorded
    CHECK(scheme_digest(scheme) == sha256(canonical));

    TempDir dir;
    const fs::path path = dir.path / "scheme.json";
    save_descriptor(scheme, path);

    // the file holds exactly the canonical bytes
    std::ifstream in(path, std::ios::binary);
    const std::string file_bytes((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
    CHECK(file_bytes == canonical);

    const CodingScheme loaded = load_descriptor(path);
    CHECK(loaded.coding_matrix() == scheme.coding_matrix());
    CHECK(*loaded.source() == *scheme.source());
    CHECK(canonical_descriptor(loaded) == canonical);
    CHECK(scheme_digest(loaded) == scheme_digest(scheme));

    // writes are atomic: no temporary litter, and rewriting is idempotent
    save_descriptor(scheme, path);
    CHECK_FALSE(fs::exists(path.string() + ".tmp"));
    std::size_t entries = 0;
    for (auto it = fs::directory_iterator(dir.path); it != fs::directory_iterator(); ++it)
        ++entries;
    CHECK(entries == 1);
}

TEST_CASE("descriptor parsing rejects malformed input", "[formats]") {
    TempDir dir;
    const fs::path path = dir.path / "bad.json";

    auto write = [&](const std::string& text) {
        std::ofstream out(path, std::ios::trunc);
        out << text;
    };

    write("not json at all");
    CHECK_THROWS_AS(load_descriptor(path), FormatError);

    write("{\"version\":99}");
    CHECK_THROWS_AS(load_descriptor(path), FormatError);

    // G entries out of field range
    write("{\"G\":[9,9,9,9,9,9,9,9,9,9,9,9],\"k\":3,\"mu\":1,\"n\":4,\"p\":2,\"q\":5,"
          "\"version\":1}");
    CHECK_THROWS_AS(load_descriptor(path), FormatError);

    // wrong payload length
    write("{\"G\":[0,1],\"k\":3,\"mu\":1,\"n\":4,\"p\":2,\"q\":5,\"version\":1}");
    CHECK_THROWS_AS(load_descriptor(path), FormatError);

    // structurally invalid coding matrix (nonzero in the zero block)
    write("{\"G\":[1,2,0,3,0,1,4,2,1,1,4,1],\"k\":3,\"mu\":1,\"n\":4,\"p\":2,\"q\":5,"
          "\"version\":1}");
    CHECK_THROWS_AS(load_descriptor(path), FormatError);

    CHECK_THROWS_AS(load_descriptor(dir.path / "missing.json"), IoError);
}

TEST_CASE("share files are bit-exact", "[formats]") {
    Share share;
    share.header.q = 257;
    share.header.n = 4;
    share.header.k = 3;
    share.header.mu = 1;
    share.header.p = 2;
    share.header.node_index = 2;
    share.header.stripe_count = 2;
    share.header.original_byte_length = 5;
    for (std::size_t i = 0; i < 32; ++i)
        share.header.scheme_digest[i] = static_cast<std::uint8_t>(i);
    share.symbols = {256, 7};

    const std::vector<std::uint8_t> expected = [] {
        std::vector<std::uint8_t> b;
        const char* magic = "PDMS";
        b.insert(b.end(), magic, magic + 4);
        b.push_back(1);                      // version
        b.insert(b.end(), {0, 0, 1, 1});     // q = 257
        b.insert(b.end(), {0, 4});           // n
        b.insert(b.end(), {0, 3});           // k
        b.insert(b.end(), {0, 1});           // mu
        b.insert(b.end(), {0, 2});           // p
        b.insert(b.end(), {0, 2});           // node index
        b.insert(b.end(), {0, 0, 0, 0, 0, 0, 0, 2}); // stripe count
        b.insert(b.end(), {0, 0, 0, 0, 0, 0, 0, 5}); // original length
        for (std::uint8_t i = 0; i < 32; ++i)
            b.push_back(i);
        b.insert(b.end(), {1, 0});           // symbol 256
        b.insert(b.end(), {0, 7});           // symbol 7
        return b;
    }();

    CHECK(encode_share_bytes(share) == expected);
    CHECK(parse_share_bytes(expected) == share);

    TempDir dir;
    const fs::path path = dir.path / "share_2.pdms";
    write_share(share, path);
    CHECK(read_share(path) == share);
    CHECK(fs::file_size(path) == expected.size());
}

TEST_CASE("share parsing rejects corruption", "[formats]") {
    Share share;
    share.header.q = 257;
    share.header.n = 4;
    share.header.k = 3;
    share.header.mu = 1;
    share.header.p = 2;
    share.header.node_index = 1;
    share.header.stripe_count = 1;
    share.header.original_byte_length = 1;
    share.symbols = {42};
    std::vector<std::uint8_t> bytes = encode_share_bytes(share);

    auto corrupted = bytes;
    corrupted[0] = 'X';
    CHECK_THROWS_AS(parse_share_bytes(corrupted), FormatError);

    corrupted = bytes;
    corrupted[4] = 9; // version
    CHECK_THROWS_AS(parse_share_bytes(corrupted), FormatError);

    corrupted = bytes;
    corrupted[bytes.size() - 2] = 0x70; // symbol 0x702a >= q
    CHECK_THROWS_AS(parse_share_bytes(corrupted), FormatError);

    corrupted = bytes;
    corrupted.pop_back();
    CHECK_THROWS_AS(parse_share_bytes(corrupted), FormatError);

    corrupted = bytes;
    corrupted.push_back(0);
    CHECK_THROWS_AS(parse_share_bytes(corrupted), FormatError);

    // node index out of range
    Share bad = share;
    bad.header.node_index = 5;
    CHECK_THROWS_AS(parse_share_bytes(encode_share_bytes(bad)), FormatError);
}

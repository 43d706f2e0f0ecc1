// SPDX-License-Identifier: Apache-2.0
//
// pdms — build, audit, and use partially decodable secure erasure coding
// schemes. Subcommands: construct | search | encode | decode | partial | audit.
//
// Exit codes: 0 success, 1 audit found failing properties, 2 parameter error,
// 3 construction error, 4 search budget exhausted, 5 I/O or malformed input,
// 6 share/scheme digest mismatch, 7 a mandatory audit check was truncated.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdms/audit.hpp"
#include "pdms/codec.hpp"
#include "pdms/descriptor.hpp"
#include "pdms/digest.hpp"
#include "pdms/scheme.hpp"
#include "pdms/share.hpp"
#include "pdms/superregular.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int EXIT_AUDIT_FAIL = 1;
constexpr int EXIT_PARAMETER = 2;
constexpr int EXIT_CONSTRUCTION = 3;
constexpr int EXIT_SEARCH_EXHAUSTED = 4;
constexpr int EXIT_IO = 5;
constexpr int EXIT_DIGEST_MISMATCH = 6;
constexpr int EXIT_TRUNCATED = 7;

struct ParamFlags {
    std::uint32_t q = 257;
    std::uint32_t n = 0, k = 0, mu = 0, p = 0;

    void attach(CLI::App& cmd) {
        cmd.add_option("--q", q, "prime field size")->capture_default_str();
        cmd.add_option("--n", n, "number of storage nodes")->required();
        cmd.add_option("--k", k, "reconstruction threshold")->required();
        cmd.add_option("--mu", mu, "strong security threshold")->required();
        cmd.add_option("--p", p, "partial decode group size")->required();
    }

    pdms::SchemeParams params() const { return {q, n, k, mu, p}; }
};

pdms::FqMatrix load_matrix_json(const fs::path& path, const pdms::SchemeParams& params) {
    std::ifstream in(path);
    if (!in)
        throw pdms::IoError("cannot open source matrix " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw pdms::FormatError("source matrix " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_array() || doc.empty() || !doc.front().is_array())
        throw pdms::FormatError("source matrix must be a JSON array of row arrays");
    std::vector<std::vector<std::uint32_t>> rows;
    for (const auto& row : doc)
        rows.push_back(row.get<std::vector<std::uint32_t>>());
    pdms::FqMatrix m = pdms::FqMatrix::from_rows(pdms::field_of(params), rows);
    if (m.rows() != params.k || m.cols() != params.n)
        throw pdms::ParameterError("source matrix is " + std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()) + " but parameters need " +
                                   std::to_string(params.k) + "x" + std::to_string(params.n));
    return m;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw pdms::IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<pdms::Share> read_shares(const std::vector<std::string>& paths) {
    std::vector<pdms::Share> shares;
    shares.reserve(paths.size());
    for (const auto& p : paths)
        shares.push_back(pdms::read_share(p));
    return shares;
}

std::uint64_t env_budget(std::uint64_t fallback) {
    if (const char* env = std::getenv("PDMS_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw pdms::ParameterError("PDMS_BUDGET is not a valid integer");
        }
    }
    return fallback;
}

int cmd_construct(const ParamFlags& flags, std::optional<std::uint64_t> seed,
                  const std::string& source_path, const fs::path& out) {
    const pdms::SchemeParams params = flags.params();
    pdms::validate_params(params);
    if (seed.has_value() == !source_path.empty())
        throw pdms::ParameterError("construct needs exactly one of --seed or --source");
    pdms::CodingScheme scheme =
        seed ? pdms::build_scheme_auto(params, *seed)
             : pdms::build_scheme(params, load_matrix_json(source_path, params));
    pdms::save_descriptor(scheme, out);
    std::cout << pdms::hex(pdms::scheme_digest(scheme)) << "  " << out.string() << "\n";
    return 0;
}

int cmd_search(const ParamFlags& flags, std::uint64_t tries, std::uint64_t seed,
               const fs::path& out) {
    const pdms::SchemeParams params = flags.params();
    pdms::validate_params(params);
    pdms::FqMatrix source = pdms::search_pmu_superregular(params, {tries, seed});
    pdms::CodingScheme scheme = pdms::build_scheme(params, source, seed);
    pdms::save_descriptor(scheme, out);
    std::cout << pdms::hex(pdms::scheme_digest(scheme)) << "  " << out.string()
              << "  (perfect candidate; run `pdms audit` to verify)\n";
    return 0;
}

int cmd_encode(const fs::path& scheme_path, const fs::path& input, const fs::path& out_dir,
               std::optional<std::uint64_t> seed, bool byte_mode) {
    if (!byte_mode)
        throw pdms::ParameterError("only byte mode is implemented; do not disable --byte-mode");
    const pdms::CodingScheme scheme = pdms::load_descriptor(scheme_path);
    const std::vector<std::uint8_t> bytes = read_file(input);
    std::unique_ptr<pdms::RandomSource> rng;
    if (seed)
        rng = std::make_unique<pdms::SeededRandomSource>(*seed);
    else
        rng = std::make_unique<pdms::SystemRandomSource>();
    const std::vector<pdms::Share> shares = pdms::encode_file(scheme, bytes, *rng);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw pdms::IoError("cannot create output directory " + out_dir.string());
    for (const pdms::Share& share : shares) {
        fs::path path = out_dir / ("share_" + std::to_string(share.header.node_index) + ".pdms");
        pdms::write_share(share, path);
    }
    std::cout << "wrote " << shares.size() << " shares ("
              << shares.front().header.stripe_count << " stripes) to " << out_dir.string() << "\n";
    return 0;
}

int cmd_decode(const fs::path& scheme_path, const std::vector<std::string>& share_paths,
               const fs::path& out) {
    const pdms::CodingScheme scheme = pdms::load_descriptor(scheme_path);
    std::vector<pdms::Share> shares = read_shares(share_paths);
    // keep the first share seen for each node, lowest k node indices win
    std::sort(shares.begin(), shares.end(), [](const pdms::Share& a, const pdms::Share& b) {
        return a.header.node_index < b.header.node_index;
    });
    std::vector<pdms::Share> distinct;
    for (auto& share : shares)
        if (distinct.empty() || distinct.back().header.node_index != share.header.node_index)
            distinct.push_back(std::move(share));
    if (distinct.size() < scheme.params().k)
        throw pdms::DimensionError("need k = " + std::to_string(scheme.params().k) +
                                   " shares from distinct nodes, have " +
                                   std::to_string(distinct.size()));
    distinct.resize(scheme.params().k);
    const std::vector<std::uint8_t> bytes = pdms::decode_file(scheme, distinct);
    pdms::atomic_write(out, std::span<const std::uint8_t>(bytes));
    std::cout << "decoded " << bytes.size() << " bytes to " << out.string() << "\n";
    return 0;
}

int cmd_partial(const fs::path& scheme_path, std::uint32_t group,
                const std::vector<std::string>& share_paths, const fs::path& out) {
    const pdms::CodingScheme scheme = pdms::load_descriptor(scheme_path);
    const std::vector<pdms::Share> shares = read_shares(share_paths);
    const pdms::GroupSlice slice = pdms::decode_file_group(scheme, group, shares);
    pdms::atomic_write(out, std::span<const std::uint8_t>(slice.bytes));

    nlohmann::json sidecar;
    sidecar["group"] = slice.group;
    sidecar["symbols_per_stripe"] = slice.symbols_per_stripe;
    sidecar["stride"] = slice.stride;
    sidecar["offset_in_stripe"] = slice.offset_in_stripe;
    sidecar["stripe_count"] = slice.stripe_count;
    sidecar["original_byte_length"] = slice.original_byte_length;
    sidecar["byte_count"] = slice.bytes.size();
    sidecar["scheme_digest"] = pdms::hex(pdms::scheme_digest(scheme));
    fs::path sidecar_path = out;
    sidecar_path += ".json";
    pdms::atomic_write(sidecar_path, sidecar.dump() + "\n");
    std::cout << "decoded group " << group << " (" << slice.bytes.size() << " bytes) to "
              << out.string() << "\n";
    return 0;
}

int cmd_audit(const fs::path& scheme_path, bool entropy, std::uint64_t subset_budget,
              std::uint64_t state_budget) {
    const pdms::CodingScheme scheme = pdms::load_descriptor(scheme_path);
    const pdms::AuditBudgets budgets{subset_budget, state_budget};
    const pdms::AuditReport report = pdms::classify(scheme, budgets);
    nlohmann::json doc = report.to_json();
    doc["scheme_digest"] = pdms::hex(pdms::scheme_digest(scheme));

    if (entropy) {
        const auto& params = scheme.params();
        nlohmann::json ent;
        std::uint64_t joint_checked = 0, per_symbol_checked = 0;
        bool joint_uniform = true, span_agreement = true;
        std::vector<std::string> skipped;
        std::vector<std::size_t> all_rows(params.k);
        for (std::size_t i = 0; i < params.k; ++i)
            all_rows[i] = i;
        for (std::size_t m = 0; m <= params.mu + params.p - 1; ++m) {
            pdms::for_each_combination(params.n, m, [&](const std::vector<std::size_t>& subset) {
                std::vector<std::uint32_t> nodes;
                for (auto c : subset)
                    nodes.push_back(static_cast<std::uint32_t>(c + 1));
                try {
                    if (m <= params.mu) {
                        auto joint =
                            pdms::entropy_oracle(scheme, nodes, pdms::EntropyMode::joint, state_budget);
                        ++joint_checked;
                        joint_uniform = joint_uniform && joint.uniform;
                    }
                    auto per = pdms::entropy_oracle(scheme, nodes, pdms::EntropyMode::per_symbol,
                                                    state_budget);
                    ++per_symbol_checked;
                    std::vector<std::size_t> cols(subset.begin(), subset.end());
                    const pdms::FqMatrix m_e =
                        pdms::submatrix(scheme.coding_matrix(), all_rows, cols);
                    for (std::size_t j = 0; j < params.file_symbols(); ++j) {
                        const bool spans = pdms::unit_vector_in_span(m_e, j);
                        if (per.per_symbol_uniform[j] != !spans)
                            span_agreement = false;
                    }
                } catch (const pdms::GuardError& e) {
                    skipped.push_back(e.what());
                    return false; // larger subsets of this size will not fit either
                }
                return true;
            });
        }
        ent["joint_sets_checked"] = joint_checked;
        ent["joint_uniform"] = joint_uniform;
        ent["per_symbol_sets_checked"] = per_symbol_checked;
        ent["agrees_with_span_test"] = span_agreement;
        if (!skipped.empty())
            ent["skipped"] = skipped;
        doc["entropy"] = ent;
    }

    std::cout << doc.dump(2) << "\n";
    if (!report.bounds_hit.empty())
        return EXIT_TRUNCATED;
    const bool core_ok = report.mds == pdms::Verdict::pass &&
                         report.strong == pdms::Verdict::pass &&
                         report.p_decodable == pdms::Verdict::pass;
    return core_ok ? 0 : EXIT_AUDIT_FAIL;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"partially decodable secure erasure coding toolkit"};
    app.require_subcommand(1);

    // construct
    auto* construct = app.add_subcommand("construct", "build a coding scheme descriptor");
    ParamFlags construct_params;
    construct_params.attach(*construct);
    std::optional<std::uint64_t> construct_seed;
    std::string construct_source;
    std::string construct_out = "scheme.json";
    construct->add_option("--seed", construct_seed, "seed for a random Cauchy source");
    construct->add_option("--source", construct_source, "JSON file with the source matrix rows");
    construct->add_option("--out", construct_out, "descriptor output path")->capture_default_str();

    // search
    auto* search = app.add_subcommand("search", "search for a source passing the deletion-minor "
                                                "condition, then build the scheme");
    ParamFlags search_params;
    search_params.attach(*search);
    std::uint64_t search_tries = 1000;
    std::uint64_t search_seed = 0;
    std::string search_out = "scheme.json";
    search->add_option("--tries", search_tries, "attempt budget")->capture_default_str();
    search->add_option("--seed", search_seed, "search seed")->required();
    search->add_option("--out", search_out, "descriptor output path")->capture_default_str();

    // encode
    auto* encode = app.add_subcommand("encode", "split a file into n share files");
    std::string encode_scheme, encode_out = ".";
    std::string encode_input;
    std::optional<std::uint64_t> encode_seed;
    bool encode_byte_mode = true;
    encode->add_option("--scheme", encode_scheme, "scheme descriptor")->required();
    encode->add_option("input", encode_input, "file to encode")->required();
    encode->add_option("--out", encode_out, "output directory")->capture_default_str();
    encode->add_option("--seed", encode_seed, "seed for the masking symbols (default: OS entropy)");
    encode->add_flag("--byte-mode,!--no-byte-mode", encode_byte_mode,
                     "map bytes 1:1 to field symbols (the only implemented mode)");

    // decode
    auto* decode = app.add_subcommand("decode", "reconstruct the file from any k shares");
    std::string decode_scheme, decode_out;
    std::vector<std::string> decode_shares;
    decode->add_option("--scheme", decode_scheme, "scheme descriptor")->required();
    decode->add_option("--out", decode_out, "output file")->required();
    decode->add_option("shares", decode_shares, "share files (at least k)")->required();

    // partial
    auto* partial = app.add_subcommand("partial", "decode one group from its access-set shares");
    std::string partial_scheme, partial_out;
    std::uint32_t partial_group = 0;
    std::vector<std::string> partial_shares;
    partial->add_option("--scheme", partial_scheme, "scheme descriptor")->required();
    partial->add_option("--group", partial_group, "group index (0-based)")->required();
    partial->add_option("--out", partial_out, "output file (sidecar written to <out>.json)")
        ->required();
    partial->add_option("shares", partial_shares, "exactly the access-set share files")->required();

    // audit
    auto* audit = app.add_subcommand("audit", "verify MDS, security, and decodability properties");
    std::string audit_scheme;
    bool audit_entropy = false;
    std::uint64_t subset_budget = 0, state_budget = 0;
    audit->add_option("--scheme", audit_scheme, "scheme descriptor")->required();
    audit->add_flag("--entropy", audit_entropy,
                    "also run the exhaustive entropy oracle on all relevant eavesdrop sets");
    audit->add_option("--subset-budget", subset_budget,
                      "max column subsets per level (default 10^6 or PDMS_BUDGET)");
    audit->add_option("--state-budget", state_budget,
                      "max q^k states for the entropy oracle (default 10^7 or PDMS_BUDGET)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_PARAMETER;
    }

    try {
        if (*construct)
            return cmd_construct(construct_params, construct_seed, construct_source, construct_out);
        if (*search)
            return cmd_search(search_params, search_tries, search_seed, search_out);
        if (*encode)
            return cmd_encode(encode_scheme, encode_input, encode_out, encode_seed,
                              encode_byte_mode);
        if (*decode)
            return cmd_decode(decode_scheme, decode_shares, decode_out);
        if (*partial)
            return cmd_partial(partial_scheme, partial_group, partial_shares, partial_out);
        if (*audit)
            return cmd_audit(audit_scheme, audit_entropy,
                             subset_budget ? subset_budget : env_budget(1'000'000),
                             state_budget ? state_budget : env_budget(10'000'000));
    } catch (const pdms::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_PARAMETER;
    } catch (const pdms::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_PARAMETER;
    } catch (const pdms::SearchExhaustedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_SEARCH_EXHAUSTED;
    } catch (const pdms::DigestMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_DIGEST_MISMATCH;
    } catch (const pdms::SingularMatrixError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CONSTRUCTION;
    } catch (const pdms::FieldError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CONSTRUCTION;
    } catch (const pdms::GuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_TRUNCATED;
    } catch (const pdms::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_IO;
    } catch (const pdms::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_IO;
    }
    return 0;
}

// Command-line front end: analyze, compress, decompress and verify a single
// CSV column.
//
// Exit codes: 0 success, 1 operational error, 2 verification mismatch.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bcc/analysis.hpp"
#include "bcc/column_io.hpp"
#include "bcc/error.hpp"

namespace {

struct column_args {
  std::string input;
  std::size_t column = 0;
  bool header = false;
};

struct tuning_args {
  bcc::heuristic_params params;
  bool sqrt_bound = false;

  bcc::sweep_options sweep() const { return {sqrt_bound, bcc::execution::parallel}; }
};

void add_column_flags(CLI::App* cmd, column_args& a) {
  cmd->add_option("input", a.input, "CSV file")->required();
  cmd->add_option("--column", a.column, "Zero-based column index")->capture_default_str();
  cmd->add_flag("--header", a.header, "First row is a header");
}

void add_tuning_flags(CLI::App* cmd, tuning_args& t) {
  cmd->add_option("--x", t.params.x, "Sparsity threshold (> 1)")->capture_default_str();
  cmd->add_option("--y", t.params.y, "Repetition threshold (> 1)")->capture_default_str();
  cmd->add_option("--z", t.params.z, "Cluster coverage threshold in (0, 1)")
      ->capture_default_str();
  cmd->add_flag("--sqrt-bound", t.sqrt_bound, "Only consider block sizes up to sqrt(N)");
}

std::vector<std::string> load_column(const column_args& a) {
  if (a.input.empty()) throw bcc::error(bcc::errc::io_error, "empty input path");
  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw bcc::error(bcc::errc::io_error, "cannot open " + a.input);
  auto values = bcc::read_csv_column(in, a.column, a.header);
  if (values.empty()) throw bcc::error(bcc::errc::empty_column, "column has no rows");
  return values;
}

const std::map<std::string, bcc::scheme> scheme_by_name = {
    {"none", bcc::scheme::raw},          {"prefix", bcc::scheme::prefix},
    {"rle", bcc::scheme::rle},           {"sparse", bcc::scheme::sparse},
    {"cluster", bcc::scheme::cluster},   {"indirect", bcc::scheme::indirect},
    {"affine", bcc::scheme::affine},
};

int cmd_analyze(const column_args& col, const tuning_args& tune) {
  const auto values = load_column(col);
  const auto [dict, ids] = bcc::encode_column(values);
  std::cout << bcc::to_json(bcc::analyze(dict, ids, tune.params, tune.sweep()));
  return 0;
}

int cmd_compress(const column_args& col, const tuning_args& tune, const std::string& out_path,
                 const std::string& scheme_arg, const std::string& block_arg) {
  tune.params.validate();
  const auto values = load_column(col);
  const auto [dict, ids] = bcc::encode_column(values);

  bcc::scheme s{};
  std::uint64_t block_size = 0;
  if (scheme_arg == "auto") {
    const auto stats = bcc::compute_stats(ids.ids);
    const auto d = bcc::decide_scheme(stats, ids.ids, tune.params, tune.sweep());
    s = bcc::scheme_for(d.kind);
    block_size = d.block_size();
    std::cout << "decision: " << bcc::decision_name(d.kind) << "\n";
  } else {
    s = scheme_by_name.at(scheme_arg);
  }

  if (s == bcc::scheme::cluster || s == bcc::scheme::indirect) {
    if (block_arg != "auto") {
      std::size_t used = 0;
      try {
        block_size = std::stoull(block_arg, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != block_arg.size() || used == 0) {
        throw bcc::error(bcc::errc::invalid_block_size, "cannot parse block size " + block_arg);
      }
    } else if (block_size == 0) {
      block_size = s == bcc::scheme::cluster
                       ? bcc::optimal_cluster_block_size(ids.ids, tune.sweep()).block_size
                       : bcc::optimal_indirect_block_size(ids.ids, tune.sweep()).block_size;
    }
  }

  const auto encoded = bcc::encode(ids, s, block_size);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw bcc::error(bcc::errc::io_error, "cannot open " + out_path + " for writing");
  const auto bytes = bcc::write_encoded(out, dict, encoded);
  out.close();
  if (!out) throw bcc::error(bcc::errc::io_error, "failed to finish " + out_path);

  const std::uint64_t original = ids.size() * std::uint64_t{ids.id_width_bits};
  const std::uint64_t logical = bcc::encoded_size_bits(encoded);
  std::cout << "scheme: " << bcc::scheme_name(s) << "\n"
            << "block_size: " << encoded.block_size() << "\n"
            << "original_bits: " << original << "\n"
            << "encoded_bits: " << logical << "\n"
            << "ratio: " << std::fixed << std::setprecision(4)
            << static_cast<double>(logical) / static_cast<double>(original) << "\n"
            << "file_bytes: " << bytes << "\n";
  return 0;
}

int cmd_decompress(const std::string& in_path, const std::string& out_path) {
  if (in_path.empty()) throw bcc::error(bcc::errc::io_error, "empty input path");
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw bcc::error(bcc::errc::io_error, "cannot open " + in_path);
  const auto [dict, encoded] = bcc::read_encoded(in);
  const auto values = bcc::decode_column(dict, bcc::decode(encoded));
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw bcc::error(bcc::errc::io_error, "cannot open " + out_path + " for writing");
  bcc::write_csv_column(out, values);
  return 0;
}

int cmd_verify(const column_args& col, const tuning_args& tune, std::uint64_t seed) {
  const auto values = load_column(col);
  bcc::verify_options opts;
  opts.params = tune.params;
  opts.sweep = tune.sweep();
  opts.seed = seed;
#ifdef BCC_FAULT_INJECTION
  opts.inject_fault = true;
#endif
  const auto checks = bcc::verify_column(values, opts);
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(48) << c.name
              << c.detail << "\n";
  }
  std::cout << (ok ? "verify: ok" : "verify: MISMATCH") << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dictionary encoding and lightweight compression for one CSV column"};
  app.require_subcommand(1);

  column_args col;
  tuning_args tune;

  auto* analyze = app.add_subcommand("analyze", "Print column statistics and the chosen scheme");
  add_column_flags(analyze, col);
  add_tuning_flags(analyze, tune);

  std::string out_path;
  std::string scheme_arg = "auto";
  std::string block_arg = "auto";
  auto* compress = app.add_subcommand("compress", "Encode a column into a BCC1 file");
  add_column_flags(compress, col);
  add_tuning_flags(compress, tune);
  compress->add_option("--out", out_path, "Output BCC1 file")->required();
  compress->add_option("--scheme", scheme_arg, "auto|none|prefix|rle|sparse|cluster|indirect|affine")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "none", "prefix", "rle", "sparse", "cluster", "indirect",
                             "affine"}));
  compress->add_option("--block-size", block_arg, "auto or a power of two")->capture_default_str();

  std::string in_file;
  std::string csv_out;
  auto* decompress = app.add_subcommand("decompress", "Decode a BCC1 file into a one-column CSV");
  decompress->add_option("file", in_file, "BCC1 file")->required();
  decompress->add_option("--out", csv_out, "Output CSV")->required();

  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "Self-check every scheme and both optimizers");
  add_column_flags(verify, col);
  add_tuning_flags(verify, tune);
  verify->add_option("--seed", seed, "Seed for random scan intervals")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*analyze) return cmd_analyze(col, tune);
    if (*compress) return cmd_compress(col, tune, out_path, scheme_arg, block_arg);
    if (*decompress) return cmd_decompress(in_file, csv_out);
    if (*verify) return cmd_verify(col, tune, seed);
  } catch (const bcc::error& e) {
    std::cerr << "bcc: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "bcc: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

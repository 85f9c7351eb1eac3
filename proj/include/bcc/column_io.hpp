#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcc/dictionary.hpp"
#include "bcc/encodings.hpp"

namespace bcc {

// BCC1 column file, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "BCC1"
//   4       1     version (1)
//   5       1     scheme tag (0 raw .. 6 affine)
//   6       8     n, row count
//   14      4     block size (0 unless cluster/indirect)
//   18      8     dictionary entry count
//   26            dictionary: per entry a 4-byte length and the UTF-8 bytes
//                 payload: 8-byte count fields, then one LSB-first bit
//                 stream zero-padded to a byte boundary
//
// Count fields per scheme: prefix {prefix_count}; rle {runs, count_1..};
// indirect {local blocks, k_1..k_m}; others none. Bit stream per scheme:
//   raw       ids
//   prefix    prefix_id, rest
//   rle       run values
//   sparse    dominant_id, positions[n], residual
//   cluster   flags[ceil(n/b)], singles, uncompressed ids
//   indirect  flags[ceil(n/b)] (1 = local dictionary), then per block either
//             its global ids or k global ids followed by its local ids
//   affine    start_id, one step bit (0 = +1, 1 = -1)
// Global IDs use the dictionary width, local IDs max(1, ceil(log2 k)) bits.

inline constexpr std::size_t file_header_bytes = 26;
inline constexpr std::uint8_t format_version = 1;

struct column_file_header {
  std::uint8_t version = format_version;
  scheme kind = scheme::raw;
  std::uint64_t n = 0;
  std::uint32_t block_size = 0;
  std::uint64_t dict_count = 0;
};

std::vector<std::uint8_t> serialize(const dictionary& dict, const encoded_column& e);

/// Throws bad_magic, unsupported_version, truncated_payload or
/// invariant_violation, each carrying the byte offset where it was detected.
std::pair<dictionary, encoded_column> deserialize(std::span<const std::uint8_t> bytes);

/// Returns the number of bytes written; throws io_error if the sink fails.
std::uint64_t write_encoded(std::ostream& sink, const dictionary& dict, const encoded_column& e);
std::pair<dictionary, encoded_column> read_encoded(std::istream& source);

/// Bytes taken by the dictionary section.
std::uint64_t dictionary_section_bytes(const dictionary& dict);

/// Exact file size implied by the logical size accounting.
std::uint64_t expected_file_bytes(const dictionary& dict, const encoded_column& e);

/// Reads one column of an RFC 4180 CSV document. Blank lines are skipped.
/// Throws column_index_out_of_range, ragged_row, utf8_error, or
/// invalid_argument for an unterminated quote.
std::vector<std::string> read_csv_column(std::istream& source, std::size_t column_index,
                                         bool has_header);
std::vector<std::string> read_csv_column(std::string_view text, std::size_t column_index,
                                         bool has_header);

/// One value per line; fields are quoted when they are empty or contain a
/// comma, quote, CR or LF.
void write_csv_column(std::ostream& sink, std::span<const std::string> values);

}  // namespace bcc

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bcc {

enum class errc {
  empty_column,
  id_out_of_range,
  invalid_block_size,
  not_affine,
  bad_magic,
  unsupported_version,
  truncated_payload,
  invariant_violation,
  column_index_out_of_range,
  ragged_row,
  utf8_error,
  io_error,
  invalid_argument,
};

/// Stable CamelCase name of an error code, as printed by the CLI.
std::string_view errc_name(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what,
        std::optional<std::uint64_t> byte_offset = std::nullopt);

  errc code() const noexcept { return code_; }
  /// Position in the input stream where a decoding error was detected.
  std::optional<std::uint64_t> byte_offset() const noexcept { return offset_; }

 private:
  errc code_;
  std::optional<std::uint64_t> offset_;
};

}  // namespace bcc

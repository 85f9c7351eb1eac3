#include "bcc/error.hpp"

namespace bcc {

std::string_view errc_name(errc code) noexcept {
  switch (code) {
    case errc::empty_column: return "EmptyColumn";
    case errc::id_out_of_range: return "IdOutOfRange";
    case errc::invalid_block_size: return "InvalidBlockSize";
    case errc::not_affine: return "NotAffine";
    case errc::bad_magic: return "BadMagic";
    case errc::unsupported_version: return "UnsupportedVersion";
    case errc::truncated_payload: return "TruncatedPayload";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::column_index_out_of_range: return "ColumnIndexOutOfRange";
    case errc::ragged_row: return "RaggedRow";
    case errc::utf8_error: return "Utf8Error";
    case errc::io_error: return "IoError";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string format_message(errc code, const std::string& what,
                           std::optional<std::uint64_t> offset) {
  std::string msg{errc_name(code)};
  msg += ": ";
  msg += what;
  if (offset) {
    msg += " (at byte offset " + std::to_string(*offset) + ")";
  }
  return msg;
}

}  // namespace

error::error(errc code, const std::string& what,
             std::optional<std::uint64_t> byte_offset)
    : std::runtime_error(format_message(code, what, byte_offset)),
      code_(code),
      offset_(byte_offset) {}

}  // namespace bcc

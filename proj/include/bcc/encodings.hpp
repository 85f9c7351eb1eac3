#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "bcc/bit_vector.hpp"
#include "bcc/dictionary.hpp"

namespace bcc {

/// Scheme tags; the numeric values are the on-disk tags of the BCC1 format.
enum class scheme : std::uint8_t {
  raw = 0,
  prefix = 1,
  rle = 2,
  sparse = 3,
  cluster = 4,
  indirect = 5,
  affine = 6,
};

inline constexpr int scheme_count = 7;

std::string_view scheme_name(scheme s) noexcept;

struct raw_encoded {
  std::vector<value_id> ids;
  friend bool operator==(const raw_encoded&, const raw_encoded&) = default;
};

/// Literal leading run stored once with its length; the rest verbatim.
struct prefix_encoded {
  value_id prefix_id = 0;
  std::uint64_t prefix_count = 0;
  std::vector<value_id> rest;
  friend bool operator==(const prefix_encoded&, const prefix_encoded&) = default;
};

struct rle_encoded {
  run_length_view runs;
  friend bool operator==(const rle_encoded&, const rle_encoded&) = default;
};

/// The dominant ID is removed; `positions` marks where it occurred.
struct sparse_encoded {
  value_id dominant_id = 0;
  bit_vector positions;
  std::vector<value_id> residual;
  friend bool operator==(const sparse_encoded&, const sparse_encoded&) = default;
};

/// Aligned blocks of `block_size`; a full block holding a single value is
/// replaced by that value and flagged.
struct cluster_encoded {
  std::uint32_t block_size = 0;
  bit_vector flags;
  std::vector<value_id> singles;
  std::vector<value_id> uncompressed;
  std::uint64_t len = 0;
  friend bool operator==(const cluster_encoded&, const cluster_encoded&) = default;
};

struct direct_block {
  std::vector<value_id> ids;
  friend bool operator==(const direct_block&, const direct_block&) = default;
};

/// Block remapped through its own ascending dictionary of global IDs.
struct local_dict_block {
  std::vector<value_id> dictionary;
  std::vector<value_id> local_ids;
  friend bool operator==(const local_dict_block&, const local_dict_block&) = default;
};

using indirect_block = std::variant<direct_block, local_dict_block>;

struct indirect_encoded {
  std::uint32_t block_size = 0;
  std::vector<indirect_block> blocks;
  std::uint64_t len = 0;
  friend bool operator==(const indirect_encoded&, const indirect_encoded&) = default;
};

/// ids[i] = start_id + i * step, step in {+1, -1}.
struct affine_encoded {
  value_id start_id = 0;
  int step = 1;
  std::uint64_t len = 0;
  friend bool operator==(const affine_encoded&, const affine_encoded&) = default;
};

/// Alternative order matches the scheme tags.
using encoded_payload = std::variant<raw_encoded, prefix_encoded, rle_encoded, sparse_encoded,
                                     cluster_encoded, indirect_encoded, affine_encoded>;

struct encoded_column {
  encoded_payload payload;
  unsigned id_width_bits = 1;
  std::uint64_t len = 0;

  scheme kind() const noexcept { return static_cast<scheme>(payload.index()); }
  /// Block size for cluster/indirect, 0 otherwise.
  std::uint32_t block_size() const noexcept;

  friend bool operator==(const encoded_column&, const encoded_column&) = default;
};

// Encoders over a plain ID sequence. All require at least one ID.
prefix_encoded encode_prefix(std::span<const value_id> ids);
rle_encoded encode_rle(std::span<const value_id> ids);
sparse_encoded encode_sparse(std::span<const value_id> ids);
/// Throws invalid_block_size unless `block_size` is a power of two >= 2.
cluster_encoded encode_cluster(std::span<const value_id> ids, std::uint64_t block_size);
/// `global_width` is the dictionary ID width used by the per-block cost test.
indirect_encoded encode_indirect(std::span<const value_id> ids, std::uint64_t block_size,
                                 unsigned global_width);
/// Throws not_affine unless N >= 2 and the stride is +1 or -1 throughout.
affine_encoded encode_affine(std::span<const value_id> ids);

std::vector<value_id> decode_prefix(const prefix_encoded& e);
std::vector<value_id> decode_rle(const rle_encoded& e);
std::vector<value_id> decode_sparse(const sparse_encoded& e);
std::vector<value_id> decode_cluster(const cluster_encoded& e);
std::vector<value_id> decode_indirect(const indirect_encoded& e);
std::vector<value_id> decode_affine(const affine_encoded& e);

void check_block_size(std::uint64_t block_size);

/// True when a block stored through a local dictionary costs fewer bits than
/// storing its global IDs directly.
bool indirect_block_pays_off(std::uint64_t distinct, std::uint64_t block_len,
                             unsigned global_width) noexcept;

/// Encodes `ids` with scheme `s`. `block_size` is used by cluster and
/// indirect only.
encoded_column encode(const value_id_array& ids, scheme s, std::uint64_t block_size = 0);
value_id_array decode(const encoded_column& e);

/// Logical size components, in bits.
struct size_breakdown {
  std::uint64_t id_bits = 0;        // global IDs, id_width_bits each
  std::uint64_t local_id_bits = 0;  // indirect local IDs at their local width
  std::uint64_t flag_bits = 0;      // bit vectors and single-bit flags
  std::uint64_t count_bits = 0;     // 64-bit counts and lengths

  std::uint64_t total() const noexcept {
    return id_bits + local_id_bits + flag_bits + count_bits;
  }
};

inline constexpr unsigned count_field_bits = 64;

size_breakdown size_of(const encoded_column& e);
inline std::uint64_t encoded_size_bits(const encoded_column& e) { return size_of(e).total(); }

/// Ascending row positions whose ID lies in `interval`, computed on the
/// encoded form.
std::vector<std::uint64_t> scan_id_range(const encoded_column& e, const id_interval& interval);

/// Throws invariant_violation if `e` breaks a structural invariant of its
/// scheme or references an ID >= `dict_size`.
void check_invariants(const encoded_column& e, std::uint64_t dict_size);

}  // namespace bcc

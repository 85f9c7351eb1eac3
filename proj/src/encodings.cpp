#include "bcc/encodings.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "bcc/error.hpp"

namespace bcc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_non_empty(std::span<const value_id> ids) {
  if (ids.empty()) throw error(errc::empty_column, "cannot encode an empty ID array");
}

[[noreturn]] void violated(const std::string& what) {
  throw error(errc::invariant_violation, what);
}

std::uint64_t block_count(std::uint64_t n, std::uint64_t b) { return (n + b - 1) / b; }

}  // namespace

std::string_view scheme_name(scheme s) noexcept {
  switch (s) {
    case scheme::raw: return "raw";
    case scheme::prefix: return "prefix";
    case scheme::rle: return "rle";
    case scheme::sparse: return "sparse";
    case scheme::cluster: return "cluster";
    case scheme::indirect: return "indirect";
    case scheme::affine: return "affine";
  }
  return "unknown";
}

std::uint32_t encoded_column::block_size() const noexcept {
  if (auto* c = std::get_if<cluster_encoded>(&payload)) return c->block_size;
  if (auto* i = std::get_if<indirect_encoded>(&payload)) return i->block_size;
  return 0;
}

void check_block_size(std::uint64_t block_size) {
  if (block_size < 2 || !std::has_single_bit(block_size) ||
      block_size > (std::uint64_t{1} << 31)) {
    throw error(errc::invalid_block_size,
                "block size " + std::to_string(block_size) +
                    " is not a power of two in [2, 2^31]");
  }
}

prefix_encoded encode_prefix(std::span<const value_id> ids) {
  require_non_empty(ids);
  prefix_encoded e;
  e.prefix_id = ids[0];
  std::size_t i = 0;
  while (i < ids.size() && ids[i] == e.prefix_id) ++i;
  e.prefix_count = i;
  e.rest.assign(ids.begin() + static_cast<std::ptrdiff_t>(i), ids.end());
  return e;
}

std::vector<value_id> decode_prefix(const prefix_encoded& e) {
  std::vector<value_id> out(e.prefix_count, e.prefix_id);
  out.insert(out.end(), e.rest.begin(), e.rest.end());
  return out;
}

rle_encoded encode_rle(std::span<const value_id> ids) {
  require_non_empty(ids);
  return {to_runs(ids)};
}

std::vector<value_id> decode_rle(const rle_encoded& e) { return expand_runs(e.runs); }

sparse_encoded encode_sparse(std::span<const value_id> ids) {
  require_non_empty(ids);
  const value_id max_id = *std::max_element(ids.begin(), ids.end());
  std::vector<std::uint64_t> freq(std::size_t{max_id} + 1, 0);
  for (value_id id : ids) ++freq[id];
  // max_element returns the first maximum, i.e. the smallest ID on ties.
  const auto dominant =
      static_cast<value_id>(std::max_element(freq.begin(), freq.end()) - freq.begin());

  sparse_encoded e;
  e.dominant_id = dominant;
  e.positions = bit_vector(ids.size());
  e.residual.reserve(ids.size() - freq[dominant]);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == dominant) {
      e.positions.set(i, true);
    } else {
      e.residual.push_back(ids[i]);
    }
  }
  return e;
}

std::vector<value_id> decode_sparse(const sparse_encoded& e) {
  std::vector<value_id> out;
  out.reserve(e.positions.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < e.positions.size(); ++i) {
    out.push_back(e.positions[i] ? e.dominant_id : e.residual[r++]);
  }
  return out;
}

cluster_encoded encode_cluster(std::span<const value_id> ids, std::uint64_t block_size) {
  check_block_size(block_size);
  require_non_empty(ids);
  cluster_encoded e;
  e.block_size = static_cast<std::uint32_t>(block_size);
  e.len = ids.size();
  const std::uint64_t n = ids.size();
  const std::uint64_t blocks = block_count(n, block_size);
  e.flags = bit_vector(blocks);
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    const std::uint64_t begin = blk * block_size;
    const std::uint64_t end = std::min(begin + block_size, n);
    auto block = ids.subspan(begin, end - begin);
    const bool single = end - begin == block_size &&
                        std::all_of(block.begin(), block.end(),
                                    [&](value_id v) { return v == block[0]; });
    if (single) {
      e.flags.set(blk, true);
      e.singles.push_back(block[0]);
    } else {
      e.uncompressed.insert(e.uncompressed.end(), block.begin(), block.end());
    }
  }
  return e;
}

std::vector<value_id> decode_cluster(const cluster_encoded& e) {
  std::vector<value_id> out;
  out.reserve(e.len);
  std::size_t s = 0;
  std::size_t u = 0;
  for (std::size_t blk = 0; blk < e.flags.size(); ++blk) {
    const std::uint64_t begin = blk * std::uint64_t{e.block_size};
    const std::uint64_t len = std::min<std::uint64_t>(e.block_size, e.len - begin);
    if (e.flags[blk]) {
      out.insert(out.end(), len, e.singles[s++]);
    } else {
      out.insert(out.end(), e.uncompressed.begin() + static_cast<std::ptrdiff_t>(u),
                 e.uncompressed.begin() + static_cast<std::ptrdiff_t>(u + len));
      u += len;
    }
  }
  return out;
}

bool indirect_block_pays_off(std::uint64_t distinct, std::uint64_t block_len,
                             unsigned global_width) noexcept {
  const std::uint64_t indirect = distinct * global_width + block_len * id_width_for(distinct);
  const std::uint64_t direct = block_len * global_width;
  return indirect < direct;
}

indirect_encoded encode_indirect(std::span<const value_id> ids, std::uint64_t block_size,
                                 unsigned global_width) {
  check_block_size(block_size);
  require_non_empty(ids);
  indirect_encoded e;
  e.block_size = static_cast<std::uint32_t>(block_size);
  e.len = ids.size();
  const std::uint64_t n = ids.size();
  const std::uint64_t blocks = block_count(n, block_size);
  e.blocks.reserve(blocks);
  std::vector<value_id> local;
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    const std::uint64_t begin = blk * block_size;
    const std::uint64_t end = std::min(begin + block_size, n);
    auto block = ids.subspan(begin, end - begin);
    local.assign(block.begin(), block.end());
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    if (indirect_block_pays_off(local.size(), block.size(), global_width)) {
      local_dict_block lb;
      lb.dictionary = local;
      lb.local_ids.reserve(block.size());
      for (value_id v : block) {
        lb.local_ids.push_back(static_cast<value_id>(
            std::lower_bound(local.begin(), local.end(), v) - local.begin()));
      }
      e.blocks.emplace_back(std::move(lb));
    } else {
      e.blocks.emplace_back(direct_block{{block.begin(), block.end()}});
    }
  }
  return e;
}

std::vector<value_id> decode_indirect(const indirect_encoded& e) {
  std::vector<value_id> out;
  out.reserve(e.len);
  for (const auto& blk : e.blocks) {
    std::visit(overloaded{
                   [&](const direct_block& d) { out.insert(out.end(), d.ids.begin(), d.ids.end()); },
                   [&](const local_dict_block& l) {
                     for (value_id lid : l.local_ids) out.push_back(l.dictionary[lid]);
                   },
               },
               blk);
  }
  return out;
}

affine_encoded encode_affine(std::span<const value_id> ids) {
  if (ids.size() < 2) throw error(errc::not_affine, "affine encoding needs at least two IDs");
  const std::int64_t step = std::int64_t{ids[1]} - std::int64_t{ids[0]};
  if (step != 1 && step != -1) {
    throw error(errc::not_affine, "stride between rows 0 and 1 is not +1 or -1");
  }
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (std::int64_t{ids[i]} - std::int64_t{ids[i - 1]} != step) {
      throw error(errc::not_affine, "stride breaks at row " + std::to_string(i));
    }
  }
  return {ids[0], static_cast<int>(step), ids.size()};
}

std::vector<value_id> decode_affine(const affine_encoded& e) {
  std::vector<value_id> out;
  out.reserve(e.len);
  std::int64_t v = e.start_id;
  for (std::uint64_t i = 0; i < e.len; ++i, v += e.step) out.push_back(static_cast<value_id>(v));
  return out;
}

encoded_column encode(const value_id_array& ids, scheme s, std::uint64_t block_size) {
  encoded_column out;
  out.id_width_bits = ids.id_width_bits;
  out.len = ids.size();
  std::span<const value_id> v{ids.ids};
  switch (s) {
    case scheme::raw:
      require_non_empty(v);
      out.payload = raw_encoded{ids.ids};
      break;
    case scheme::prefix: out.payload = encode_prefix(v); break;
    case scheme::rle: out.payload = encode_rle(v); break;
    case scheme::sparse: out.payload = encode_sparse(v); break;
    case scheme::cluster: out.payload = encode_cluster(v, block_size); break;
    case scheme::indirect:
      out.payload = encode_indirect(v, block_size, ids.id_width_bits);
      break;
    case scheme::affine: out.payload = encode_affine(v); break;
  }
  return out;
}

value_id_array decode(const encoded_column& e) {
  value_id_array out;
  out.id_width_bits = e.id_width_bits;
  out.ids = std::visit(overloaded{
                           [](const raw_encoded& r) { return r.ids; },
                           [](const prefix_encoded& p) { return decode_prefix(p); },
                           [](const rle_encoded& r) { return decode_rle(r); },
                           [](const sparse_encoded& s) { return decode_sparse(s); },
                           [](const cluster_encoded& c) { return decode_cluster(c); },
                           [](const indirect_encoded& i) { return decode_indirect(i); },
                           [](const affine_encoded& a) { return decode_affine(a); },
                       },
                       e.payload);
  return out;
}

size_breakdown size_of(const encoded_column& e) {
  const std::uint64_t w = e.id_width_bits;
  size_breakdown s;
  std::visit(overloaded{
                 [&](const raw_encoded& r) { s.id_bits = r.ids.size() * w; },
                 [&](const prefix_encoded& p) {
                   s.count_bits = count_field_bits;
                   s.id_bits = (1 + p.rest.size()) * w;
                 },
                 [&](const rle_encoded& r) {
                   s.count_bits = count_field_bits * (1 + r.runs.size());
                   s.id_bits = r.runs.size() * w;
                 },
                 [&](const sparse_encoded& sp) {
                   s.id_bits = (1 + sp.residual.size()) * w;
                   s.flag_bits = sp.positions.size();
                 },
                 [&](const cluster_encoded& c) {
                   s.id_bits = (c.singles.size() + c.uncompressed.size()) * w;
                   s.flag_bits = c.flags.size();
                 },
                 [&](const indirect_encoded& ind) {
                   s.flag_bits = ind.blocks.size();
                   s.count_bits = count_field_bits;
                   for (const auto& blk : ind.blocks) {
                     if (auto* d = std::get_if<direct_block>(&blk)) {
                       s.id_bits += d->ids.size() * w;
                     } else {
                       const auto& l = std::get<local_dict_block>(blk);
                       s.count_bits += count_field_bits;
                       s.id_bits += l.dictionary.size() * w;
                       s.local_id_bits += l.local_ids.size() * id_width_for(l.dictionary.size());
                     }
                   }
                 },
                 [&](const affine_encoded&) {
                   s.id_bits = w;
                   s.flag_bits = 1;
                 },
             },
             e.payload);
  return s;
}

namespace {

using positions = std::vector<std::uint64_t>;

void scan_ids(std::span<const value_id> ids, std::uint64_t base, const id_interval& iv,
              positions& out) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (iv.contains(ids[i])) out.push_back(base + i);
  }
}

void emit_range(std::uint64_t begin, std::uint64_t end, positions& out) {
  for (std::uint64_t p = begin; p < end; ++p) out.push_back(p);
}

}  // namespace

std::vector<std::uint64_t> scan_id_range(const encoded_column& e, const id_interval& iv) {
  positions out;
  if (iv.empty()) return out;
  std::visit(
      overloaded{
          [&](const raw_encoded& r) { scan_ids(r.ids, 0, iv, out); },
          [&](const prefix_encoded& p) {
            if (iv.contains(p.prefix_id)) emit_range(0, p.prefix_count, out);
            scan_ids(p.rest, p.prefix_count, iv, out);
          },
          [&](const rle_encoded& r) {
            std::uint64_t pos = 0;
            for (const auto& run : r.runs) {
              if (iv.contains(run.value)) emit_range(pos, pos + run.count, out);
              pos += run.count;
            }
          },
          [&](const sparse_encoded& sp) {
            const bool take_dominant = iv.contains(sp.dominant_id);
            const auto& words = sp.positions.words();
            std::size_t r = 0;
            for (std::size_t w = 0; w < words.size(); ++w) {
              const std::uint64_t base = std::uint64_t{w} * 64;
              const std::uint64_t valid = std::min<std::uint64_t>(64, sp.positions.size() - base);
              const std::uint64_t valid_mask =
                  valid == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << valid) - 1;
              const std::uint64_t hits = words[w];
              // Without the dominant value only the residual slots need visiting.
              const std::uint64_t visit = take_dominant ? valid_mask : (~hits & valid_mask);
              for (std::uint64_t m = visit; m != 0; m &= m - 1) {
                const auto bit = static_cast<unsigned>(std::countr_zero(m));
                if ((hits >> bit) & 1u) {
                  out.push_back(base + bit);
                } else if (iv.contains(sp.residual[r++])) {
                  out.push_back(base + bit);
                }
              }
            }
          },
          [&](const cluster_encoded& c) {
            std::size_t s = 0;
            std::size_t u = 0;
            for (std::size_t blk = 0; blk < c.flags.size(); ++blk) {
              const std::uint64_t begin = blk * std::uint64_t{c.block_size};
              const std::uint64_t len = std::min<std::uint64_t>(c.block_size, c.len - begin);
              if (c.flags[blk]) {
                if (iv.contains(c.singles[s++])) emit_range(begin, begin + len, out);
              } else {
                scan_ids(std::span<const value_id>(c.uncompressed).subspan(u, len), begin, iv, out);
                u += len;
              }
            }
          },
          [&](const indirect_encoded& ind) {
            std::uint64_t begin = 0;
            for (const auto& blk : ind.blocks) {
              if (auto* d = std::get_if<direct_block>(&blk)) {
                scan_ids(d->ids, begin, iv, out);
                begin += d->ids.size();
                continue;
              }
              const auto& l = std::get<local_dict_block>(blk);
              // Ascending local dictionary: the interval maps to a contiguous
              // local ID range.
              const auto lo = static_cast<value_id>(
                  std::lower_bound(l.dictionary.begin(), l.dictionary.end(), iv.first(),
                                   [](value_id a, std::uint64_t b) { return a < b; }) -
                  l.dictionary.begin());
              const auto hi = static_cast<value_id>(
                  std::lower_bound(l.dictionary.begin(), l.dictionary.end(), iv.end(),
                                   [](value_id a, std::uint64_t b) { return a < b; }) -
                  l.dictionary.begin());
              if (lo < hi) {
                for (std::size_t i = 0; i < l.local_ids.size(); ++i) {
                  if (l.local_ids[i] >= lo && l.local_ids[i] < hi) out.push_back(begin + i);
                }
              }
              begin += l.local_ids.size();
            }
          },
          [&](const affine_encoded& a) {
            // Position i holds start + i*step; solve for the admitted i-range.
            const std::int64_t start = a.start_id;
            const std::int64_t first = static_cast<std::int64_t>(iv.first());
            const std::int64_t end = static_cast<std::int64_t>(iv.end());
            const std::int64_t n = static_cast<std::int64_t>(a.len);
            std::int64_t lo = 0;
            std::int64_t hi = 0;
            if (a.step > 0) {
              lo = first - start;
              hi = end - start;
            } else {
              lo = start - end + 1;
              hi = start - first + 1;
            }
            lo = std::clamp<std::int64_t>(lo, 0, n);
            hi = std::clamp<std::int64_t>(hi, 0, n);
            if (lo < hi) emit_range(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi), out);
          },
      },
      e.payload);
  return out;
}

void check_invariants(const encoded_column& e, std::uint64_t dict_size) {
  auto check_ids = [&](std::span<const value_id> ids, const char* what) {
    for (value_id id : ids) {
      if (id >= dict_size) {
        violated(std::string(what) + " references id " + std::to_string(id) +
                 " beyond dictionary size " + std::to_string(dict_size));
      }
    }
  };
  auto check_id = [&](value_id id, const char* what) { check_ids({&id, 1}, what); };
  const std::uint64_t n = e.len;
  if (n == 0) violated("encoded column has zero rows");
  if (e.id_width_bits != id_width_for(dict_size)) violated("id width does not match dictionary");

  std::visit(
      overloaded{
          [&](const raw_encoded& r) {
            if (r.ids.size() != n) violated("raw length mismatch");
            check_ids(r.ids, "raw ids");
          },
          [&](const prefix_encoded& p) {
            if (p.prefix_count == 0 || p.prefix_count + p.rest.size() != n) {
              violated("prefix count does not add up to N");
            }
            if (!p.rest.empty() && p.rest[0] == p.prefix_id) violated("prefix run is not maximal");
            check_id(p.prefix_id, "prefix id");
            check_ids(p.rest, "prefix rest");
          },
          [&](const rle_encoded& r) {
            std::uint64_t total = 0;
            for (std::size_t i = 0; i < r.runs.size(); ++i) {
              if (r.runs[i].count == 0) violated("zero-length run");
              if (i > 0 && r.runs[i - 1].value == r.runs[i].value) violated("runs not maximal");
              if (r.runs[i].count > n - total) violated("run counts exceed N");
              total += r.runs[i].count;
              check_id(r.runs[i].value, "run value");
            }
            if (total != n) violated("run counts do not sum to N");
          },
          [&](const sparse_encoded& sp) {
            if (sp.positions.size() != n) violated("sparse position vector length mismatch");
            if (sp.positions.popcount() + sp.residual.size() != n) {
              violated("sparse popcount plus residual differs from N");
            }
            check_id(sp.dominant_id, "dominant id");
            check_ids(sp.residual, "sparse residual");
            if (std::find(sp.residual.begin(), sp.residual.end(), sp.dominant_id) !=
                sp.residual.end()) {
              violated("sparse residual contains the dominant id");
            }
          },
          [&](const cluster_encoded& c) {
            check_block_size(c.block_size);
            if (c.len != n) violated("cluster length mismatch");
            const std::uint64_t blocks = block_count(n, c.block_size);
            if (c.flags.size() != blocks) violated("cluster flag count differs from ceil(N/b)");
            if (c.singles.size() != c.flags.popcount()) violated("cluster singles count mismatch");
            if (n % c.block_size != 0 && c.flags[blocks - 1]) {
              violated("short trailing cluster block marked compressed");
            }
            if (c.singles.size() * std::uint64_t{c.block_size} + c.uncompressed.size() != n) {
              violated("cluster payload does not cover N rows");
            }
            check_ids(c.singles, "cluster singles");
            check_ids(c.uncompressed, "cluster uncompressed ids");
          },
          [&](const indirect_encoded& ind) {
            check_block_size(ind.block_size);
            if (ind.len != n) violated("indirect length mismatch");
            const std::uint64_t blocks = block_count(n, ind.block_size);
            if (ind.blocks.size() != blocks) violated("indirect block count mismatch");
            for (std::uint64_t b = 0; b < blocks; ++b) {
              const std::uint64_t want =
                  std::min<std::uint64_t>(ind.block_size, n - b * ind.block_size);
              if (auto* d = std::get_if<direct_block>(&ind.blocks[b])) {
                if (d->ids.size() != want) violated("direct block length mismatch");
                check_ids(d->ids, "direct block");
                continue;
              }
              const auto& l = std::get<local_dict_block>(ind.blocks[b]);
              if (l.local_ids.size() != want) violated("indirect block length mismatch");
              if (l.dictionary.empty()) violated("empty local dictionary");
              for (std::size_t i = 1; i < l.dictionary.size(); ++i) {
                if (l.dictionary[i - 1] >= l.dictionary[i]) {
                  violated("local dictionary not strictly ascending");
                }
              }
              check_ids(l.dictionary, "local dictionary");
              std::vector<bool> used(l.dictionary.size(), false);
              for (value_id lid : l.local_ids) {
                if (lid >= l.dictionary.size()) violated("local id beyond local dictionary");
                used[lid] = true;
              }
              if (std::find(used.begin(), used.end(), false) != used.end()) {
                violated("local dictionary holds ids absent from its block");
              }
            }
          },
          [&](const affine_encoded& a) {
            if (a.len != n || n < 2) violated("affine length mismatch");
            if (a.step != 1 && a.step != -1) violated("affine step not +1 or -1");
            const std::int64_t last =
                std::int64_t{a.start_id} + static_cast<std::int64_t>(n - 1) * a.step;
            if (last < 0 || static_cast<std::uint64_t>(last) >= dict_size ||
                a.start_id >= dict_size) {
              violated("affine sequence leaves dictionary bounds");
            }
          },
      },
      e.payload);
}

}  // namespace bcc

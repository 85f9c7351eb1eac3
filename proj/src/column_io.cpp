#include "bcc/column_io.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <iterator>
#include <ostream>

#include "bcc/error.hpp"
#include "bit_stream.hpp"

namespace bcc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::array<std::uint8_t, 4> magic = {'B', 'C', 'C', '1'};

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, unsigned bytes) {
  for (unsigned i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

[[noreturn]] void violated(const std::string& what, std::uint64_t offset) {
  throw error(errc::invariant_violation, what, offset);
}

class byte_reader {
 public:
  explicit byte_reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t offset() const noexcept { return pos_; }
  std::uint64_t remaining() const noexcept { return bytes_.size() - pos_; }

  void need(std::uint64_t count, const char* what) const {
    if (remaining() < count) {
      throw error(errc::truncated_payload, std::string("stream ends inside ") + what, pos_);
    }
  }

  std::uint64_t le(unsigned bytes, const char* what) {
    need(bytes, what);
    std::uint64_t v = 0;
    for (unsigned i = 0; i < bytes; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += bytes;
    return v;
  }

  std::span<const std::uint8_t> take(std::uint64_t count, const char* what) {
    need(count, what);
    auto s = bytes_.subspan(pos_, count);
    pos_ += count;
    return s;
  }

  /// `count` 8-byte counts, bounds-checked before allocation.
  std::vector<std::uint64_t> counts(std::uint64_t count, const char* what) {
    if (count > remaining() / 8) {
      throw error(errc::truncated_payload, std::string("stream ends inside ") + what, pos_);
    }
    std::vector<std::uint64_t> out(count);
    for (auto& c : out) c = le(8, what);
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t pos_ = 0;
};

class payload_bits {
 public:
  payload_bits(std::span<const std::uint8_t> bytes, std::uint64_t start, unsigned width)
      : in_(bytes, start), width_(width) {}

  void need(std::uint64_t count, unsigned width, const char* what) const {
    if (width != 0 && count > in_.remaining_bits() / width) {
      throw error(errc::truncated_payload, std::string("stream ends inside ") + what,
                  in_.byte_offset());
    }
  }

  std::vector<value_id> ids(std::uint64_t count, const char* what) {
    return fields(count, width_, what);
  }

  std::vector<value_id> fields(std::uint64_t count, unsigned width, const char* what) {
    need(count, width, what);
    std::vector<value_id> out(count);
    for (auto& v : out) v = static_cast<value_id>(in_.get(width));
    return out;
  }

  value_id id(const char* what) { return ids(1, what)[0]; }

  bit_vector bits(std::uint64_t count, const char* what) {
    need(count, 1, what);
    bit_vector out(count);
    for (std::uint64_t i = 0; i < count; ++i) out.set(i, in_.get(1) != 0);
    return out;
  }

  const detail::bit_reader& reader() const noexcept { return in_; }

 private:
  detail::bit_reader in_;
  unsigned width_;
};

}  // namespace

std::uint64_t dictionary_section_bytes(const dictionary& dict) {
  std::uint64_t total = 0;
  for (const auto& v : dict.values()) total += 4 + v.size();
  return total;
}

std::uint64_t expected_file_bytes(const dictionary& dict, const encoded_column& e) {
  return file_header_bytes + dictionary_section_bytes(dict) + (encoded_size_bits(e) + 7) / 8;
}

std::vector<std::uint8_t> serialize(const dictionary& dict, const encoded_column& e) {
  if (dict.size() == 0) throw error(errc::invariant_violation, "dictionary must not be empty");
  check_invariants(e, dict.size());

  std::vector<std::uint8_t> out;
  out.insert(out.end(), magic.begin(), magic.end());
  out.push_back(format_version);
  out.push_back(static_cast<std::uint8_t>(e.kind()));
  put_le(out, e.len, 8);
  put_le(out, e.block_size(), 4);
  put_le(out, dict.size(), 8);
  for (const auto& v : dict.values()) {
    if (v.size() > 0xFFFFFFFFu) throw error(errc::invalid_argument, "dictionary value too long");
    put_le(out, v.size(), 4);
    out.insert(out.end(), v.begin(), v.end());
  }

  // Count fields.
  std::visit(overloaded{
                 [&](const prefix_encoded& p) { put_le(out, p.prefix_count, 8); },
                 [&](const rle_encoded& r) {
                   put_le(out, r.runs.size(), 8);
                   for (const auto& run : r.runs) put_le(out, run.count, 8);
                 },
                 [&](const indirect_encoded& ind) {
                   std::uint64_t local = 0;
                   for (const auto& b : ind.blocks) local += b.index() == 1;
                   put_le(out, local, 8);
                   for (const auto& b : ind.blocks) {
                     if (auto* l = std::get_if<local_dict_block>(&b)) put_le(out, l->dictionary.size(), 8);
                   }
                 },
                 [](const auto&) {},
             },
             e.payload);

  // Bit stream.
  detail::bit_writer bw(out);
  const unsigned w = e.id_width_bits;
  auto put_ids = [&](std::span<const value_id> ids) {
    for (value_id id : ids) bw.put(id, w);
  };
  auto put_bits = [&](const bit_vector& bv) {
    for (std::size_t i = 0; i < bv.size(); ++i) bw.put(bv[i], 1);
  };
  std::visit(overloaded{
                 [&](const raw_encoded& r) { put_ids(r.ids); },
                 [&](const prefix_encoded& p) {
                   bw.put(p.prefix_id, w);
                   put_ids(p.rest);
                 },
                 [&](const rle_encoded& r) {
                   for (const auto& run : r.runs) bw.put(run.value, w);
                 },
                 [&](const sparse_encoded& s) {
                   bw.put(s.dominant_id, w);
                   put_bits(s.positions);
                   put_ids(s.residual);
                 },
                 [&](const cluster_encoded& c) {
                   put_bits(c.flags);
                   put_ids(c.singles);
                   put_ids(c.uncompressed);
                 },
                 [&](const indirect_encoded& ind) {
                   for (const auto& b : ind.blocks) bw.put(b.index() == 1, 1);
                   for (const auto& b : ind.blocks) {
                     if (auto* d = std::get_if<direct_block>(&b)) {
                       put_ids(d->ids);
                     } else {
                       const auto& l = std::get<local_dict_block>(b);
                       put_ids(l.dictionary);
                       const unsigned lw = id_width_for(l.dictionary.size());
                       for (value_id lid : l.local_ids) bw.put(lid, lw);
                     }
                   }
                 },
                 [&](const affine_encoded& a) {
                   bw.put(a.start_id, w);
                   bw.put(a.step < 0 ? 1 : 0, 1);
                 },
             },
             e.payload);
  bw.finish();
  return out;
}

std::pair<dictionary, encoded_column> deserialize(std::span<const std::uint8_t> bytes) {
  byte_reader br(bytes);

  auto m = br.take(4, "magic");
  if (!std::equal(m.begin(), m.end(), magic.begin())) {
    throw error(errc::bad_magic, "expected \"BCC1\"", 0);
  }
  const auto version = br.le(1, "header");
  if (version != format_version) {
    throw error(errc::unsupported_version, "version " + std::to_string(version), 4);
  }
  const auto tag = br.le(1, "header");
  if (tag >= scheme_count) violated("unknown scheme tag " + std::to_string(tag), 5);
  const auto kind = static_cast<scheme>(tag);
  const std::uint64_t n = br.le(8, "header");
  if (n == 0) violated("row count is zero", 6);
  const std::uint64_t b = br.le(4, "header");
  const bool blocked = kind == scheme::cluster || kind == scheme::indirect;
  if (blocked) {
    try {
      check_block_size(b);
    } catch (const error& ex) {
      violated(ex.what(), 14);
    }
  } else if (b != 0) {
    violated("block size set for an unblocked scheme", 14);
  }
  const std::uint64_t dict_count = br.le(8, "header");
  if (dict_count == 0 || dict_count > 0xFFFFFFFFu) {
    violated("dictionary count " + std::to_string(dict_count) + " out of range", 18);
  }

  const std::uint64_t dict_offset = br.offset();
  std::vector<std::string> values;
  values.reserve(std::min<std::uint64_t>(dict_count, br.remaining() / 4));
  for (std::uint64_t i = 0; i < dict_count; ++i) {
    const std::uint64_t len = br.le(4, "dictionary");
    auto s = br.take(len, "dictionary");
    values.emplace_back(s.begin(), s.end());
  }
  dictionary dict;
  try {
    dict = dictionary::from_sorted(std::move(values));
  } catch (const error& ex) {
    violated(ex.what(), dict_offset);
  }

  encoded_column e;
  e.len = n;
  e.id_width_bits = dict.width_bits();
  const std::uint64_t blocks = blocked ? (n + b - 1) / b : 0;

  std::vector<std::uint64_t> counts;
  switch (kind) {
    case scheme::prefix: counts = br.counts(1, "prefix count"); break;
    case scheme::rle: {
      const std::uint64_t runs = br.le(8, "run count");
      if (runs == 0 || runs > n) violated("run count out of range", br.offset() - 8);
      counts = br.counts(runs, "run lengths");
      break;
    }
    case scheme::indirect: {
      const std::uint64_t local = br.le(8, "local block count");
      if (local > blocks) violated("more local dictionaries than blocks", br.offset() - 8);
      counts = br.counts(local, "local dictionary sizes");
      break;
    }
    default: break;
  }

  const std::uint64_t payload_offset = br.offset();
  payload_bits in(bytes, payload_offset, e.id_width_bits);
  switch (kind) {
    case scheme::raw: e.payload = raw_encoded{in.ids(n, "raw ids")}; break;
    case scheme::prefix: {
      prefix_encoded p;
      p.prefix_count = counts[0];
      if (p.prefix_count == 0 || p.prefix_count > n) {
        violated("prefix count out of range", payload_offset - 8);
      }
      p.prefix_id = in.id("prefix id");
      p.rest = in.ids(n - p.prefix_count, "prefix rest");
      e.payload = std::move(p);
      break;
    }
    case scheme::rle: {
      rle_encoded r;
      auto values_read = in.ids(counts.size(), "run values");
      for (std::size_t i = 0; i < counts.size(); ++i) r.runs.push_back({values_read[i], counts[i]});
      e.payload = std::move(r);
      break;
    }
    case scheme::sparse: {
      sparse_encoded s;
      s.dominant_id = in.id("dominant id");
      s.positions = in.bits(n, "sparse positions");
      s.residual = in.ids(n - s.positions.popcount(), "sparse residual");
      e.payload = std::move(s);
      break;
    }
    case scheme::cluster: {
      cluster_encoded c;
      c.block_size = static_cast<std::uint32_t>(b);
      c.len = n;
      c.flags = in.bits(blocks, "cluster flags");
      const std::uint64_t singles = c.flags.popcount();
      if (singles > n / b) violated("more clustered blocks than fit in N", payload_offset);
      c.singles = in.ids(singles, "cluster singles");
      c.uncompressed = in.ids(n - singles * b, "cluster ids");
      e.payload = std::move(c);
      break;
    }
    case scheme::indirect: {
      indirect_encoded ind;
      ind.block_size = static_cast<std::uint32_t>(b);
      ind.len = n;
      const bit_vector flags = in.bits(blocks, "indirect flags");
      if (flags.popcount() != counts.size()) {
        violated("local dictionary count disagrees with block flags", payload_offset);
      }
      std::size_t next = 0;
      for (std::uint64_t blk = 0; blk < blocks; ++blk) {
        const std::uint64_t len = std::min<std::uint64_t>(b, n - blk * b);
        if (!flags[blk]) {
          ind.blocks.emplace_back(direct_block{in.ids(len, "direct block")});
          continue;
        }
        const std::uint64_t k = counts[next++];
        if (k == 0 || k > len) violated("local dictionary size out of range", payload_offset);
        local_dict_block l;
        l.dictionary = in.ids(k, "local dictionary");
        l.local_ids = in.fields(len, id_width_for(k), "local ids");
        ind.blocks.emplace_back(std::move(l));
      }
      e.payload = std::move(ind);
      break;
    }
    case scheme::affine: {
      affine_encoded a;
      a.len = n;
      a.start_id = in.id("affine start");
      a.step = in.fields(1, 1, "affine step")[0] ? -1 : 1;
      e.payload = a;
      break;
    }
  }

  if (!in.reader().padding_clear()) violated("non-zero padding bits", in.reader().byte_offset());
  if (in.reader().end_byte() != bytes.size()) {
    violated("trailing bytes after payload", in.reader().end_byte());
  }
  try {
    check_invariants(e, dict.size());
  } catch (const error& ex) {
    violated(ex.what(), payload_offset);
  }
  return {std::move(dict), std::move(e)};
}

std::uint64_t write_encoded(std::ostream& sink, const dictionary& dict, const encoded_column& e) {
  const auto bytes = serialize(dict, e);
  sink.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw error(errc::io_error, "write to sink failed");
  return bytes.size();
}

std::pair<dictionary, encoded_column> read_encoded(std::istream& source) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(source),
                                  std::istreambuf_iterator<char>()};
  if (source.bad()) throw error(errc::io_error, "read from source failed");
  return deserialize(bytes);
}

}  // namespace bcc

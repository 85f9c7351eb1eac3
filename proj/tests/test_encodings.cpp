#include <doctest.h>

#include <random>

#include "bcc/encodings.hpp"
#include "bcc/error.hpp"
#include "corpus.hpp"

using namespace bcc;
using ids_t = std::vector<value_id>;

namespace {

errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  FAIL("expected bcc::error");
  return errc::io_error;
}

std::string bits(const bit_vector& bv) {
  std::string s;
  for (std::size_t i = 0; i < bv.size(); ++i) s += bv[i] ? '1' : '0';
  return s;
}

value_id_array with_width(ids_t ids, unsigned width) { return {std::move(ids), width}; }

}  // namespace

TEST_CASE("bit_vector") {
  bit_vector bv(70);
  bv.set(0, true);
  bv.set(69, true);
  CHECK(bv.popcount() == 2);
  bv.push_back(true);
  CHECK(bv.size() == 71);
  CHECK(bv[70]);
  CHECK(bv.popcount() + (bv.size() - bv.popcount()) == bv.size());
  CHECK(bit_vector(65, true).popcount() == 65);
}

TEST_CASE("prefix encoding") {
  auto e = encode_prefix(ids_t{4, 4, 4, 7, 7, 2});
  CHECK(e.prefix_id == 4);
  CHECK(e.prefix_count == 3);
  CHECK(e.rest == ids_t{7, 7, 2});
  CHECK(decode_prefix(e) == ids_t{4, 4, 4, 7, 7, 2});

  auto one = encode_prefix(ids_t{9});
  CHECK((one.prefix_id == 9 && one.prefix_count == 1 && one.rest.empty()));

  auto whole = encode_prefix(ids_t{5, 5, 5, 5});
  CHECK((whole.prefix_id == 5 && whole.prefix_count == 4 && whole.rest.empty()));

  CHECK(code_of([] { encode_prefix(ids_t{}); }) == errc::empty_column);
}

TEST_CASE("run-length encoding") {
  auto e = encode_rle(ids_t{0, 0, 1, 2, 2, 2});
  CHECK(e.runs == run_length_view{{0, 2}, {1, 1}, {2, 3}});
  CHECK(decode_rle(e) == ids_t{0, 0, 1, 2, 2, 2});
  CHECK(encode_rle(ids_t(1000, 3)).runs.size() == 1);
}

TEST_CASE("sparse encoding") {
  auto e = encode_sparse(ids_t{9, 9, 3, 9, 5});
  CHECK(e.dominant_id == 9);
  CHECK(bits(e.positions) == "11010");
  CHECK(e.residual == ids_t{3, 5});
  CHECK(decode_sparse(e) == ids_t{9, 9, 3, 9, 5});

  auto c = encode_sparse(ids_t(10, 4));
  CHECK(c.residual.empty());
  CHECK(c.positions.popcount() == 10);

  // Tie goes to the smallest ID.
  CHECK(encode_sparse(ids_t{6, 2, 6, 2}).dominant_id == 2);
}

TEST_CASE("cluster encoding") {
  auto e = encode_cluster(ids_t{1, 1, 2, 3, 3, 3}, 2);
  CHECK(bits(e.flags) == "101");
  CHECK(e.singles == ids_t{1, 3});
  CHECK(e.uncompressed == ids_t{2, 3});
  CHECK(decode_cluster(e) == ids_t{1, 1, 2, 3, 3, 3});

  auto c = encode_cluster(ids_t(8, 6), 4);
  CHECK(bits(c.flags) == "11");
  CHECK(c.singles == ids_t{6, 6});
  CHECK(c.uncompressed.empty());

  ids_t distinct{0, 1, 2, 3, 4, 5, 6};
  auto d = encode_cluster(distinct, 2);
  CHECK(bits(d.flags) == "0000");
  CHECK(d.uncompressed == distinct);

  // Short trailing block stays uncompressed even when single-valued.
  auto t = encode_cluster(ids_t{1, 1, 1, 1, 2, 2}, 4);
  CHECK(bits(t.flags) == "10");
  CHECK(t.uncompressed == ids_t{2, 2});

  for (std::uint64_t bad : {0ull, 1ull, 3ull, 6ull, 1000ull}) {
    CHECK(code_of([&] { encode_cluster(ids_t{1, 2}, bad); }) == errc::invalid_block_size);
    CHECK(code_of([&] { encode_indirect(ids_t{1, 2}, bad, 2); }) == errc::invalid_block_size);
  }
}

TEST_CASE("indirect encoding cost model") {
  // 2*4 + 4*1 = 12 < 16.
  auto few = encode_indirect(ids_t{0, 0, 1, 1}, 4, 4);
  REQUIRE(few.blocks.size() == 1);
  const auto* l = std::get_if<local_dict_block>(&few.blocks[0]);
  REQUIRE(l);
  CHECK(l->dictionary == ids_t{0, 1});
  CHECK(l->local_ids == ids_t{0, 0, 1, 1});
  auto col = encode(with_width({0, 0, 1, 1}, 4), scheme::indirect, 4);
  CHECK(size_of(col).id_bits == 2 * 4);
  CHECK(size_of(col).local_id_bits == 4 * 1);

  // 4*4 + 4*2 = 24 > 16.
  auto many = encode_indirect(ids_t{5, 6, 7, 8}, 4, 4);
  CHECK(std::holds_alternative<direct_block>(many.blocks[0]));
  CHECK(decode_indirect(many) == ids_t{5, 6, 7, 8});

  CHECK(indirect_block_pays_off(2, 4, 4));
  CHECK_FALSE(indirect_block_pays_off(4, 4, 4));
}

TEST_CASE("affine encoding") {
  auto up = encode_affine(ids_t{3, 4, 5, 6});
  CHECK((up.start_id == 3 && up.step == 1 && up.len == 4));
  auto down = encode_affine(ids_t{9, 8, 7});
  CHECK((down.start_id == 9 && down.step == -1 && down.len == 3));
  CHECK(decode_affine(down) == ids_t{9, 8, 7});
  CHECK(code_of([] { encode_affine(ids_t{1, 2, 4}); }) == errc::not_affine);
  CHECK(code_of([] { encode_affine(ids_t{1}); }) == errc::not_affine);
  CHECK(code_of([] { encode_affine(ids_t{2, 2}); }) == errc::not_affine);
}

TEST_CASE("encoded_size_bits") {
  auto raw = encode(with_width({0, 1, 2, 3, 0, 1}, 2), scheme::raw);
  CHECK(encoded_size_bits(raw) == 12);

  auto cl = encode(with_width({1, 1, 2, 3, 3, 3}, 2), scheme::cluster, 2);
  CHECK(size_of(cl).id_bits == 8);
  CHECK(size_of(cl).flag_bits == 3);
  CHECK(encoded_size_bits(cl) == 11);

  auto whole = encode(with_width(ids_t(1024, 5), 3), scheme::cluster, 1024);
  CHECK(size_of(whole).id_bits == 3);
  CHECK(size_of(whole).flag_bits == 1);

  auto rle = encode(with_width({0, 0, 1, 2, 2, 2}, 2), scheme::rle);
  CHECK(encoded_size_bits(rle) == 64 + 3 * 64 + 3 * 2);
  auto pre = encode(with_width({4, 4, 4, 7, 7, 2}, 3), scheme::prefix);
  CHECK(encoded_size_bits(pre) == 64 + 4 * 3);
  auto sp = encode(with_width({9, 9, 3, 9, 5}, 4), scheme::sparse);
  CHECK(encoded_size_bits(sp) == 3 * 4 + 5);
  auto af = encode(with_width({3, 4, 5, 6}, 3), scheme::affine);
  CHECK(encoded_size_bits(af) == 3 + 1);
}

TEST_CASE("round-trip and invariants over generated arrays") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(1, 700);
  std::uniform_int_distribution<int> log_b(1, 10);
  for (auto f : testing::all_families) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto ids = testing::compact(testing::generate(f, len(rng), rng));
      const std::uint64_t b = std::uint64_t{1} << log_b(rng);
      const auto dict_size = testing::dict_size_of(ids);
      for (int t = 0; t < scheme_count; ++t) {
        const auto s = static_cast<scheme>(t);
        if (s == scheme::affine && !(f == testing::family::sequential && ids.size() >= 2)) continue;
        const auto e = encode(ids, s, b);
        REQUIRE(decode(e) == ids);
        CHECK_NOTHROW(check_invariants(e, dict_size));
      }

      const auto sp = encode_sparse(ids.ids);
      CHECK(sp.positions.popcount() ==
            std::size_t(std::count(ids.ids.begin(), ids.ids.end(), sp.dominant_id)));

      const auto ind = encode_indirect(ids.ids, b, ids.id_width_bits);
      for (const auto& blk : ind.blocks) {
        if (auto* l = std::get_if<local_dict_block>(&blk)) {
          CHECK(indirect_block_pays_off(l->dictionary.size(), l->local_ids.size(),
                                        ids.id_width_bits));
        }
      }

      const auto cl = encode(ids, scheme::cluster, b);
      const auto& c = std::get<cluster_encoded>(cl.payload);
      const std::uint64_t s = c.singles.size();
      const std::uint64_t n = ids.size();
      CHECK(size_of(cl).id_bits == (n - s * (b - 1)) * ids.id_width_bits);
      CHECK(size_of(cl).flag_bits == (n + b - 1) / b);
      CHECK(encoded_size_bits(encode(ids, scheme::raw)) == n * ids.id_width_bits);
    }
  }
}

TEST_CASE("scan_id_range matches decode-then-filter") {
  // Example: runs (0,2),(1,1),(2,3), IDs {1,2}.
  auto rle = encode(with_width({0, 0, 1, 2, 2, 2}, 2), scheme::rle);
  CHECK(scan_id_range(rle, id_interval::closed(1, 2)) == std::vector<std::uint64_t>{2, 3, 4, 5});
  CHECK(scan_id_range(rle, id_interval::none()).empty());
  CHECK(scan_id_range(rle, id_interval::all()) ==
        std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5});

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(1, 300);
  for (auto f : testing::all_families) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto ids = testing::compact(testing::generate(f, len(rng), rng));
      const auto dict_size = testing::dict_size_of(ids);
      std::uniform_int_distribution<std::uint64_t> pick(0, dict_size);
      std::bernoulli_distribution coin(0.5);
      for (int t = 0; t < scheme_count; ++t) {
        const auto s = static_cast<scheme>(t);
        if (s == scheme::affine && !(f == testing::family::sequential && ids.size() >= 2)) continue;
        const auto e = encode(ids, s, 8);
        for (int k = 0; k < 10; ++k) {
          auto bound = [&]() -> std::optional<id_bound> {
            auto v = pick(rng);
            if (v == dict_size) return std::nullopt;
            return id_bound{static_cast<value_id>(v), coin(rng)};
          };
          const auto iv = id_interval::between(bound(), bound());
          std::vector<std::uint64_t> want;
          for (std::size_t i = 0; i < ids.size(); ++i) {
            if (iv.contains(ids.ids[i])) want.push_back(i);
          }
          REQUIRE(scan_id_range(e, iv) == want);
        }
      }
    }
  }
}

TEST_CASE("check_invariants flags broken structures") {
  auto e = encode(with_width({1, 1, 2}, 2), scheme::rle);
  std::get<rle_encoded>(e.payload).runs.push_back({2, 1});
  e.len = 4;
  CHECK(code_of([&] { check_invariants(e, 3); }) == errc::invariant_violation);

  auto raw = encode(with_width({0, 2}, 2), scheme::raw);
  CHECK(code_of([&] { check_invariants(raw, 2); }) == errc::invariant_violation);
}

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bcc/block_optimizer.hpp"
#include "bcc/column_io.hpp"

namespace fs = std::filesystem;

namespace {

struct result {
  int code = -1;
  std::string out;
  std::string err;
};

class workspace {
 public:
  workspace() : dir_(fs::temp_directory_path() / ("bcc_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~workspace() { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  result run(const std::string& binary, const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string err = path("stderr.txt");
    const std::string cmd = "'" + binary + "' " + args + " >'" + out + "' 2>'" + err + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read("stdout.txt"), read("stderr.txt")};
  }

  result bcc(const std::string& args) const { return run(BCC_CLI_PATH, args); }

 private:
  fs::path dir_;
};

std::string lines(const std::vector<std::string>& values) {
  std::string s;
  for (const auto& v : values) s += v + "\n";
  return s;
}

std::vector<std::string> column_of(const std::string& csv) {
  return bcc::read_csv_column(std::string_view{csv}, 0, false);
}

}  // namespace

TEST_CASE("analyze") {
  workspace ws;
  auto sorted = ws.write("sorted.csv", lines({"a", "a", "b", "c", "c", "c"}));
  auto r = ws.bcc("analyze " + sorted);
  CHECK(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["decision"]["scheme"] == "Rle");
  CHECK(doc["parameters"]["x"] == 10.0);

  std::vector<std::string> seq;
  for (int i = 100; i < 160; ++i) seq.push_back(std::to_string(i));
  auto sequential = ws.write("seq.csv", "id\n" + lines(seq));
  r = ws.bcc("analyze " + sequential + " --header");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["decision"]["scheme"] == "AffineRle");

  CHECK(ws.bcc("analyze " + ws.path("missing.csv")).code == 1);
  CHECK(ws.bcc("analyze " + sorted + " --column 3").code == 1);
  CHECK(ws.bcc("analyze " + sorted + " --x 0.5").code == 1);
  CHECK(ws.bcc("analyze " + sorted + " --sqrt-bound").code == 0);
}

TEST_CASE("compress and decompress every scheme") {
  workspace ws;
  std::vector<std::string> values;
  for (int i = 0; i < 300; ++i) values.push_back("v" + std::to_string((i / 7) % 5));
  values.push_back("has,comma");
  values.push_back("");
  auto input = ws.write("in.csv", "col,other\n" + [&] {
    std::string s;
    for (const auto& v : values) {
      s += (v.empty() || v.find(',') != std::string::npos ? "\"" + v + "\"" : v) + ",x\n";
    }
    return s;
  }());

  for (std::string scheme : {"auto", "none", "prefix", "rle", "sparse", "cluster", "indirect"}) {
    CAPTURE(scheme);
    auto r = ws.bcc("compress " + input + " --header --scheme " + scheme + " --out " +
                    ws.path("c.bcc"));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("encoded_bits:") != std::string::npos);
    r = ws.bcc("decompress " + ws.path("c.bcc") + " --out " + ws.path("out.csv"));
    REQUIRE(r.code == 0);
    CHECK(column_of(ws.read("out.csv")) == values);
  }

  auto seq = ws.write("seq.csv", lines({"3", "4", "5", "6"}));
  CHECK(ws.bcc("compress " + seq + " --scheme affine --out " + ws.path("a.bcc")).code == 0);
  CHECK(ws.bcc("decompress " + ws.path("a.bcc") + " --out " + ws.path("a.csv")).code == 0);
  CHECK(column_of(ws.read("a.csv")) == std::vector<std::string>{"3", "4", "5", "6"});

  // Values 1,2,4 would dictionary-encode to IDs 0,1,2; 1,3,2 gives IDs 0,2,1.
  auto broken = ws.write("broken.csv", lines({"1", "3", "2"}));
  auto r = ws.bcc("compress " + broken + " --scheme affine --out " + ws.path("b.bcc"));
  CHECK(r.code == 1);
  CHECK(r.err.find("NotAffine") != std::string::npos);

  r = ws.bcc("compress " + broken + " --scheme cluster --block-size 3 --out " + ws.path("b.bcc"));
  CHECK(r.code == 1);
  CHECK(r.err.find("InvalidBlockSize") != std::string::npos);
}

TEST_CASE("auto block size is the optimizer's choice") {
  workspace ws;
  std::vector<std::string> values;
  for (int i = 0; i < 2000; ++i) values.push_back(std::to_string(10 + (i / 37) % 4));
  auto input = ws.write("runs.csv", lines(values));
  auto r = ws.bcc("compress " + input + " --scheme cluster --block-size auto --out " +
                  ws.path("c.bcc"));
  REQUIRE(r.code == 0);

  const std::string file = ws.read("c.bcc");
  std::uint32_t header_b = 0;
  for (int i = 0; i < 4; ++i) header_b |= std::uint32_t(std::uint8_t(file[14 + i])) << (8 * i);

  auto a = ws.bcc("analyze " + input);
  REQUIRE(a.code == 0);
  auto doc = nlohmann::json::parse(a.out);
  CHECK(header_b == doc["block_sizes"]["cluster"].get<std::uint32_t>());

  std::uint64_t best_f = 0, best_b = 0;
  for (auto& c : doc["cluster_trace"]) {
    if (best_b == 0 || c["F"].get<std::uint64_t>() > best_f) {
      best_f = c["F"];
      best_b = c["b"];
    }
  }
  CHECK(header_b == best_b);

  r = ws.bcc("compress " + input + " --scheme indirect --out " + ws.path("i.bcc"));
  REQUIRE(r.code == 0);
  const std::string ifile = ws.read("i.bcc");
  header_b = 0;
  for (int i = 0; i < 4; ++i) header_b |= std::uint32_t(std::uint8_t(ifile[14 + i])) << (8 * i);
  CHECK(header_b == doc["block_sizes"]["indirect"].get<std::uint32_t>());
}

TEST_CASE("decompress errors") {
  workspace ws;
  auto input = ws.write("in.csv", lines({"a", "b", "a", "a"}));
  REQUIRE(ws.bcc("compress " + input + " --scheme none --out " + ws.path("c.bcc")).code == 0);
  std::string bytes = ws.read("c.bcc");
  ws.write("t.bcc", bytes.substr(0, bytes.size() - 1));
  auto r = ws.bcc("decompress " + ws.path("t.bcc") + " --out " + ws.path("o.csv"));
  CHECK(r.code == 1);
  CHECK(r.err.find("TruncatedPayload") != std::string::npos);

  ws.write("m.bcc", "XCC1" + bytes.substr(4));
  r = ws.bcc("decompress " + ws.path("m.bcc") + " --out " + ws.path("o.csv"));
  CHECK(r.code == 1);
  CHECK(r.err.find("BadMagic") != std::string::npos);

  CHECK(ws.bcc("decompress '' --out " + ws.path("o.csv")).code == 1);
}

TEST_CASE("verify exit codes") {
  workspace ws;
  std::vector<std::string> values;
  for (int i = 0; i < 500; ++i) values.push_back("k" + std::to_string((i * i) % 13));
  auto input = ws.write("in.csv", lines(values));
  auto r = ws.bcc("verify " + input + " --seed 5");
  CHECK(r.code == 0);
  CHECK(r.out.find("S_DP = S_oracle") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);

  r = ws.run(BCC_FAULTY_CLI_PATH, "verify " + input);
  CHECK(r.code == 2);
  CHECK(r.out.find("FAIL") != std::string::npos);

  CHECK(ws.bcc("verify " + ws.path("nope.csv")).code == 1);
}

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "motifclust/cli.hpp"
#include "motifclust/motif_io.hpp"
#include "motifclust/trace_io.hpp"
#include "synthetic.hpp"
#include <json.hpp>

namespace fs = std::filesystem;
using namespace motifclust;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("motifclust_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string collection(std::uint64_t seed, const std::string& prefix) {
  std::mt19937_64 gen(seed);
  std::vector<MotifRecord> records;
  const auto a = synthetic::strong_profile("CACGTGAC"), b = synthetic::strong_profile("TTGGCCAA");
  for (int k = 0; k < 6; ++k) {
    records.push_back({prefix + std::to_string(k), "m" + std::to_string(k), k < 3 ? "bHLH" : "CCAAT", "",
                       synthetic::embed(k < 3 ? a : b, 10, k % 3, 20, gen).matrix});
  }
  records.push_back({prefix + "short", "", "", "", CountMatrix(std::vector<Column>(4, Column{5, 5, 5, 5}))});
  return write_jaspar(records);
}

}  // namespace

TEST_CASE("cluster writes a complete run that summarize reproduces") {
  TempDir tmp;
  const auto input = tmp.path() / "motifs.jaspar";
  spit(input, collection(1, "A"));
  const auto run = tmp.path() / "run";
  auto r = run_cli({"cluster", "-i", input.string(), "--iters", "60", "--chains", "2", "--seed", "5", "--out",
                    run.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  for (const char* name : {"manifest.json", "motifs.json", "chain_0.trace", "chain_1.trace", "pairwise.tsv",
                           "pairwise_chain_0.tsv", "tree.nwk", "best_partition.tsv", "best_partition.json",
                           "super_matrices.jaspar", "super_matrices_ic.tsv", "width_intervals.tsv",
                           "diagnostics.tsv"}) {
    CHECK_MESSAGE(fs::exists(run / name), name);
  }
  const auto manifest = nlohmann::json::parse(slurp(run / "manifest.json"));
  CHECK(manifest["status"] == "complete");
  CHECK(manifest["records_parsed"] == 7);
  CHECK(manifest["records_retained"] == 6);
  CHECK(manifest["dropped"].size() == 1);
  CHECK(manifest["chains"].size() == 2);
  CHECK(manifest["chains"][0]["sha256"] == cli::sha256_hex(slurp(run / "chain_0.trace")));
  CHECK(manifest["chains"][0]["seed"] != manifest["chains"][1]["seed"]);
  CHECK(manifest["inputs"][0]["sha256"] == cli::sha256_hex(slurp(input)));
  CHECK(slurp(run / "diagnostics.tsv").find("max_pairwise_difference") != std::string::npos);

  const auto pairwise = slurp(run / "pairwise.tsv");
  const auto report = slurp(run / "best_partition.tsv");
  const auto again = tmp.path() / "again";
  r = run_cli({"summarize", "--run", run.string(), "--out", again.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(slurp(again / "pairwise.tsv") == pairwise);
  CHECK(slurp(again / "best_partition.tsv") == report);
  CHECK(slurp(again / "tree.nwk") == slurp(run / "tree.nwk"));

  // the same seed reproduces every chain byte for byte
  const auto rerun = tmp.path() / "rerun";
  r = run_cli({"cluster", "-i", input.string(), "--iters", "60", "--chains", "2", "--seed", "5", "--out",
               rerun.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(rerun / "chain_1.trace") == slurp(run / "chain_1.trace"));

  // tampered inputs and traces are refused
  fs::remove(run / "chain_1.trace");
  CHECK(run_cli({"summarize", "--run", run.string(), "--out", again.string()}).code == cli::kRuntimeError);
  fs::copy_file(rerun / "chain_1.trace", run / "chain_1.trace");
  CHECK(run_cli({"summarize", "--run", run.string(), "--out", again.string()}).code == 0);
  spit(input, collection(2, "A"));
  r = run_cli({"summarize", "--run", run.string(), "--out", again.string()});
  CHECK(r.code == cli::kRuntimeError);
  CHECK(r.err.find("digest") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  const auto input = tmp.path() / "m.jaspar";
  spit(input, collection(3, "B"));
  const auto out = (tmp.path() / "o").string();
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"bogus"}).code == cli::kUsage);
  CHECK(run_cli({"cluster", "-i", input.string(), "--iters", "0", "--out", out}).code == cli::kUsage);
  CHECK(run_cli({"cluster", "-i", input.string(), "--chains", "0", "--out", out}).code == cli::kUsage);
  CHECK(run_cli({"cluster", "-i", input.string(), "--level", "1", "--out", out}).code == cli::kUsage);
  CHECK(run_cli({"cluster", "-i", input.string(), "--theta0", "0.5,0.5", "--out", out}).code == cli::kUsage);
  CHECK(run_cli({"cluster", "-i", (tmp.path() / "nope").string(), "--out", out}).code == cli::kUsage);
  CHECK(run_cli({"prior-sim", "--replicates", "0", "--out", out}).code == cli::kUsage);

  const auto broken = tmp.path() / "broken.jaspar";
  spit(broken, ">X\nA [1 2]\nC [1]\nG [1 1]\nT [1 1]\n");
  auto r = run_cli({"cluster", "-i", broken.string(), "--out", out});
  CHECK(r.code == cli::kParseError);
  CHECK(r.err.find("line") != std::string::npos);

  // the same id in two files
  const auto twin = tmp.path() / "twin.jaspar";
  spit(twin, collection(4, "B"));
  CHECK(run_cli({"cluster", "-i", input.string(), "-i", twin.string(), "--out", out}).code == cli::kParseError);

  CHECK(run_cli({"summarize", "--run", (tmp.path() / "empty").string()}).code == cli::kRuntimeError);
  CHECK(run_cli({"export-trace", "--trace", (tmp.path() / "none").string()}).code == cli::kRuntimeError);
}

TEST_CASE("prior-sim and export-trace") {
  TempDir tmp;
  const auto out = tmp.path() / "ps";
  auto r = run_cli({"prior-sim", "--n", "20", "--replicates", "30", "--out", out.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  for (const char* name :
       {"prior_sim_dp.tsv", "prior_sim_dp_replicates.tsv", "prior_sim_uniform.tsv", "prior_sim_uniform_replicates.tsv"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  const auto replicates = slurp(out / "prior_sim_dp_replicates.tsv");
  CHECK(std::count(replicates.begin(), replicates.end(), '\n') == 31);

  const auto input = tmp.path() / "m.jaspar";
  spit(input, collection(6, "C"));
  const auto run = tmp.path() / "run";
  r = run_cli({"cluster", "-i", input.string(), "--iters", "20", "--trace-format", "binary", "--out", run.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  REQUIRE(fs::exists(run / "chain_0.bin"));
  const auto text = tmp.path() / "t.trace";
  CHECK(run_cli({"export-trace", "--trace", (run / "chain_0.bin").string(), "--out", text.string()}).code == 0);
  CHECK(decode_trace(slurp(text)) == decode_trace(slurp(run / "chain_0.bin")));
  const auto bin = tmp.path() / "t.bin";
  CHECK(run_cli({"export-trace", "--trace", text.string(), "--format", "binary", "--out", bin.string()}).code == 0);
  CHECK(slurp(bin) == slurp(run / "chain_0.bin"));
}

TEST_CASE("output directory comes from the environment") {
  TempDir tmp;
  const auto input = tmp.path() / "m.jaspar";
  spit(input, collection(7, "D"));
  const auto env_dir = tmp.path() / "from_env";
  ::setenv(cli::kOutputEnv, env_dir.string().c_str(), 1);
  const auto r = run_cli({"cluster", "-i", input.string(), "--iters", "10"});
  ::unsetenv(cli::kOutputEnv);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(fs::exists(env_dir / "manifest.json"));
}

#ifdef MOTIFCLUST_TOOL_PATH
TEST_CASE("the installed binary reports its version") {
  TempDir tmp;
  const auto log = tmp.path() / "version.txt";
  const auto cmd = std::string("\"") + MOTIFCLUST_TOOL_PATH + "\" --version > \"" + log.string() + "\"";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(slurp(log).find('.') != std::string::npos);
}
#endif

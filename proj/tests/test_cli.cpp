#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "avtp_ids/feature_gen.hpp"
#include "avtp_ids/pcap_store.hpp"
#include "test_util.hpp"

#ifndef AVTP_IDS_CLI
#error "AVTP_IDS_CLI must name the CLI binary"
#endif

using namespace avtp_ids;

namespace {

int run(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string(AVTP_IDS_CLI) + " " + args + " > '" + log.string() + "' 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("synth is deterministic and writes a sidecar") {
  test_util::TempDir d;
  REQUIRE(run("--seed 3 synth --packets 500 -o " + q(d / "a.pcap"), d / "log") == 0);
  REQUIRE(run("--seed 3 synth --packets 500 -o " + q(d / "b.pcap"), d / "log") == 0);
  REQUIRE(run("--seed 4 synth --packets 500 -o " + q(d / "c.pcap"), d / "log") == 0);
  CHECK(test_util::slurp(d / "a.pcap") == test_util::slurp(d / "b.pcap"));
  CHECK(test_util::slurp(d / "a.pcap") != test_util::slurp(d / "c.pcap"));
  CHECK(read_pcap(d / "a.pcap").records.size() == 500);
  CHECK(read_labels(sidecar_path(d / "a.pcap")).entries.size() == 500);
}

TEST_CASE("end-to-end pipeline through the CLI") {
  test_util::TempDir d;
  REQUIRE(run("--quiet --seed 1 synth --packets 3000 -o " + q(d / "b.pcap"), d / "log") == 0);
  REQUIRE(run("--quiet --seed 1 attack -i " + q(d / "b.pcap") + " -o " + q(d / "a.pcap") +
                  " --warmup-us 1000000 --repeats 7",
              d / "log") == 0);
  const auto labels = read_labels(sidecar_path(d / "a.pcap"));
  std::size_t inj = 0;
  for (const auto& e : labels.entries) inj += e.label == Label::injected;
  CHECK(inj == 7 * 36);

  REQUIRE(run("--quiet featurize -i " + q(d / "a.pcap") + " -w 4 -o " + q(d / "f.bin"), d / "log") == 0);
  const auto ds = read_dataset(d / "f.bin");
  CHECK(ds.size() == 3000 + inj - 4);

  REQUIRE(run("--quiet --seed 2 train -d " + q(d / "f.bin") + " -w 4 --epochs 1 --max-samples 300 -o " +
                  q(d / "m.bin") + " --history " + q(d / "h.csv"),
              d / "log") == 0);
  CHECK(std::filesystem::exists(d / "m.bin"));
  CHECK(test_util::slurp(d / "h.csv").rfind("epoch,", 0) == 0);

  REQUIRE(run("--quiet eval -m " + q(d / "m.bin") + " -d " + q(d / "f.bin") + " --json " +
                  q(d / "r.json") + " --csv " + q(d / "r.csv") + " --roc " + q(d / "roc.csv"),
              d / "log") == 0);
  CHECK(test_util::slurp(d / "r.json").find("\"confusion\"") != std::string::npos);
  CHECK(test_util::slurp(d / "roc.csv").rfind("fpr,tpr\n", 0) == 0);

  REQUIRE(run("--quiet detect -i " + q(d / "a.pcap") + " -m " + q(d / "m.bin") + " -o " +
                  q(d / "v.csv"),
              d / "log") == 0);
  std::ifstream v(d / "v.csv");
  std::string line;
  std::getline(v, line);
  CHECK(line == "record_index,timestamp_us,score,predicted,true,latency_us");
  std::size_t rows = 0;
  while (std::getline(v, line)) ++rows;
  CHECK(rows == 3000 + inj);

  REQUIRE(run("bench -m " + q(d / "m.bin") + " -n 100 --json " + q(d / "b.json"), d / "log") == 0);
  const auto bench = test_util::slurp(d / "b.json");
  CHECK(bench.find("\"realtime_ok\"") != std::string::npos);
  CHECK(bench.find("\"mean_us\"") != std::string::npos);
}

TEST_CASE("errors exit non-zero with a message") {
  test_util::TempDir d;
  CHECK(run("featurize -i " + q(d / "missing.pcap") + " -w 4 -o " + q(d / "f.bin"), d / "log") != 0);
  std::ofstream(d / "junk.pcap") << "not a capture file at all";
  CHECK(run("featurize -i " + q(d / "junk.pcap") + " -w 4 -o " + q(d / "f.bin"), d / "log") == 1);
  CHECK(test_util::slurp(d / "log").find("[error]") != std::string::npos);
  CHECK(run("featurize -i x -w 5 -o y", d / "log") != 0);
  CHECK(run("bench -n 10", d / "log") != 0);
  CHECK(run("nosuchcommand", d / "log") != 0);
}

TEST_CASE("log level follows AVTP_IDS_LOG and --quiet") {
  test_util::TempDir d;
  REQUIRE(run("synth --packets 100 -o " + q(d / "a.pcap"), d / "info") == 0);
  REQUIRE(run("--quiet synth --packets 100 -o " + q(d / "a.pcap"), d / "quiet") == 0);
  CHECK_FALSE(test_util::slurp(d / "info").empty());
  CHECK(test_util::slurp(d / "quiet").empty());
  setenv("AVTP_IDS_LOG", "error", 1);
  REQUIRE(run("synth --packets 100 -o " + q(d / "a.pcap"), d / "env") == 0);
  unsetenv("AVTP_IDS_LOG");
  CHECK(test_util::slurp(d / "env").empty());
}

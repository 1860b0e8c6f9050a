#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

#include "avtp_ids/error.hpp"
#include "avtp_ids/pcap_store.hpp"
#include "avtp_ids/traffic_lab.hpp"
#include "test_util.hpp"

using namespace avtp_ids;
using test_util::TempDir;

namespace {

CaptureFile random_capture(std::mt19937_64& rng, std::size_t n) {
  CaptureFile cap;
  std::uint64_t t = 1'600'000'000'000'000ULL;
  for (std::size_t k = 0; k < n; ++k) {
    t += rng() % 5000;
    cap.records.push_back({t, test_util::random_bytes(rng, 14 + rng() % 1500), Label::unlabeled});
  }
  return cap;
}

void put32(std::string& s, std::uint32_t v, bool big) {
  for (int k = 0; k < 4; ++k) s.push_back(static_cast<char>((v >> (big ? 8 * (3 - k) : 8 * k)) & 0xFF));
}

void put16(std::string& s, std::uint16_t v, bool big) {
  s.push_back(static_cast<char>(big ? v >> 8 : v & 0xFF));
  s.push_back(static_cast<char>(big ? v & 0xFF : v >> 8));
}

// Hand-built file with explicit byte order and timestamp resolution.
std::string handmade_pcap(const CaptureFile& cap, bool big, bool nanosecond,
                          std::uint32_t linktype = 1) {
  std::string s;
  put32(s, nanosecond ? 0xA1B23C4D : 0xA1B2C3D4, big);
  put16(s, 2, big);
  put16(s, 4, big);
  put32(s, 0, big);
  put32(s, 0, big);
  put32(s, 65535, big);
  put32(s, linktype, big);
  for (const auto& r : cap.records) {
    put32(s, static_cast<std::uint32_t>(r.timestamp_us / 1'000'000), big);
    const auto frac = static_cast<std::uint32_t>(r.timestamp_us % 1'000'000);
    put32(s, nanosecond ? frac * 1000 + 999 : frac, big);
    put32(s, static_cast<std::uint32_t>(r.bytes.size()), big);
    put32(s, static_cast<std::uint32_t>(r.bytes.size()), big);
    s.append(r.bytes.begin(), r.bytes.end());
  }
  return s;
}

void spit(const std::filesystem::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::io_failure;
}

}  // namespace

TEST_CASE("write_pcap / read_pcap round trip") {
  TempDir dir;
  std::mt19937_64 rng(7);
  const auto cap = random_capture(rng, 500);
  write_pcap(dir / "a.pcap", cap);
  const auto back = read_pcap(dir / "a.pcap");
  CHECK(back.linktype == 1);
  CHECK(back.records == cap.records);

  write_pcap(dir / "b.pcap", cap);
  CHECK(test_util::slurp(dir / "a.pcap") == test_util::slurp(dir / "b.pcap"));
}

TEST_CASE("byte-swapped and native files yield the same records") {
  TempDir dir;
  std::mt19937_64 rng(8);
  const auto cap = random_capture(rng, 50);
  write_pcap(dir / "le.pcap", cap, std::endian::little);
  write_pcap(dir / "be.pcap", cap, std::endian::big);
  const auto be = test_util::slurp(dir / "be.pcap");
  CHECK(static_cast<unsigned char>(be[0]) == 0xA1);
  CHECK(static_cast<unsigned char>(test_util::slurp(dir / "le.pcap")[0]) == 0xD4);
  CHECK(read_pcap(dir / "le.pcap").records == cap.records);
  CHECK(read_pcap(dir / "be.pcap").records == cap.records);
}

TEST_CASE("nanosecond magic is read in either order") {
  TempDir dir;
  std::mt19937_64 rng(9);
  const auto cap = random_capture(rng, 20);
  for (const bool big : {false, true}) {
    spit(dir / "ns.pcap", handmade_pcap(cap, big, true));
    CHECK(read_pcap(dir / "ns.pcap").records == cap.records);
  }
}

TEST_CASE("PCAP framing arithmetic") {
  TempDir dir;
  CaptureFile empty;
  write_pcap(dir / "e.pcap", empty);
  CHECK(std::filesystem::file_size(dir / "e.pcap") == 24);
  CHECK(read_pcap(dir / "e.pcap").records.empty());

  SynthConfig sc;
  sc.packet_count = 36;
  auto lc = synth_benign(sc);
  lc.capture.records.resize(1);
  write_pcap(dir / "one.pcap", lc.capture);
  CHECK(std::filesystem::file_size(dir / "one.pcap") == 24 + 16 + 438);
}

TEST_CASE("PcapReader errors") {
  TempDir dir;
  std::mt19937_64 rng(10);
  const auto cap = random_capture(rng, 3);
  const std::string good = handmade_pcap(cap, false, false);

  spit(dir / "magic.pcap", std::string(24, '\x42'));
  CHECK(code_of([&] { read_pcap(dir / "magic.pcap"); }) == Errc::bad_magic);

  spit(dir / "trunc.pcap", good.substr(0, good.size() - 3));
  CHECK(code_of([&] { read_pcap(dir / "trunc.pcap"); }) == Errc::truncated_record);

  spit(dir / "trunc_hdr.pcap", good.substr(0, 24 + 10));
  CHECK(code_of([&] { read_pcap(dir / "trunc_hdr.pcap"); }) == Errc::truncated_record);

  spit(dir / "link.pcap", handmade_pcap(cap, false, false, 101));
  CHECK(code_of([&] { read_pcap(dir / "link.pcap"); }) == Errc::unsupported_linktype);

  CaptureFile backwards = cap;
  std::swap(backwards.records[0].timestamp_us, backwards.records[2].timestamp_us);
  spit(dir / "order.pcap", handmade_pcap(backwards, false, false));
  CHECK(code_of([&] { read_pcap(dir / "order.pcap"); }) == Errc::unordered_records);
  CHECK(code_of([&] { write_pcap(dir / "x.pcap", backwards); }) == Errc::unordered_records);

  CHECK(code_of([&] { read_pcap(dir / "missing.pcap"); }) == Errc::io_failure);
}

TEST_CASE("streaming reader matches read_pcap") {
  TempDir dir;
  std::mt19937_64 rng(11);
  const auto cap = random_capture(rng, 100);
  write_pcap(dir / "s.pcap", cap);
  PcapReader reader(dir / "s.pcap");
  std::size_t k = 0;
  while (auto r = reader.next()) {
    REQUIRE(k < cap.records.size());
    CHECK(*r == cap.records[k++]);
  }
  CHECK(k == cap.records.size());
}

TEST_CASE("label sidecar format and round trip") {
  TempDir dir;
  write_labels(dir / "two.csv", {{{0, Label::benign}, {1, Label::injected}}});
  CHECK(test_util::slurp(dir / "two.csv") == "record_index,label\n0,benign\n1,injected\n");

  write_labels(dir / "empty.csv", {});
  CHECK(test_util::slurp(dir / "empty.csv") == "record_index,label\n");
  CHECK(read_labels(dir / "empty.csv").entries.empty());

  std::mt19937_64 rng(12);
  LabelSidecar big;
  std::size_t idx = 0;
  for (int k = 0; k < 10'000; ++k) {
    idx += 1 + rng() % 3;
    big.entries.push_back({idx, (rng() & 1) ? Label::injected : Label::benign});
  }
  write_labels(dir / "big.csv", big);
  CHECK(read_labels(dir / "big.csv") == big);
}

TEST_CASE("malformed sidecars") {
  TempDir dir;
  for (const char* text : {"index,label\n0,benign\n", "record_index,label\n0;benign\n",
                           "record_index,label\nx,benign\n", "record_index,label\n0,evil\n",
                           "record_index,label\n3,benign\n3,benign\n"}) {
    spit(dir / "bad.csv", text);
    CHECK(code_of([&] { read_labels(dir / "bad.csv"); }) == Errc::malformed_line);
  }
}

TEST_CASE("join_labels maps sidecar entries onto stream records") {
  SynthConfig sc;
  sc.packet_count = 36;
  const auto lc = synth_benign(sc);
  CaptureFile cap;
  cap.records = {lc.capture.records[0], lc.capture.records[1], lc.capture.records[2]};
  RawRecord gptp{cap.records.back().timestamp_us, std::vector<std::uint8_t>(60, 0), Label::unlabeled};
  gptp.bytes[12] = 0x88;
  gptp.bytes[13] = 0xF7;
  cap.records.push_back(gptp);
  const LabelSidecar sidecar{{{0, Label::benign}, {1, Label::injected}, {2, Label::benign}}};
  const auto joined = join_labels(cap, sidecar);
  REQUIRE(joined.size() == 4);
  CHECK(joined[0].label == Label::benign);
  CHECK(joined[1].label == Label::injected);
  CHECK(joined[2].label == Label::benign);
  CHECK(joined[3].label == Label::unlabeled);

  const LabelSidecar missing{{{0, Label::benign}, {2, Label::benign}}};
  CHECK(code_of([&] { join_labels(cap, missing); }) == Errc::coverage_mismatch);
  const LabelSidecar on_gptp{{{0, Label::benign}, {1, Label::benign}, {2, Label::benign},
                              {3, Label::benign}}};
  CHECK(code_of([&] { join_labels(cap, on_gptp); }) == Errc::coverage_mismatch);
  const LabelSidecar beyond{{{0, Label::benign}, {1, Label::benign}, {2, Label::benign},
                             {9, Label::benign}}};
  CHECK(code_of([&] { join_labels(cap, beyond); }) == Errc::index_out_of_range);
}

TEST_CASE("attack capture labels survive the file round trip") {
  TempDir dir;
  const auto lc = test_util::attack_capture(3000, 1735, 3, 2'000'000, 400, 5);
  write_pcap(dir / "atk.pcap", lc.capture);
  write_labels(sidecar_path(dir / "atk.pcap"), lc.labels);
  const auto joined = join_labels(read_pcap(dir / "atk.pcap"), read_labels(sidecar_path(dir / "atk.pcap")));
  std::size_t injected = 0;
  for (std::size_t k = 0; k < joined.size(); ++k) {
    CHECK(joined[k].label == lc.labels.entries[k].label);
    injected += joined[k].label == Label::injected;
  }
  CHECK(injected == 5 * 36);
}

#include <doctest.h>

#include <random>

#include "avtp_ids/avtp_codec.hpp"
#include "avtp_ids/error.hpp"
#include "avtp_ids/traffic_lab.hpp"
#include "test_util.hpp"

using namespace avtp_ids;

namespace {

std::vector<std::uint8_t> stream_frame(std::size_t size = layout::synth_frame_len) {
  std::vector<std::uint8_t> f(size, 0);
  f[12] = 0x81;
  f[13] = 0x00;
  f[16] = 0x22;
  f[17] = 0xF0;
  return f;
}

StreamAvtpdu random_pdu(std::mt19937_64& rng) {
  StreamAvtpdu p;
  for (auto& b : p.dst_mac) b = rng() & 0xFF;
  for (auto& b : p.src_mac) b = rng() & 0xFF;
  p.pcp = rng() & 0x7;
  p.dei = rng() & 1;
  p.vlan_id = rng() & 0x0FFF;
  p.subtype = rng() & 0x7F;
  p.flags = rng() & 0xFF;
  p.sequence_num = rng() & 0xFF;
  p.tu = rng() & 0xFF;
  p.stream_id = rng();
  p.avtp_timestamp = static_cast<std::uint32_t>(rng());
  p.gateway_info = static_cast<std::uint32_t>(rng());
  p.stream_data_length = rng() & 0xFFFF;
  p.channel = rng() & 0xFF;
  p.tcode_sy = rng() & 0xFF;
  for (auto& b : p.cip_head) b = rng() & 0xFF;
  p.dbc = rng() & 0xFF;
  for (auto& b : p.cip_tail) b = rng() & 0xFF;
  p.payload = test_util::random_bytes(rng, 8 + rng() % 400);
  return p;
}

}  // namespace

TEST_CASE("classify_frame gates on TPID, EtherType and the cd bit") {
  auto f = stream_frame();
  CHECK(classify_frame(f) == FrameKind::stream_avtpdu);
  f[18] = 0x80;
  CHECK(classify_frame(f) == FrameKind::control_avtpdu);
  f[18] = 0x00;
  f[16] = 0x08;
  f[17] = 0x00;
  CHECK(classify_frame(f) == FrameKind::other_ethernet);
  auto untagged = stream_frame();
  untagged[12] = 0x08;
  CHECK(classify_frame(untagged) == FrameKind::other_ethernet);
}

TEST_CASE("classify_frame rejects runts and treats tiny frames as other") {
  CHECK_THROWS_AS(classify_frame(std::vector<std::uint8_t>(13)), Error);
  try {
    classify_frame(std::vector<std::uint8_t>(5));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::frame_too_short);
  }
  CHECK(classify_frame(std::vector<std::uint8_t>(14)) == FrameKind::other_ethernet);
  CHECK(classify_frame(std::vector<std::uint8_t>(18)) == FrameKind::other_ethernet);
}

TEST_CASE("parse_frame errors") {
  auto ipv4 = stream_frame();
  ipv4[17] = 0x00;
  CHECK_THROWS_AS(parse_frame(ipv4), Error);
  try {
    parse_frame(ipv4);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_a_stream_avtpdu);
  }
  try {
    parse_frame(stream_frame(40));
    FAIL("expected frame_too_short");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::frame_too_short);
  }
}

TEST_CASE("a synthesized 438-byte frame carries a 388-byte payload") {
  SynthConfig sc;
  sc.packet_count = 36;
  const auto lc = synth_benign(sc);
  const auto& bytes = lc.capture.records[0].bytes;
  CHECK(bytes.size() == 438);
  const auto pdu = parse_frame(bytes);
  CHECK(pdu.payload.size() == 388);
  CHECK(pdu.stream_id == sc.stream_id);
  CHECK(pdu.vlan_id == sc.vlan_id);
  CHECK(bytes[layout::dbc] == pdu.dbc);
}

TEST_CASE("parse(serialize(p)) == p and serialize(parse(f)) == f") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 200; ++k) {
    const auto p = random_pdu(rng);
    const auto bytes = serialize(p);
    CHECK(bytes.size() == layout::header_len + p.payload.size());
    const auto q = parse_frame(bytes);
    CHECK(q == p);
    CHECK(serialize(q) == bytes);
    CHECK(extract_prefix(serialize(q)) == extract_prefix(bytes));
  }
}

TEST_CASE("header fields land at their byte offsets") {
  StreamAvtpdu p;
  p.pcp = 5;
  p.dei = true;
  p.vlan_id = 0x123;
  p.sequence_num = 0xAB;
  p.stream_id = 0x0102030405060708ULL;
  p.dbc = 0x70;
  p.payload.assign(8, 0xEE);
  const auto b = serialize(p);
  CHECK(b[14] == ((5 << 5) | 0x10 | 0x01));
  CHECK(b[15] == 0x23);
  CHECK(b[layout::sequence_num] == 0xAB);
  CHECK(b[layout::stream_id] == 0x01);
  CHECK(b[layout::stream_id + 7] == 0x08);
  CHECK(b[layout::dbc] == 0x70);
  CHECK(b[layout::payload] == 0xEE);
}

TEST_CASE("extract_prefix") {
  SynthConfig sc;
  sc.packet_count = 36;
  const auto f = synth_benign(sc).capture.records[0].bytes;
  const auto p = extract_prefix(f);
  REQUIRE(p.size() == 58);
  CHECK(std::equal(p.begin(), p.end(), f.begin()));
  const std::vector<std::uint8_t> exact(f.begin(), f.begin() + 58);
  CHECK(extract_prefix(exact) == exact);
  try {
    extract_prefix(std::span(f).first(57));
    FAIL("expected frame_too_short");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::frame_too_short);
  }
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(extract_prefix(test_util::random_bytes(rng, 438)), Error);
}

TEST_CASE("label names round-trip") {
  for (const auto l : {Label::benign, Label::injected, Label::unlabeled}) {
    CHECK(parse_label(to_string(l)) == l);
  }
  CHECK_FALSE(parse_label("attack").has_value());
}

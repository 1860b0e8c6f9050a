#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace avtp_ids {

enum class Label : std::uint8_t { benign = 0, injected = 1, unlabeled = 2 };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

// One captured Ethernet frame.
struct RawRecord {
  std::uint64_t timestamp_us = 0;
  std::vector<std::uint8_t> bytes;
  Label label = Label::unlabeled;

  bool operator==(const RawRecord&) const = default;
};

enum class FrameKind { stream_avtpdu, control_avtpdu, other_ethernet };

std::string_view to_string(FrameKind kind);

namespace layout {
inline constexpr std::size_t min_ethernet = 14;
inline constexpr std::uint16_t tpid_vlan = 0x8100;
inline constexpr std::uint16_t ethertype_avtp = 0x22F0;

inline constexpr std::size_t tpid = 12;
inline constexpr std::size_t tci = 14;
inline constexpr std::size_t ethertype = 16;
inline constexpr std::size_t subtype = 18;
inline constexpr std::size_t flags = 19;
inline constexpr std::size_t sequence_num = 20;
inline constexpr std::size_t tu = 21;
inline constexpr std::size_t stream_id = 22;
inline constexpr std::size_t avtp_timestamp = 30;
inline constexpr std::size_t gateway_info = 34;
inline constexpr std::size_t stream_data_length = 38;
inline constexpr std::size_t channel = 40;
inline constexpr std::size_t tcode_sy = 41;
inline constexpr std::size_t cip_header = 42;
inline constexpr std::size_t dbc = 45;
inline constexpr std::size_t payload = 50;

// Ethernet + VLAN + EtherType (18) and the 32-byte 61883 AVTP header.
inline constexpr std::size_t header_len = payload;
// Header plus the first eight payload bytes.
inline constexpr std::size_t prefix_len = 58;
inline constexpr std::size_t synth_frame_len = 438;
}  // namespace layout

// Parsed view of a stream AVTPDU carrying 61883/IIDC-encapsulated data.
// Every byte of the header is represented so serialize() can reproduce
// the original frame exactly.
struct StreamAvtpdu {
  std::array<std::uint8_t, 6> dst_mac{};
  std::array<std::uint8_t, 6> src_mac{};
  std::uint16_t tpid = layout::tpid_vlan;
  std::uint8_t pcp = 3;  // 3 bits
  bool dei = false;
  std::uint16_t vlan_id = 0;  // 12 bits
  std::uint16_t ethertype = layout::ethertype_avtp;
  bool cd = false;
  std::uint8_t subtype = 0;  // 7 bits
  std::uint8_t flags = 0;    // sv, version, mr, gv, tv
  std::uint8_t sequence_num = 0;
  std::uint8_t tu = 0;
  std::uint64_t stream_id = 0;
  std::uint32_t avtp_timestamp = 0;
  std::uint32_t gateway_info = 0;
  std::uint16_t stream_data_length = 0;
  std::uint8_t channel = 0;   // tag + channel byte
  std::uint8_t tcode_sy = 0;
  std::array<std::uint8_t, 3> cip_head{};  // CIP bytes before the DBC
  std::uint8_t dbc = 0;
  std::array<std::uint8_t, 4> cip_tail{};  // CIP bytes after the DBC
  std::vector<std::uint8_t> payload;

  bool operator==(const StreamAvtpdu&) const = default;
};

FrameKind classify_frame(std::span<const std::uint8_t> bytes);

// Throws Error(not_a_stream_avtpdu) or Error(frame_too_short).
StreamAvtpdu parse_frame(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const StreamAvtpdu& pdu);

std::vector<std::uint8_t> extract_prefix(std::span<const std::uint8_t> bytes,
                                         std::size_t j = layout::prefix_len);

// Stream AVTPDU long enough to contribute a prefix of length j.
inline bool is_usable_stream(std::span<const std::uint8_t> bytes,
                             std::size_t j = layout::prefix_len) {
  return bytes.size() >= j && bytes.size() >= layout::min_ethernet &&
         classify_frame(bytes) == FrameKind::stream_avtpdu;
}

}  // namespace avtp_ids

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "avtp_ids/pcap_store.hpp"

namespace avtp_ids {

// Benign talker model: one AVTP video session whose sequence number and DBC
// advance by 01h / 10h per packet and whose first eight payload bytes change
// only when a new video frame starts.
struct SynthConfig {
  std::size_t packet_count = 50'000;
  double mean_interval_us = 1735.0;
  // Half-width of the uniform inter-arrival jitter; 20% of the mean when unset.
  std::optional<double> interval_jitter_us;
  std::size_t frame_len_pkts = 36;
  std::size_t payload_len = 388;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0x001B21AABBCC0001ULL;
  std::uint16_t vlan_id = 2;
  std::array<std::uint8_t, 6> dst_mac{0x91, 0xE0, 0xF0, 0x00, 0xFE, 0x00};
  std::array<std::uint8_t, 6> src_mac{0x00, 0x1B, 0x21, 0xAA, 0xBB, 0xCC};

  double jitter_us() const { return interval_jitter_us.value_or(0.2 * mean_interval_us); }
};

struct AttackConfig {
  std::size_t clip_start_index = 0;
  std::size_t clip_len = 36;
  std::uint64_t warmup_us = 120'000'000;
  double attack_interval_us = 1735.0;
  std::size_t repeats = 1;
  // Uniform jitter on injected timestamps, drawn from `seed`. Must stay
  // below half the attack interval so the replayed clip keeps its order.
  double attack_jitter_us = 0.0;
  std::uint64_t seed = 0;
};

struct LabeledCapture {
  CaptureFile capture;
  LabelSidecar labels;
};

LabeledCapture synth_benign(const SynthConfig& config);

// Byte-identical copies of `clip_len` consecutive stream AVTPDUs.
std::vector<std::vector<std::uint8_t>> extract_clip(const CaptureFile& capture,
                                                    std::size_t start_index,
                                                    std::size_t clip_len);

// Replays `clip` `repeats` times starting `warmup_us` after the first benign
// record, one packet every `attack_interval_us`. Ties in the merge keep the
// benign record first.
LabeledCapture inject_replay(const CaptureFile& benign,
                             const std::vector<std::vector<std::uint8_t>>& clip,
                             const AttackConfig& attack);

// Smallest repeat count whose replay reaches the end of `benign`.
std::size_t repeats_to_fill(const CaptureFile& benign, const AttackConfig& attack);

}  // namespace avtp_ids

#include "avtp_ids/traffic_lab.hpp"

#include <cmath>
#include <random>

#include "avtp_ids/error.hpp"

namespace avtp_ids {

namespace {

// Uniform double in [0, 1) from the top 53 bits, independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fill_random(std::mt19937_64& rng, std::uint8_t* out, std::size_t n) {
  std::size_t k = 0;
  while (k < n) {
    std::uint64_t word = rng();
    for (int b = 0; b < 8 && k < n; ++b, ++k) {
      out[k] = static_cast<std::uint8_t>(word & 0xFF);
      word >>= 8;
    }
  }
}

void validate(const SynthConfig& c) {
  if (c.packet_count == 0 || c.frame_len_pkts == 0 || c.packet_count < c.frame_len_pkts) {
    throw Error(Errc::invalid_config, "packet_count must be >= frame_len_pkts > 0");
  }
  if (c.payload_len < 8) throw Error(Errc::invalid_config, "payload_len must be >= 8");
  if (!(c.mean_interval_us > 0.0)) throw Error(Errc::invalid_config, "mean interval must be > 0");
  const double jitter = c.jitter_us();
  if (jitter < 0.0 || jitter >= c.mean_interval_us) {
    throw Error(Errc::invalid_config, "jitter must be in [0, mean interval)");
  }
  if (c.vlan_id > 0x0FFF) throw Error(Errc::invalid_config, "vlan_id is 12 bits");
}

}  // namespace

LabeledCapture synth_benign(const SynthConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.seed);

  StreamAvtpdu pdu;
  pdu.dst_mac = config.dst_mac;
  pdu.src_mac = config.src_mac;
  pdu.pcp = 3;
  pdu.vlan_id = config.vlan_id;
  pdu.subtype = 0x00;  // 61883/IIDC
  pdu.flags = 0x80;    // sv=1, version 0, tv=0
  pdu.stream_id = config.stream_id;
  pdu.stream_data_length = static_cast<std::uint16_t>(config.payload_len + 8);
  pdu.channel = 0x5F;   // tag=01 (CIP header present), channel 31
  pdu.tcode_sy = 0xA0;  // tcode Ah
  pdu.cip_head = {0x3F, 0x06, 0xC4};
  pdu.cip_tail = {0xA0, 0x00, 0x00, 0x00};
  pdu.payload.assign(config.payload_len, 0);

  LabeledCapture out;
  out.capture.records.reserve(config.packet_count);
  out.labels.entries.reserve(config.packet_count);

  const double jitter = config.jitter_us();
  double clock_us = 0.0;
  std::array<std::uint8_t, 8> frame_head{};
  for (std::size_t i = 0; i < config.packet_count; ++i) {
    if (i > 0) clock_us += config.mean_interval_us + jitter * (2.0 * unit_uniform(rng) - 1.0);
    if (i % config.frame_len_pkts == 0) fill_random(rng, frame_head.data(), frame_head.size());

    pdu.sequence_num = static_cast<std::uint8_t>(i & 0xFF);
    pdu.dbc = static_cast<std::uint8_t>((16 * i) & 0xFF);
    std::copy(frame_head.begin(), frame_head.end(), pdu.payload.begin());
    fill_random(rng, pdu.payload.data() + 8, config.payload_len - 8);

    RawRecord record;
    record.timestamp_us = static_cast<std::uint64_t>(std::llround(clock_us));
    record.bytes = serialize(pdu);
    record.label = Label::benign;
    out.capture.records.push_back(std::move(record));
    out.labels.entries.push_back({i, Label::benign});
  }
  return out;
}

std::vector<std::vector<std::uint8_t>> extract_clip(const CaptureFile& capture,
                                                    std::size_t start_index,
                                                    std::size_t clip_len) {
  if (clip_len == 0) throw Error(Errc::invalid_config, "clip_len must be positive");
  if (start_index >= capture.records.size() ||
      clip_len > capture.records.size() - start_index) {
    throw Error(Errc::out_of_range, "clip [" + std::to_string(start_index) + ", +" +
                                        std::to_string(clip_len) + ") outside " +
                                        std::to_string(capture.records.size()) + " records");
  }
  std::vector<std::vector<std::uint8_t>> clip;
  clip.reserve(clip_len);
  for (std::size_t k = start_index; k < start_index + clip_len; ++k) {
    const auto& bytes = capture.records[k].bytes;
    if (classify_frame(bytes) != FrameKind::stream_avtpdu) {
      throw Error(Errc::non_contiguous, "record " + std::to_string(k) + " is not a stream AVTPDU");
    }
    clip.push_back(bytes);
  }
  return clip;
}

std::size_t repeats_to_fill(const CaptureFile& benign, const AttackConfig& attack) {
  if (benign.records.empty() || attack.clip_len == 0 || !(attack.attack_interval_us > 0.0)) {
    return 0;
  }
  const auto duration = benign.records.back().timestamp_us - benign.records.front().timestamp_us;
  if (attack.warmup_us >= duration) return 0;
  const double span = static_cast<double>(duration - attack.warmup_us);
  const auto packets = static_cast<std::size_t>(std::floor(span / attack.attack_interval_us)) + 1;
  return (packets + attack.clip_len - 1) / attack.clip_len;
}

LabeledCapture inject_replay(const CaptureFile& benign,
                             const std::vector<std::vector<std::uint8_t>>& clip,
                             const AttackConfig& attack) {
  if (clip.empty() || attack.repeats == 0 || !(attack.attack_interval_us > 0.0)) {
    throw Error(Errc::invalid_config, "attack needs a clip, repeats > 0 and interval > 0");
  }
  if (attack.attack_jitter_us < 0.0 || attack.attack_jitter_us * 2.0 >= attack.attack_interval_us) {
    throw Error(Errc::invalid_config, "attack jitter must be below half the interval");
  }
  if (benign.records.empty()) throw Error(Errc::warmup_exceeds_capture, "empty capture");
  const std::uint64_t start = benign.records.front().timestamp_us;
  const std::uint64_t duration = benign.records.back().timestamp_us - start;
  if (attack.warmup_us >= duration) {
    throw Error(Errc::warmup_exceeds_capture,
                "warm-up " + std::to_string(attack.warmup_us) + " us >= capture duration " +
                    std::to_string(duration) + " us");
  }

  std::mt19937_64 rng(attack.seed);
  const std::size_t injected = attack.repeats * clip.size();
  std::vector<std::uint64_t> times(injected);
  for (std::size_t k = 0; k < injected; ++k) {
    double offset = static_cast<double>(k) * attack.attack_interval_us;
    if (attack.attack_jitter_us > 0.0) {
      offset += attack.attack_jitter_us * (2.0 * unit_uniform(rng) - 1.0);
    }
    times[k] = start + attack.warmup_us + static_cast<std::uint64_t>(std::llround(std::max(offset, 0.0)));
  }

  LabeledCapture out;
  out.capture.linktype = benign.linktype;
  out.capture.records.reserve(benign.records.size() + injected);
  std::size_t b = 0;
  std::size_t k = 0;
  auto emit = [&](RawRecord record) {
    const std::size_t index = out.capture.records.size();
    if (classify_frame(record.bytes) == FrameKind::stream_avtpdu) {
      out.labels.entries.push_back({index, record.label});
    }
    out.capture.records.push_back(std::move(record));
  };
  while (b < benign.records.size() || k < injected) {
    const bool take_benign =
        k == injected || (b < benign.records.size() && benign.records[b].timestamp_us <= times[k]);
    if (take_benign) {
      RawRecord record = benign.records[b++];
      record.label = classify_frame(record.bytes) == FrameKind::stream_avtpdu ? Label::benign
                                                                              : Label::unlabeled;
      emit(std::move(record));
    } else {
      emit(RawRecord{times[k], clip[k % clip.size()], Label::injected});
      ++k;
    }
  }
  return out;
}

}  // namespace avtp_ids

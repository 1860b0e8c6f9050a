#include "avtp_ids/avtp_codec.hpp"

#include <algorithm>

#include "avtp_ids/error.hpp"

namespace avtp_ids {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::frame_too_short: return "frame-too-short";
    case Errc::not_a_stream_avtpdu: return "not-a-stream-avtpdu";
    case Errc::bad_magic: return "bad-magic";
    case Errc::truncated_record: return "truncated-record";
    case Errc::unsupported_linktype: return "unsupported-linktype";
    case Errc::io_failure: return "io-failure";
    case Errc::unordered_records: return "unordered-records";
    case Errc::malformed_line: return "malformed-line";
    case Errc::index_out_of_range: return "index-out-of-range";
    case Errc::coverage_mismatch: return "coverage-mismatch";
    case Errc::invalid_config: return "invalid-config";
    case Errc::out_of_range: return "out-of-range";
    case Errc::non_contiguous: return "non-contiguous";
    case Errc::warmup_exceeds_capture: return "warmup-exceeds-capture";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::invalid_window: return "invalid-window";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::odd_dimension: return "odd-dimension";
    case Errc::corrupt_model_file: return "corrupt-model-file";
    case Errc::empty_confusion: return "empty-confusion";
    case Errc::single_class_input: return "single-class-input";
    case Errc::too_few_samples: return "too-few-samples";
    case Errc::model_window_mismatch: return "model-window-mismatch";
  }
  return "unknown";
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::benign: return "benign";
    case Label::injected: return "injected";
    case Label::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "benign") return Label::benign;
  if (text == "injected") return Label::injected;
  if (text == "unlabeled") return Label::unlabeled;
  return std::nullopt;
}

std::string_view to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::stream_avtpdu: return "stream";
    case FrameKind::control_avtpdu: return "control";
    case FrameKind::other_ethernet: return "other";
  }
  return "other";
}

namespace {

template <typename T>
T load_be(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    value = static_cast<T>((value << 8) | bytes[offset + k]);
  }
  return value;
}

template <typename T>
void store_be(std::vector<std::uint8_t>& out, std::size_t offset, T value) {
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    out[offset + sizeof(T) - 1 - k] = static_cast<std::uint8_t>(value & 0xFF);
    value = static_cast<T>(value >> 8);
  }
}

}  // namespace

FrameKind classify_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < layout::min_ethernet) {
    throw Error(Errc::frame_too_short,
                "frame of " + std::to_string(bytes.size()) + " bytes");
  }
  // A 14..18 byte frame cannot hold the VLAN tag, EtherType and AVTP subtype.
  if (bytes.size() <= layout::subtype) return FrameKind::other_ethernet;
  if (load_be<std::uint16_t>(bytes, layout::tpid) != layout::tpid_vlan ||
      load_be<std::uint16_t>(bytes, layout::ethertype) != layout::ethertype_avtp) {
    return FrameKind::other_ethernet;
  }
  return (bytes[layout::subtype] & 0x80) ? FrameKind::control_avtpdu
                                         : FrameKind::stream_avtpdu;
}

StreamAvtpdu parse_frame(std::span<const std::uint8_t> bytes) {
  if (classify_frame(bytes) != FrameKind::stream_avtpdu) {
    throw Error(Errc::not_a_stream_avtpdu, "frame does not carry a stream AVTPDU");
  }
  if (bytes.size() < layout::prefix_len) {
    throw Error(Errc::frame_too_short,
                "stream AVTPDU of " + std::to_string(bytes.size()) + " bytes");
  }

  StreamAvtpdu pdu;
  std::copy_n(bytes.begin(), 6, pdu.dst_mac.begin());
  std::copy_n(bytes.begin() + 6, 6, pdu.src_mac.begin());
  pdu.tpid = load_be<std::uint16_t>(bytes, layout::tpid);
  const auto tci = load_be<std::uint16_t>(bytes, layout::tci);
  pdu.pcp = static_cast<std::uint8_t>(tci >> 13);
  pdu.dei = (tci >> 12) & 1;
  pdu.vlan_id = tci & 0x0FFF;
  pdu.ethertype = load_be<std::uint16_t>(bytes, layout::ethertype);
  pdu.cd = (bytes[layout::subtype] & 0x80) != 0;
  pdu.subtype = bytes[layout::subtype] & 0x7F;
  pdu.flags = bytes[layout::flags];
  pdu.sequence_num = bytes[layout::sequence_num];
  pdu.tu = bytes[layout::tu];
  pdu.stream_id = load_be<std::uint64_t>(bytes, layout::stream_id);
  pdu.avtp_timestamp = load_be<std::uint32_t>(bytes, layout::avtp_timestamp);
  pdu.gateway_info = load_be<std::uint32_t>(bytes, layout::gateway_info);
  pdu.stream_data_length = load_be<std::uint16_t>(bytes, layout::stream_data_length);
  pdu.channel = bytes[layout::channel];
  pdu.tcode_sy = bytes[layout::tcode_sy];
  std::copy_n(bytes.begin() + layout::cip_header, 3, pdu.cip_head.begin());
  pdu.dbc = bytes[layout::dbc];
  std::copy_n(bytes.begin() + layout::dbc + 1, 4, pdu.cip_tail.begin());
  pdu.payload.assign(bytes.begin() + layout::payload, bytes.end());
  return pdu;
}

std::vector<std::uint8_t> serialize(const StreamAvtpdu& pdu) {
  std::vector<std::uint8_t> out(layout::header_len + pdu.payload.size());
  std::copy(pdu.dst_mac.begin(), pdu.dst_mac.end(), out.begin());
  std::copy(pdu.src_mac.begin(), pdu.src_mac.end(), out.begin() + 6);
  store_be<std::uint16_t>(out, layout::tpid, pdu.tpid);
  const auto tci = static_cast<std::uint16_t>(((pdu.pcp & 0x7) << 13) |
                                              ((pdu.dei ? 1 : 0) << 12) |
                                              (pdu.vlan_id & 0x0FFF));
  store_be<std::uint16_t>(out, layout::tci, tci);
  store_be<std::uint16_t>(out, layout::ethertype, pdu.ethertype);
  out[layout::subtype] = static_cast<std::uint8_t>((pdu.cd ? 0x80 : 0) | (pdu.subtype & 0x7F));
  out[layout::flags] = pdu.flags;
  out[layout::sequence_num] = pdu.sequence_num;
  out[layout::tu] = pdu.tu;
  store_be<std::uint64_t>(out, layout::stream_id, pdu.stream_id);
  store_be<std::uint32_t>(out, layout::avtp_timestamp, pdu.avtp_timestamp);
  store_be<std::uint32_t>(out, layout::gateway_info, pdu.gateway_info);
  store_be<std::uint16_t>(out, layout::stream_data_length, pdu.stream_data_length);
  out[layout::channel] = pdu.channel;
  out[layout::tcode_sy] = pdu.tcode_sy;
  std::copy(pdu.cip_head.begin(), pdu.cip_head.end(), out.begin() + layout::cip_header);
  out[layout::dbc] = pdu.dbc;
  std::copy(pdu.cip_tail.begin(), pdu.cip_tail.end(), out.begin() + layout::dbc + 1);
  std::copy(pdu.payload.begin(), pdu.payload.end(), out.begin() + layout::payload);
  return out;
}

std::vector<std::uint8_t> extract_prefix(std::span<const std::uint8_t> bytes, std::size_t j) {
  if (j == 0) throw Error(Errc::invalid_config, "prefix length must be positive");
  if (classify_frame(bytes) != FrameKind::stream_avtpdu) {
    throw Error(Errc::not_a_stream_avtpdu, "prefix requested from a non-stream frame");
  }
  if (bytes.size() < j) {
    throw Error(Errc::frame_too_short, "frame of " + std::to_string(bytes.size()) +
                                           " bytes, prefix of " + std::to_string(j));
  }
  return {bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(j)};
}

}  // namespace avtp_ids

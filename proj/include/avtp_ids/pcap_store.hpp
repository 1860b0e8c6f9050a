#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "avtp_ids/avtp_codec.hpp"

namespace avtp_ids {

inline constexpr std::uint32_t linktype_ethernet = 1;

struct CaptureFile {
  std::uint32_t linktype = linktype_ethernet;
  std::vector<RawRecord> records;
};

struct LabelEntry {
  std::size_t record_index = 0;
  Label label = Label::benign;

  bool operator==(const LabelEntry&) const = default;
};

struct LabelSidecar {
  std::vector<LabelEntry> entries;

  bool operator==(const LabelSidecar&) const = default;
};

// Sequential reader over a classic PCAP file. Accepts both byte orders and
// the nanosecond-resolution magic; timestamps are always reported in µs.
class PcapReader {
 public:
  explicit PcapReader(const std::filesystem::path& path);

  std::uint32_t linktype() const { return linktype_; }
  std::optional<RawRecord> next();

 private:
  std::uint32_t u32(const unsigned char* p) const;

  std::ifstream in_;
  bool swapped_ = false;
  bool nanosecond_ = false;
  std::uint32_t linktype_ = 0;
  std::uint64_t last_timestamp_us_ = 0;
  std::size_t count_ = 0;
};

CaptureFile read_pcap(const std::filesystem::path& path);

// Writes PCAP v2.4, linktype 1, µs timestamps. `order` exists so byte-swapped
// files can be produced; the default is the host order.
void write_pcap(const std::filesystem::path& path, const CaptureFile& capture,
                std::endian order = std::endian::native);

LabelSidecar read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const LabelSidecar& sidecar);

// "<capture>.labels.csv"
std::filesystem::path sidecar_path(const std::filesystem::path& capture_path);

// Stream AVTPDUs take their sidecar label, everything else is unlabeled.
std::vector<RawRecord> join_labels(const CaptureFile& capture, const LabelSidecar& sidecar);

}  // namespace avtp_ids

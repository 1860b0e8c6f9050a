#include "avtp_ids/pcap_store.hpp"

#include <array>
#include <charconv>
#include <string>

#include "avtp_ids/error.hpp"

namespace avtp_ids {

namespace {

constexpr std::uint32_t magic_us = 0xA1B2C3D4;
constexpr std::uint32_t magic_ns = 0xA1B23C4D;
constexpr std::uint32_t snaplen = 262144;
constexpr std::size_t global_header_len = 24;
constexpr std::size_t record_header_len = 16;

std::uint32_t bswap32(std::uint32_t v) {
  return ((v & 0xFF) << 24) | ((v & 0xFF00) << 8) | ((v >> 8) & 0xFF00) | (v >> 24);
}

std::uint32_t read_le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

class Writer {
 public:
  explicit Writer(std::endian order) : big_(order == std::endian::big) {}

  void u16(std::uint16_t v) {
    if (big_) {
      buf_.push_back(static_cast<char>(v >> 8));
      buf_.push_back(static_cast<char>(v & 0xFF));
    } else {
      buf_.push_back(static_cast<char>(v & 0xFF));
      buf_.push_back(static_cast<char>(v >> 8));
    }
  }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) {
      const int shift = big_ ? 8 * (3 - k) : 8 * k;
      buf_.push_back(static_cast<char>((v >> shift) & 0xFF));
    }
  }
  void bytes(const std::vector<std::uint8_t>& b) { buf_.append(b.begin(), b.end()); }
  std::string& buffer() { return buf_; }

 private:
  bool big_;
  std::string buf_;
};

}  // namespace

PcapReader::PcapReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
  if (!in_) throw Error(Errc::io_failure, "cannot open " + path.string());
  std::array<unsigned char, global_header_len> header{};
  in_.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in_.gcount() < 4) throw Error(Errc::bad_magic, path.string() + " is too short");
  const std::uint32_t magic = read_le32(header.data());
  if (magic == magic_us || magic == magic_ns) {
    swapped_ = false;
  } else if (bswap32(magic) == magic_us || bswap32(magic) == magic_ns) {
    swapped_ = true;
  } else {
    throw Error(Errc::bad_magic, path.string());
  }
  nanosecond_ = (swapped_ ? bswap32(magic) : magic) == magic_ns;
  if (static_cast<std::size_t>(in_.gcount()) < header.size()) {
    throw Error(Errc::truncated_record, "global header of " + path.string());
  }
  linktype_ = u32(header.data() + 20) & 0x0FFFFFFF;
  if (linktype_ != linktype_ethernet) {
    throw Error(Errc::unsupported_linktype, "linktype " + std::to_string(linktype_));
  }
}

std::uint32_t PcapReader::u32(const unsigned char* p) const {
  const std::uint32_t v = read_le32(p);
  return swapped_ ? bswap32(v) : v;
}

std::optional<RawRecord> PcapReader::next() {
  std::array<unsigned char, record_header_len> header{};
  in_.read(reinterpret_cast<char*>(header.data()), header.size());
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0) return std::nullopt;
  if (got < header.size()) {
    throw Error(Errc::truncated_record, "record header " + std::to_string(count_));
  }
  const std::uint64_t sec = u32(header.data());
  const std::uint64_t frac = u32(header.data() + 4);
  const std::uint32_t incl_len = u32(header.data() + 8);

  RawRecord record;
  record.timestamp_us = sec * 1'000'000 + (nanosecond_ ? frac / 1000 : frac);
  record.bytes.resize(incl_len);
  in_.read(reinterpret_cast<char*>(record.bytes.data()), incl_len);
  if (static_cast<std::size_t>(in_.gcount()) < incl_len) {
    throw Error(Errc::truncated_record, "record " + std::to_string(count_) + " data");
  }
  if (record.bytes.size() < layout::min_ethernet) {
    throw Error(Errc::frame_too_short, "record " + std::to_string(count_));
  }
  if (count_ > 0 && record.timestamp_us < last_timestamp_us_) {
    throw Error(Errc::unordered_records, "record " + std::to_string(count_));
  }
  last_timestamp_us_ = record.timestamp_us;
  ++count_;
  return record;
}

CaptureFile read_pcap(const std::filesystem::path& path) {
  PcapReader reader(path);
  CaptureFile capture;
  capture.linktype = reader.linktype();
  while (auto record = reader.next()) capture.records.push_back(std::move(*record));
  return capture;
}

void write_pcap(const std::filesystem::path& path, const CaptureFile& capture,
                std::endian order) {
  for (std::size_t k = 1; k < capture.records.size(); ++k) {
    if (capture.records[k].timestamp_us < capture.records[k - 1].timestamp_us) {
      throw Error(Errc::unordered_records, "record " + std::to_string(k));
    }
  }
  Writer w(order);
  w.u32(magic_us);
  w.u16(2);
  w.u16(4);
  w.u32(0);  // thiszone
  w.u32(0);  // sigfigs
  w.u32(snaplen);
  w.u32(linktype_ethernet);
  for (const auto& record : capture.records) {
    const auto len = static_cast<std::uint32_t>(record.bytes.size());
    w.u32(static_cast<std::uint32_t>(record.timestamp_us / 1'000'000));
    w.u32(static_cast<std::uint32_t>(record.timestamp_us % 1'000'000));
    w.u32(len);
    w.u32(len);
    w.bytes(record.bytes);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot create " + path.string());
  out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
  if (!out) throw Error(Errc::io_failure, "write to " + path.string());
}

std::filesystem::path sidecar_path(const std::filesystem::path& capture_path) {
  return capture_path.string() + ".labels.csv";
}

LabelSidecar read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || (line != "record_index,label" && line != "record_index,label\r")) {
    throw Error(Errc::malformed_line, path.string() + ":1 missing header");
  }
  LabelSidecar sidecar;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(Errc::malformed_line, where);
    LabelEntry entry;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + comma, entry.record_index);
    if (ec != std::errc{} || ptr != line.data() + comma) throw Error(Errc::malformed_line, where);
    const auto label = parse_label(std::string_view(line).substr(comma + 1));
    if (!label || *label == Label::unlabeled) throw Error(Errc::malformed_line, where);
    entry.label = *label;
    if (!sidecar.entries.empty() && entry.record_index <= sidecar.entries.back().record_index) {
      throw Error(Errc::malformed_line, where + " index not strictly increasing");
    }
    sidecar.entries.push_back(entry);
  }
  return sidecar;
}

void write_labels(const std::filesystem::path& path, const LabelSidecar& sidecar) {
  std::string text = "record_index,label\n";
  text.reserve(text.size() + sidecar.entries.size() * 16);
  for (std::size_t k = 0; k < sidecar.entries.size(); ++k) {
    const auto& entry = sidecar.entries[k];
    if (k > 0 && entry.record_index <= sidecar.entries[k - 1].record_index) {
      throw Error(Errc::malformed_line, "sidecar indices must be strictly increasing");
    }
    if (entry.label == Label::unlabeled) {
      throw Error(Errc::malformed_line, "sidecar entries are benign or injected");
    }
    text += std::to_string(entry.record_index);
    text += ',';
    text += to_string(entry.label);
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot create " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::io_failure, "write to " + path.string());
}

std::vector<RawRecord> join_labels(const CaptureFile& capture, const LabelSidecar& sidecar) {
  std::vector<RawRecord> out = capture.records;
  std::size_t next = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& record = out[k];
    const bool stream = classify_frame(record.bytes) == FrameKind::stream_avtpdu;
    const bool has_entry =
        next < sidecar.entries.size() && sidecar.entries[next].record_index == k;
    if (stream && !has_entry) {
      throw Error(Errc::coverage_mismatch, "stream record " + std::to_string(k) + " has no label");
    }
    if (!stream && has_entry) {
      throw Error(Errc::coverage_mismatch,
                  "label points at non-stream record " + std::to_string(k));
    }
    if (next < sidecar.entries.size() && sidecar.entries[next].record_index < k) {
      throw Error(Errc::malformed_line, "sidecar indices must be strictly increasing");
    }
    record.label = has_entry ? sidecar.entries[next++].label : Label::unlabeled;
  }
  if (next != sidecar.entries.size()) {
    throw Error(Errc::index_out_of_range,
                "label index " + std::to_string(sidecar.entries[next].record_index) +
                    " beyond " + std::to_string(out.size()) + " records");
  }
  return out;
}

}  // namespace avtp_ids

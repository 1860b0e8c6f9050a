#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "avtp_ids/avtp_codec.hpp"

namespace avtp_ids {

inline constexpr std::size_t default_window = 44;

// Per-byte modular delta between two prefixes, each byte split into its high
// then low nibble: (u1, v1, u2, v2, ...). Output length is 2 * prefix length.
std::vector<std::uint8_t> delta(std::span<const std::uint8_t> prev,
                                std::span<const std::uint8_t> curr);
void delta_into(std::span<const std::uint8_t> prev, std::span<const std::uint8_t> curr,
                std::span<std::uint8_t> out);

// w must be >= 4 and a multiple of 4 (two 2x2 poolings downstream).
void validate_window(std::size_t w);

// w x 2j nibble matrix, row 0 oldest, row w-1 belonging to the newest packet.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> values;
  Label label = Label::unlabeled;
  std::size_t newest_index = 0;

  std::uint8_t at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const std::uint8_t> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
};

// Streaming sliding-window generator for one AVTP session. Emits nothing
// until more than w prefixes have been pushed.
class WindowState {
 public:
  explicit WindowState(std::size_t w, std::size_t j = layout::prefix_len);

  std::optional<FeatureMatrix> push(std::span<const std::uint8_t> prefix, Label label,
                                    std::size_t record_index);

  std::size_t window() const { return w_; }
  std::size_t prefix_len() const { return j_; }
  std::size_t packets_seen() const { return seen_; }

 private:
  std::size_t w_;
  std::size_t j_;
  std::size_t seen_ = 0;
  std::vector<std::uint8_t> prev_;
  std::vector<std::uint8_t> ring_;  // w rows of 2j nibbles
  std::size_t head_ = 0;            // slot of the oldest row once full
};

struct FeaturizeResult;

// Collection of feature matrices. Windows produced from one stream share
// their delta rows, so a dataset costs one row per packet rather than w.
class FeatureDataset {
 public:
  FeatureDataset() = default;
  FeatureDataset(std::size_t w, std::size_t cols);

  std::size_t window() const { return w_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  Label label(std::size_t k) const { return samples_[k].label; }
  std::size_t newest_index(std::size_t k) const { return samples_[k].newest_index; }
  // w * cols nibbles, row-major, oldest row first.
  std::span<const std::uint8_t> values(std::size_t k) const {
    return {pool_->data() + samples_[k].offset, w_ * cols_};
  }
  FeatureMatrix matrix(std::size_t k) const;

  void append(const FeatureMatrix& m);
  FeatureDataset subset(std::span<const std::size_t> indices) const;

  std::size_t count(Label label) const;
  std::vector<Label> labels() const;

 private:
  friend FeaturizeResult featurize_stream(std::span<const RawRecord>, std::size_t, std::size_t);

  struct Sample {
    std::size_t offset;
    Label label;
    std::size_t newest_index;
  };

  void own_pool();

  std::size_t w_ = 0;
  std::size_t cols_ = 0;
  std::shared_ptr<std::vector<std::uint8_t>> pool_ = std::make_shared<std::vector<std::uint8_t>>();
  std::vector<Sample> samples_;
};

struct FeaturizeResult {
  FeatureDataset dataset;
  std::size_t stream_packets = 0;
  // Stream AVTPDUs shorter than the prefix; never fed to the generator.
  std::size_t skipped_truncated = 0;
};

// Filters to stream AVTPDUs and slides the window over them in order.
// Produces (stream packets - w) matrices when that is positive.
FeaturizeResult featurize_stream(std::span<const RawRecord> records, std::size_t w,
                                 std::size_t j = layout::prefix_len);

// Flat dump: per matrix, u16 w, u16 2j (little-endian), one label byte
// (0 benign, 1 injected, 2 unlabeled), then w*2j nibble bytes.
void write_dataset(const std::filesystem::path& path, const FeatureDataset& dataset);
FeatureDataset read_dataset(const std::filesystem::path& path);

}  // namespace avtp_ids

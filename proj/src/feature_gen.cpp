#include "avtp_ids/feature_gen.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "avtp_ids/error.hpp"

namespace avtp_ids {

void delta_into(std::span<const std::uint8_t> prev, std::span<const std::uint8_t> curr,
                std::span<std::uint8_t> out) {
  if (prev.size() != curr.size() || out.size() != 2 * curr.size()) {
    throw Error(Errc::length_mismatch, "delta of " + std::to_string(prev.size()) + " and " +
                                           std::to_string(curr.size()) + " bytes");
  }
  for (std::size_t k = 0; k < curr.size(); ++k) {
    const auto d = static_cast<std::uint8_t>(curr[k] - prev[k]);
    out[2 * k] = d >> 4;
    out[2 * k + 1] = d & 0x0F;
  }
}

std::vector<std::uint8_t> delta(std::span<const std::uint8_t> prev,
                                std::span<const std::uint8_t> curr) {
  std::vector<std::uint8_t> out(2 * curr.size());
  delta_into(prev, curr, out);
  return out;
}

void validate_window(std::size_t w) {
  if (w < 4 || w % 4 != 0) {
    throw Error(Errc::invalid_window,
                "window " + std::to_string(w) + " must be a multiple of 4 and at least 4");
  }
}

WindowState::WindowState(std::size_t w, std::size_t j) : w_(w), j_(j), ring_(w * 2 * j) {
  validate_window(w);
  if (j == 0) throw Error(Errc::invalid_config, "prefix length must be positive");
}

std::optional<FeatureMatrix> WindowState::push(std::span<const std::uint8_t> prefix, Label label,
                                               std::size_t record_index) {
  if (prefix.size() != j_) {
    throw Error(Errc::length_mismatch, "prefix of " + std::to_string(prefix.size()) +
                                           " bytes, expected " + std::to_string(j_));
  }
  ++seen_;
  if (seen_ == 1) {
    prev_.assign(prefix.begin(), prefix.end());
    return std::nullopt;
  }
  const std::size_t cols = 2 * j_;
  // Packet i (1-based) produces delta row i-1; the ring slot cycles.
  const std::size_t slot = (seen_ - 2) % w_;
  delta_into(prev_, prefix, std::span(ring_).subspan(slot * cols, cols));
  std::copy(prefix.begin(), prefix.end(), prev_.begin());
  if (seen_ <= w_) return std::nullopt;

  FeatureMatrix m;
  m.rows = w_;
  m.cols = cols;
  m.label = label;
  m.newest_index = record_index;
  m.values.resize(w_ * cols);
  const std::size_t oldest = (slot + 1) % w_;
  for (std::size_t r = 0; r < w_; ++r) {
    const std::size_t from = (oldest + r) % w_;
    std::copy_n(ring_.begin() + static_cast<std::ptrdiff_t>(from * cols), cols,
                m.values.begin() + static_cast<std::ptrdiff_t>(r * cols));
  }
  return m;
}

FeatureDataset::FeatureDataset(std::size_t w, std::size_t cols) : w_(w), cols_(cols) {}

FeatureMatrix FeatureDataset::matrix(std::size_t k) const {
  FeatureMatrix m;
  m.rows = w_;
  m.cols = cols_;
  const auto v = values(k);
  m.values.assign(v.begin(), v.end());
  m.label = samples_[k].label;
  m.newest_index = samples_[k].newest_index;
  return m;
}

void FeatureDataset::own_pool() {
  if (pool_.use_count() > 1) pool_ = std::make_shared<std::vector<std::uint8_t>>(*pool_);
}

void FeatureDataset::append(const FeatureMatrix& m) {
  if (samples_.empty() && w_ == 0) {
    w_ = m.rows;
    cols_ = m.cols;
  }
  if (m.rows != w_ || m.cols != cols_ || m.values.size() != w_ * cols_) {
    throw Error(Errc::shape_mismatch, "matrix " + std::to_string(m.rows) + "x" +
                                          std::to_string(m.cols) + " in a " + std::to_string(w_) +
                                          "x" + std::to_string(cols_) + " dataset");
  }
  own_pool();
  const std::size_t offset = pool_->size();
  pool_->insert(pool_->end(), m.values.begin(), m.values.end());
  samples_.push_back({offset, m.label, m.newest_index});
}

FeatureDataset FeatureDataset::subset(std::span<const std::size_t> indices) const {
  FeatureDataset out(w_, cols_);
  out.pool_ = pool_;
  out.samples_.reserve(indices.size());
  for (const auto k : indices) {
    if (k >= samples_.size()) throw Error(Errc::out_of_range, "sample " + std::to_string(k));
    out.samples_.push_back(samples_[k]);
  }
  return out;
}

std::size_t FeatureDataset::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      samples_.begin(), samples_.end(), [label](const Sample& s) { return s.label == label; }));
}

std::vector<Label> FeatureDataset::labels() const {
  std::vector<Label> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.label);
  return out;
}

FeaturizeResult featurize_stream(std::span<const RawRecord> records, std::size_t w,
                                 std::size_t j) {
  validate_window(w);
  if (j == 0) throw Error(Errc::invalid_config, "prefix length must be positive");
  const std::size_t cols = 2 * j;

  FeaturizeResult result;
  result.dataset = FeatureDataset(w, cols);
  auto& pool = *result.dataset.pool_;
  std::vector<std::uint8_t> prev;
  for (std::size_t index = 0; index < records.size(); ++index) {
    const auto& record = records[index];
    if (classify_frame(record.bytes) != FrameKind::stream_avtpdu) continue;
    if (record.bytes.size() < j) {
      ++result.skipped_truncated;
      continue;
    }
    const std::span<const std::uint8_t> prefix(record.bytes.data(), j);
    ++result.stream_packets;
    if (result.stream_packets == 1) {
      prev.assign(prefix.begin(), prefix.end());
      continue;
    }
    // Rows are appended in arrival order, so window k starts at row k.
    const std::size_t row = pool.size() / cols;
    pool.resize(pool.size() + cols);
    delta_into(prev, prefix, std::span(pool).subspan(row * cols, cols));
    std::copy(prefix.begin(), prefix.end(), prev.begin());
    if (result.stream_packets > w) {
      const std::size_t first_row = row + 1 - w;
      result.dataset.samples_.push_back({first_row * cols, record.label, index});
    }
  }
  return result;
}

void write_dataset(const std::filesystem::path& path, const FeatureDataset& dataset) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot create " + path.string());
  const auto w = static_cast<std::uint16_t>(dataset.window());
  const auto cols = static_cast<std::uint16_t>(dataset.cols());
  const std::array<char, 5> header{static_cast<char>(w & 0xFF), static_cast<char>(w >> 8),
                                   static_cast<char>(cols & 0xFF), static_cast<char>(cols >> 8),
                                   0};
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    auto h = header;
    h[4] = static_cast<char>(dataset.label(k));
    out.write(h.data(), h.size());
    const auto v = dataset.values(k);
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size()));
  }
  if (!out) throw Error(Errc::io_failure, "write to " + path.string());
}

FeatureDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  FeatureDataset dataset;
  std::size_t count = 0;
  while (true) {
    std::array<unsigned char, 5> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    if (got < header.size()) throw Error(Errc::truncated_record, "dataset record " + std::to_string(count));
    FeatureMatrix m;
    m.rows = header[0] | (header[1] << 8);
    m.cols = header[2] | (header[3] << 8);
    if (header[4] > 2) throw Error(Errc::malformed_line, "label byte in record " + std::to_string(count));
    m.label = static_cast<Label>(header[4]);
    m.newest_index = count;
    m.values.resize(m.rows * m.cols);
    in.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(m.values.size()));
    if (static_cast<std::size_t>(in.gcount()) < m.values.size()) {
      throw Error(Errc::truncated_record, "dataset record " + std::to_string(count));
    }
    dataset.append(m);
    ++count;
  }
  return dataset;
}

}  // namespace avtp_ids

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace avtp_ids {

enum class Errc {
  frame_too_short,
  not_a_stream_avtpdu,
  bad_magic,
  truncated_record,
  unsupported_linktype,
  io_failure,
  unordered_records,
  malformed_line,
  index_out_of_range,
  coverage_mismatch,
  invalid_config,
  out_of_range,
  non_contiguous,
  warmup_exceeds_capture,
  length_mismatch,
  invalid_window,
  shape_mismatch,
  odd_dimension,
  corrupt_model_file,
  empty_confusion,
  single_class_input,
  too_few_samples,
  model_window_mismatch,
};

std::string_view to_string(Errc code);

// Every failure the toolkit reports carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace avtp_ids

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace gca {

// All reportable failures carry a stable machine-readable code next to the
// human-readable message. Codes are part of the CLI contract (exit 3 paths).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

  Error& with_partial(uint64_t n) {
    partial_ = n;
    return *this;
  }
  std::optional<uint64_t> partial() const noexcept { return partial_; }

  Error& with_detail(std::string d) {
    detail_ = std::move(d);
    return *this;
  }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::optional<uint64_t> partial_;
  std::string detail_;  // optional serialized payload (e.g. a defect element)
};

[[noreturn]] inline void fail(std::string code, const std::string& what) {
  throw Error(std::move(code), what);
}

}  // namespace gca

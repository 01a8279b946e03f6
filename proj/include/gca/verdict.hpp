#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "gca/error.hpp"

namespace gca {

// Key-order-preserving JSON; all serialized output is byte-deterministic.
using Json = nlohmann::ordered_json;

// Three-valued decision result. Certified answers carry a witness an
// independent checker can replay without re-running the search; Unknown
// records how far the search went.
enum class Status { CertifiedYes, CertifiedNo, Unknown };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::CertifiedYes: return "certified_yes";
    case Status::CertifiedNo: return "certified_no";
    default: return "unknown";
  }
}

inline Status status_from_string(const std::string& s) {
  if (s == "certified_yes") return Status::CertifiedYes;
  if (s == "certified_no") return Status::CertifiedNo;
  if (s == "unknown") return Status::Unknown;
  fail("MalformedConfig", "unrecognized status: " + s);
}

struct Verdict {
  Status status = Status::Unknown;
  // CertifiedYes: the certified radius/window index; Unknown: the largest
  // one searched. Absent when no radius is meaningful.
  std::optional<int64_t> radius;
  Json witness = nullptr;
  Json transcript = Json::object();
};

}  // namespace gca

#pragma once

#include <string>
#include <vector>

namespace cvqt {

struct Diagnostic {
  std::string code;    // short machine-readable tag, e.g. "truncation-edge"
  std::string detail;  // human-readable context
  double value = 0.0;  // measured quantity that triggered the entry
};

// Collects non-fatal warnings (truncation edges, clamped round-off, ...).
// Functions take an optional `Diagnostics*` sink; passing nullptr drops them.
class Diagnostics {
 public:
  void warn(std::string code, std::string detail, double value);
  void merge(const Diagnostics& other);

  bool empty() const noexcept { return items_.empty(); }
  const std::vector<Diagnostic>& items() const noexcept { return items_; }
  bool has(const std::string& code) const;

  // "code=value;code=value" with duplicate codes collapsed to their
  // largest value, in first-seen order. Never contains commas.
  std::string summary() const;

 private:
  std::vector<Diagnostic> items_;
};

inline void warn_to(Diagnostics* sink, std::string code, std::string detail, double value) {
  if (sink) sink->warn(std::move(code), std::move(detail), value);
}

}  // namespace cvqt

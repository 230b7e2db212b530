#include "cvqt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cvqt {

void Diagnostics::warn(std::string code, std::string detail, double value) {
  items_.push_back({std::move(code), std::move(detail), value});
}

void Diagnostics::merge(const Diagnostics& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

bool Diagnostics::has(const std::string& code) const {
  return std::any_of(items_.begin(), items_.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

std::string Diagnostics::summary() const {
  std::vector<std::pair<std::string, double>> collapsed;
  for (const auto& item : items_) {
    auto it = std::find_if(collapsed.begin(), collapsed.end(),
                           [&](const auto& p) { return p.first == item.code; });
    if (it == collapsed.end()) {
      collapsed.emplace_back(item.code, item.value);
    } else if (std::abs(item.value) > std::abs(it->second)) {
      it->second = item.value;
    }
  }
  std::string out;
  char buf[64];
  for (const auto& [code, value] : collapsed) {
    if (!out.empty()) out += ';';
    std::snprintf(buf, sizeof buf, "%.3g", value);
    out += code;
    out += '=';
    out += buf;
  }
  return out;
}

}  // namespace cvqt

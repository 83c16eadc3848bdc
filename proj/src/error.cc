// Copyright 2026 The vapl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vapl/error.h"

#include <nlohmann/json.hpp>

namespace vapl {

std::string Span::ToString() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

std::string Diagnostic::ToString() const {
  std::string out;
  if (span.known()) out += span.ToString() + ": ";
  out += severity == Severity::kError ? "error" : "warning";
  out += " [" + code + "] " + message;
  return out;
}

std::string Diagnostic::ToJson() const {
  nlohmann::json j;
  j["code"] = code;
  j["message"] = message;
  j["line"] = span.line;
  j["column"] = span.column;
  j["severity"] = severity == Severity::kError ? "error" : "warning";
  return j.dump();
}

bool HasErrors(const std::vector<Diagnostic> &diagnostics) {
  for (const auto &d : diagnostics) {
    if (d.severity == Severity::kError) return true;
  }
  return false;
}

}  // namespace vapl

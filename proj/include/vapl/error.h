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

// Error and diagnostic types.
//
// Lexical and syntax errors are thrown as SyntaxError. Semantic checks
// (class validation, typechecking) report a list of Diagnostic records
// instead, so callers can collect every problem in one pass.

#ifndef VAPL_ERROR_H_
#define VAPL_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace vapl {

struct Span {
  int line = 0;    // 1-based; 0 when unknown
  int column = 0;  // 1-based; 0 when unknown

  bool known() const { return line > 0; }
  std::string ToString() const;
};

enum class Severity { kError, kWarning };

struct Diagnostic {
  std::string code;  // stable machine-readable identifier, e.g. "unbound-output"
  std::string message;
  Span span;
  Severity severity = Severity::kError;

  std::string ToString() const;
  // Single-line JSON object with code, message, line, column, severity.
  std::string ToJson() const;
};

bool HasErrors(const std::vector<Diagnostic> &diagnostics);

inline Diagnostic MakeError(std::string code, std::string message,
                            Span span = {}) {
  return Diagnostic{std::move(code), std::move(message), span,
                    Severity::kError};
}

inline Diagnostic MakeWarning(std::string code, std::string message,
                              Span span = {}) {
  return Diagnostic{std::move(code), std::move(message), span,
                    Severity::kWarning};
}

// Base class for all exceptions raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &message) : std::runtime_error(message) {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string &message, Span span)
      : Error(span.known() ? span.ToString() + ": " + message : message),
        span_(span),
        bare_message_(message) {}

  const Span &span() const { return span_; }
  const std::string &bare_message() const { return bare_message_; }

 private:
  Span span_;
  std::string bare_message_;
};

// Raised for values that violate a value invariant (mixed unit classes,
// unknown units, unresolved constants in arithmetic).
class ValueError : public Error {
 public:
  explicit ValueError(const std::string &message) : Error(message) {}
};

// Raised when a file cannot be read or written, or has the wrong format.
class IoError : public Error {
 public:
  explicit IoError(const std::string &message) : Error(message) {}
};

// Either a value or the diagnostics explaining why it could not be built.
template <typename T>
class Checked {
 public:
  Checked(T value) : state_(std::move(value)) {}  // NOLINT
  Checked(std::vector<Diagnostic> diagnostics)    // NOLINT
      : state_(std::move(diagnostics)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T &value() const & {
    if (!ok()) throw Error("no value: " + FirstMessage());
    return std::get<T>(state_);
  }
  T &&value() && {
    if (!ok()) throw Error("no value: " + FirstMessage());
    return std::get<T>(std::move(state_));
  }
  const T &operator*() const & { return value(); }
  const T *operator->() const { return &value(); }

  const std::vector<Diagnostic> &diagnostics() const {
    static const std::vector<Diagnostic> kEmpty;
    if (ok()) return kEmpty;
    return std::get<std::vector<Diagnostic>>(state_);
  }

 private:
  std::string FirstMessage() const {
    const auto &d = diagnostics();
    return d.empty() ? std::string("unknown error") : d.front().ToString();
  }

  std::variant<T, std::vector<Diagnostic>> state_;
};

}  // namespace vapl

#endif  // VAPL_ERROR_H_

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

#ifndef VAPL_VALUE_H_
#define VAPL_VALUE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vapl/types.h"
#include "vapl/units.h"

namespace vapl {

// Named constants stand for a literal identified in the input sentence.
enum class NamedConstKind {
  kNumber,
  kDate,
  kTime,
  kDuration,
  kLocation,
  kUrl,
  kEmail,
  kPhone,
  kHashtag,
  kUsername,
  kPathName,
  kCurrency,
};

// "NUMBER", "DATE", ...
std::string_view NamedConstKindName(NamedConstKind kind);
std::optional<NamedConstKind> ParseNamedConstKind(std::string_view name);
// Splits "NUMBER_3" into (kNumber, 3).
std::optional<std::pair<NamedConstKind, int>> ParseNamedConstToken(
    std::string_view token);
std::string NamedConstToken(NamedConstKind kind, int index);

// One additive term of a measure, e.g. 6ft. When `constant` is >= 0 the
// magnitude is the named constant NUMBER_<constant> and `magnitude` is
// ignored.
struct MeasureTerm {
  double magnitude = 0;
  int constant = -1;
  std::string unit;

  bool is_constant() const { return constant >= 0; }
  friend bool operator==(const MeasureTerm &a, const MeasureTerm &b);
};

enum class ValueKind {
  kString,
  kNumber,
  kBoolean,
  kEnum,
  kMeasure,
  kDate,
  kTime,
  kLocation,
  kEntity,
  kNamedConst,
  // An explicitly unspecified required input ($?).
  kSlot,
  // A template parameter awaiting instantiation.
  kPlaceholder,
};

// A literal value. Text is kept as word tokens, one per word.
class Value {
 public:
  Value() : kind_(ValueKind::kSlot) {}

  static Value String(std::vector<std::string> words);
  static Value Number(double magnitude);
  static Value Boolean(bool b);
  static Value Enum(std::string identifier);
  static Value Measure(std::vector<MeasureTerm> terms);
  static Value Date(std::string text);
  static Value Time(std::string text);
  static Value Location(std::string text);
  // Display words are lowercased. The id is unresolved (empty) unless known.
  static Value Entity(std::string entity_type, std::vector<std::string> words,
                      std::optional<std::string> id = std::nullopt);
  static Value NamedConst(NamedConstKind kind, int index);
  static Value Slot() { return Value(); }
  static Value Placeholder(std::string name);

  ValueKind kind() const { return kind_; }
  const std::vector<std::string> &words() const { return words_; }
  double number() const { return number_; }
  bool boolean() const { return number_ != 0; }
  // Enum identifier, date/time/location text, or placeholder name.
  const std::string &text() const { return text_; }
  const std::vector<MeasureTerm> &terms() const { return terms_; }
  const std::string &entity_type() const { return text_; }
  const std::optional<std::string> &entity_id() const { return entity_id_; }
  NamedConstKind named_kind() const { return named_kind_; }
  int named_index() const { return named_index_; }

  bool is_slot() const { return kind_ == ValueKind::kSlot; }
  bool is_placeholder() const { return kind_ == ValueKind::kPlaceholder; }
  bool is_named_const() const { return kind_ == ValueKind::kNamedConst; }

  friend bool operator==(const Value &a, const Value &b);
  friend bool operator!=(const Value &a, const Value &b) { return !(a == b); }

 private:
  explicit Value(ValueKind kind) : kind_(kind) {}

  ValueKind kind_;
  std::vector<std::string> words_;
  double number_ = 0;
  std::string text_;
  std::vector<MeasureTerm> terms_;
  std::optional<std::string> entity_id_;
  NamedConstKind named_kind_ = NamedConstKind::kNumber;
  int named_index_ = 0;
};

// The type of a named constant of the given kind.
TypeExpr NamedConstType(NamedConstKind kind);

// The unique type a value inhabits. Throws ValueError for ill-formed values
// (empty or mixed-class measures, unknown units) and for slots and
// placeholders, which have no intrinsic type.
TypeExpr TypeOfValue(const Value &value,
                     const UnitTable &units = UnitTable::Default());

// Converts a measure to a single term in `target_unit`. Throws ValueError
// on unknown units, cross-class conversion, or named-constant magnitudes.
Value ConvertMeasure(const Value &measure, const std::string &target_unit,
                     const UnitTable &units = UnitTable::Default());

// Shortest decimal text that reads back to the same double ("25", "0.5").
std::string FormatNumber(double value);
// Parses a decimal literal; nullopt when `text` is not entirely a number.
std::optional<double> ParseNumber(std::string_view text);

}  // namespace vapl

#endif  // VAPL_VALUE_H_

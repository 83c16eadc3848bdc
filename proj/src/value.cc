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

#include "vapl/value.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "vapl/error.h"

namespace vapl {

namespace {

constexpr std::array<std::pair<NamedConstKind, std::string_view>, 12>
    kNamedConstNames = {{
        {NamedConstKind::kNumber, "NUMBER"},
        {NamedConstKind::kDate, "DATE"},
        {NamedConstKind::kTime, "TIME"},
        {NamedConstKind::kDuration, "DURATION"},
        {NamedConstKind::kLocation, "LOCATION"},
        {NamedConstKind::kUrl, "URL"},
        {NamedConstKind::kEmail, "EMAIL"},
        {NamedConstKind::kPhone, "PHONE"},
        {NamedConstKind::kHashtag, "HASHTAG"},
        {NamedConstKind::kUsername, "USERNAME"},
        {NamedConstKind::kPathName, "PATHNAME"},
        {NamedConstKind::kCurrency, "CURRENCY"},
    }};

std::string Lower(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string_view NamedConstKindName(NamedConstKind kind) {
  for (const auto &[k, name] : kNamedConstNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<NamedConstKind> ParseNamedConstKind(std::string_view name) {
  for (const auto &[k, n] : kNamedConstNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::optional<std::pair<NamedConstKind, int>> ParseNamedConstToken(
    std::string_view token) {
  auto underscore = token.rfind('_');
  if (underscore == std::string_view::npos || underscore + 1 >= token.size()) {
    return std::nullopt;
  }
  auto kind = ParseNamedConstKind(token.substr(0, underscore));
  if (!kind) return std::nullopt;
  int index = 0;
  auto digits = token.substr(underscore + 1);
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || index < 0) {
    return std::nullopt;
  }
  return std::make_pair(*kind, index);
}

std::string NamedConstToken(NamedConstKind kind, int index) {
  return std::string(NamedConstKindName(kind)) + "_" + std::to_string(index);
}

bool operator==(const MeasureTerm &a, const MeasureTerm &b) {
  if (a.unit != b.unit || a.constant != b.constant) return false;
  return a.is_constant() || a.magnitude == b.magnitude;
}

Value Value::String(std::vector<std::string> words) {
  Value v(ValueKind::kString);
  v.words_ = std::move(words);
  return v;
}

Value Value::Number(double magnitude) {
  Value v(ValueKind::kNumber);
  v.number_ = magnitude;
  return v;
}

Value Value::Boolean(bool b) {
  Value v(ValueKind::kBoolean);
  v.number_ = b ? 1 : 0;
  return v;
}

Value Value::Enum(std::string identifier) {
  Value v(ValueKind::kEnum);
  v.text_ = std::move(identifier);
  return v;
}

Value Value::Measure(std::vector<MeasureTerm> terms) {
  Value v(ValueKind::kMeasure);
  v.terms_ = std::move(terms);
  return v;
}

Value Value::Date(std::string text) {
  Value v(ValueKind::kDate);
  v.text_ = std::move(text);
  return v;
}

Value Value::Time(std::string text) {
  Value v(ValueKind::kTime);
  v.text_ = std::move(text);
  return v;
}

Value Value::Location(std::string text) {
  Value v(ValueKind::kLocation);
  v.text_ = std::move(text);
  return v;
}

Value Value::Entity(std::string entity_type, std::vector<std::string> words,
                    std::optional<std::string> id) {
  Value v(ValueKind::kEntity);
  v.text_ = std::move(entity_type);
  for (auto &w : words) w = Lower(std::move(w));
  v.words_ = std::move(words);
  v.entity_id_ = std::move(id);
  return v;
}

Value Value::NamedConst(NamedConstKind kind, int index) {
  Value v(ValueKind::kNamedConst);
  v.named_kind_ = kind;
  v.named_index_ = index;
  return v;
}

Value Value::Placeholder(std::string name) {
  Value v(ValueKind::kPlaceholder);
  v.text_ = std::move(name);
  return v;
}

bool operator==(const Value &a, const Value &b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case ValueKind::kString: return a.words_ == b.words_;
    case ValueKind::kNumber:
    case ValueKind::kBoolean: return a.number_ == b.number_;
    case ValueKind::kEnum:
    case ValueKind::kDate:
    case ValueKind::kTime:
    case ValueKind::kLocation:
    case ValueKind::kPlaceholder: return a.text_ == b.text_;
    case ValueKind::kMeasure: return a.terms_ == b.terms_;
    case ValueKind::kEntity:
      return a.text_ == b.text_ && a.words_ == b.words_ &&
             a.entity_id_ == b.entity_id_;
    case ValueKind::kNamedConst:
      return a.named_kind_ == b.named_kind_ && a.named_index_ == b.named_index_;
    case ValueKind::kSlot: return true;
  }
  return false;
}

TypeExpr NamedConstType(NamedConstKind kind) {
  switch (kind) {
    case NamedConstKind::kNumber: return TypeExpr::Number();
    case NamedConstKind::kDate: return TypeExpr::Date();
    case NamedConstKind::kTime: return TypeExpr::Time();
    case NamedConstKind::kDuration: return TypeExpr::Measure("duration");
    case NamedConstKind::kLocation: return TypeExpr::Location();
    case NamedConstKind::kUrl: return TypeExpr::Url();
    case NamedConstKind::kEmail: return TypeExpr::Entity("tt:email_address");
    case NamedConstKind::kPhone: return TypeExpr::Entity("tt:phone_number");
    case NamedConstKind::kHashtag: return TypeExpr::Entity("tt:hashtag");
    case NamedConstKind::kUsername: return TypeExpr::Entity("tt:username");
    case NamedConstKind::kPathName: return TypeExpr::PathName();
    case NamedConstKind::kCurrency: return TypeExpr::Currency();
  }
  return TypeExpr::String();
}

TypeExpr TypeOfValue(const Value &value, const UnitTable &units) {
  switch (value.kind()) {
    case ValueKind::kString: return TypeExpr::String();
    case ValueKind::kNumber: return TypeExpr::Number();
    case ValueKind::kBoolean: return TypeExpr::Boolean();
    case ValueKind::kEnum: return TypeExpr::Enum({value.text()});
    case ValueKind::kDate: return TypeExpr::Date();
    case ValueKind::kTime: return TypeExpr::Time();
    case ValueKind::kLocation: return TypeExpr::Location();
    case ValueKind::kEntity: return TypeExpr::Entity(value.entity_type());
    case ValueKind::kNamedConst: return NamedConstType(value.named_kind());
    case ValueKind::kMeasure: {
      if (value.terms().empty()) throw ValueError("measure has no terms");
      std::string unit_class;
      for (const auto &term : value.terms()) {
        const UnitInfo *info = units.Find(term.unit);
        if (info == nullptr) throw ValueError("unknown unit '" + term.unit + "'");
        if (unit_class.empty()) {
          unit_class = info->unit_class;
        } else if (unit_class != info->unit_class) {
          throw ValueError("measure mixes unit classes " + unit_class +
                           " and " + info->unit_class);
        }
      }
      return TypeExpr::Measure(unit_class);
    }
    case ValueKind::kSlot: throw ValueError("an unspecified slot has no type");
    case ValueKind::kPlaceholder:
      throw ValueError("placeholder $" + value.text() + " has no type");
  }
  throw ValueError("unknown value kind");
}

Value ConvertMeasure(const Value &measure, const std::string &target_unit,
                     const UnitTable &units) {
  if (measure.kind() != ValueKind::kMeasure) {
    throw ValueError("not a measure");
  }
  const TypeExpr type = TypeOfValue(measure, units);
  const UnitInfo *target = units.Find(target_unit);
  if (target == nullptr) throw ValueError("unknown unit '" + target_unit + "'");
  if (target->unit_class != type.unit_class()) {
    throw ValueError("cannot convert " + type.unit_class() + " to " +
                     target->unit_class);
  }
  double base = 0;
  for (const auto &term : measure.terms()) {
    if (term.is_constant()) {
      throw ValueError("cannot convert a measure with a named constant");
    }
    const UnitInfo *info = units.Find(term.unit);
    base += term.magnitude * info->scale + info->offset;
  }
  const double magnitude = (base - target->offset) / target->scale;
  return Value::Measure({MeasureTerm{magnitude, -1, target_unit}});
}

std::string FormatNumber(double value) {
  if (value == 0) return "0";  // also folds -0
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf.data(), ptr);
}

std::optional<double> ParseNumber(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // from_chars rejects a leading '+', and we do not accept one either.
  const char c = text.front();
  if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.')) {
    return std::nullopt;
  }
  double out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(out)) return std::nullopt;
  return out;
}

}  // namespace vapl

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

#ifndef VAPL_TYPES_H_
#define VAPL_TYPES_H_

#include <memory>
#include <string>
#include <vector>

namespace vapl {

enum class TypeKind {
  kString,
  kNumber,
  kBoolean,
  kEnum,
  kMeasure,
  kDate,
  kTime,
  kLocation,
  kPicture,
  kUrl,
  kPathName,
  kCurrency,
  kEntity,
  kArray,
};

// A parameter type. Immutable once built; use the factory functions.
class TypeExpr {
 public:
  TypeExpr() : kind_(TypeKind::kString) {}

  static TypeExpr String() { return TypeExpr(TypeKind::kString); }
  static TypeExpr Number() { return TypeExpr(TypeKind::kNumber); }
  static TypeExpr Boolean() { return TypeExpr(TypeKind::kBoolean); }
  static TypeExpr Date() { return TypeExpr(TypeKind::kDate); }
  static TypeExpr Time() { return TypeExpr(TypeKind::kTime); }
  static TypeExpr Location() { return TypeExpr(TypeKind::kLocation); }
  static TypeExpr Picture() { return TypeExpr(TypeKind::kPicture); }
  static TypeExpr Url() { return TypeExpr(TypeKind::kUrl); }
  static TypeExpr PathName() { return TypeExpr(TypeKind::kPathName); }
  static TypeExpr Currency() { return TypeExpr(TypeKind::kCurrency); }
  // Throws ValueError when values is empty or has duplicates.
  static TypeExpr Enum(std::vector<std::string> values);
  static TypeExpr Measure(std::string unit_class);
  static TypeExpr Entity(std::string entity_type);
  // Throws ValueError when element is itself an Array.
  static TypeExpr Array(const TypeExpr &element);

  TypeKind kind() const { return kind_; }
  const std::vector<std::string> &enum_values() const { return enum_values_; }
  const std::string &unit_class() const { return name_; }
  const std::string &entity_type() const { return name_; }
  const TypeExpr &element() const { return *element_; }

  bool IsNumeric() const {
    return kind_ == TypeKind::kNumber || kind_ == TypeKind::kMeasure ||
           kind_ == TypeKind::kCurrency;
  }
  // Types ordered by < and >.
  bool IsComparable() const {
    return IsNumeric() || kind_ == TypeKind::kDate || kind_ == TypeKind::kTime;
  }
  // Types whose values are written as free text (string operators apply).
  bool IsStringLike() const {
    return kind_ == TypeKind::kString || kind_ == TypeKind::kPathName ||
           kind_ == TypeKind::kUrl || kind_ == TypeKind::kEntity ||
           kind_ == TypeKind::kPicture;
  }

  // Whitespace-free rendering: String, Enum(a,b), Measure(byte),
  // Entity(tt:username), Array(String).
  std::string ToString() const;
  // Filesystem-friendly key, e.g. Entity_tt_username, Measure_byte.
  std::string Key() const;

  friend bool operator==(const TypeExpr &a, const TypeExpr &b);
  friend bool operator!=(const TypeExpr &a, const TypeExpr &b) {
    return !(a == b);
  }

 private:
  explicit TypeExpr(TypeKind kind) : kind_(kind) {}

  TypeKind kind_;
  std::vector<std::string> enum_values_;
  std::string name_;  // unit class or entity type
  std::shared_ptr<const TypeExpr> element_;
};

// Whether a value of type `from` may be bound where `to` is declared.
// Identical types are assignable; free text may stand in for the opaque
// text types (PathName, URL, Picture), and for Entity types; an Enum is
// assignable to an Enum that contains all of its values.
bool IsAssignable(const TypeExpr &from, const TypeExpr &to);

}  // namespace vapl

#endif  // VAPL_TYPES_H_

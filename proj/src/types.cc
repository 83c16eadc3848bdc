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

#include "vapl/types.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "vapl/error.h"

namespace vapl {

TypeExpr TypeExpr::Enum(std::vector<std::string> values) {
  if (values.empty()) throw ValueError("Enum type needs at least one value");
  std::set<std::string> seen;
  for (const auto &v : values) {
    if (!seen.insert(v).second) {
      throw ValueError("duplicate Enum value '" + v + "'");
    }
  }
  TypeExpr t(TypeKind::kEnum);
  t.enum_values_ = std::move(values);
  return t;
}

TypeExpr TypeExpr::Measure(std::string unit_class) {
  TypeExpr t(TypeKind::kMeasure);
  t.name_ = std::move(unit_class);
  return t;
}

TypeExpr TypeExpr::Entity(std::string entity_type) {
  TypeExpr t(TypeKind::kEntity);
  t.name_ = std::move(entity_type);
  return t;
}

TypeExpr TypeExpr::Array(const TypeExpr &element) {
  if (element.kind() == TypeKind::kArray) {
    throw ValueError("Array of Array is not supported");
  }
  TypeExpr t(TypeKind::kArray);
  t.element_ = std::make_shared<const TypeExpr>(element);
  return t;
}

std::string TypeExpr::ToString() const {
  switch (kind_) {
    case TypeKind::kString: return "String";
    case TypeKind::kNumber: return "Number";
    case TypeKind::kBoolean: return "Boolean";
    case TypeKind::kDate: return "Date";
    case TypeKind::kTime: return "Time";
    case TypeKind::kLocation: return "Location";
    case TypeKind::kPicture: return "Picture";
    case TypeKind::kUrl: return "URL";
    case TypeKind::kPathName: return "PathName";
    case TypeKind::kCurrency: return "Currency";
    case TypeKind::kMeasure: return "Measure(" + name_ + ")";
    case TypeKind::kEntity: return "Entity(" + name_ + ")";
    case TypeKind::kArray: return "Array(" + element_->ToString() + ")";
    case TypeKind::kEnum: {
      std::string out = "Enum(";
      for (size_t i = 0; i < enum_values_.size(); ++i) {
        if (i > 0) out += ",";
        out += enum_values_[i];
      }
      return out + ")";
    }
  }
  return "?";
}

std::string TypeExpr::Key() const {
  if (kind_ == TypeKind::kEnum) return "Enum";
  std::string out;
  for (char c : ToString()) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  std::string collapsed;
  for (char c : out) {
    if (c == '_' && !collapsed.empty() && collapsed.back() == '_') continue;
    collapsed += c;
  }
  return collapsed;
}

bool operator==(const TypeExpr &a, const TypeExpr &b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case TypeKind::kEnum: return a.enum_values_ == b.enum_values_;
    case TypeKind::kMeasure:
    case TypeKind::kEntity: return a.name_ == b.name_;
    case TypeKind::kArray: return *a.element_ == *b.element_;
    default: return true;
  }
}

bool IsAssignable(const TypeExpr &from, const TypeExpr &to) {
  if (from == to) return true;
  if (from.kind() == TypeKind::kEnum && to.kind() == TypeKind::kEnum) {
    const auto &allowed = to.enum_values();
    return std::all_of(from.enum_values().begin(), from.enum_values().end(),
                       [&](const std::string &v) {
                         return std::find(allowed.begin(), allowed.end(), v) !=
                                allowed.end();
                       });
  }
  if (from.kind() == TypeKind::kString) {
    switch (to.kind()) {
      case TypeKind::kPathName:
      case TypeKind::kUrl:
      case TypeKind::kPicture:
      case TypeKind::kEntity:
        return true;
      default:
        return false;
    }
  }
  return false;
}

}  // namespace vapl

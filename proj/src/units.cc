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

#include "vapl/units.h"

namespace vapl {

namespace {

UnitTable BuildDefault() {
  UnitTable t;
  // length, base meter
  t.Add({"m", "length", 1.0});
  t.Add({"km", "length", 1000.0});
  t.Add({"cm", "length", 0.01});
  t.Add({"mm", "length", 0.001});
  t.Add({"mi", "length", 1609.344});
  t.Add({"ft", "length", 0.3048});
  t.Add({"in", "length", 0.0254});
  t.Add({"yd", "length", 0.9144});
  // byte, decimal prefixes
  t.Add({"byte", "byte", 1.0});
  t.Add({"KB", "byte", 1e3});
  t.Add({"MB", "byte", 1e6});
  t.Add({"GB", "byte", 1e9});
  t.Add({"TB", "byte", 1e12});
  // temperature, base Celsius
  t.Add({"C", "temperature", 1.0, 0.0});
  t.Add({"F", "temperature", 5.0 / 9.0, -32.0 * 5.0 / 9.0});
  t.Add({"K", "temperature", 1.0, -273.15});
  // duration, base second
  t.Add({"ms", "duration", 0.001});
  t.Add({"s", "duration", 1.0});
  t.Add({"min", "duration", 60.0});
  t.Add({"h", "duration", 3600.0});
  t.Add({"day", "duration", 86400.0});
  t.Add({"week", "duration", 604800.0});
  t.Add({"mon", "duration", 2592000.0});
  t.Add({"year", "duration", 31536000.0});
  // speed, base meters per second
  t.Add({"mps", "speed", 1.0});
  t.Add({"kmph", "speed", 1.0 / 3.6});
  t.Add({"mph", "speed", 0.44704});
  // weight, base kilogram
  t.Add({"kg", "weight", 1.0});
  t.Add({"g", "weight", 0.001});
  t.Add({"lb", "weight", 0.45359237});
  t.Add({"oz", "weight", 0.028349523125});
  return t;
}

}  // namespace

const UnitTable &UnitTable::Default() {
  static const UnitTable table = BuildDefault();
  return table;
}

void UnitTable::Add(UnitInfo unit) {
  auto it = index_.find(unit.name);
  if (it != index_.end()) {
    units_[it->second] = std::move(unit);
    return;
  }
  index_[unit.name] = units_.size();
  units_.push_back(std::move(unit));
}

const UnitInfo *UnitTable::Find(const std::string &name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &units_[it->second];
}

bool UnitTable::IsUnitClass(const std::string &name) const {
  for (const auto &u : units_) {
    if (u.unit_class == name) return true;
  }
  return false;
}

std::vector<std::string> UnitTable::UnitsOf(
    const std::string &unit_class) const {
  std::vector<std::string> out;
  for (const auto &u : units_) {
    if (u.unit_class == unit_class) out.push_back(u.name);
  }
  return out;
}

std::optional<std::string> UnitTable::BaseUnit(
    const std::string &unit_class) const {
  for (const auto &u : units_) {
    if (u.unit_class == unit_class && u.scale == 1.0 && u.offset == 0.0) {
      return u.name;
    }
  }
  return std::nullopt;
}

}  // namespace vapl

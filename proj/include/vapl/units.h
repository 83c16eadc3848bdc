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

#ifndef VAPL_UNITS_H_
#define VAPL_UNITS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vapl {

// One unit of measure. A magnitude m in this unit equals
// m * scale + offset in the base unit of its class. The offset is zero for
// every class except temperature.
struct UnitInfo {
  std::string name;
  std::string unit_class;
  double scale = 1.0;
  double offset = 0.0;
};

// Unit symbol -> class and conversion factor. The default table covers
// length (m), byte (byte), temperature (C), duration (s), speed (mps) and
// weight (kg); skill-library files may add units.
class UnitTable {
 public:
  static const UnitTable &Default();

  // Replaces an existing definition of the same name.
  void Add(UnitInfo unit);

  const UnitInfo *Find(const std::string &name) const;
  bool IsUnit(const std::string &name) const { return Find(name) != nullptr; }
  bool IsUnitClass(const std::string &name) const;
  // All unit names of a class, in table order.
  std::vector<std::string> UnitsOf(const std::string &unit_class) const;
  // The unit whose scale is 1 and offset 0.
  std::optional<std::string> BaseUnit(const std::string &unit_class) const;

 private:
  std::vector<UnitInfo> units_;
  std::map<std::string, size_t> index_;
};

}  // namespace vapl

#endif  // VAPL_UNITS_H_

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

// Skill library: classes of query and action functions with typed keyword
// parameters, plus single-level-per-edge inheritance between classes.

#ifndef VAPL_LIBRARY_H_
#define VAPL_LIBRARY_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vapl/ast.h"
#include "vapl/error.h"
#include "vapl/types.h"
#include "vapl/units.h"
#include "vapl/value.h"

namespace vapl {

enum class ParamDirection { kInRequired, kInOptional, kOut };

struct ParamDecl {
  ParamDirection direction = ParamDirection::kInRequired;
  std::string name;
  TypeExpr type;
  std::vector<Value> example_values;

  bool is_input() const { return direction != ParamDirection::kOut; }
  bool is_required() const { return direction == ParamDirection::kInRequired; }
};

enum class FunctionKind { kQuery, kAction };

struct FunctionSignature {
  FunctionKind kind = FunctionKind::kQuery;
  bool monitorable = false;
  bool list = false;
  std::string class_name;  // the declaring class
  std::string function_name;
  std::vector<ParamDecl> params;
  Span span;

  bool is_query() const { return kind == FunctionKind::kQuery; }
  const ParamDecl *FindParam(std::string_view name) const;
  const ParamDecl *FindInput(std::string_view name) const;
  const ParamDecl *FindOutput(std::string_view name) const;
  FunctionRef ref() const { return {class_name, function_name}; }
};

struct ClassDef {
  std::string name;  // dotted, e.g. com.dropbox
  std::vector<std::string> extends;
  std::vector<FunctionSignature> functions;
  std::string description;
  Span span;
};

class Library;

// Checks one class against the invariants of the class grammar and
// flattens its inheritance chain. `library` supplies the classes named in
// `extends`. On success returns the flattened function table sorted by
// function name.
Checked<std::vector<FunctionSignature>> ValidateClass(const ClassDef &cls,
                                                      const Library &library);

// An immutable, validated set of classes. Build once, share freely.
class Library {
 public:
  Library() = default;

  // Validates every class and caches flattened function tables. Classes
  // may reference each other in any order.
  static Checked<Library> Build(std::vector<ClassDef> classes,
                                const UnitTable &units = UnitTable::Default());

  const ClassDef *FindClass(std::string_view name) const;
  // Looks the function up in the class and its ancestors; nullptr when the
  // class or function is unknown.
  const FunctionSignature *FindFunction(const FunctionRef &ref) const;
  // Like FindFunction but reports why the lookup failed.
  Checked<FunctionSignature> ResolveFunction(const FunctionRef &ref) const;

  // Flattened table for a validated class, sorted by function name.
  const std::vector<FunctionSignature> &FunctionsOf(
      std::string_view class_name) const;
  const std::vector<ClassDef> &classes() const { return classes_; }
  const UnitTable &units() const { return units_; }

  // Whether any function declares a parameter with this name.
  bool HasParameterName(std::string_view name) const;

 private:
  friend Checked<std::vector<FunctionSignature>> ValidateClass(
      const ClassDef &, const Library &);

  std::vector<ClassDef> classes_;
  std::map<std::string, size_t, std::less<>> class_index_;
  std::map<std::string, std::vector<FunctionSignature>, std::less<>> flattened_;
  std::map<std::string, int, std::less<>> parameter_names_;
  UnitTable units_ = UnitTable::Default();
};

}  // namespace vapl

#endif  // VAPL_LIBRARY_H_

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

#include "vapl/library.h"

#include <algorithm>
#include <functional>
#include <set>

namespace vapl {

const ParamDecl *FunctionSignature::FindParam(std::string_view name) const {
  for (const auto &p : params) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const ParamDecl *FunctionSignature::FindInput(std::string_view name) const {
  const ParamDecl *p = FindParam(name);
  return p != nullptr && p->is_input() ? p : nullptr;
}

const ParamDecl *FunctionSignature::FindOutput(std::string_view name) const {
  const ParamDecl *p = FindParam(name);
  return p != nullptr && !p->is_input() ? p : nullptr;
}

namespace {

void CheckFunction(const ClassDef &cls, const FunctionSignature &fn,
                   const UnitTable &units, std::vector<Diagnostic> *out) {
  const std::string where = "@" + cls.name + "." + fn.function_name;
  if (fn.kind == FunctionKind::kAction) {
    if (fn.monitorable) {
      out->push_back(MakeError("action-modifier",
                           where + ": actions cannot be monitorable", fn.span));
    }
    if (fn.list) {
      out->push_back(
          MakeError("action-modifier", where + ": actions cannot be list", fn.span));
    }
  }
  std::set<std::string> names;
  for (const auto &p : fn.params) {
    if (!names.insert(p.name).second) {
      out->push_back(MakeError("duplicate-parameter",
                           where + ": parameter '" + p.name + "' declared twice",
                           fn.span));
    }
    if (fn.kind == FunctionKind::kAction &&
        p.direction == ParamDirection::kOut) {
      out->push_back(MakeError("action-output",
                           where + ": action declares output parameter '" +
                               p.name + "'",
                           fn.span));
    }
    if (p.type.kind() == TypeKind::kMeasure &&
        !units.IsUnitClass(p.type.unit_class())) {
      out->push_back(MakeError("unknown-unit-class",
                           where + ": unknown unit class '" +
                               p.type.unit_class() + "'",
                           fn.span));
    }
    for (const auto &v : p.example_values) {
      try {
        if (!IsAssignable(TypeOfValue(v, units), p.type)) {
          out->push_back(MakeError("example-type",
                               where + ": example value for '" + p.name +
                                   "' does not match " + p.type.ToString(),
                               fn.span));
        }
      } catch (const ValueError &e) {
        out->push_back(MakeError("example-type", where + ": " + e.what(), fn.span));
      }
    }
  }
}

// Looks a class up either in the library or, for the class being checked,
// in the candidate itself.
const ClassDef *Lookup(const std::string &name, const ClassDef &candidate,
                       const Library &library) {
  if (name == candidate.name) return &candidate;
  return library.FindClass(name);
}

}  // namespace

Checked<std::vector<FunctionSignature>> ValidateClass(const ClassDef &cls,
                                                      const Library &library) {
  std::vector<Diagnostic> diags;
  std::set<std::string> own;
  for (const auto &fn : cls.functions) {
    if (!own.insert(fn.function_name).second) {
      diags.push_back(MakeError("duplicate-function",
                            "@" + cls.name + ": function '" +
                                fn.function_name + "' declared twice",
                            fn.span));
    }
    CheckFunction(cls, fn, library.units(), &diags);
  }

  // Ancestor walk with cycle detection. `stack` holds the current path.
  std::vector<std::string> stack;
  std::set<std::string> done;
  std::vector<const ClassDef *> ancestors;  // includes cls itself, first
  bool cyclic = false;
  std::function<void(const ClassDef &)> visit = [&](const ClassDef &c) {
    if (cyclic) return;
    stack.push_back(c.name);
    for (const auto &parent : c.extends) {
      if (std::find(stack.begin(), stack.end(), parent) != stack.end()) {
        std::string path;
        for (const auto &s : stack) path += "@" + s + " -> ";
        diags.push_back(MakeError("cyclic-inheritance",
                              "inheritance cycle: " + path + "@" + parent,
                              cls.span));
        cyclic = true;
        return;
      }
      if (done.count(parent)) continue;
      const ClassDef *p = Lookup(parent, cls, library);
      if (p == nullptr) {
        diags.push_back(MakeError("unknown-class",
                              "@" + c.name + " extends unknown class @" + parent,
                              c.span));
        continue;
      }
      visit(*p);
      if (cyclic) return;
    }
    stack.pop_back();
    if (done.insert(c.name).second) ancestors.push_back(&c);
  };
  visit(cls);
  if (cyclic || HasErrors(diags)) return diags;

  // Flatten. The same declaration reached along two paths (diamond) is
  // fine; two different declarations of one name are a collision.
  std::map<std::string, const FunctionSignature *> table;
  std::map<std::string, std::string> origin;
  for (const ClassDef *c : ancestors) {
    for (const auto &fn : c->functions) {
      auto it = table.find(fn.function_name);
      if (it == table.end()) {
        table[fn.function_name] = &fn;
        origin[fn.function_name] = c->name;
      } else if (origin[fn.function_name] != c->name) {
        diags.push_back(MakeError("duplicate-function",
                              "@" + cls.name + ": function '" +
                                  fn.function_name + "' inherited from both @" +
                                  origin[fn.function_name] + " and @" + c->name,
                              cls.span));
      }
    }
  }
  if (HasErrors(diags)) return diags;

  std::vector<FunctionSignature> flattened;
  for (const auto &[name, fn] : table) {
    FunctionSignature copy = *fn;
    copy.class_name = origin[name];
    flattened.push_back(std::move(copy));
  }
  return flattened;
}

Checked<Library> Library::Build(std::vector<ClassDef> classes,
                                const UnitTable &units) {
  Library lib;
  lib.units_ = units;
  std::vector<Diagnostic> diags;
  for (auto &c : classes) {
    if (lib.class_index_.count(c.name)) {
      diags.push_back(MakeError("duplicate-class",
                            "class @" + c.name + " declared twice", c.span));
      continue;
    }
    lib.class_index_[c.name] = lib.classes_.size();
    lib.classes_.push_back(std::move(c));
  }
  for (const auto &c : lib.classes_) {
    auto flat = ValidateClass(c, lib);
    if (!flat.ok()) {
      diags.insert(diags.end(), flat.diagnostics().begin(),
                   flat.diagnostics().end());
      continue;
    }
    for (const auto &fn : flat.value()) {
      for (const auto &p : fn.params) lib.parameter_names_[p.name]++;
    }
    lib.flattened_[c.name] = std::move(flat).value();
  }
  if (HasErrors(diags)) return diags;
  return lib;
}

const ClassDef *Library::FindClass(std::string_view name) const {
  auto it = class_index_.find(name);
  return it == class_index_.end() ? nullptr : &classes_[it->second];
}

const FunctionSignature *Library::FindFunction(const FunctionRef &ref) const {
  auto it = flattened_.find(ref.class_name);
  if (it == flattened_.end()) return nullptr;
  for (const auto &fn : it->second) {
    if (fn.function_name == ref.function_name) return &fn;
  }
  return nullptr;
}

Checked<FunctionSignature> Library::ResolveFunction(
    const FunctionRef &ref) const {
  if (FindClass(ref.class_name) == nullptr) {
    return std::vector<Diagnostic>{
        MakeError("unknown-class", "unknown class @" + ref.class_name, {})};
  }
  const FunctionSignature *fn = FindFunction(ref);
  if (fn == nullptr) {
    return std::vector<Diagnostic>{
        MakeError("unknown-function", "unknown function " + ref.Token(), {})};
  }
  return *fn;
}

const std::vector<FunctionSignature> &Library::FunctionsOf(
    std::string_view class_name) const {
  static const std::vector<FunctionSignature> kEmpty;
  auto it = flattened_.find(class_name);
  return it == flattened_.end() ? kEmpty : it->second;
}

bool Library::HasParameterName(std::string_view name) const {
  return parameter_names_.find(name) != parameter_names_.end();
}

}  // namespace vapl

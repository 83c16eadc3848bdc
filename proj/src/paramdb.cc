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

#include "vapl/paramdb.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <set>

#include "vapl/parser.h"

namespace vapl {

namespace {

std::vector<std::string> Words(std::string_view text, bool lower) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += lower ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                   : c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

void CollectTypes(const TypeExpr &t, std::vector<TypeExpr> *out) {
  if (t.kind() == TypeKind::kArray) return CollectTypes(t.element(), out);
  if (std::find(out->begin(), out->end(), t) == out->end()) out->push_back(t);
}

}  // namespace

std::optional<Value> ValueFromText(std::string_view raw, const TypeExpr &type,
                                   const UnitTable &units) {
  const std::string text = Trim(raw);
  if (text.empty()) return std::nullopt;
  switch (type.kind()) {
    case TypeKind::kString:
    case TypeKind::kPathName:
    case TypeKind::kUrl:
    case TypeKind::kPicture:
      return Value::String(Words(text, true));
    case TypeKind::kEntity:
      return Value::Entity(type.entity_type(), Words(text, true));
    case TypeKind::kNumber:
      if (auto n = ParseNumber(text)) return Value::Number(*n);
      return std::nullopt;
    case TypeKind::kMeasure: {
      try {
        std::string compact(text);
        std::erase_if(compact, [](char c) { return c == ' '; });
        Value v = ParseValueText(compact);
        if (v.kind() != ValueKind::kMeasure) return std::nullopt;
        if (TypeOfValue(v, units) != type) return std::nullopt;
        return v;
      } catch (const Error &) {
        return std::nullopt;
      }
    }
    case TypeKind::kDate: return Value::Date(text);
    case TypeKind::kTime: return Value::Time(text);
    case TypeKind::kLocation: return Value::Location(text);
    case TypeKind::kBoolean:
      if (text == "true") return Value::Boolean(true);
      if (text == "false") return Value::Boolean(false);
      return std::nullopt;
    case TypeKind::kEnum: {
      const auto &vals = type.enum_values();
      if (std::find(vals.begin(), vals.end(), text) == vals.end()) {
        return std::nullopt;
      }
      return Value::Enum(text);
    }
    case TypeKind::kCurrency:
    case TypeKind::kArray:
      return std::nullopt;
  }
  return std::nullopt;
}

ParamDb ParamDb::Load(const std::string &directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw IoError("parameter database '" + directory + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(directory, ec)) {
    if (entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  ParamDb db;
  for (const auto &path : files) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
      std::string t = Trim(line);
      if (t.empty() || t[0] == '#') continue;
      lines.push_back(std::move(t));
    }
    if (lines.empty()) throw IoError(path.string() + ": empty value list");
    db.Add(path.stem().string(), std::move(lines));
  }
  return db;
}

void ParamDb::Add(const std::string &key, std::vector<std::string> lines) {
  auto &list = lists_[key];
  list.insert(list.end(), std::make_move_iterator(lines.begin()),
              std::make_move_iterator(lines.end()));
}

const std::vector<std::string> *ParamDb::Find(std::string_view key) const {
  auto it = lists_.find(key);
  return it == lists_.end() ? nullptr : &it->second;
}

std::vector<Diagnostic> ParamDb::Validate(const Library &library) const {
  std::vector<TypeExpr> types;
  for (const auto &cls : library.classes()) {
    for (const auto &fn : library.FunctionsOf(cls.name)) {
      for (const auto &p : fn.params) CollectTypes(p.type, &types);
    }
  }
  std::vector<Diagnostic> out;
  for (const auto &t : types) {
    if (t.kind() == TypeKind::kEnum) continue;
    const auto *list = Find(t.Key());
    if (!list) continue;
    for (const auto &line : *list) {
      if (!ValueFromText(line, t, library.units())) {
        out.push_back(MakeError("paramdb-value", t.Key() + ": '" + line +
                                                     "' is not a " +
                                                     t.ToString()));
      }
    }
  }
  return out;
}

std::optional<Value> ParamDb::Draw(std::string_view param, const TypeExpr &type,
                                   const std::vector<Value> &examples,
                                   std::mt19937_64 &rng) const {
  auto pick_line = [&](const std::vector<std::string> &list) {
    return list[std::uniform_int_distribution<size_t>(0, list.size() - 1)(rng)];
  };
  // Parameter-specific values: declared examples plus the named list.
  const auto *own = Find(param);
  const size_t own_size = (own ? own->size() : 0) + examples.size();
  if (own_size > 0) {
    size_t i = std::uniform_int_distribution<size_t>(0, own_size - 1)(rng);
    if (i < examples.size()) return examples[i];
    if (auto v = ValueFromText((*own)[i - examples.size()], type)) return v;
  }
  if (type.kind() != TypeKind::kEnum) {
    if (const auto *list = Find(type.Key())) {
      if (auto v = ValueFromText(pick_line(*list), type)) return v;
    }
  }
  if (type.kind() == TypeKind::kString || type.kind() == TypeKind::kEntity) {
    if (const auto *corpus = Find("corpus")) {
      // One to three consecutive words of a corpus line.
      std::istringstream line(pick_line(*corpus));
      std::vector<std::string> words{std::istream_iterator<std::string>(line), {}};
      if (!words.empty()) {
        const size_t n = std::min<size_t>(
            words.size(), std::uniform_int_distribution<size_t>(1, 3)(rng));
        const size_t start =
            std::uniform_int_distribution<size_t>(0, words.size() - n)(rng);
        std::string text;
        for (size_t i = start; i < start + n; ++i) text += words[i] + " ";
        if (auto v = ValueFromText(text, type)) return v;
      }
    }
  }
  if (type.kind() == TypeKind::kEnum) {
    const auto &vals = type.enum_values();
    return Value::Enum(
        vals[std::uniform_int_distribution<size_t>(0, vals.size() - 1)(rng)]);
  }
  if (type.kind() == TypeKind::kBoolean) {
    return Value::Boolean(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
  }
  return std::nullopt;
}

bool ParamDb::HasValues(std::string_view param, const TypeExpr &type,
                        const std::vector<Value> &examples) const {
  if (!examples.empty() || Find(param)) return true;
  switch (type.kind()) {
    case TypeKind::kEnum:
    case TypeKind::kBoolean:
      return true;
    case TypeKind::kString:
    case TypeKind::kEntity:
      if (Find("corpus")) return true;
      break;
    default:
      break;
  }
  return Find(type.Key()) != nullptr;
}

std::vector<Value> ExampleValues(const Library &library, std::string_view param,
                                 const TypeExpr &type) {
  std::vector<Value> out;
  for (const auto &cls : library.classes()) {
    for (const auto &fn : library.FunctionsOf(cls.name)) {
      const ParamDecl *p = fn.FindParam(param);
      if (!p || p->type != type) continue;
      for (const auto &v : p->example_values) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
    }
  }
  return out;
}

std::string ParamDbPath(const std::string &fallback) {
  const char *env = std::getenv("VAPL_PARAMDB");
  return env && *env ? std::string(env) : fallback;
}

}  // namespace vapl

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

// Parameter value lists used to instantiate template placeholders and to
// re-draw values during parameter expansion.
//
// A database is a directory of text files holding one value per line. The
// file name (without `.txt`) is either a parameter name (`status.txt`) or a
// type key (`String.txt`, `Entity_tt_username.txt`, `Measure_byte.txt`);
// `corpus.txt` is free text used for string-like types when nothing more
// specific exists. Lines starting with '#' are ignored.

#ifndef VAPL_PARAMDB_H_
#define VAPL_PARAMDB_H_

#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "vapl/error.h"
#include "vapl/library.h"
#include "vapl/types.h"
#include "vapl/value.h"

namespace vapl {

class ParamDb {
 public:
  ParamDb() = default;

  // Throws IoError when the directory is missing or a file is empty.
  static ParamDb Load(const std::string &directory);

  void Add(const std::string &key, std::vector<std::string> lines);
  const std::vector<std::string> *Find(std::string_view key) const;
  const std::map<std::string, std::vector<std::string>, std::less<>> &lists()
      const {
    return lists_;
  }

  // Checks that every line of every type-keyed list parses as a value of
  // that type, for the types the library uses.
  std::vector<Diagnostic> Validate(const Library &library) const;

  // Draws one value for a parameter: the parameter's own list (plus its
  // declared example values), then the list for its type, then free text
  // for string-like types, then the enum or boolean domain. nullopt when
  // nothing fits.
  std::optional<Value> Draw(std::string_view param, const TypeExpr &type,
                            const std::vector<Value> &examples,
                            std::mt19937_64 &rng) const;

  // Whether Draw can ever succeed.
  bool HasValues(std::string_view param, const TypeExpr &type,
                 const std::vector<Value> &examples) const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> lists_;
};

// Parses one database line as a value of `type`; nullopt when it does not
// fit. String-like text is lowercased.
std::optional<Value> ValueFromText(std::string_view text, const TypeExpr &type,
                                   const UnitTable &units = UnitTable::Default());

// Declared example values of every library parameter with this name and
// type.
std::vector<Value> ExampleValues(const Library &library, std::string_view param,
                                 const TypeExpr &type);

// Directory named by $VAPL_PARAMDB, or `fallback` when unset.
std::string ParamDbPath(const std::string &fallback);

}  // namespace vapl

#endif  // VAPL_PARAMDB_H_

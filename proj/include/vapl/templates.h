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

// Natural-language templates: primitive templates pair an utterance with a
// program fragment of one skill; construct templates combine derivations
// of other categories with a guarded semantic combinator.
//
//   NP := "files in my Dropbox folder $x"
//         -> lambda(x : PathName) -> @com.dropbox.list_folder(folder_name = x);
//   WP := 'when' q:NP 'change' | 'changes' if is_monitorable(q)
//         -> monitor(q);
//   COMMAND := s:WP ',' a:VP -> rule(s, a);
//   COMMAND := a:VP[q:NP] -> rule(now, q, a);
//   WP := !turk 'in case of changes in' q:NP if is_monitorable(q)
//         -> monitor(q);
//
// Statements end with ';' and `//` starts a comment. Flags follow ':=':
// `?name` keeps the template only when the flag is enabled, `!name` drops
// it when the flag is enabled. Alternatives of adjacent literals are
// written 'a' | 'b' and expand to one template each.
//
// A variable written `a:VP[q:NP]` is the parameter-rule form: the first
// placeholder of `a` that some output of `q` can fill is replaced by the
// sentence of `q` and bound to that output. `a:VP[s]` refers to another
// rhs variable instead and renders the output as "the <name>".

#ifndef VAPL_TEMPLATES_H_
#define VAPL_TEMPLATES_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vapl/ast.h"
#include "vapl/error.h"
#include "vapl/library.h"
#include "vapl/typecheck.h"

namespace vapl {

enum class FragmentKind {
  kStream,
  kQuery,
  kAction,
  kProgram,
  kPredicate,
  kParam,  // an output parameter name, for projection and aggregation
};

std::string_view FragmentKindName(FragmentKind kind);

struct Fragment {
  FragmentKind kind = FragmentKind::kQuery;
  StreamPtr stream;
  QueryPtr query;
  Action action;
  Program program;
  PredicatePtr predicate;
  OutputInfo param;

  static Fragment OfStream(StreamPtr s);
  static Fragment OfQuery(QueryPtr q);
  static Fragment OfAction(Action a);
  static Fragment OfProgram(Program p);
  static Fragment OfPredicate(PredicatePtr p);
  static Fragment OfParam(OutputInfo p);

  // Human-readable rendering, unique per structure.
  std::string ToString() const;
  // The smallest complete program containing the fragment, used for
  // checking: `s => notify`, `now => q => notify`, `now => a`. Predicates
  // and parameters have none.
  std::optional<Program> AsProgram() const;
  Fragment Rewritten(const Rewriter &rewriter) const;
};

// Parameter categories derived from the library; every output parameter
// becomes a template whose utterance is its name with underscores as
// spaces.
inline constexpr std::string_view kParamCategories[] = {
    "PARAM", "PARAM_NUMERIC", "PARAM_STRING", "PARAM_ARRAY"};
bool IsParamCategory(std::string_view category);
bool InParamCategory(std::string_view category, const TypeExpr &type);

struct TemplateParam {
  std::string name;
  TypeExpr type;
};

struct TemplateFlags {
  std::set<std::string> required;   // ?name
  std::set<std::string> forbidden;  // !name

  bool Enabled(const std::set<std::string> &enabled) const;
};

struct PrimitiveTemplate {
  std::string category;
  std::vector<std::string> utterance;  // placeholders are "$name" tokens
  std::vector<TemplateParam> params;
  Fragment body;  // typechecked, required inputs filled with $?
  TemplateFlags flags;
  Span span;
};

struct RhsItem {
  enum class Kind { kLiteral, kVariable, kPlaceholder };
  Kind kind = Kind::kLiteral;
  std::string text;      // literal words, variable or placeholder name
  std::string category;  // kVariable
  // Parameter passing into this variable's first fillable placeholder.
  std::string fill_from;           // source variable
  std::string fill_from_category;  // set when the source is inline
};

// `name(args...)` or a bare name.
struct BuildExpr {
  std::string name;
  std::vector<BuildExpr> args;
  bool call = false;

  std::string ToString() const;
};

struct GuardCall {
  std::string name;
  bool negated = false;
  std::vector<std::string> args;
};

struct ConstructTemplate {
  std::string lhs;
  std::vector<RhsItem> rhs;
  std::vector<GuardCall> guards;
  BuildExpr build;
  TemplateFlags flags;
  Span span;

  // Variables in rhs order, inline fill sources included.
  std::vector<std::pair<std::string, std::string>> Variables() const;
  // "WP := 'when' q:NP 'change'"
  std::string Label() const;
};

struct TemplateSet {
  std::vector<PrimitiveTemplate> primitives;
  std::vector<ConstructTemplate> constructs;
  std::string root = "COMMAND";

  std::set<std::string> Categories() const;
};

// Parses and validates a template file. Reports placeholder/parameter
// mismatches, unknown categories, guards and combinators, unknown
// functions and ill-typed bodies as diagnostics; syntax errors are also
// returned as diagnostics with their position.
Checked<TemplateSet> ParseTemplates(std::string_view text,
                                    const Library &library);
// Concatenates several files. Throws IoError for unreadable files.
Checked<TemplateSet> LoadTemplates(const std::vector<std::string> &paths,
                                   const Library &library);

}  // namespace vapl

#endif  // VAPL_TEMPLATES_H_

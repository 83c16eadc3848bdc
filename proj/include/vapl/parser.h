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

// Parsers for the human-readable program syntax and for class files.
//
//   program   := stream "=>" [query "=>"] action [";"]
//   stream    := "now" | "attimer" "time" "=" value
//              | "timer" "base" "=" value "interval" "=" value
//              | "monitor" query ["on" "new" name {"," name}]
//              | "edge" stream "on" predicate | "(" stream ")"
//   query     := primary {"filter" predicate | "join" primary ["on" passing]}
//   primary   := invocation | "(" query ")"
//              | "agg" op [param] "of" primary
//   action    := "notify" | invocation
//   predicate := "true" | "false" | "!" p | p "&&" p | p "||" p | "(" p ")"
//              | param operator value | invocation "{" predicate "}"

#ifndef VAPL_PARSER_H_
#define VAPL_PARSER_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vapl/ast.h"
#include "vapl/lexer.h"
#include "vapl/library.h"
#include "vapl/types.h"
#include "vapl/units.h"
#include "vapl/value.h"

namespace vapl {

struct ParseOptions {
  // Bare identifiers with these names parse as placeholders. Template
  // bodies use this for their lambda parameters.
  std::set<std::string, std::less<>> placeholders;
};

// Recursive-descent parser over a token vector. Exposed so that other
// grammars (templates) can embed program fragments.
class ProgramParser {
 public:
  ProgramParser(const std::vector<Token> *tokens, size_t pos,
                ParseOptions options = {});

  Program ParseProgram();
  StreamPtr ParseStream();
  QueryPtr ParseQuery();
  Action ParseAction();
  PredicatePtr ParsePredicate();
  Invocation ParseInvocation();
  // In predicate context a bare identifier is an enum value.
  Value ParseValue();
  std::vector<Binding> ParseOnBindings();

  size_t pos() const { return pos_; }
  void set_pos(size_t pos) { pos_ = pos; }
  const Token &Peek(size_t k = 0) const;
  const Token &Next();
  bool AtEnd() const { return Peek().kind == TokenKind::kEnd; }
  bool AcceptPunct(std::string_view p);
  bool AcceptIdent(std::string_view id);
  void ExpectPunct(std::string_view p);
  void ExpectIdent(std::string_view id);
  std::string ExpectName();
  [[noreturn]] void Fail(const std::string &message) const;

 private:
  QueryPtr ParseQueryPrimary();
  PredicatePtr ParseOr();
  PredicatePtr ParseAnd();
  PredicatePtr ParseUnary();
  std::vector<Binding> ParseBindings();
  Value ParseMeasureRest(MeasureTerm first);
  bool StartsStream() const;

  const std::vector<Token> *tokens_;
  size_t pos_;
  ParseOptions options_;
};

// Parses one complete program. Throws SyntaxError.
Program ParseProgram(std::string_view text, const ParseOptions &options = {});
QueryPtr ParseQueryText(std::string_view text,
                        const ParseOptions &options = {});
PredicatePtr ParsePredicateText(std::string_view text,
                                const ParseOptions &options = {});
Value ParseValueText(std::string_view text);

// Parses a type written as in class files: String, Enum(a, b),
// Measure(byte), Entity(tt:username), Array(String), ...
// Throws SyntaxError.
TypeExpr ParseTypeText(std::string_view text);
// Parses a type at the parser's position.
TypeExpr ParseType(ProgramParser &parser);

struct ClassFile {
  std::vector<ClassDef> classes;
  std::vector<UnitInfo> units;
};

// Parses a `.vapl` class file:
//
//   #[description = "..."]
//   class @com.example extends @com.base {
//     monitorable list query f(in req a : String, out b : Number);
//     action g(in opt c : Enum(x, y) examples [enum:x]);
//   }
//   unit furlong : length = 201.168;
//
// Throws SyntaxError with line and column.
ClassFile ParseClassFile(std::string_view text);

// Reads and parses every file, merges unit declarations into the default
// table and builds the library. Throws IoError or SyntaxError; semantic
// problems come back as diagnostics.
Checked<Library> LoadLibrary(const std::vector<std::string> &paths);
Checked<Library> LoadLibraryFromText(std::string_view text);

std::string ReadFile(const std::string &path);

}  // namespace vapl

#endif  // VAPL_PARSER_H_

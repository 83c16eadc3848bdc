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

// Token-sequence form of programs, as consumed and produced by a semantic
// parser. Every token is whitespace-free and user identifiers carry a
// prefix: functions `@cn.fn`, parameters `param:name:Type`, enum values
// `enum:v`, units `unit:u`. Strings are a `"` token, one token per word and
// a closing `"` (or `"^^entity:type` for entities).
//
//   now => @com.gmail.inbox filter param:sender:String == " alice " => notify

#ifndef VAPL_NN_SYNTAX_H_
#define VAPL_NN_SYNTAX_H_

#include <string>
#include <string_view>
#include <vector>

#include "vapl/ast.h"
#include "vapl/library.h"

namespace vapl {

struct EmitOptions {
  // Append `:Type` to parameter tokens when the type is known.
  bool type_annotations = true;
};

std::vector<std::string> EmitNn(const Program &program,
                                const EmitOptions &options = {});
std::vector<std::string> EmitNnPredicate(const Predicate &predicate,
                                         const EmitOptions &options = {});
std::vector<std::string> EmitNnValue(const Value &value);

// Rejects unknown functions and parameters and malformed token
// sequences with SyntaxError (column = 1-based token index). Accepts
// parameter tokens with or without type annotations.
Program ParseNn(const std::vector<std::string> &tokens,
                const Library &library);

std::string JoinTokens(const std::vector<std::string> &tokens);
std::vector<std::string> SplitTokens(std::string_view text);

enum class TokenClass { kFunction, kParameter, kEnum, kValue, kKeyword };

std::string_view TokenClassName(TokenClass c);
// Classifies one token by its prefix alone.
TokenClass ClassifyToken(std::string_view token);
// Classifies a whole sequence; words between quote tokens are values.
std::vector<TokenClass> ClassifyTokens(const std::vector<std::string> &tokens);

}  // namespace vapl

#endif  // VAPL_NN_SYNTAX_H_

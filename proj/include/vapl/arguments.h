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

// Rule-based argument identification: literals in a sentence (numbers,
// dates, times, durations, currency amounts, URLs, emails, phone numbers,
// hashtags, usernames) are replaced by named-constant tokens numbered per
// kind in reading order.
//
//   "set the temperature to 25 C" -> set the temperature to NUMBER_0 c
//
// Existing named-constant tokens pass through unchanged, so the operation
// is idempotent.

#ifndef VAPL_ARGUMENTS_H_
#define VAPL_ARGUMENTS_H_

#include <string>
#include <string_view>
#include <vector>

#include "vapl/ast.h"
#include "vapl/types.h"
#include "vapl/value.h"

namespace vapl {

struct NamedConstant {
  NamedConstKind kind = NamedConstKind::kNumber;
  int index = 0;
  std::string surface;  // text as it appeared in the sentence
  Value value;
};

struct IdentifiedSentence {
  std::vector<std::string> tokens;
  std::vector<NamedConstant> constants;  // reading order

  const NamedConstant *Find(NamedConstKind kind, int index) const;
};

// Lowercases and splits on whitespace, detaching leading and trailing
// punctuation. No argument detection.
std::vector<std::string> TokenizeSentence(std::string_view text);

IdentifiedSentence IdentifyArguments(std::string_view text);

// Replaces every literal of the program that equals an identified
// constant with that constant (for measures, the magnitude).
Program AssignNamedConstants(const Program &program,
                             const std::vector<NamedConstant> &constants);

// Surface words of a value as written in a sentence: `@bob` for usernames,
// `#tag` for hashtags, `2 hours` for durations, `25 C` for measures.
std::vector<std::string> RenderValueWords(const Value &value);

// Joins tokens with spaces, attaching , . ? ! to the preceding word.
std::string Detokenize(const std::vector<std::string> &tokens);

}  // namespace vapl

#endif  // VAPL_ARGUMENTS_H_

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

// Shared tokenizer for class files, human-readable programs and template
// files.

#ifndef VAPL_LEXER_H_
#define VAPL_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "vapl/error.h"

namespace vapl {

enum class TokenKind {
  kIdent,     // foo_bar, NUMBER_0
  kFunction,  // @com.dropbox.list_folder (text without the @)
  kString,    // "..." or '...' (unescaped; `suffix` is "'" for the latter)
  kNumber,    // 60, -1.5e3; `suffix` holds an attached unit such as F
  kDollar,    // $x or $? (text without the $)
  kPunct,     // => == && || ^^ := -> and single characters
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  std::string suffix;
  Span span;
  bool space_before = false;

  bool Is(TokenKind k, std::string_view t) const {
    return kind == k && text == t;
  }
  bool IsPunct(std::string_view t) const { return Is(TokenKind::kPunct, t); }
  bool IsIdent(std::string_view t) const { return Is(TokenKind::kIdent, t); }
  std::string Describe() const;
};

// Throws SyntaxError on malformed input. The result always ends with a
// kEnd token.
std::vector<Token> Lex(std::string_view text);

}  // namespace vapl

#endif  // VAPL_LEXER_H_

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

#include "vapl/lexer.h"

#include <array>
#include <cctype>

namespace vapl {

namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

constexpr std::array<std::string_view, 8> kTwoCharPunct = {
    "=>", "==", "&&", "||", "^^", ":=", "->", "$?"};

constexpr std::string_view kSingleCharPunct = "(){}[],;=<>!+:?|#.*/-";

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    for (;;) {
      bool space = SkipSpaceAndComments();
      Token tok;
      tok.span = Span{line_, column_};
      tok.space_before = space || out.empty();
      if (pos_ >= text_.size()) {
        tok.kind = TokenKind::kEnd;
        out.push_back(std::move(tok));
        return out;
      }
      LexOne(&tok);
      out.push_back(std::move(tok));
    }
  }

 private:
  char Peek(size_t k = 0) const {
    return pos_ + k < text_.size() ? text_[pos_ + k] : '\0';
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  [[noreturn]] void Fail(const std::string &message) const {
    throw SyntaxError(message, Span{line_, column_});
  }

  bool SkipSpaceAndComments() {
    bool skipped = false;
    while (pos_ < text_.size()) {
      if (IsSpace(Peek())) {
        Advance();
      } else if (Peek() == '/' && Peek(1) == '/') {
        while (pos_ < text_.size() && Peek() != '\n') Advance();
      } else if (Peek() == '/' && Peek(1) == '*') {
        Span start{line_, column_};
        Advance();
        Advance();
        while (pos_ < text_.size() && !(Peek() == '*' && Peek(1) == '/')) {
          Advance();
        }
        if (pos_ >= text_.size()) {
          throw SyntaxError("unterminated comment", start);
        }
        Advance();
        Advance();
      } else {
        break;
      }
      skipped = true;
    }
    return skipped;
  }

  void LexOne(Token *tok) {
    const char c = Peek();
    if (c == '"' || c == '\'') return LexString(tok);
    if (c == '@') return LexFunction(tok);
    if (c == '$' && Peek(1) != '?') return LexDollar(tok);
    if (IsDigit(c) || (c == '-' && (IsDigit(Peek(1)) ||
                                    (Peek(1) == '.' && IsDigit(Peek(2)))))) {
      return LexNumber(tok);
    }
    if (c == '.' && IsDigit(Peek(1))) return LexNumber(tok);
    if (IsIdentStart(c)) return LexIdent(tok);
    for (auto p : kTwoCharPunct) {
      if (c == p[0] && Peek(1) == p[1]) {
        tok->kind = p == "$?" ? TokenKind::kDollar : TokenKind::kPunct;
        tok->text = p == "$?" ? "?" : std::string(p);
        Advance();
        Advance();
        return;
      }
    }
    if (kSingleCharPunct.find(c) != std::string_view::npos) {
      tok->kind = TokenKind::kPunct;
      tok->text = std::string(1, c);
      Advance();
      return;
    }
    Fail(std::string("unexpected character '") + c + "'");
  }

  void LexString(Token *tok) {
    tok->kind = TokenKind::kString;
    const char quote = Peek();
    if (quote == '\'') tok->suffix = "'";
    Advance();
    for (;;) {
      if (pos_ >= text_.size() || Peek() == '\n') {
        throw SyntaxError("unterminated string", tok->span);
      }
      char c = Peek();
      if (c == quote) {
        Advance();
        return;
      }
      if (c == '\\') {
        Advance();
        if (pos_ >= text_.size()) Fail("unterminated string");
        c = Peek();
        if (c == 'n') c = '\n';
        else if (c == 't') c = '\t';
      }
      tok->text.push_back(c);
      Advance();
    }
  }

  void LexFunction(Token *tok) {
    tok->kind = TokenKind::kFunction;
    Advance();
    if (!IsIdentStart(Peek())) Fail("expected a name after '@'");
    while (IsIdentChar(Peek()) || (Peek() == '.' && IsIdentStart(Peek(1)))) {
      tok->text.push_back(Peek());
      Advance();
    }
  }

  void LexDollar(Token *tok) {
    tok->kind = TokenKind::kDollar;
    Advance();
    if (!IsIdentStart(Peek())) Fail("expected a name after '$'");
    while (IsIdentChar(Peek())) {
      tok->text.push_back(Peek());
      Advance();
    }
  }

  void LexNumber(Token *tok) {
    tok->kind = TokenKind::kNumber;
    auto take = [&] {
      tok->text.push_back(Peek());
      Advance();
    };
    if (Peek() == '-') take();
    while (IsDigit(Peek())) take();
    if (Peek() == '.' && IsDigit(Peek(1))) {
      take();
      while (IsDigit(Peek())) take();
    }
    if ((Peek() == 'e' || Peek() == 'E') &&
        (IsDigit(Peek(1)) ||
         ((Peek(1) == '+' || Peek(1) == '-') && IsDigit(Peek(2))))) {
      take();
      take();
      while (IsDigit(Peek())) take();
    }
    while (IsIdentChar(Peek())) {
      tok->suffix.push_back(Peek());
      Advance();
    }
  }

  void LexIdent(Token *tok) {
    tok->kind = TokenKind::kIdent;
    while (IsIdentChar(Peek())) {
      tok->text.push_back(Peek());
      Advance();
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::string Token::Describe() const {
  switch (kind) {
    case TokenKind::kEnd: return "end of input";
    case TokenKind::kString: return "string \"" + text + "\"";
    case TokenKind::kFunction: return "'@" + text + "'";
    case TokenKind::kDollar: return "'$" + text + "'";
    case TokenKind::kNumber: return "'" + text + suffix + "'";
    default: return "'" + text + "'";
  }
}

std::vector<Token> Lex(std::string_view text) { return Lexer(text).Run(); }

}  // namespace vapl

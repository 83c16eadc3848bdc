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

#include "vapl/arguments.h"

#include <array>
#include <cctype>
#include <map>

namespace vapl {

namespace {

bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!IsDigit(c)) return false;
  }
  return true;
}

bool IsPunctuation(char c) {
  return std::string_view(",.!?;:()\"'").find(c) != std::string_view::npos;
}

constexpr std::array<std::pair<std::string_view, std::string_view>, 22>
    kDurationWords = {{
        {"ms", "ms"},         {"millisecond", "ms"}, {"milliseconds", "ms"},
        {"second", "s"},      {"seconds", "s"},      {"sec", "s"},
        {"minute", "min"},    {"minutes", "min"},    {"min", "min"},
        {"hour", "h"},        {"hours", "h"},        {"h", "h"},
        {"day", "day"},       {"days", "day"},       {"week", "week"},
        {"weeks", "week"},    {"month", "mon"},      {"months", "mon"},
        {"year", "year"},     {"years", "year"},     {"hr", "h"},
        {"hrs", "h"},
    }};

std::optional<std::string> DurationUnit(std::string_view word) {
  for (const auto &[w, u] : kDurationWords) {
    if (w == word) return std::string(u);
  }
  return std::nullopt;
}

std::string_view DurationWord(const std::string &unit, bool plural) {
  static const std::map<std::string, std::pair<std::string_view,
                                               std::string_view>>
      kWords = {{"ms", {"millisecond", "milliseconds"}},
                {"s", {"second", "seconds"}},
                {"min", {"minute", "minutes"}},
                {"h", {"hour", "hours"}},
                {"day", {"day", "days"}},
                {"week", {"week", "weeks"}},
                {"mon", {"month", "months"}},
                {"year", {"year", "years"}}};
  auto it = kWords.find(unit);
  if (it == kWords.end()) return {};
  return plural ? it->second.second : it->second.first;
}

bool IsDurationUnit(const std::string &unit) {
  return !DurationWord(unit, false).empty();
}

// h:mm or hh:mm with hours < 24.
std::optional<std::pair<int, int>> ClockTime(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon > 2) {
    return std::nullopt;
  }
  std::string_view h = s.substr(0, colon), m = s.substr(colon + 1);
  if (!AllDigits(h) || m.size() != 2 || !AllDigits(m)) return std::nullopt;
  int hh = std::stoi(std::string(h)), mm = std::stoi(std::string(m));
  if (hh > 23 || mm > 59) return std::nullopt;
  return std::make_pair(hh, mm);
}

std::string FormatTime(int h, int m) {
  std::string mm = std::to_string(m);
  if (mm.size() < 2) mm = "0" + mm;
  return std::to_string(h) + ":" + mm;
}

bool IsIsoDate(std::string_view s) {
  return s.size() == 10 && AllDigits(s.substr(0, 4)) && s[4] == '-' &&
         AllDigits(s.substr(5, 2)) && s[7] == '-' && AllDigits(s.substr(8, 2));
}

bool IsUrl(std::string_view s) {
  return (s.rfind("http://", 0) == 0 && s.size() > 7) ||
         (s.rfind("https://", 0) == 0 && s.size() > 8) ||
         (s.rfind("www.", 0) == 0 && s.size() > 4);
}

bool IsEmail(std::string_view s) {
  auto at = s.find('@');
  if (at == std::string_view::npos || at == 0) return false;
  auto dot = s.find('.', at);
  return dot != std::string_view::npos && dot > at + 1 && dot + 1 < s.size();
}

bool IsPhone(std::string_view s) {
  if (s.size() > 1 && s[0] == '+') return s.size() >= 8 && AllDigits(s.substr(1));
  // ddd-ddd-dddd
  return s.size() == 12 && AllDigits(s.substr(0, 3)) && s[3] == '-' &&
         AllDigits(s.substr(4, 3)) && s[7] == '-' && AllDigits(s.substr(8));
}

bool IsHandle(std::string_view s, char sigil) {
  if (s.size() < 2 || s[0] != sigil) return false;
  for (char c : s.substr(1)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

}  // namespace

const NamedConstant *IdentifiedSentence::Find(NamedConstKind kind,
                                              int index) const {
  for (const auto &c : constants) {
    if (c.kind == kind && c.index == index) return &c;
  }
  return nullptr;
}

std::vector<std::string> TokenizeSentence(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j == i) break;
    std::string word(text.substr(i, j - i));
    i = j;
    std::vector<std::string> head, tail;
    while (word.size() > 1 && IsPunctuation(word.front())) {
      head.push_back(std::string(1, word.front()));
      word.erase(word.begin());
    }
    while (word.size() > 1 && IsPunctuation(word.back())) {
      tail.insert(tail.begin(), std::string(1, word.back()));
      word.pop_back();
    }
    if (!ParseNamedConstToken(word)) {
      for (char &c : word) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    out.insert(out.end(), head.begin(), head.end());
    out.push_back(std::move(word));
    out.insert(out.end(), tail.begin(), tail.end());
  }
  return out;
}

namespace {

// "5pm", "7:30am".
std::optional<std::string> AttachedMeridiem(const std::string &w) {
  if (w.size() < 3) return std::nullopt;
  const std::string suffix = w.substr(w.size() - 2);
  if (suffix != "am" && suffix != "pm") return std::nullopt;
  const std::string head = w.substr(0, w.size() - 2);
  int h, m = 0;
  if (auto clock = ClockTime(head)) {
    h = clock->first;
    m = clock->second;
  } else if (AllDigits(head) && head.size() <= 2) {
    h = std::stoi(head);
  } else {
    return std::nullopt;
  }
  if (h < 1 || h > 12) return std::nullopt;
  h = h % 12 + (suffix == "pm" ? 12 : 0);
  return FormatTime(h, m);
}

}  // namespace

IdentifiedSentence IdentifyArguments(std::string_view text) {
  const std::vector<std::string> words = TokenizeSentence(text);
  IdentifiedSentence out;
  std::map<NamedConstKind, int> next;
  // Indices already taken by constants present in the input.
  for (const auto &w : words) {
    if (auto named = ParseNamedConstToken(w)) {
      int &n = next[named->first];
      n = std::max(n, named->second + 1);
    }
  }
  auto emit = [&](NamedConstKind kind, std::string surface, Value value) {
    int index = next[kind]++;
    out.tokens.push_back(NamedConstToken(kind, index));
    out.constants.push_back({kind, index, std::move(surface), std::move(value)});
  };
  for (size_t i = 0; i < words.size(); ++i) {
    const std::string &w = words[i];
    const std::string next_word = i + 1 < words.size() ? words[i + 1] : "";
    if (ParseNamedConstToken(w)) {
      out.tokens.push_back(w);
      continue;
    }
    if (IsUrl(w)) {
      emit(NamedConstKind::kUrl, w, Value::String({w}));
    } else if (IsEmail(w) && w[0] != '@') {
      emit(NamedConstKind::kEmail, w, Value::Entity("tt:email_address", {w}));
    } else if (IsHandle(w, '@')) {
      emit(NamedConstKind::kUsername, w,
           Value::Entity("tt:username", {w.substr(1)}));
    } else if (IsHandle(w, '#')) {
      emit(NamedConstKind::kHashtag, w,
           Value::Entity("tt:hashtag", {w.substr(1)}));
    } else if (IsPhone(w)) {
      emit(NamedConstKind::kPhone, w, Value::Entity("tt:phone_number", {w}));
    } else if (IsIsoDate(w)) {
      emit(NamedConstKind::kDate, w, Value::Date(w));
    } else if (auto attached = AttachedMeridiem(w)) {
      emit(NamedConstKind::kTime, w, Value::Time(*attached));
    } else if (auto clock = ClockTime(w)) {
      int h = clock->first;
      std::string surface = w;
      if ((next_word == "pm" || next_word == "am") && h >= 1 && h <= 12) {
        if (next_word == "pm" && h < 12) h += 12;
        if (next_word == "am" && h == 12) h = 0;
        surface += " " + next_word;
        ++i;
      }
      emit(NamedConstKind::kTime, surface, Value::Time(FormatTime(h, clock->second)));
    } else if (w.size() > 1 && w[0] == '$' && ParseNumber(w.substr(1))) {
      emit(NamedConstKind::kCurrency, w, Value::Number(*ParseNumber(w.substr(1))));
    } else if (auto n = ParseNumber(w)) {
      if ((next_word == "pm" || next_word == "am") && AllDigits(w) && *n >= 1 &&
          *n <= 12) {
        int h = static_cast<int>(*n) % 12 + (next_word == "pm" ? 12 : 0);
        emit(NamedConstKind::kTime, w + " " + next_word,
             Value::Time(FormatTime(h, 0)));
        ++i;
      } else if (auto unit = DurationUnit(next_word)) {
        emit(NamedConstKind::kDuration, w + " " + next_word,
             Value::Measure({MeasureTerm{*n, -1, *unit}}));
        ++i;
      } else if (next_word == "dollars" || next_word == "usd") {
        emit(NamedConstKind::kCurrency, w + " " + next_word, Value::Number(*n));
        ++i;
      } else {
        emit(NamedConstKind::kNumber, w, Value::Number(*n));
      }
    } else {
      out.tokens.push_back(w);
    }
  }
  return out;
}

Program AssignNamedConstants(const Program &program,
                             const std::vector<NamedConstant> &constants) {
  if (constants.empty()) return program;
  auto find = [&](NamedConstKind kind, const Value &v) -> const NamedConstant * {
    for (const auto &c : constants) {
      if (c.kind == kind && c.value == v) return &c;
    }
    return nullptr;
  };
  Rewriter rw;
  rw.value = [&](const Value &v, std::string_view) -> Value {
    switch (v.kind()) {
      case ValueKind::kNumber:
        if (auto *c = find(NamedConstKind::kNumber, v)) {
          return Value::NamedConst(c->kind, c->index);
        }
        return v;
      case ValueKind::kMeasure: {
        if (v.terms().size() == 1 && IsDurationUnit(v.terms()[0].unit)) {
          if (auto *c = find(NamedConstKind::kDuration, v)) {
            return Value::NamedConst(c->kind, c->index);
          }
        }
        std::vector<MeasureTerm> terms = v.terms();
        for (auto &t : terms) {
          if (t.is_constant()) continue;
          if (auto *c = find(NamedConstKind::kNumber, Value::Number(t.magnitude))) {
            t.constant = c->index;
            t.magnitude = 0;
          }
        }
        return Value::Measure(std::move(terms));
      }
      case ValueKind::kDate:
        if (auto *c = find(NamedConstKind::kDate, v)) {
          return Value::NamedConst(c->kind, c->index);
        }
        return v;
      case ValueKind::kTime: {
        Value norm = v;
        if (auto clock = ClockTime(v.text())) {
          norm = Value::Time(FormatTime(clock->first, clock->second));
        }
        if (auto *c = find(NamedConstKind::kTime, norm)) {
          return Value::NamedConst(c->kind, c->index);
        }
        return v;
      }
      case ValueKind::kString:
        if (auto *c = find(NamedConstKind::kUrl, v)) {
          return Value::NamedConst(c->kind, c->index);
        }
        return v;
      case ValueKind::kEntity: {
        const std::string &t = v.entity_type();
        NamedConstKind kind;
        if (t == "tt:email_address") kind = NamedConstKind::kEmail;
        else if (t == "tt:phone_number") kind = NamedConstKind::kPhone;
        else if (t == "tt:hashtag") kind = NamedConstKind::kHashtag;
        else if (t == "tt:username") kind = NamedConstKind::kUsername;
        else return v;
        if (auto *c = find(kind, Value::Entity(t, v.words()))) {
          return Value::NamedConst(c->kind, c->index);
        }
        return v;
      }
      default:
        return v;
    }
  };
  return Rewrite(program, rw);
}

std::vector<std::string> RenderValueWords(const Value &value) {
  auto join = [](const std::vector<std::string> &w) {
    std::string out;
    for (const auto &s : w) out += s;
    return out;
  };
  switch (value.kind()) {
    case ValueKind::kString: return value.words();
    case ValueKind::kNumber: return {FormatNumber(value.number())};
    case ValueKind::kBoolean: return {value.boolean() ? "true" : "false"};
    case ValueKind::kEnum:
    case ValueKind::kLocation: {
      std::vector<std::string> out(1);
      for (char c : value.text()) {
        if (c == '_') {
          out.emplace_back();
        } else {
          out.back() += c;
        }
      }
      return out;
    }
    case ValueKind::kDate:
    case ValueKind::kTime:
      return {value.text()};
    case ValueKind::kEntity: {
      const std::string &t = value.entity_type();
      if (t == "tt:username") return {"@" + join(value.words())};
      if (t == "tt:hashtag") return {"#" + join(value.words())};
      return value.words();
    }
    case ValueKind::kMeasure: {
      std::vector<std::string> out;
      for (const auto &term : value.terms()) {
        if (term.is_constant()) {
          out.push_back(NamedConstToken(NamedConstKind::kNumber, term.constant));
        } else {
          out.push_back(FormatNumber(term.magnitude));
        }
        std::string_view word = DurationWord(term.unit, term.magnitude != 1);
        out.push_back(word.empty() ? term.unit : std::string(word));
      }
      return out;
    }
    case ValueKind::kNamedConst:
      return {NamedConstToken(value.named_kind(), value.named_index())};
    case ValueKind::kSlot:
    case ValueKind::kPlaceholder:
      break;
  }
  return {};
}

std::string Detokenize(const std::vector<std::string> &tokens) {
  std::string out;
  for (const auto &t : tokens) {
    const bool attach =
        t.size() == 1 && std::string_view(",.?!").find(t[0]) != std::string_view::npos;
    if (!out.empty() && !attach) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace vapl

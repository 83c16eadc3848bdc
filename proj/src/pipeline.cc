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

#include "vapl/pipeline.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "vapl/arguments.h"
#include "vapl/canonical.h"
#include "vapl/error.h"
#include "vapl/generator.h"
#include "vapl/nn_syntax.h"
#include "vapl/parallel.h"
#include "vapl/parser.h"
#include "vapl/typecheck.h"

namespace vapl {

namespace {

bool IsClosingQuote(const std::string &tok) {
  return tok == "\"" || tok.rfind("\"^^", 0) == 0;
}

// Start of every occurrence of `needle` in `hay`, left to right and not
// overlapping.
std::vector<size_t> Occurrences(const Tokens &hay, const std::vector<std::string> &needle) {
  std::vector<size_t> out;
  if (needle.empty() || needle.size() > hay.size()) return out;
  for (size_t i = 0; i + needle.size() <= hay.size();) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + i)) {
      out.push_back(i);
      i += needle.size();
    } else {
      ++i;
    }
  }
  return out;
}

uint64_t HashId(std::string_view id) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Lower(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::vector<ValueSlot> FindValueSlots(const Tokens &program) {
  std::vector<ValueSlot> out;
  for (size_t i = 0; i < program.size(); ++i) {
    if (program[i] != "\"") continue;
    size_t j = i + 1;
    ValueSlot slot;
    while (j < program.size() && !IsClosingQuote(program[j])) {
      slot.words.push_back(program[j++]);
    }
    if (j == program.size()) break;
    slot.begin = i;
    slot.end = j + 1;
    slot.type = TypeExpr::String();
    if (i >= 2 && (program[i - 1] == "=" || ParseOperator(program[i - 1])) &&
        program[i - 2].rfind("param:", 0) == 0) {
      std::string_view p = program[i - 2];
      p.remove_prefix(6);
      const size_t colon = p.find(':');
      slot.param = std::string(p.substr(0, colon));
      if (colon != std::string_view::npos) {
        try {
          slot.type = ParseTypeText(p.substr(colon + 1));
        } catch (const Error &) {
        }
      }
    }
    if (program[j].size() > 3) {
      slot.type = TypeExpr::Entity(program[j].substr(3));
    }
    if (slot.type.kind() == TypeKind::kArray) slot.type = slot.type.element();
    out.push_back(std::move(slot));
    i = j;
  }
  return out;
}

bool HasStringValue(const Tokens &program) {
  for (const auto &slot : FindValueSlots(program)) {
    if (slot.type == TypeExpr::String()) return true;
  }
  return false;
}

int ExpansionFactors::For(const DatasetExample &e) const {
  const bool has_string = !e.programs.empty() && HasStringValue(e.programs[0]);
  switch (e.provenance()) {
    case Provenance::kParaphrase:
      return has_string ? paraphrase_with_string : paraphrase;
    case Provenance::kSynthesized:
      return e.HasFlag("primitive") ? synthesized_primitive : other;
    case Provenance::kAugmented:
      return other;
  }
  return other;
}

std::vector<DatasetExample> ExpandParameters(const DatasetExample &example,
                                             const ParamDb &db,
                                             const Library &library, int factor,
                                             std::mt19937_64 &rng,
                                             ExpansionStats *stats) {
  if (factor < 1) throw ValueError("expansion factor must be at least 1");
  struct Group {
    std::vector<std::string> words;
    std::string param;
    TypeExpr type;
    std::vector<Value> examples;
  };
  std::vector<Group> groups;
  if (!example.programs.empty()) {
    for (const auto &slot : FindValueSlots(example.programs[0])) {
      bool seen = false;
      for (const auto &g : groups) seen = seen || g.words == slot.words;
      if (seen || Occurrences(example.sentence, slot.words).empty()) continue;
      groups.push_back({slot.words, slot.param, slot.type,
                        ExampleValues(library, slot.param, slot.type)});
    }
  }
  if (groups.empty()) {
    if (stats && factor > 1) ++stats->degenerate;
    return {example};
  }
  for (const auto &g : groups) {
    if (!db.HasValues(g.param, g.type, g.examples)) {
      if (stats) ++stats->dropped;
      return {};
    }
  }
  // Longest values first so that one value inside another is not split.
  std::vector<size_t> order(groups.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return groups[a].words.size() > groups[b].words.size();
  });

  std::vector<DatasetExample> out;
  std::vector<std::set<std::vector<std::string>>> used(groups.size());
  for (int k = 0; k < factor; ++k) {
    std::vector<std::vector<std::string>> fresh(groups.size());
    for (size_t g = 0; g < groups.size(); ++g) {
      for (int attempt = 0; attempt < 40 && fresh[g].empty(); ++attempt) {
        auto v = db.Draw(groups[g].param, groups[g].type, groups[g].examples, rng);
        if (!v || (v->kind() != ValueKind::kString && v->kind() != ValueKind::kEntity)) {
          continue;
        }
        std::vector<std::string> words = v->words();
        if (words.empty() ||
            !IdentifyArguments(JoinTokens(words)).constants.empty() ||
            std::find(fresh.begin(), fresh.end(), words) != fresh.end() ||
            (attempt < 20 && used[g].count(words))) {
          continue;
        }
        used[g].insert(words);
        fresh[g] = std::move(words);
      }
      if (fresh[g].empty()) {
        if (stats) ++stats->dropped;
        return {};
      }
    }
    DatasetExample e = example;
    if (factor > 1) e.id += "-" + std::to_string(k);
    e.sentence.clear();
    for (size_t i = 0; i < example.sentence.size();) {
      bool replaced = false;
      for (size_t g : order) {
        const auto &w = groups[g].words;
        if (i + w.size() <= example.sentence.size() &&
            std::equal(w.begin(), w.end(), example.sentence.begin() + i)) {
          e.sentence.insert(e.sentence.end(), fresh[g].begin(), fresh[g].end());
          i += w.size();
          replaced = true;
          break;
        }
      }
      if (!replaced) e.sentence.push_back(example.sentence[i++]);
    }
    for (auto &program : e.programs) {
      Tokens rewritten;
      size_t pos = 0;
      for (const auto &slot : FindValueSlots(program)) {
        rewritten.insert(rewritten.end(), program.begin() + pos,
                         program.begin() + slot.begin + 1);
        const std::vector<std::string> *words = &slot.words;
        for (size_t g = 0; g < groups.size(); ++g) {
          if (groups[g].words == slot.words) words = &fresh[g];
        }
        rewritten.insert(rewritten.end(), words->begin(), words->end());
        rewritten.push_back(program[slot.end - 1]);
        pos = slot.end;
      }
      rewritten.insert(rewritten.end(), program.begin() + pos, program.end());
      program = std::move(rewritten);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<DatasetExample> ExpandDataset(const std::vector<DatasetExample> &examples,
                                          const ParamDb &db, const Library &library,
                                          const ExpansionFactors &factors,
                                          uint64_t seed, int jobs,
                                          ExpansionStats *stats) {
  std::vector<std::vector<DatasetExample>> parts(examples.size());
  std::vector<ExpansionStats> part_stats(examples.size());
  ParallelFor(examples.size(), jobs, [&](size_t i) {
    std::mt19937_64 rng(MixSeed(seed, HashId(examples[i].id)));
    parts[i] = ExpandParameters(examples[i], db, library, factors.For(examples[i]),
                                rng, &part_stats[i]);
  });
  std::vector<DatasetExample> out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (stats) {
      stats->dropped += part_stats[i].dropped;
      stats->degenerate += part_stats[i].degenerate;
    }
    for (auto &e : parts[i]) out.push_back(std::move(e));
  }
  return out;
}

SubstitutionTable SubstitutionTable::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  SubstitutionTable table;
  int line_number = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw IoError(path + ":" + std::to_string(line_number) +
                    ": expected phrase <TAB> paraphrase");
    }
    const size_t tab2 = line.find('\t', tab + 1);
    table.Add(std::string_view(line).substr(0, tab),
              std::string_view(line).substr(
                  tab + 1, tab2 == std::string::npos ? std::string::npos
                                                     : tab2 - tab - 1));
  }
  return table;
}

void SubstitutionTable::Add(std::string_view phrase, std::string_view paraphrase) {
  Tokens from = SplitTokens(Lower(std::string(phrase)));
  Tokens to = SplitTokens(Lower(std::string(paraphrase)));
  if (from.empty() || to.empty() || from == to) return;
  for (auto &e : entries_) {
    if (e.phrase == from) {
      if (std::find(e.paraphrases.begin(), e.paraphrases.end(), to) ==
          e.paraphrases.end()) {
        e.paraphrases.push_back(std::move(to));
      }
      return;
    }
  }
  Entry entry{std::move(from), {std::move(to)}};
  auto pos = std::upper_bound(entries_.begin(), entries_.end(), entry,
                              [](const Entry &a, const Entry &b) {
                                return a.phrase.size() > b.phrase.size();
                              });
  entries_.insert(pos, std::move(entry));
}

DatasetExample LexicalAugment(const DatasetExample &example,
                              const SubstitutionTable &table, double probability,
                              std::mt19937_64 &rng) {
  const Tokens &s = example.sentence;
  std::vector<bool> locked(s.size(), false);
  for (size_t i = 0; i < s.size(); ++i) {
    if (ParseNamedConstToken(s[i])) locked[i] = true;
  }
  for (const auto &program : example.programs) {
    for (const auto &slot : FindValueSlots(program)) {
      for (size_t start : Occurrences(s, slot.words)) {
        for (size_t k = 0; k < slot.words.size(); ++k) locked[start + k] = true;
      }
    }
  }
  DatasetExample out = example;
  out.sentence.clear();
  std::bernoulli_distribution coin(std::clamp(probability, 0.0, 1.0));
  for (size_t i = 0; i < s.size();) {
    const SubstitutionTable::Entry *match = nullptr;
    for (const auto &e : table.entries()) {
      const size_t n = e.phrase.size();
      if (i + n > s.size() || !std::equal(e.phrase.begin(), e.phrase.end(), s.begin() + i)) {
        continue;
      }
      if (std::any_of(locked.begin() + i, locked.begin() + i + n,
                      [](bool b) { return b; })) {
        continue;
      }
      match = &e;
      break;
    }
    if (match && probability > 0 && coin(rng)) {
      const auto &to = match->paraphrases[std::uniform_int_distribution<size_t>(
          0, match->paraphrases.size() - 1)(rng)];
      out.sentence.insert(out.sentence.end(), to.begin(), to.end());
      i += match->phrase.size();
    } else {
      out.sentence.push_back(s[i++]);
    }
  }
  if (out.sentence != example.sentence) {
    out.id += "-lex";
    out.set_provenance(Provenance::kAugmented);
  }
  return out;
}

namespace {

const char *const kNames[] = {"alice", "bob", "carol", "dave", "erin", "frank",
                              "grace", "heidi"};
const char *const kTags[] = {"news", "travel", "music", "cats", "food", "sports",
                             "art", "tech"};
const char *const kSites[] = {"www.example.com", "www.wikipedia.org",
                              "www.github.com", "www.nytimes.com"};
const int kNumbers[] = {3, 7, 12, 25, 42, 60, 85, 100, 150, 200};

// A concrete surface that argument identification maps back to the same
// kind; surfaces grow with the index so that ordered constants stay
// ordered.
std::string ConstantSurface(NamedConstKind kind, int index) {
  const auto i = static_cast<size_t>(index);
  auto cycle = [&](const auto &list) {
    const size_t n = std::size(list);
    std::string s = list[i % n];
    return i < n ? s : s + std::to_string(i / n);
  };
  switch (kind) {
    case NamedConstKind::kNumber:
      return std::to_string(i < std::size(kNumbers) ? kNumbers[i] : 1000 + index);
    case NamedConstKind::kDate: {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "2026-%02d-%02d", index % 12 + 1,
                    10 + (index / 12) % 18);
      return buf;
    }
    case NamedConstKind::kTime:
      return std::to_string((7 + index) % 24) + ":30";
    case NamedConstKind::kDuration:
      return std::to_string(index + 2) + " hours";
    case NamedConstKind::kCurrency: return "$" + std::to_string(10 * (index + 1));
    case NamedConstKind::kUrl:
      return i < std::size(kSites) ? kSites[i] : "www.site" + std::to_string(i) + ".com";
    case NamedConstKind::kEmail: return cycle(kNames) + "@example.com";
    case NamedConstKind::kPhone: return "+1555010" + std::to_string(1000 + index);
    case NamedConstKind::kHashtag: return "#" + cycle(kTags);
    case NamedConstKind::kUsername: return "@" + cycle(kNames);
    default: return NamedConstToken(kind, index);
  }
}

std::vector<std::vector<std::string>> QuotedSpans(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  for (size_t i = text.find('"'); i != std::string_view::npos;) {
    const size_t j = text.find('"', i + 1);
    if (j == std::string_view::npos) break;
    out.push_back(TokenizeSentence(text.substr(i + 1, j - i - 1)));
    i = text.find('"', j + 1);
  }
  return out;
}

std::string StripQuotes(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c != '"') out += c;
  }
  return out;
}

}  // namespace

std::string RenderPromptSentence(const DatasetExample &example) {
  const Tokens &s = example.sentence;
  std::vector<size_t> span_end(s.size(), 0);
  std::vector<bool> used(s.size(), false);
  if (!example.programs.empty()) {
    for (const auto &slot : FindValueSlots(example.programs[0])) {
      for (size_t start : Occurrences(s, slot.words)) {
        const size_t end = start + slot.words.size();
        if (std::any_of(used.begin() + start, used.begin() + end,
                        [](bool b) { return b; })) {
          continue;
        }
        std::fill(used.begin() + start, used.begin() + end, true);
        span_end[start] = end;
        break;
      }
    }
  }
  Tokens shown;
  for (size_t i = 0; i < s.size();) {
    if (span_end[i] > 0) {
      std::string quoted = "\"";
      for (size_t k = i; k < span_end[i]; ++k) {
        if (k > i) quoted += ' ';
        quoted += s[k];
      }
      shown.push_back(quoted + "\"");
      i = span_end[i];
      continue;
    }
    if (auto named = ParseNamedConstToken(s[i])) {
      shown.push_back(ConstantSurface(named->first, named->second));
    } else {
      shown.push_back(s[i]);
    }
    ++i;
  }
  return Detokenize(shown);
}

std::vector<ParaphrasePrompt> SampleForParaphrase(
    const std::vector<DatasetExample> &examples, const ParaphraseConfig &config,
    const Library &library, uint64_t seed) {
  auto is_hard = [&](const std::string &f) { return config.hard_functions.count(f) > 0; };
  auto is_easy = [&](const std::string &f) {
    return config.easy_functions.empty() ? !is_hard(f)
                                         : config.easy_functions.count(f) > 0;
  };
  std::vector<size_t> eligible;
  for (size_t i = 0; i < examples.size(); ++i) {
    const auto &e = examples[i];
    if (e.programs.empty()) continue;
    const auto fns = FunctionTokens(e.programs[0]);
    bool ok = true;
    for (size_t a = 0; a < fns.size() && ok; ++a) {
      for (size_t b = a + 1; b < fns.size() && ok; ++b) {
        ok = !config.blacklist.count({fns[a], fns[b]}) &&
             !config.blacklist.count({fns[b], fns[a]});
      }
    }
    if (ok && fns.size() >= 2) {
      const auto easy = std::count_if(fns.begin(), fns.end(), is_easy);
      const auto hard = std::count_if(fns.begin(), fns.end(), is_hard);
      ok = easy >= 1 && hard <= 1;
    }
    if (ok) eligible.push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(eligible.begin(), eligible.end(), rng);
  std::map<std::string, int> per_program;
  std::vector<size_t> chosen;
  for (size_t i : eligible) {
    int &n = per_program[JoinTokens(examples[i].programs[0])];
    if (n < config.per_program_cap) {
      ++n;
      chosen.push_back(i);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<ParaphrasePrompt> out;
  for (size_t i : chosen) {
    const auto &e = examples[i];
    ParaphrasePrompt p;
    p.id = e.id;
    p.sentence = RenderPromptSentence(e);
    p.program = e.programs[0];
    std::vector<std::string> seen;
    for (const auto &f : FunctionTokens(p.program)) {
      const ClassDef *cls = library.FindClass(ClassOfFunction(f));
      if (!cls || cls->description.empty()) continue;
      if (std::find(seen.begin(), seen.end(), cls->description) != seen.end()) continue;
      if (!p.hint.empty()) p.hint += "; ";
      p.hint += cls->description;
      seen.push_back(cls->description);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string CsvRow(const std::vector<std::string> &cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    const std::string &c = cells[i];
    if (c.find_first_of(",\"\r\n") == std::string::npos) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  return out + "\r\n";
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      any = false;
    } else {
      cell += c;
    }
  }
  if (quoted) throw IoError("unterminated quoted CSV field");
  if (any || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ExportParaphraseBatch(const std::vector<ParaphrasePrompt> &prompts,
                                  int per_row) {
  if (per_row < 1) throw ValueError("prompts per row must be at least 1");
  std::vector<std::string> header;
  for (int k = 1; k <= per_row; ++k) {
    const std::string n = std::to_string(k);
    for (const char *c : {"id_", "sentence_", "code_", "hint_"}) header.push_back(c + n);
    header.push_back("paraphrase_" + n + "_1");
    header.push_back("paraphrase_" + n + "_2");
  }
  std::string out = CsvRow(header);
  for (size_t i = 0; i < prompts.size(); i += per_row) {
    std::vector<std::string> row;
    for (int k = 0; k < per_row; ++k) {
      if (i + k < prompts.size()) {
        const auto &p = prompts[i + k];
        row.insert(row.end(), {p.id, p.sentence, JoinTokens(p.program), p.hint, "", ""});
      } else {
        row.insert(row.end(), 6, "");
      }
    }
    out += CsvRow(row);
  }
  return out;
}

ImportedBatch ImportParaphraseBatch(std::string_view csv) {
  ImportedBatch out;
  const auto rows = ParseCsv(csv);
  if (rows.empty()) return out;
  const auto &header = rows[0];
  std::map<std::string, size_t> column;
  for (size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (row.size() != header.size()) {
      out.problems.push_back("row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(header.size()) + " cells, found " +
                             std::to_string(row.size()));
      continue;
    }
    for (int k = 1;; ++k) {
      const std::string n = std::to_string(k);
      auto id = column.find("id_" + n);
      if (id == column.end()) break;
      const std::string &pid = row[id->second];
      if (pid.empty()) continue;
      auto cell = [&](const std::string &name) -> std::string {
        auto it = column.find(name);
        return it == column.end() ? "" : row[it->second];
      };
      out.prompts.push_back({pid, cell("sentence_" + n),
                             SplitTokens(cell("code_" + n)), cell("hint_" + n)});
      for (const char *suffix : {"_1", "_2"}) {
        std::string answer = cell("paraphrase_" + n + suffix);
        if (answer.find_first_not_of(" \t") == std::string::npos) {
          ++out.missing_answers;
        } else {
          out.paraphrases.emplace_back(pid, std::move(answer));
        }
      }
    }
  }
  return out;
}

ValidationResult ValidateParaphrases(
    const std::vector<std::pair<std::string, std::string>> &candidates,
    const std::vector<ParaphrasePrompt> &prompts, const Library &library) {
  std::map<std::string, const ParaphrasePrompt *> by_id;
  for (const auto &p : prompts) by_id.emplace(p.id, &p);
  std::map<std::string, int> accepted_count;
  std::map<std::string, bool> program_ok;
  ValidationResult out;
  for (const auto &[id, text] : candidates) {
    auto reject = [&, &id = id, &text = text](const std::string &reason) {
      out.rejected.push_back({id, text, reason});
    };
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      reject("unknown-prompt");
      continue;
    }
    const ParaphrasePrompt &prompt = *it->second;
    const IdentifiedSentence original = IdentifyArguments(StripQuotes(prompt.sentence));
    IdentifiedSentence para = IdentifyArguments(StripQuotes(text));
    if (para.tokens.size() < 3) {
      reject("too-short");
      continue;
    }
    if (para.tokens == original.tokens) {
      reject("no-change");
      continue;
    }
    bool dropped = false;
    for (const auto &span : QuotedSpans(prompt.sentence)) {
      if (Occurrences(para.tokens, span).empty()) dropped = true;
    }
    // Map every constant of the paraphrase to the prompt constant with the
    // same value.
    std::map<std::string, std::string> rename;
    std::set<std::string> matched;
    bool added = false;
    for (const auto &c : para.constants) {
      const NamedConstant *found = nullptr;
      for (const auto &o : original.constants) {
        if (o.kind == c.kind && !matched.count(NamedConstToken(o.kind, o.index)) &&
            o.value == c.value) {
          found = &o;
          break;
        }
      }
      if (!found) {
        added = true;
        continue;
      }
      const std::string target = NamedConstToken(found->kind, found->index);
      matched.insert(target);
      rename[NamedConstToken(c.kind, c.index)] = target;
    }
    if (dropped || matched.size() != original.constants.size()) {
      reject("constant-dropped");
      continue;
    }
    if (added) {
      reject("constant-added");
      continue;
    }
    auto ok = program_ok.find(prompt.id);
    if (ok == program_ok.end()) {
      bool valid = false;
      try {
        auto typed = Typecheck(ParseNn(prompt.program, library), library);
        valid = typed.ok() && IsCanonical(*typed, library);
      } catch (const Error &) {
      }
      ok = program_ok.emplace(prompt.id, valid).first;
    }
    if (!ok->second) {
      reject("invalid-program");
      continue;
    }
    DatasetExample e;
    e.id = prompt.id + "-p" + std::to_string(accepted_count[prompt.id]++);
    e.set_provenance(Provenance::kParaphrase);
    e.flags.insert(FunctionTokens(prompt.program).size() <= 1 ? "primitive" : "compound");
    if (HasStringValue(prompt.program)) e.flags.insert("string");
    for (auto &tok : para.tokens) {
      auto r = rename.find(tok);
      e.sentence.push_back(r == rename.end() ? tok : r->second);
    }
    e.programs = {prompt.program};
    out.accepted.push_back(std::move(e));
  }
  return out;
}

}  // namespace vapl

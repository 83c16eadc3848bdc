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

#include "vapl/generator.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "vapl/arguments.h"
#include "vapl/canonical.h"
#include "vapl/nn_syntax.h"
#include "vapl/parallel.h"
#include "vapl/pipeline.h"
#include "vapl/typecheck.h"

namespace vapl {

uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  // splitmix64 over the combined input
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int GenerationConfig::TargetAt(int depth) const {
  return std::max(1, static_cast<int>(std::lround(target * std::pow(decay, depth))));
}

bool GenerationConfig::Blacklisted(const std::string &a,
                                   const std::string &b) const {
  return blacklist.count({a, b}) || blacklist.count({b, a});
}

std::string Derivation::Key() const {
  std::string out;
  for (const auto &w : sentence) {
    out += w;
    out += ' ';
  }
  out += '\t';
  out += value.ToString();
  return out;
}

const std::vector<DerivationPtr> &Charts::At(const std::string &category,
                                             int depth) const {
  static const std::vector<DerivationPtr> kEmpty;
  auto it = charts.find(category);
  if (it == charts.end() || depth < 0 ||
      depth >= static_cast<int>(it->second.size())) {
    return kEmpty;
  }
  return it->second[depth];
}

std::vector<DerivationPtr> Charts::All(const std::string &category) const {
  std::vector<DerivationPtr> out;
  auto it = charts.find(category);
  if (it == charts.end()) return out;
  for (const auto &level : it->second) {
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

namespace {

std::vector<std::string> SplitLiteral(const std::string &text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else if ((c == ',' || c == '?' || c == '!') && !cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
      out.emplace_back(1, c);
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> NameWords(const std::string &name) {
  std::vector<std::string> out(1);
  for (char c : name) {
    if (c == '_') {
      if (!out.back().empty()) out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

void PredicateFunctions(const PredicatePtr &p, std::vector<std::string> *out) {
  if (!p) return;
  if (p->kind == PredicateKind::kGet) out->push_back(p->invocation.function.Token());
  for (const auto &op : p->operands) PredicateFunctions(op, out);
}

std::vector<std::string> FragmentFunctions(const Fragment &f) {
  std::vector<std::string> out;
  if (auto prog = f.AsProgram()) {
    for (const auto &fn : AllFunctions(*prog)) out.push_back(fn.Token());
  } else if (f.kind == FragmentKind::kPredicate) {
    PredicateFunctions(f.predicate, &out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<OutputInfo> FragmentOutputs(const Fragment &f, const Library &lib) {
  if (f.kind == FragmentKind::kQuery) return QueryOutputs(*f.query, lib);
  if (f.kind == FragmentKind::kStream) return StreamOutputs(*f.stream, lib);
  return {};
}

Fragment RenamePlaceholders(const Fragment &f,
                            const std::map<std::string, std::string> &names) {
  Rewriter rw;
  rw.value = [&](const Value &v, std::string_view) {
    if (!v.is_placeholder()) return v;
    auto it = names.find(v.text());
    return it == names.end() ? v : Value::Placeholder(it->second);
  };
  return f.Rewritten(rw);
}

// Occurrences of each placeholder, and how many of them are whole
// keyword-binding values.
struct PlaceholderUse {
  int total = 0;
  int in_bindings = 0;
  std::string param;  // first parameter the placeholder is used for
};

std::map<std::string, PlaceholderUse> PlaceholderUses(const Fragment &f) {
  std::map<std::string, PlaceholderUse> out;
  Rewriter rw;
  rw.value = [&](const Value &v, std::string_view param) {
    if (v.is_placeholder()) {
      auto &use = out[v.text()];
      if (use.total++ == 0) use.param = std::string(param);
    }
    return v;
  };
  rw.binding = [&](Binding *b) {
    if (!b->is_output_ref() && b->literal().is_placeholder()) {
      ++out[b->literal().text()].in_bindings;
    }
  };
  f.Rewritten(rw);
  return out;
}

// Working copy of a child derivation inside one candidate.
struct Part {
  std::vector<std::string> sentence;
  Fragment value;
  std::vector<TemplateParam> placeholders;
  std::string projection;
  std::vector<OutputInfo> outputs;
};

Part MakePart(const Derivation &d, const std::string &prefix) {
  Part p;
  std::map<std::string, std::string> names;
  for (const auto &ph : d.placeholders) {
    names[ph.name] = prefix + ph.name;
    p.placeholders.push_back({prefix + ph.name, ph.type});
  }
  p.sentence = d.sentence;
  for (auto &w : p.sentence) {
    if (w.size() > 1 && w[0] == '$') {
      auto it = names.find(w.substr(1));
      if (it != names.end()) w = "$" + it->second;
    }
  }
  p.value = names.empty() ? d.value : RenamePlaceholders(d.value, names);
  p.projection = d.projection;
  p.outputs = d.outputs;
  return p;
}

struct Slot {
  const TemplateParam *placeholder = nullptr;
  const OutputInfo *output = nullptr;
};

// First placeholder of `target`, in sentence order, that an output of
// `source` can fill through a keyword binding.
Slot FindSlot(const Part &target, const Part &source) {
  if (target.placeholders.empty() || source.outputs.empty()) return {};
  const auto uses = PlaceholderUses(target.value);
  for (const auto &ph : target.placeholders) {
    auto it = uses.find(ph.name);
    if (it == uses.end() || it->second.total != it->second.in_bindings) continue;
    const OutputInfo *passable = nullptr;
    for (const auto &o : source.outputs) {
      if (!source.projection.empty() && o.name != source.projection) continue;
      if (o.type == ph.type) return {&ph, &o};
      if (!passable && ph.type.kind() == TypeKind::kString &&
          o.type.IsStringLike()) {
        passable = &o;
      }
    }
    if (passable) return {&ph, passable};
  }
  return {};
}

std::optional<Part> Fill(const Part &target, const Part &source, bool inline_source) {
  Slot slot = FindSlot(target, source);
  if (!slot.placeholder) return std::nullopt;
  const std::string name = slot.placeholder->name;
  const std::string output = slot.output->name;
  Part out;
  for (const auto &w : target.sentence) {
    if (w.size() > 1 && w[0] == '$' && w.substr(1) == name) {
      if (inline_source) {
        out.sentence.insert(out.sentence.end(), source.sentence.begin(),
                            source.sentence.end());
      } else {
        out.sentence.push_back("the");
        for (auto &x : NameWords(output)) out.sentence.push_back(std::move(x));
      }
    } else {
      out.sentence.push_back(w);
    }
  }
  for (const auto &ph : target.placeholders) {
    if (ph.name != name) out.placeholders.push_back(ph);
  }
  if (inline_source) {
    out.placeholders.insert(out.placeholders.end(), source.placeholders.begin(),
                            source.placeholders.end());
  }
  Rewriter rw;
  rw.binding = [&](Binding *b) {
    if (!b->is_output_ref() && b->literal().is_placeholder() &&
        b->literal().text() == name) {
      b->value = OutputRef{output, -1};
    }
  };
  out.value = target.value.Rewritten(rw);
  out.projection = target.projection;
  out.outputs = target.outputs;
  return out;
}

struct Term {
  enum class Kind { kFragment, kNow, kNotify, kName, kPlaceholder };
  Kind kind = Kind::kName;
  Fragment fragment;
  std::string text;
  std::string projection;
};

// Moves output references bound in the head invocation of `right` into
// join parameter passing.
QueryPtr HoistReferences(const QueryPtr &right, std::vector<Binding> *on) {
  if (right->kind == QueryKind::kInvocation) {
    auto q = std::make_shared<Query>(*right);
    std::vector<Binding> kept;
    for (auto &b : q->invocation.bindings) {
      (b.is_output_ref() ? *on : kept).push_back(b);
    }
    q->invocation.bindings = std::move(kept);
    return q;
  }
  if (right->kind == QueryKind::kFilter || right->kind == QueryKind::kJoin) {
    auto q = std::make_shared<Query>(*right);
    q->inner = HoistReferences(right->inner, on);
    return q;
  }
  return right;
}

class CandidateBuilder {
 public:
  CandidateBuilder(const ConstructTemplate &rule, const Library &library)
      : rule_(rule), library_(library) {}

  // Builds the derivation for one combination of children (in the order of
  // rule.Variables()). nullopt when a guard or combinator rejects it.
  std::optional<Derivation> Build(const std::vector<const Derivation *> &children,
                                  int depth) {
    const auto vars = rule_.Variables();
    parts_.clear();
    for (size_t i = 0; i < vars.size(); ++i) {
      parts_[vars[i].first] =
          MakePart(*children[i], "v" + std::to_string(i) + "_");
    }
    for (const auto &g : rule_.guards) {
      if (Guard(g) == g.negated) return std::nullopt;
    }
    // Parameter passing.
    for (const auto &item : rule_.rhs) {
      if (item.kind != RhsItem::Kind::kVariable || item.fill_from.empty()) {
        continue;
      }
      auto filled = Fill(parts_[item.text], parts_[item.fill_from],
                         !item.fill_from_category.empty());
      if (!filled) return std::nullopt;
      parts_[item.text] = std::move(*filled);
    }
    Derivation d;
    d.category = rule_.lhs;
    d.depth = depth;
    std::vector<TemplateParam> placeholders;
    for (const auto &item : rule_.rhs) {
      switch (item.kind) {
        case RhsItem::Kind::kLiteral:
          for (auto &w : SplitLiteral(item.text)) d.sentence.push_back(std::move(w));
          break;
        case RhsItem::Kind::kPlaceholder:
          d.sentence.push_back("$r_" + item.text);
          break;
        case RhsItem::Kind::kVariable: {
          const Part &p = parts_[item.text];
          d.sentence.insert(d.sentence.end(), p.sentence.begin(), p.sentence.end());
          placeholders.insert(placeholders.end(), p.placeholders.begin(),
                              p.placeholders.end());
          break;
        }
      }
    }
    rhs_types_.clear();
    auto term = Eval(rule_.build);
    if (!term || term->kind != Term::Kind::kFragment) return std::nullopt;
    for (const auto &item : rule_.rhs) {
      if (item.kind != RhsItem::Kind::kPlaceholder) continue;
      auto it = rhs_types_.find(item.text);
      if (it == rhs_types_.end()) return std::nullopt;
      placeholders.push_back({"r_" + item.text, it->second});
    }
    d.value = std::move(term->fragment);
    d.projection = term->projection;
    // Canonical placeholder names in sentence order.
    std::map<std::string, std::string> names;
    for (auto &w : d.sentence) {
      if (w.size() < 2 || w[0] != '$') continue;
      std::string old = w.substr(1);
      auto it = names.find(old);
      if (it == names.end()) {
        it = names.emplace(old, "p" + std::to_string(names.size())).first;
      }
      w = "$" + it->second;
    }
    if (names.size() != placeholders.size()) return std::nullopt;
    d.placeholders.resize(names.size());
    for (const auto &ph : placeholders) {
      auto it = names.find(ph.name);
      if (it == names.end()) return std::nullopt;
      const size_t index = std::stoul(it->second.substr(1));
      d.placeholders[index] = {it->second, ph.type};
    }
    d.value = RenamePlaceholders(d.value, names);
    return d;
  }

 private:
  const Part *Var(const std::string &name) const {
    auto it = parts_.find(name);
    return it == parts_.end() ? nullptr : &it->second;
  }

  std::string ParamName(const std::string &arg) const {
    const Part *p = Var(arg);
    if (p && p->value.kind == FragmentKind::kParam) return p->value.param.name;
    return arg;
  }

  bool Guard(const GuardCall &g) const {
    const Part *x = Var(g.args[0]);
    if (!x) return false;
    if (g.name == "is_monitorable") {
      return x->value.kind == FragmentKind::kQuery &&
             IsMonitorableQuery(*x->value.query, library_);
    }
    if (g.name == "is_list") {
      return x->value.kind == FragmentKind::kQuery &&
             IsListQuery(*x->value.query, library_);
    }
    if (g.name == "returns_numeric" || g.name == "has_output") {
      const std::string name = ParamName(g.args[1]);
      const OutputInfo *o = ResolveOutput(x->outputs, name);
      if (!o) return false;
      return g.name == "has_output" || o->type.IsNumeric();
    }
    if (g.name == "type_compatible") {
      const Part *src = Var(g.args[1]);
      return src && FindSlot(*x, *src).placeholder != nullptr;
    }
    return false;
  }

  std::optional<Term> Eval(const BuildExpr &e) {
    Term t;
    if (!e.call) {
      if (const Part *p = Var(e.name)) {
        t.kind = Term::Kind::kFragment;
        t.fragment = p->value;
        t.projection = p->projection;
      } else if (e.name == "now") {
        t.kind = Term::Kind::kNow;
      } else if (e.name == "notify") {
        t.kind = Term::Kind::kNotify;
      } else if (e.name[0] == '$') {
        t.kind = Term::Kind::kPlaceholder;
        t.text = e.name.substr(1);
      } else {
        t.text = e.name;
      }
      return t;
    }
    std::vector<Term> args;
    for (const auto &a : e.args) {
      auto v = Eval(a);
      if (!v) return std::nullopt;
      args.push_back(std::move(*v));
    }
    auto frag = [&](size_t i, FragmentKind kind) -> const Fragment * {
      if (args[i].kind != Term::Kind::kFragment || args[i].fragment.kind != kind) {
        return nullptr;
      }
      return &args[i].fragment;
    };
    auto result = [&](Fragment f) {
      Term out;
      out.kind = Term::Kind::kFragment;
      out.fragment = std::move(f);
      return out;
    };
    const std::string &op = e.name;
    if (op == "monitor") {
      const Fragment *q = frag(0, FragmentKind::kQuery);
      if (!q || !IsMonitorableQuery(*q->query, library_)) return std::nullopt;
      std::vector<std::string> on_new;
      if (args.size() == 2) {
        auto name = ParamOf(args[1]);
        if (!name) return std::nullopt;
        on_new.push_back(name->name);
      }
      return result(Fragment::OfStream(Stream::Monitor(q->query, on_new)));
    }
    if (op == "edge") {
      const Fragment *s = frag(0, FragmentKind::kStream);
      const Fragment *p = frag(1, FragmentKind::kPredicate);
      if (!s || !p || s->stream->kind != StreamKind::kMonitor) return std::nullopt;
      return result(Fragment::OfStream(Stream::Edge(s->stream, p->predicate)));
    }
    if (op == "rule") {
      Program prog;
      if (args[0].kind == Term::Kind::kNow) {
        prog.stream = Stream::Now();
      } else if (const Fragment *s = frag(0, FragmentKind::kStream)) {
        prog.stream = s->stream;
      } else {
        return std::nullopt;
      }
      const Term &last = args.back();
      if (args.size() == 3) {
        const Fragment *q = frag(1, FragmentKind::kQuery);
        if (!q) return std::nullopt;
        prog.query = q->query;
      }
      if (last.kind == Term::Kind::kNotify) {
        prog.action = Action::Notify();
      } else if (const Fragment *a = frag(args.size() - 1, FragmentKind::kAction)) {
        prog.action = a->action;
      } else if (const Fragment *q = frag(args.size() - 1, FragmentKind::kQuery);
                 q && args.size() == 2) {
        prog.query = q->query;
        prog.action = Action::Notify();
      } else {
        return std::nullopt;
      }
      if (prog.stream->kind == StreamKind::kNow && !prog.query &&
          prog.action.kind == ActionKind::kNotify) {
        return std::nullopt;
      }
      return result(Fragment::OfProgram(std::move(prog)));
    }
    if (op == "filter") {
      const Fragment *p = frag(1, FragmentKind::kPredicate);
      if (!p) return std::nullopt;
      if (const Fragment *q = frag(0, FragmentKind::kQuery)) {
        return result(Fragment::OfQuery(Query::Filter(q->query, p->predicate)));
      }
      if (const Fragment *s = frag(0, FragmentKind::kStream);
          s && s->stream->kind == StreamKind::kMonitor) {
        return result(Fragment::OfStream(Stream::Monitor(
            Query::Filter(s->stream->query, p->predicate), s->stream->on_new)));
      }
      return std::nullopt;
    }
    if (op == "atom") {
      auto param = ParamOf(args[0]);
      auto oper = ParseOperator(args[1].text);
      if (!param || !oper || args[1].kind != Term::Kind::kName ||
          args[2].kind != Term::Kind::kPlaceholder) {
        return std::nullopt;
      }
      const TypeExpr &pt = param->type;
      TypeExpr vt = pt;
      switch (*oper) {
        case Operator::kEquals:
          if (pt.kind() == TypeKind::kArray || pt.kind() == TypeKind::kBoolean) {
            return std::nullopt;
          }
          break;
        case Operator::kGreater:
        case Operator::kLess:
          if (!pt.IsComparable() || pt.kind() == TypeKind::kCurrency) {
            return std::nullopt;
          }
          break;
        case Operator::kContains:
          if (pt.kind() != TypeKind::kArray) return std::nullopt;
          vt = pt.element();
          break;
        default:
          if (pt.kind() != TypeKind::kString && pt.kind() != TypeKind::kPathName) {
            return std::nullopt;
          }
          vt = TypeExpr::String();
          break;
      }
      rhs_types_[args[2].text] = vt;
      return result(Fragment::OfPredicate(Predicate::Atom(
          param->name, *oper, Value::Placeholder("r_" + args[2].text))));
    }
    if (op == "and" || op == "or") {
      const Fragment *a = frag(0, FragmentKind::kPredicate);
      const Fragment *b = frag(1, FragmentKind::kPredicate);
      if (!a || !b) return std::nullopt;
      return result(Fragment::OfPredicate(
          op == "and" ? Predicate::And(a->predicate, b->predicate)
                      : Predicate::Or(a->predicate, b->predicate)));
    }
    if (op == "not") {
      const Fragment *a = frag(0, FragmentKind::kPredicate);
      if (!a) return std::nullopt;
      return result(Fragment::OfPredicate(Predicate::Not(a->predicate)));
    }
    if (op == "join") {
      const Fragment *a = frag(0, FragmentKind::kQuery);
      const Fragment *b = frag(1, FragmentKind::kQuery);
      if (!a || !b) return std::nullopt;
      std::vector<Binding> on;
      QueryPtr right = HoistReferences(b->query, &on);
      return result(Fragment::OfQuery(Query::Join(a->query, right, on)));
    }
    if (op == "agg") {
      auto agg = ParseAggregateOp(args[0].text);
      if (!agg || args[0].kind != Term::Kind::kName) return std::nullopt;
      const Fragment *q = frag(args.size() - 1, FragmentKind::kQuery);
      if (!q) return std::nullopt;
      std::string param;
      if (args.size() == 3) {
        auto p = ParamOf(args[1]);
        if (!p) return std::nullopt;
        param = p->name;
      }
      if ((*agg == AggregateOp::kCount) != param.empty()) return std::nullopt;
      return result(Fragment::OfQuery(Query::Aggregate(*agg, param, q->query)));
    }
    if (op == "project") {
      const Fragment *q = frag(0, FragmentKind::kQuery);
      auto p = ParamOf(args[1]);
      if (!q || !p) return std::nullopt;
      bool found = false;
      for (const auto &o : QueryOutputs(*q->query, library_)) {
        found = found || o.name == p->name;
      }
      if (!found) return std::nullopt;
      Term out = result(*q);
      out.projection = p->name;
      return out;
    }
    return std::nullopt;
  }

  // A parameter term: a PARAM derivation or a bare parameter name, typed by
  // the first library output with that name.
  std::optional<OutputInfo> ParamOf(const Term &t) const {
    if (t.kind == Term::Kind::kFragment && t.fragment.kind == FragmentKind::kParam) {
      return t.fragment.param;
    }
    if (t.kind != Term::Kind::kName) return std::nullopt;
    for (const auto &cls : library_.classes()) {
      for (const auto &fn : library_.FunctionsOf(cls.name)) {
        if (const ParamDecl *p = fn.FindOutput(t.text)) {
          return OutputInfo{p->name, p->type, -1};
        }
      }
    }
    return std::nullopt;
  }

  const ConstructTemplate &rule_;
  const Library &library_;
  std::map<std::string, Part> parts_;
  std::map<std::string, TypeExpr> rhs_types_;
};

TypecheckOptions PlaceholderOptions(const Derivation &d) {
  TypecheckOptions options;
  for (const auto &ph : d.placeholders) options.placeholder_types[ph.name] = ph.type;
  return options;
}

// Typechecks complete fragments and stores the annotated copy.
bool CheckFragment(Derivation *d, const Library &library) {
  auto prog = d->value.AsProgram();
  if (!prog) return true;
  auto typed = Typecheck(*prog, library, PlaceholderOptions(*d));
  if (!typed.ok()) return false;
  const Program &p = typed->program;
  switch (d->value.kind) {
    case FragmentKind::kStream: d->value.stream = p.stream; break;
    case FragmentKind::kQuery: d->value.query = p.query; break;
    case FragmentKind::kAction: d->value.action = p.action; break;
    case FragmentKind::kProgram: d->value.program = p; break;
    default: break;
  }
  return true;
}

struct RuleOutput {
  std::vector<DerivationPtr> derivations;
  RuleStats stats;
};

class ChartBuilder {
 public:
  ChartBuilder(const TemplateSet &templates, const Library &library,
               const GenerationConfig &config)
      : templates_(templates), library_(library), config_(config) {}

  Charts Run() {
    Seed();
    for (int d = 1; d <= config_.max_depth; ++d) {
      BuildPools(d - 1);
      std::vector<RuleOutput> outputs(templates_.constructs.size());
      ParallelFor(outputs.size(), config_.jobs,
                  [&](size_t r) { outputs[r] = ExpandRule(static_cast<int>(r), d); });
      for (auto &out : outputs) {
        if (out.stats.candidates > 0) {
          last_rate_[out.stats.rule] =
              out.stats.examined > 0
                  ? std::max(1e-4, static_cast<double>(out.stats.passed) /
                                       static_cast<double>(out.stats.examined))
                  : 1.0;
          charts_.stats.push_back(out.stats);
        }
        for (auto &dp : out.derivations) Insert(std::move(dp));
      }
    }
    return std::move(charts_);
  }

 private:
  void Insert(DerivationPtr d) {
    if (!keys_[d->category].insert(d->Key()).second) return;
    auto &levels = charts_.charts[d->category];
    if (static_cast<int>(levels.size()) <= d->depth) levels.resize(d->depth + 1);
    levels[d->depth].push_back(std::move(d));
  }

  void Seed() {
    for (const auto &t : templates_.primitives) {
      Derivation d;
      d.category = t.category;
      d.value = t.body;
      std::map<std::string, std::string> names;
      for (const auto &w : t.utterance) {
        if (w.size() > 1 && w[0] == '$' && !names.count(w.substr(1))) {
          names.emplace(w.substr(1), "p" + std::to_string(names.size()));
        }
      }
      for (const auto &w : t.utterance) {
        d.sentence.push_back(w.size() > 1 && w[0] == '$'
                                 ? "$" + names[w.substr(1)]
                                 : w);
      }
      d.placeholders.resize(names.size());
      for (const auto &param : t.params) {
        const std::string &n = names[param.name];
        d.placeholders[std::stoul(n.substr(1))] = {n, param.type};
      }
      d.value = RenamePlaceholders(d.value, names);
      d.flags = t.flags;
      d.functions = FragmentFunctions(d.value);
      d.outputs = FragmentOutputs(d.value, library_);
      Insert(std::make_shared<const Derivation>(std::move(d)));
    }
    // Parameter-name categories from the library's output parameters.
    std::vector<OutputInfo> outputs;
    for (const auto &cls : library_.classes()) {
      for (const auto &fn : library_.FunctionsOf(cls.name)) {
        if (fn.class_name != cls.name) continue;
        for (const auto &p : fn.params) {
          if (p.is_input()) continue;
          bool seen = false;
          for (const auto &o : outputs) seen = seen || (o.name == p.name && o.type == p.type);
          if (!seen) outputs.push_back({p.name, p.type, -1});
        }
      }
    }
    for (auto category : kParamCategories) {
      for (const auto &o : outputs) {
        if (!InParamCategory(category, o.type)) continue;
        Derivation d;
        d.category = std::string(category);
        d.sentence = NameWords(o.name);
        d.value = Fragment::OfParam(o);
        Insert(std::make_shared<const Derivation>(std::move(d)));
      }
    }
  }

  // pools_[category] = every derivation of depth <= max_depth, by depth;
  // lower_[category] = how many of them are shallower than max_depth.
  void BuildPools(int max_depth) {
    pools_.clear();
    lower_.clear();
    for (const auto &[category, levels] : charts_.charts) {
      auto &pool = pools_[category];
      for (int d = 0; d <= max_depth && d < static_cast<int>(levels.size()); ++d) {
        if (d == max_depth) lower_[category] = pool.size();
        pool.insert(pool.end(), levels[d].begin(), levels[d].end());
      }
      if (!lower_.count(category)) lower_[category] = pool.size();
    }
  }

  RuleOutput ExpandRule(int r, int depth) {
    const ConstructTemplate &rule = templates_.constructs[r];
    RuleOutput out;
    RuleStats &stats = out.stats;
    stats.rule = r;
    stats.depth = depth;
    stats.target = config_.TargetAt(depth);
    const auto vars = rule.Variables();
    const size_t k = vars.size();
    static const std::vector<DerivationPtr> kEmpty;
    std::vector<const std::vector<DerivationPtr> *> pools(k);
    std::vector<double> all(k), low(k);
    for (size_t i = 0; i < k; ++i) {
      auto it = pools_.find(vars[i].second);
      pools[i] = it == pools_.end() ? &kEmpty : &it->second;
      all[i] = static_cast<double>(pools[i]->size());
      low[i] = it == pools_.end() ? 0 : static_cast<double>(lower_[vars[i].second]);
    }
    // Candidate blocks: block j has its first deepest child at position j.
    std::vector<double> block(k);
    double total = 0;
    for (size_t j = 0; j < k; ++j) {
      double n = all[j] - low[j];
      for (size_t i = 0; i < k; ++i) {
        if (i < j) n *= low[i];
        if (i > j) n *= all[i];
      }
      block[j] = n;
      total += n;
    }
    if (k == 0) total = depth == 1 ? 1 : 0;
    stats.candidates = total;
    if (total <= 0) return out;

    auto rate_it = last_rate_.find(r);
    const double rate = rate_it == last_rate_.end() ? 1.0 : rate_it->second;
    const double p = std::min(1.0, stats.target / (total * rate));
    stats.probability = p;
    std::mt19937_64 rng(MixSeed(config_.seed, (static_cast<uint64_t>(r) << 8) | depth));
    const int64_t budget =
        static_cast<int64_t>(stats.target) * std::max(1, config_.candidate_budget);

    // Sample candidate indices.
    std::vector<uint64_t> picks;
    constexpr double kExactLimit = 4e18;
    if (total <= kExactLimit) {
      const auto n = static_cast<uint64_t>(total);
      uint64_t count = p >= 1.0 ? n
                                : std::binomial_distribution<uint64_t>(n, p)(rng);
      count = std::min<uint64_t>(count, budget);
      if (count == n) {
        picks.resize(n);
        for (uint64_t i = 0; i < n; ++i) picks[i] = i;
      } else {
        std::unordered_set<uint64_t> chosen;
        chosen.reserve(count * 2);
        for (uint64_t j = n - count; j < n; ++j) {
          uint64_t t = std::uniform_int_distribution<uint64_t>(0, j)(rng);
          chosen.insert(chosen.count(t) ? j : t);
        }
        picks.assign(chosen.begin(), chosen.end());
        std::sort(picks.begin(), picks.end());
      }
      std::shuffle(picks.begin(), picks.end(), rng);
    }

    CandidateBuilder builder(rule, library_);
    std::unordered_set<std::string> local;
    const auto &global = keys_[rule.lhs];
    std::vector<const Derivation *> children(k);
    auto decode = [&](uint64_t index) {
      double rest = static_cast<double>(index);
      size_t j = 0;
      while (j + 1 < k && rest >= block[j]) rest -= block[j++];
      auto idx = static_cast<uint64_t>(rest);
      for (size_t i = k; i-- > 0;) {
        uint64_t radix, offset = 0;
        if (i < j) {
          radix = static_cast<uint64_t>(low[i]);
        } else if (i == j) {
          radix = static_cast<uint64_t>(all[i] - low[i]);
          offset = static_cast<uint64_t>(low[i]);
        } else {
          radix = static_cast<uint64_t>(all[i]);
        }
        children[i] = (*pools[i])[offset + idx % radix].get();
        idx /= radix;
      }
    };
    auto random_pick = [&] {
      std::uniform_real_distribution<double> u(0, total);
      double x = u(rng);
      size_t j = 0;
      while (j + 1 < k && x >= block[j]) x -= block[j++];
      for (size_t i = 0; i < k; ++i) {
        size_t lo = i == j ? static_cast<size_t>(low[i]) : 0;
        size_t hi = i < j ? static_cast<size_t>(low[i]) : pools[i]->size();
        children[i] =
            (*pools[i])[std::uniform_int_distribution<size_t>(lo, hi - 1)(rng)].get();
      }
    };

    const int64_t draws = total <= kExactLimit
                              ? static_cast<int64_t>(picks.size())
                              : std::min<int64_t>(budget, std::llround(total * p));
    for (int64_t n = 0; n < draws && stats.retained < stats.target; ++n) {
      if (total <= kExactLimit) {
        decode(picks[n]);
      } else {
        random_pick();
      }
      ++stats.examined;
      auto d = Evaluate(rule, r, children, depth, builder);
      if (!d) continue;
      std::string key = d->Key();
      if (global.count(key) || !local.insert(key).second) continue;
      ++stats.passed;
      ++stats.retained;
      out.derivations.push_back(std::make_shared<const Derivation>(std::move(*d)));
    }
    return out;
  }

  std::optional<Derivation> Evaluate(const ConstructTemplate &rule, int r,
                                     const std::vector<const Derivation *> &children,
                                     int depth, CandidateBuilder &builder) {
    std::vector<std::string> functions;
    for (const auto *c : children) {
      functions.insert(functions.end(), c->functions.begin(), c->functions.end());
    }
    std::sort(functions.begin(), functions.end());
    functions.erase(std::unique(functions.begin(), functions.end()), functions.end());
    if (!config_.blacklist.empty()) {
      for (size_t i = 0; i < functions.size(); ++i) {
        for (size_t j = i + 1; j < functions.size(); ++j) {
          if (config_.Blacklisted(functions[i], functions[j])) return std::nullopt;
        }
      }
    }
    auto d = builder.Build(children, depth);
    if (!d) return std::nullopt;
    d->rule = r;
    d->flags = rule.flags;
    for (const auto *c : children) {
      d->flags.required.insert(c->flags.required.begin(), c->flags.required.end());
      d->flags.forbidden.insert(c->flags.forbidden.begin(), c->flags.forbidden.end());
    }
    for (const auto &f : d->flags.required) {
      if (d->flags.forbidden.count(f)) return std::nullopt;
    }
    d->functions = std::move(functions);
    if (!CheckFragment(&*d, library_)) return std::nullopt;
    d->outputs = FragmentOutputs(d->value, library_);
    return d;
  }

  const TemplateSet &templates_;
  const Library &library_;
  const GenerationConfig &config_;
  Charts charts_;
  std::map<std::string, std::unordered_set<std::string>> keys_;
  std::map<std::string, std::vector<DerivationPtr>> pools_;
  std::map<std::string, size_t> lower_;
  std::map<int, double> last_rate_;
};

}  // namespace

Charts BuildCharts(const TemplateSet &templates, const Library &library,
                   const GenerationConfig &config) {
  return ChartBuilder(templates, library, config).Run();
}

std::optional<Derivation> InstantiatePlaceholders(const Derivation &derivation,
                                                  const ParamDb &db,
                                                  const Library &library,
                                                  std::mt19937_64 &rng,
                                                  std::string *reason) {
  const auto uses = PlaceholderUses(derivation.value);
  auto surface = [](const Value &v) {
    std::string s;
    for (const auto &w : RenderValueWords(v)) s += w + " ";
    return s;
  };
  const auto &phs = derivation.placeholders;
  std::vector<Value> values(phs.size());
  std::set<std::string> used;
  for (size_t i = 0; i < phs.size(); ++i) {
    auto it = uses.find(phs[i].name);
    const std::string param = it == uses.end() ? "" : it->second.param;
    const auto examples = ExampleValues(library, param, phs[i].type);
    if (!db.HasValues(param, phs[i].type, examples)) {
      if (reason) *reason = "no-value:" + phs[i].type.ToString();
      return std::nullopt;
    }
    bool ok = false, drawn = false;
    for (int attempt = 0; attempt < 25 && !ok; ++attempt) {
      auto v = db.Draw(param, phs[i].type, examples, rng);
      if (!v) continue;
      drawn = true;
      if (used.insert(surface(*v)).second) {
        values[i] = std::move(*v);
        ok = true;
      }
    }
    if (!ok) {
      if (reason) {
        *reason = (drawn ? "duplicate-value:" : "no-value:") + phs[i].type.ToString();
      }
      return std::nullopt;
    }
  }
  // Numbers, and measures of one unit class, increase left to right.
  auto magnitude = [&](const Value &v) -> std::optional<double> {
    if (v.kind() == ValueKind::kNumber) return v.number();
    if (v.kind() != ValueKind::kMeasure) return std::nullopt;
    try {
      auto cls = TypeOfValue(v, library.units()).unit_class();
      auto base = library.units().BaseUnit(cls);
      if (!base) return std::nullopt;
      return ConvertMeasure(v, *base, library.units()).terms()[0].magnitude;
    } catch (const Error &) {
      return std::nullopt;
    }
  };
  std::map<std::string, std::vector<size_t>> groups;
  for (size_t i = 0; i < phs.size(); ++i) {
    if (magnitude(values[i])) groups[phs[i].type.ToString()].push_back(i);
  }
  for (auto &[type, idx] : groups) {
    std::vector<Value> sorted;
    for (size_t i : idx) sorted.push_back(values[i]);
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Value &a, const Value &b) {
      return *magnitude(a) < *magnitude(b);
    });
    for (size_t n = 0; n < idx.size(); ++n) values[idx[n]] = sorted[n];
  }

  std::map<std::string, size_t> index;
  for (size_t i = 0; i < phs.size(); ++i) index[phs[i].name] = i;
  Derivation out = derivation;
  out.sentence.clear();
  for (const auto &w : derivation.sentence) {
    auto it = w.size() > 1 && w[0] == '$' ? index.find(w.substr(1)) : index.end();
    if (it == index.end()) {
      out.sentence.push_back(w);
      continue;
    }
    for (auto &x : RenderValueWords(values[it->second])) {
      out.sentence.push_back(std::move(x));
    }
  }
  Rewriter rw;
  rw.value = [&](const Value &v, std::string_view) {
    if (!v.is_placeholder()) return v;
    auto it = index.find(v.text());
    return it == index.end() ? v : values[it->second];
  };
  out.value = derivation.value.Rewritten(rw);
  out.placeholders.clear();
  return out;
}

GenerationResult Generate(const TemplateSet &templates, const Library &library,
                          const ParamDb &db, const GenerationConfig &config) {
  Charts charts = BuildCharts(templates, library, config);
  GenerationResult result;
  result.stats = charts.stats;
  const auto roots = charts.All(templates.root);

  struct Outcome {
    std::optional<GeneratedExample> example;
    std::string reason;
  };
  std::vector<Outcome> outcomes(roots.size());
  ParallelFor(roots.size(), config.jobs, [&](size_t i) {
    const Derivation &d = *roots[i];
    Outcome &o = outcomes[i];
    if (!d.flags.Enabled(config.enabled_flags)) return;
    if (d.value.kind != FragmentKind::kProgram) {
      o.reason = "not-a-program";
      return;
    }
    std::mt19937_64 rng(MixSeed(config.seed, 0x5eed0000ULL + i));
    auto inst = InstantiatePlaceholders(d, db, library, rng, &o.reason);
    if (!inst) return;
    GeneratedExample ex;
    ex.text = Detokenize(inst->sentence);
    IdentifiedSentence ids = IdentifyArguments(ex.text);
    ex.sentence = std::move(ids.tokens);
    Program program = AssignNamedConstants(inst->value.program, ids.constants);
    auto typed = Typecheck(program, library);
    if (!typed.ok()) {
      o.reason = "typecheck:" + typed.diagnostics().front().code;
      return;
    }
    try {
      TypedProgram canon = Canonicalize(*typed, library);
      ex.program = EmitNn(canon.program);
      ex.flags.push_back(AllFunctions(canon.program).size() <= 1 ? "primitive"
                                                                 : "compound");
    } catch (const ValueError &) {
      o.reason = "canonicalize";
      return;
    }
    if (HasStringValue(ex.program)) {
      ex.flags.push_back("string");
    }
    ex.depth = d.depth;
    ex.rule = d.rule;
    o.example = std::move(ex);
  });
  std::unordered_set<std::string> seen;
  for (auto &o : outcomes) {
    if (!o.example) {
      if (!o.reason.empty()) ++result.dropped[o.reason];
      continue;
    }
    std::string key = JoinTokens(o.example->sentence) + "\t" +
                      JoinTokens(o.example->program);
    if (!seen.insert(key).second) {
      ++result.dropped["duplicate"];
      continue;
    }
    result.examples.push_back(std::move(*o.example));
  }
  return result;
}

}  // namespace vapl

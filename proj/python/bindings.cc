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

// Python bindings for the library, compiler front end, generator,
// augmentation and evaluation.

#include <map>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vapl/arguments.h"
#include "vapl/canonical.h"
#include "vapl/dataset.h"
#include "vapl/generator.h"
#include "vapl/nn_syntax.h"
#include "vapl/paramdb.h"
#include "vapl/parser.h"
#include "vapl/pipeline.h"
#include "vapl/printer.h"
#include "vapl/templates.h"
#include "vapl/typecheck.h"

namespace py = pybind11;

namespace vapl {
namespace {

std::string Describe(const std::vector<Diagnostic> &diagnostics) {
  std::string out;
  for (const auto &d : diagnostics) out += (out.empty() ? "" : "\n") + d.ToString();
  return out;
}

template <typename T>
T Unwrap(Checked<T> checked) {
  if (!checked.ok()) throw ValueError(Describe(checked.diagnostics()));
  return std::move(checked).value();
}

TypedProgram TypedFromText(const Library &library, const std::string &text, bool nn) {
  Program program = nn ? ParseNn(SplitTokens(text), library) : ParseProgram(text);
  return Unwrap(Typecheck(program, library));
}

py::dict ExampleDict(const DatasetExample &e) {
  py::dict d;
  d["id"] = e.id;
  d["flags"] = std::vector<std::string>(e.flags.begin(), e.flags.end());
  d["sentence"] = JoinTokens(e.sentence);
  std::vector<std::string> programs;
  for (const auto &p : e.programs) programs.push_back(JoinTokens(p));
  d["programs"] = programs;
  return d;
}

DatasetExample ExampleFromDict(const py::dict &d) {
  DatasetExample e;
  e.id = d["id"].cast<std::string>();
  if (d.contains("flags")) {
    for (auto &f : d["flags"].cast<std::vector<std::string>>()) e.flags.insert(f);
  }
  e.sentence = SplitTokens(d["sentence"].cast<std::string>());
  for (auto &p : d["programs"].cast<std::vector<std::string>>()) {
    e.programs.push_back(SplitTokens(p));
  }
  if (e.programs.empty()) throw ValueError("example " + e.id + " has no program");
  return e;
}

py::dict MetricsDict(const Metrics &m) {
  py::dict d;
  d["examples"] = m.total;
  d["programAccuracy"] = m.Rate(m.program_correct);
  d["functionAccuracy"] = m.Rate(m.function_correct);
  d["deviceAccuracy"] = m.Rate(m.device_correct);
  d["syntaxOkRate"] = m.Rate(m.syntax_ok);
  d["typeOkRate"] = m.Rate(m.type_ok);
  d["primitiveVsCompoundAccuracy"] = m.Rate(m.arity_correct);
  d["missingPredictions"] = m.missing;
  d["unknownPredictions"] = m.unknown;
  return d;
}

}  // namespace
}  // namespace vapl

PYBIND11_MODULE(_vapl, m) {
  using namespace vapl;
  m.doc() = "Virtual assistant programming language toolkit";

  static py::exception<Error> error(m, "VaplError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IoError &e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const SyntaxError &e) {
      PyErr_SetString(PyExc_SyntaxError, e.what());
    } catch (const ValueError &e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error &e) {
      error(e.what());
    }
  });

  py::class_<Library>(m, "Library")
      .def(py::init([](const std::vector<std::string> &paths) {
             return Unwrap(LoadLibrary(paths));
           }),
           py::arg("paths"))
      .def_static(
          "from_text", [](const std::string &text) { return Unwrap(LoadLibraryFromText(text)); },
          py::arg("text"))
      .def("class_names",
           [](const Library &lib) {
             std::vector<std::string> out;
             for (const auto &c : lib.classes()) out.push_back(c.name);
             return out;
           })
      .def("signatures", [](const Library &lib) {
        std::vector<std::string> out;
        for (const auto &c : lib.classes()) {
          for (const auto &fn : lib.FunctionsOf(c.name)) out.push_back(PrettySignature(fn));
        }
        return out;
      });

  m.def(
      "canonicalize",
      [](const Library &lib, const std::string &program, bool nn_input, bool nn_output) {
        Program canonical = Canonicalize(TypedFromText(lib, program, nn_input), lib).program;
        return nn_output ? JoinTokens(EmitNn(canonical)) : Pretty(canonical);
      },
      py::arg("library"), py::arg("program"), py::arg("nn_input") = false,
      py::arg("nn_output") = false,
      "Canonical form of a program; raises ValueError when it does not typecheck.");

  m.def(
      "to_nn",
      [](const Library &lib, const std::string &program) {
        return EmitNn(TypedFromText(lib, program, false).program);
      },
      py::arg("library"), py::arg("program"));

  m.def(
      "equivalent",
      [](const Library &lib, const std::string &a, const std::string &b) {
        return Equivalent(TypedFromText(lib, a, false), TypedFromText(lib, b, false), lib);
      },
      py::arg("library"), py::arg("a"), py::arg("b"));

  m.def(
      "identify_arguments",
      [](const std::string &text) {
        IdentifiedSentence s = IdentifyArguments(text);
        std::vector<std::pair<std::string, std::string>> constants;
        for (const auto &c : s.constants) {
          constants.emplace_back(NamedConstToken(c.kind, c.index), PrettyValue(c.value));
        }
        return py::make_tuple(s.tokens, constants);
      },
      py::arg("text"),
      "Tokens with literals replaced by named constants, and (token, value) pairs.");

  m.def(
      "generate",
      [](const Library &lib, const std::vector<std::string> &templates,
         const std::string &paramdb, uint64_t seed, int max_depth, int target, double decay,
         int jobs) {
        TemplateSet t = Unwrap(LoadTemplates(templates, lib));
        ParamDb db = ParamDb::Load(paramdb);
        GenerationConfig config;
        config.seed = seed;
        config.max_depth = max_depth;
        config.target = target;
        config.decay = decay;
        config.jobs = jobs;
        GenerationResult result;
        {
          py::gil_scoped_release release;
          result = Generate(t, lib, db, config);
        }
        py::list out;
        for (const auto &e : result.examples) {
          py::dict d;
          d["text"] = e.text;
          d["sentence"] = JoinTokens(e.sentence);
          d["program"] = JoinTokens(e.program);
          d["flags"] = e.flags;
          out.append(d);
        }
        return out;
      },
      py::arg("library"), py::arg("templates"), py::arg("paramdb"), py::kw_only(),
      py::arg("seed"), py::arg("max_depth") = 5, py::arg("target") = 2000,
      py::arg("decay") = 0.5, py::arg("jobs") = 1);

  m.def(
      "expand_parameters",
      [](const Library &lib, const py::dict &example, const std::string &paramdb, int factor,
         uint64_t seed) {
        ParamDb db = ParamDb::Load(paramdb);
        std::mt19937_64 rng(seed);
        py::list out;
        for (const auto &e : ExpandParameters(ExampleFromDict(example), db, lib, factor, rng)) {
          out.append(ExampleDict(e));
        }
        return out;
      },
      py::arg("library"), py::arg("example"), py::arg("paramdb"), py::arg("factor"),
      py::kw_only(), py::arg("seed"));

  m.def(
      "read_dataset",
      [](const std::string &path) {
        py::list out;
        for (const auto &e : ReadDataset(path)) out.append(ExampleDict(e));
        return out;
      },
      py::arg("path"));

  m.def(
      "write_dataset",
      [](const py::list &examples, const std::string &path) {
        std::vector<DatasetExample> v;
        for (const auto &e : examples) v.push_back(ExampleFromDict(e.cast<py::dict>()));
        WriteDataset(v, path);
      },
      py::arg("examples"), py::arg("path"));

  m.def(
      "evaluate",
      [](const Library &lib, const std::map<std::string, std::string> &predictions,
         const py::list &golds, int jobs) {
        std::map<std::string, Tokens> preds;
        for (const auto &[id, text] : predictions) preds[id] = SplitTokens(text);
        std::vector<DatasetExample> g;
        for (const auto &e : golds) g.push_back(ExampleFromDict(e.cast<py::dict>()));
        Metrics metrics;
        {
          py::gil_scoped_release release;
          metrics = Evaluate(preds, g, lib, jobs);
        }
        return MetricsDict(metrics);
      },
      py::arg("library"), py::arg("predictions"), py::arg("golds"), py::arg("jobs") = 1);

  m.def(
      "baseline_predict",
      [](const py::list &train, const std::vector<std::string> &sentences) {
        std::vector<DatasetExample> t;
        for (const auto &e : train) t.push_back(ExampleFromDict(e.cast<py::dict>()));
        RetrievalBaseline baseline(std::move(t));
        std::vector<std::string> out;
        for (const auto &s : sentences) out.push_back(JoinTokens(baseline.Predict(SplitTokens(s))));
        return out;
      },
      py::arg("train"), py::arg("sentences"));
}

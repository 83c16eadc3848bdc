# Copyright 2026 The vapl Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os

import pytest

import vapl

DATA = vapl.DATA_DIR


@pytest.fixture(scope="module")
def library():
    return vapl.bundled_library()


def test_signatures(library):
    sigs = library.signatures()
    assert "com.twitter" in library.class_names()
    assert any(s.startswith("action @com.twitter.post(") for s in sigs)


def test_bad_library_reports_diagnostics():
    with pytest.raises(ValueError):
        vapl.Library.from_text("class @a extends @missing { query f(out x : String); }")
    with pytest.raises(SyntaxError):
        vapl.Library.from_text("class @a { query f(out x : NoSuchType); }")
    with pytest.raises(OSError):
        vapl.Library(["/nonexistent/library.vapl"])


def test_canonicalize_sorts_bindings(library):
    a = vapl.canonicalize(
        library,
        'now => @com.gmail.send(subject = "hi", to = "bob@gmail.com"^^tt:email_address, message = "x");',
    )
    b = vapl.canonicalize(
        library,
        'now => @com.gmail.send(message = "x", subject = "hi", to = "bob@gmail.com"^^tt:email_address);',
    )
    assert a == b
    assert vapl.canonicalize(library, a) == a
    nn = vapl.canonicalize(library, a, nn_output=True)
    assert vapl.canonicalize(library, nn, nn_input=True, nn_output=True) == nn
    with pytest.raises(ValueError):
        vapl.canonicalize(library, "now => @com.twitter.post(foo = 1);")
    with pytest.raises(SyntaxError):
        vapl.canonicalize(library, "now => => notify")


def test_equivalent(library):
    assert vapl.equivalent(
        library,
        "now => @com.thecatapi.get() join @com.gmail.inbox() => notify;",
        "now => @com.gmail.inbox() join @com.thecatapi.get() => notify;",
    )


def test_identify_arguments():
    tokens, constants = vapl.identify_arguments("set the temperature to 25 C")
    assert tokens == ["set", "the", "temperature", "to", "NUMBER_0", "c"]
    assert constants == [("NUMBER_0", "25")]


def test_generate_is_deterministic(library):
    args = (library, [os.path.join(DATA, "templates.tmpl")], os.path.join(DATA, "paramdb"))
    a = vapl.generate(*args, seed=3, max_depth=2, target=100)
    b = vapl.generate(*args, seed=3, max_depth=2, target=100, jobs=2)
    assert a == b
    assert len(a) > 50
    for e in a[:50]:
        assert vapl.canonicalize(library, e["program"], nn_input=True, nn_output=True) == e["program"]


def test_expand_parameters(library):
    example = {
        "id": "p1",
        "flags": ["paraphrase", "primitive"],
        "sentence": "tweet good morning",
        "programs": ['now => @com.twitter.post param:status:String = " good morning "'],
    }
    out = vapl.expand_parameters(library, example, os.path.join(DATA, "paramdb"), 5, seed=1)
    assert len(out) == 5
    assert len({e["id"] for e in out}) == 5


def test_dataset_evaluate_and_baseline(library, tmp_path):
    golds = [
        {"id": "a", "flags": ["synthesized"], "sentence": "tweet funny cat",
         "programs": [vapl.canonicalize(library, 'now => @com.twitter.post(status = "funny cat");', nn_output=True)]},
        {"id": "b", "flags": ["synthesized"], "sentence": "show my emails",
         "programs": [vapl.canonicalize(library, "now => @com.gmail.inbox() => notify;", nn_output=True)]},
    ]
    path = str(tmp_path / "d.tsv")
    vapl.write_dataset(golds, path)
    back = vapl.read_dataset(path)
    assert [e["programs"] for e in back] == [e["programs"] for e in golds]
    preds = vapl.baseline_predict(back, [e["sentence"] for e in back])
    metrics = vapl.evaluate(library, {e["id"]: p for e, p in zip(back, preds)}, back)
    assert metrics["programAccuracy"] == 1.0
    metrics = vapl.evaluate(library, {"a": "now => ((", "b": preds[1]}, back)
    assert metrics["syntaxOkRate"] == 0.5
    assert metrics["programAccuracy"] == 0.5

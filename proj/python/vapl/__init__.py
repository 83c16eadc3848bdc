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

"""Toolkit for a virtual assistant programming language."""

import os

from ._vapl import (
    Library,
    VaplError,
    baseline_predict,
    canonicalize,
    equivalent,
    evaluate,
    expand_parameters,
    generate,
    identify_arguments,
    read_dataset,
    to_nn,
    write_dataset,
)

_HERE = os.path.dirname(os.path.abspath(__file__))

#: Bundled library, templates, parameter database and substitution table.
DATA_DIR = os.path.join(_HERE, "data")
if not os.path.isdir(DATA_DIR):
    DATA_DIR = os.path.normpath(os.path.join(_HERE, "..", "..", "data"))


def bundled_library():
    """The bundled example skill library."""
    return Library([os.path.join(DATA_DIR, "library.vapl")])


__all__ = [
    "DATA_DIR",
    "Library",
    "VaplError",
    "baseline_predict",
    "bundled_library",
    "canonicalize",
    "equivalent",
    "evaluate",
    "expand_parameters",
    "generate",
    "identify_arguments",
    "read_dataset",
    "to_nn",
    "write_dataset",
]

"""Problem-spec ingestion: alphabets, joint PMF, function, options.

A spec is a JSON document:

    {
      "alphabet_1": ["-2", "-1", "0", "1", "2"],
      "alphabet_2": ["-2", "-1", "0", "1", "2"],
      "joint_pmf": [[0.1, 0.1, 0, 0, 0], ...],
      "function": {"builtin": "first"}          # or {"table": [[x1, x2, out], ...]}
      "options": {"n": 1, "b": 2, "a": 5, "seed": 0}
    }

Symbols may be given as strings or numbers; when every symbol of an
alphabet parses as an integer the alphabet is canonicalized to integers so
numeric builtins (sum, product, modulo-k) apply directly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .graphs import FunctionTable, builtin_function
from .prob import JointPmf


def _canonical_symbol(x):
    if isinstance(x, bool):
        raise ConfigError(f"boolean symbol {x!r} not supported")
    if isinstance(x, (int, float)):
        return int(x) if float(x).is_integer() else x
    return x


def _canonical_alphabet(raw, what: str) -> tuple:
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError(f"{what} must be a non-empty list")
    try:
        syms = tuple(int(x) for x in raw)
    except (TypeError, ValueError):
        syms = tuple(_canonical_symbol(x) for x in raw)
    if len(set(syms)) != len(syms):
        raise ConfigError(f"{what} has repeated symbols")
    return syms


@dataclass(frozen=True)
class ProblemSpec:
    """A fully-parsed problem instance plus its raw document for hashing."""

    joint: JointPmf
    function: FunctionTable
    options: dict = field(default_factory=dict)
    name: str = ""
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def alphabet_1(self) -> tuple:
        return self.joint.row_alphabet

    @property
    def alphabet_2(self) -> tuple:
        return self.joint.col_alphabet

    def spec_hash(self) -> str:
        """Stable short hash of the canonical spec document."""
        doc = json.dumps(self.raw, sort_keys=True, default=str)
        return hashlib.sha256(doc.encode()).hexdigest()[:16]


def _parse_function(doc, a1, a2) -> FunctionTable:
    if not isinstance(doc, dict):
        raise ConfigError("'function' must be an object")
    if "builtin" in doc:
        return builtin_function(doc["builtin"], a1, a2, k=doc.get("k"))
    if "table" in doc:
        entries = doc["table"]
        if not isinstance(entries, list):
            raise ConfigError("'function.table' must be a list of [x1, x2, out] rows")
        lut = {}
        a1_by_str = {str(x): x for x in a1}
        a2_by_str = {str(x): x for x in a2}
        for row in entries:
            if not isinstance(row, (list, tuple)) or len(row) != 3:
                raise ConfigError(f"bad function table row {row!r}")
            x1, x2, out = row
            x1 = a1_by_str.get(str(x1), _canonical_symbol(x1))
            x2 = a2_by_str.get(str(x2), _canonical_symbol(x2))
            lut[(x1, x2)] = _canonical_symbol(out)
        f = FunctionTable(lut)
        f.check_total(a1, a2)
        return f
    raise ConfigError("'function' needs either 'builtin' or 'table'")


def spec_from_dict(doc: dict, name: str = "") -> ProblemSpec:
    if not isinstance(doc, dict):
        raise ConfigError("problem spec must be a JSON object")
    for key in ("alphabet_1", "alphabet_2", "joint_pmf", "function"):
        if key not in doc:
            raise ConfigError(f"problem spec missing {key!r}")
    a1 = _canonical_alphabet(doc["alphabet_1"], "alphabet_1")
    a2 = _canonical_alphabet(doc["alphabet_2"], "alphabet_2")
    matrix = doc["joint_pmf"]
    if not isinstance(matrix, list):
        raise ConfigError("'joint_pmf' must be a matrix (list of rows)")
    joint = JointPmf.from_rows(matrix, a1, a2)
    function = _parse_function(doc["function"], a1, a2)
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise ConfigError("'options' must be an object")
    return ProblemSpec(joint, function, dict(options), name or doc.get("name", ""), doc)


def load_spec(path: str | Path) -> ProblemSpec:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as e:
        raise ConfigError(f"cannot read spec {path}: {e}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"spec {path} is not valid JSON: {e}")
    return spec_from_dict(doc, name=path.stem)

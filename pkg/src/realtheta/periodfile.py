"""Reading and writing period-matrix files.

A file is one JSON document::

    {"g": 2, "re2": [[0, 1], [1, 0]], "im": [[3.0, 0.0], [0.0, 3.0]],
     "label": "optional", "source": "optional"}

``re2`` is ``2 Re(tau)`` as exact integers; ``im`` holds decimal floats.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import RealThetaError
from .intmat import SymIntMatrix
from .siegel import RiemannMatrix, validate_riemann

IM_SYM_TOL = 1e-12


class PeriodFileError(RealThetaError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class PeriodMatrixFile:
    g: int
    re2: SymIntMatrix
    im: np.ndarray
    label: Optional[str] = None
    source: Optional[str] = None

    def riemann_matrix(self) -> RiemannMatrix:
        return RiemannMatrix(im=self.im, re2=self.re2)

    def to_dict(self) -> dict:
        out = {"g": self.g, "re2": [list(r) for r in self.re2.entries],
               "im": [[float(x) for x in row] for row in self.im]}
        if self.label is not None:
            out["label"] = self.label
        if self.source is not None:
            out["source"] = self.source
        return out


def _line_of(text: str, key: str) -> Optional[int]:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def parse(text: str) -> PeriodMatrixFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PeriodFileError(f"malformed JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(doc, dict):
        raise PeriodFileError("top level must be an object", 1)
    for key in ("g", "re2", "im"):
        if key not in doc:
            raise PeriodFileError(f"missing required field '{key}'")
    g = doc["g"]
    if not isinstance(g, int) or isinstance(g, bool) or g < 1:
        raise PeriodFileError("'g' must be a positive integer", _line_of(text, "g"))

    def matrix(key, kind):
        rows = doc[key]
        line = _line_of(text, key)
        if (not isinstance(rows, list) or len(rows) != g
                or any(not isinstance(r, list) or len(r) != g for r in rows)):
            raise PeriodFileError(f"'{key}' must be a {g}x{g} matrix", line)
        for r in rows:
            for x in r:
                if isinstance(x, bool) or not isinstance(x, kind):
                    raise PeriodFileError(f"'{key}' has a non-{kind_name(kind)} entry {x!r}", line)
        return rows

    re2_rows = matrix("re2", int)
    im_rows = matrix("im", (int, float))
    re2_arr = np.array(re2_rows, dtype=object)
    if not (re2_arr == re2_arr.T).all():
        raise PeriodFileError("'re2' is not symmetric", _line_of(text, "re2"))
    im = np.array(im_rows, dtype=float)
    if not np.all(np.isfinite(im)):
        raise PeriodFileError("'im' has non-finite entries", _line_of(text, "im"))
    if np.max(np.abs(im - im.T)) > IM_SYM_TOL:
        raise PeriodFileError("'im' is not symmetric", _line_of(text, "im"))
    out = PeriodMatrixFile(g=g, re2=SymIntMatrix(re2_rows), im=im,
                           label=doc.get("label"), source=doc.get("source"))
    if not validate_riemann(out.riemann_matrix(), IM_SYM_TOL):
        raise PeriodFileError("'im' is not positive definite", _line_of(text, "im"))
    return out


def kind_name(kind) -> str:
    return "integer" if kind is int else "numeric"


def read(path) -> PeriodMatrixFile:
    return parse(Path(path).read_text())


def dumps(pm: PeriodMatrixFile) -> str:
    return json.dumps(pm.to_dict(), indent=2) + "\n"


def write(path, pm: PeriodMatrixFile) -> None:
    Path(path).write_text(dumps(pm))


def from_riemann(tau: RiemannMatrix, label: Optional[str] = None) -> PeriodMatrixFile:
    if tau.re2 is None:
        raise ValueError("only matrices with an exact doubled real part can be written")
    return PeriodMatrixFile(g=tau.g, re2=tau.re2, im=np.array(tau.im), label=label)

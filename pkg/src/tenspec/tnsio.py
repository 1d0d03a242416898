"""Reading and writing the ``.tns`` text format.

The first non-comment line is ``r n kind`` with ``kind`` one of
``sparse01`` or ``dense``. A ``sparse01`` body lists one 1-based index
tuple per line in strict dictionary order; a ``dense`` body holds the
``n**r`` entries in dictionary order, separated by any whitespace.
Lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .tensor import DenseTensor, Tensor, ZeroOneTensor

__all__ = ["TnsFormatError", "dumps", "loads", "read_tns", "write_tns"]


class TnsFormatError(ValueError):
    pass


def loads(text: str) -> Tensor:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TnsFormatError("empty .tns input")
    head = lines[0].split()
    if len(head) != 3:
        raise TnsFormatError(f"bad header {lines[0]!r}, expected 'r n kind'")
    try:
        r, n = int(head[0]), int(head[1])
    except ValueError:
        raise TnsFormatError(f"bad header {lines[0]!r}") from None
    kind = head[2]
    body = lines[1:]
    if kind == "sparse01":
        ones = []
        for ln in body:
            try:
                t = tuple(int(v) for v in ln.split())
            except ValueError:
                raise TnsFormatError(f"non-integer index line {ln!r}") from None
            if ones and t <= ones[-1]:
                raise TnsFormatError(f"tuple {t} not in strict dictionary order")
            ones.append(t)
        try:
            return ZeroOneTensor(r, n, ones)
        except ValueError as exc:
            raise TnsFormatError(str(exc)) from None
    if kind == "dense":
        try:
            vals = [float(v) for ln in body for v in ln.split()]
        except ValueError:
            raise TnsFormatError("non-numeric entry in dense body") from None
        if len(vals) != n**r:
            raise TnsFormatError(f"dense body has {len(vals)} entries, expected {n**r}")
        try:
            return DenseTensor(np.array(vals).reshape((n,) * r))
        except ValueError as exc:
            raise TnsFormatError(str(exc)) from None
    raise TnsFormatError(f"unknown kind {kind!r}")


def dumps(A: Tensor) -> str:
    if isinstance(A, ZeroOneTensor):
        out = [f"{A.order} {A.dim} sparse01"]
        out += [" ".join(map(str, t)) for t in A.ones]
    else:
        out = [f"{A.order} {A.dim} dense"]
        flat = A.data.reshape(-1)
        width = max(A.dim, 1)
        out += [" ".join(repr(float(v)) for v in flat[i : i + width]) for i in range(0, flat.size, width)]
    return "\n".join(out) + "\n"


def read_tns(path: str | os.PathLike) -> Tensor:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_tns(A: Tensor, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps(A), encoding="utf-8", newline="\n")

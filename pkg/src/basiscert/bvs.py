"""The BVS on-disk format: line-oriented, UTF-8, '#' comments.

    bvs 1
    norm lp <p> | norm sup | norm wlp <p> <w1> ... <wd>
    dim <d>
    count <N>
    v <x1> ... <xd>       (N lines)

Floats are written with repr so a parse/serialize round trip preserves at
least 15 significant digits.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .basis import BasisSystem, make_basis
from .errors import BvsFormatError
from .norms import NormSpec, fmt_float, norm_value
from .selection import CandidateSequence


@dataclass(frozen=True)
class VectorFile:
    """Parsed BVS payload before a role (basis vs candidates) is chosen."""

    norm: NormSpec
    dim: int
    vectors: Tuple[np.ndarray, ...]

    def to_basis(self, threshold=None) -> BasisSystem:
        kwargs = {} if threshold is None else {"threshold": threshold}
        return make_basis(self.vectors, self.norm, **kwargs)

    def to_candidates(self, delta=None) -> CandidateSequence:
        if delta is None:
            delta = min(norm_value(v, self.norm) for v in self.vectors)
        return CandidateSequence(vectors=self.vectors, delta=delta, norm=self.norm)


def _parse_float(token, lineno, what):
    try:
        value = float(token)
    except ValueError:
        raise BvsFormatError(f"non-numeric {what} {token!r}", lineno) from None
    if math.isnan(value):
        raise BvsFormatError(f"{what} may not be NaN", lineno)
    return value


def _parse_norm(tokens, lineno) -> NormSpec:
    if not tokens:
        raise BvsFormatError("empty norm declaration", lineno)
    kind = tokens[0]
    if kind == "sup":
        if len(tokens) != 1:
            raise BvsFormatError("norm sup takes no arguments", lineno)
        return NormSpec("sup")
    if kind == "lp":
        if len(tokens) != 2:
            raise BvsFormatError("norm lp takes exactly one exponent", lineno)
        return NormSpec("lp", _parse_float(tokens[1], lineno, "exponent"))
    if kind == "wlp":
        if len(tokens) < 3:
            raise BvsFormatError("norm wlp needs an exponent and weights", lineno)
        p = _parse_float(tokens[1], lineno, "exponent")
        weights = [_parse_float(t, lineno, "weight") for t in tokens[2:]]
        return NormSpec("wlp", p, np.array(weights))
    raise BvsFormatError(f"unknown norm kind {kind!r}", lineno)


def parse_bvs_text(text: str) -> VectorFile:
    header = {"norm": None, "dim": None, "count": None}
    header_lines = {}
    vectors = []
    saw_version = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key = tokens[0]
        if not saw_version:
            if key != "bvs":
                raise BvsFormatError(f"expected 'bvs 1' header, got {key!r}", lineno)
            if tokens[1:] != ["1"]:
                raise BvsFormatError(f"unknown version {' '.join(tokens[1:])!r}", lineno)
            saw_version = True
            continue
        if key in header:
            if header[key] is not None:
                raise BvsFormatError(f"duplicate {key!r} line", lineno)
            if key == "norm":
                header["norm"] = _parse_norm(tokens[1:], lineno)
            else:
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise BvsFormatError(f"{key} takes one positive integer", lineno)
                header[key] = int(tokens[1])
                if header[key] < 1:
                    raise BvsFormatError(f"{key} must be >= 1", lineno)
            header_lines[key] = lineno
        elif key == "v":
            for field in ("norm", "dim", "count"):
                if header[field] is None:
                    raise BvsFormatError(
                        f"vector line before required header field {field!r}", lineno
                    )
            entries = [_parse_float(t, lineno, "entry") for t in tokens[1:]]
            if len(entries) != header["dim"]:
                raise BvsFormatError(
                    f"vector has {len(entries)} entries, dim is {header['dim']}", lineno
                )
            vectors.append(np.array(entries))
        else:
            raise BvsFormatError(f"unknown directive {key!r}", lineno)
    if not saw_version:
        raise BvsFormatError("missing 'bvs 1' header", 1)
    for field in ("norm", "dim", "count"):
        if header[field] is None:
            raise BvsFormatError(f"missing required header field {field!r}")
    if len(vectors) != header["count"]:
        raise BvsFormatError(
            f"header declares count {header['count']} but file has "
            f"{len(vectors)} vector lines"
        )
    norm = header["norm"]
    norm.check_dim(header["dim"])
    return VectorFile(norm=norm, dim=header["dim"], vectors=tuple(vectors))


def parse_bvs(path) -> VectorFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_bvs_text(fh.read())


def serialize_bvs(norm: NormSpec, vectors) -> str:
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    dim = vectors[0].size
    lines = ["bvs 1", f"norm {norm.describe()}", f"dim {dim}", f"count {len(vectors)}"]
    for v in vectors:
        lines.append("v " + " ".join(fmt_float(x) for x in v))
    return "\n".join(lines) + "\n"

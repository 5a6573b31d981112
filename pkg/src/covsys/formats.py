"""Text and JSON serialization of covering systems and reduction traces.

Text format: one class per line as ``residue modulus``; ``#`` starts a
comment; blank lines are ignored. JSON: ``{"classes": [[a, n], ...]}``.
Traces: ``{"steps": [{"residue": a, "modulus": t, "prime": p}, ...]}``.
"""
from __future__ import annotations

import json

from .ecs import Ecs, ResidueClass
from .errors import CovsysError, EmptySystem, ParseError
from .reduction import ReductionTrace, SplitStep


def parse_text(text: str, source: str | None = None) -> Ecs:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = []
        pos = 0
        for tok in line.split():
            col = line.index(tok, pos)
            tokens.append((tok, col + 1))
            pos = col + len(tok)
        if len(tokens) != 2:
            col = tokens[2][1] if len(tokens) > 2 else len(line.rstrip()) + 1
            raise ParseError(f"expected 'residue modulus', got {len(tokens)} field(s)", lineno, col, source)
        values = []
        for tok, col in tokens:
            try:
                values.append(int(tok))
            except ValueError:
                raise ParseError(f"not an integer: {tok!r}", lineno, col, source) from None
        if values[1] < 1:
            raise ParseError(f"modulus must be positive, got {values[1]}", lineno, tokens[1][1], source)
        pairs.append(tuple(values))
    if not pairs:
        raise ParseError("no residue classes found", None, None, source)
    return Ecs(pairs)


def _load_json(text: str, source: str | None):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None


def parse_json(text: str, source: str | None = None) -> Ecs:
    data = _load_json(text, source)
    classes = data.get("classes") if isinstance(data, dict) else None
    if not isinstance(classes, list):
        raise ParseError('expected an object with a "classes" list', source=source)
    pairs = []
    for i, item in enumerate(classes):
        if (
            not isinstance(item, list) or len(item) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            raise ParseError(f"classes[{i}] must be [residue, modulus] integers", source=source)
        if item[1] < 1:
            raise ParseError(f"classes[{i}]: modulus must be positive, got {item[1]}", source=source)
        pairs.append((item[0], item[1]))
    try:
        return Ecs(pairs)
    except EmptySystem:
        raise ParseError("no residue classes found", source=source) from None


def parse_ecs(text: str, fmt: str = "auto", source: str | None = None) -> Ecs:
    if fmt == "auto":
        fmt = "json" if text.lstrip().startswith("{") else "text"
    if fmt == "json":
        return parse_json(text, source)
    if fmt == "text":
        return parse_text(text, source)
    raise ValueError(f"unknown format {fmt!r}")


def format_text(A: Ecs) -> str:
    return "".join(f"{c.residue} {c.modulus}\n" for c in A.classes)


def ecs_to_json(A: Ecs) -> dict:
    return {"classes": [[c.residue, c.modulus] for c in A.classes]}


def format_json(A: Ecs) -> str:
    return json.dumps(ecs_to_json(A))


def trace_to_json(trace: ReductionTrace) -> dict:
    return {
        "steps": [
            {"residue": s.parent_class.residue, "modulus": s.parent_class.modulus, "prime": s.prime}
            for s in trace.steps
        ]
    }


def parse_trace(text: str, source: str | None = None) -> ReductionTrace:
    data = _load_json(text, source)
    steps = data.get("steps") if isinstance(data, dict) else None
    if not isinstance(steps, list):
        raise ParseError('expected an object with a "steps" list', source=source)
    out = []
    for i, s in enumerate(steps):
        try:
            out.append(SplitStep(ResidueClass(int(s["residue"]), int(s["modulus"])), int(s["prime"])))
        except (KeyError, TypeError, ValueError, CovsysError) as exc:
            raise ParseError(f"steps[{i}]: {exc}", source=source) from None
    return ReductionTrace(tuple(out))

"""Canonical JSON rendering: byte-identical output for identical payloads.

Floats are printed with 17 significant digits so values round-trip; dict
keys are emitted sorted; Fractions render as 'p/q' strings.
"""

from __future__ import annotations

import json
from fractions import Fraction


def _normalize(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


def _encode(obj):
    if isinstance(obj, dict):
        items = sorted(obj.items())
        yield "{"
        for idx, (k, v) in enumerate(items):
            if idx:
                yield ","
            yield json.dumps(k)
            yield ":"
            yield from _encode(v)
        yield "}"
    elif isinstance(obj, list):
        yield "["
        for idx, v in enumerate(obj):
            if idx:
                yield ","
            yield from _encode(v)
        yield "]"
    elif isinstance(obj, bool) or obj is None:
        yield json.dumps(obj)
    elif isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            yield json.dumps(str(obj))
        else:
            yield format(obj, ".17g")
    elif isinstance(obj, int):
        yield str(obj)
    elif isinstance(obj, str):
        yield json.dumps(obj)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_canonical(obj) -> str:
    return "".join(_encode(_normalize(obj)))

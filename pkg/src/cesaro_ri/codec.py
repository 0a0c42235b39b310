"""JSON encoding of functions, fundamental functions and spaces.

Every object is a JSON object with a ``"kind"`` tag. Functions:

====================  ==============================================================
``step``              ``{"breaks": [0, .., 1], "values": [...]}``
``const``             ``{"c": 1.0}`` (decodes to a one-cell step)
``power``             ``{"c": 1.0, "a": -0.5}`` for ``c t^a``
``logrecip``          ``{"c": 1.0}`` for ``c log(1/t)``
``shiftedrecip``      ``{"y": 0.25}`` for ``1/(t+y)`` on ``[0, 1-y]``
``hyperbolic``        ``{"a": 0, "b": 1, "lo": 0.2, "hi": 1}`` for ``a + b/t`` on ``[lo, hi)``
``sum``               ``{"terms": [f, g, ...]}``
``scale``             ``{"k": 2.0, "inner": f}``
``restrict``          ``{"inner": f, "lo": 0, "hi": 0.5}``
``mirror``            ``{"inner": f}`` for ``f(1-t)``
``cesaro``            ``{"inner": f}`` lazy Cesàro image
``copson``            ``{"inner": f}`` lazy Copson image
``sampled``           ``{"grid", "values", "spread", "tail0": [alpha, beta] | null}``
====================  ==============================================================

Fundamental functions: ``power`` (``a``), ``log`` (``p``), ``ratio`` (``base``).
Spaces: ``lp`` (``p``, a number or ``"inf"``), ``lorentz`` (``phi``) and
``marcinkiewicz`` (``phi``, optional boolean ``equiv``).
"""

from __future__ import annotations

import json
import math
from typing import Any

from .fncore.asym import Asym
from .fncore.expr import (CesaroImage, CopsonImage, FunctionExpr, Hyperbolic, LogRecip, Mirror,
                          Power, Restrict, Sampled, Scale, ShiftedRecip, Step, Sum)
from .rispaces.phi import LogPhi, PowerPhi, QuasiConcave, RatioPsi
from .rispaces.spaces import Lorentz, Lp, Marcinkiewicz, RISpace


class CodecError(ValueError):
    """Malformed specification; the message starts with a JSON path."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def _num(obj: dict, key: str, path: str, default=None) -> float:
    if key not in obj:
        if default is not None:
            return default
        raise CodecError(f"{path}.{key}", "missing field")
    v = obj[key]
    if isinstance(v, str) and v.lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise CodecError(f"{path}.{key}", f"expected a number, got {v!r}")
    return float(v)


def _nums(obj: dict, key: str, path: str) -> tuple[float, ...]:
    v = obj.get(key)
    if not isinstance(v, list):
        raise CodecError(f"{path}.{key}", "expected a list of numbers")
    out = []
    for i, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise CodecError(f"{path}.{key}[{i}]", f"expected a number, got {x!r}")
        out.append(float(x))
    return tuple(out)


def _obj(v: Any, path: str) -> dict:
    if not isinstance(v, dict):
        raise CodecError(path, "expected an object")
    if "kind" not in v:
        raise CodecError(f"{path}.kind", "missing field")
    return v


def _build(path: str, ctor, *args):
    try:
        return ctor(*args)
    except (ValueError, TypeError) as exc:
        raise CodecError(path, str(exc)) from None


# functions --------------------------------------------------------------------

def decode_function(v: Any, path: str = "$") -> FunctionExpr:
    o = _obj(v, path)
    kind = o["kind"]
    if kind == "step":
        return _build(path, Step, _nums(o, "breaks", path), _nums(o, "values", path))
    if kind == "const":
        return _build(path, Step.const, _num(o, "c", path))
    if kind == "power":
        return _build(path, Power, _num(o, "c", path, 1.0), _num(o, "a", path))
    if kind == "logrecip":
        return _build(path, LogRecip, _num(o, "c", path, 1.0))
    if kind == "shiftedrecip":
        return _build(path, ShiftedRecip, _num(o, "y", path))
    if kind == "hyperbolic":
        return _build(path, Hyperbolic, _num(o, "a", path), _num(o, "b", path),
                      _num(o, "lo", path), _num(o, "hi", path))
    if kind == "sum":
        terms = o.get("terms")
        if not isinstance(terms, list) or not terms:
            raise CodecError(f"{path}.terms", "expected a nonempty list")
        return _build(path, Sum, tuple(decode_function(t, f"{path}.terms[{i}]")
                                       for i, t in enumerate(terms)))
    if kind == "scale":
        return _build(path, Scale, _num(o, "k", path), decode_function(o.get("inner"), f"{path}.inner"))
    if kind == "restrict":
        return _build(path, Restrict, decode_function(o.get("inner"), f"{path}.inner"),
                      _num(o, "lo", path), _num(o, "hi", path))
    if kind in ("mirror", "cesaro", "copson"):
        ctor = {"mirror": Mirror, "cesaro": CesaroImage, "copson": CopsonImage}[kind]
        return _build(path, ctor, decode_function(o.get("inner"), f"{path}.inner"))
    if kind == "sampled":
        tail = o.get("tail0")
        if tail is not None:
            if not (isinstance(tail, list) and len(tail) == 2):
                raise CodecError(f"{path}.tail0", "expected [alpha, beta] or null")
            tail = Asym(float(tail[0]), float(tail[1]))
        spread = _nums(o, "spread", path) if "spread" in o else ()
        return _build(path, Sampled, _nums(o, "grid", path), _nums(o, "values", path),
                      spread, bool(o.get("approx", True)), tail)
    raise CodecError(f"{path}.kind", f"unknown function kind {kind!r}")


def encode_function(f: FunctionExpr) -> dict:
    if isinstance(f, Step):
        return {"kind": "step", "breaks": list(f.breaks_), "values": list(f.values)}
    if isinstance(f, Power):
        return {"kind": "power", "c": f.c, "a": f.a}
    if isinstance(f, LogRecip):
        return {"kind": "logrecip", "c": f.c}
    if isinstance(f, ShiftedRecip):
        return {"kind": "shiftedrecip", "y": f.y}
    if isinstance(f, Hyperbolic):
        return {"kind": "hyperbolic", "a": f.a, "b": f.b, "lo": f.lo, "hi": f.hi}
    if isinstance(f, Sum):
        return {"kind": "sum", "terms": [encode_function(t) for t in f.terms]}
    if isinstance(f, Scale):
        return {"kind": "scale", "k": f.k, "inner": encode_function(f.inner)}
    if isinstance(f, Restrict):
        return {"kind": "restrict", "inner": encode_function(f.inner), "lo": f.lo, "hi": f.hi}
    for cls, tag in ((Mirror, "mirror"), (CesaroImage, "cesaro"), (CopsonImage, "copson")):
        if isinstance(f, cls):
            return {"kind": tag, "inner": encode_function(f.inner)}
    if isinstance(f, Sampled):
        if f.divergent:
            return {"kind": "divergent"}
        return {"kind": "sampled", "grid": list(f.grid), "values": list(f.values),
                "spread": list(f.spread), "approx": f.approx,
                "tail0": None if f.tail0 is None else [f.tail0.alpha, f.tail0.beta]}
    raise TypeError(f"cannot encode {type(f).__name__}")


# phi and spaces ---------------------------------------------------------------

def decode_phi(v: Any, path: str = "$") -> QuasiConcave:
    o = _obj(v, path)
    kind = o["kind"]
    if kind == "power":
        return _build(path, PowerPhi, _num(o, "a", path))
    if kind == "log":
        return _build(path, LogPhi, _num(o, "p", path))
    if kind == "ratio":
        return _build(path, RatioPsi, decode_phi(o.get("base"), f"{path}.base"))
    raise CodecError(f"{path}.kind", f"unknown phi kind {kind!r}")


def encode_phi(phi: QuasiConcave) -> dict:
    if isinstance(phi, PowerPhi):
        return {"kind": "power", "a": phi.a}
    if isinstance(phi, LogPhi):
        return {"kind": "log", "p": phi.p}
    if isinstance(phi, RatioPsi):
        return {"kind": "ratio", "base": encode_phi(phi.base)}
    raise TypeError(f"cannot encode {type(phi).__name__}")


def decode_space(v: Any, path: str = "$") -> RISpace:
    o = _obj(v, path)
    kind = o["kind"]
    if kind == "lp":
        return _build(path, Lp, _num(o, "p", path))
    if kind == "lorentz":
        return _build(path, Lorentz, decode_phi(o.get("phi"), f"{path}.phi"))
    if kind == "marcinkiewicz":
        equiv = o.get("equiv", False)
        if not isinstance(equiv, bool):
            raise CodecError(f"{path}.equiv", "expected true or false")
        return _build(path, Marcinkiewicz, decode_phi(o.get("phi"), f"{path}.phi"), equiv)
    raise CodecError(f"{path}.kind", f"unknown space kind {kind!r}")


def encode_space(X: RISpace) -> dict:
    if isinstance(X, Lp):
        return {"kind": "lp", "p": "inf" if math.isinf(X.p) else X.p}
    if isinstance(X, Lorentz):
        return {"kind": "lorentz", "phi": encode_phi(X.phi)}
    if isinstance(X, Marcinkiewicz):
        return {"kind": "marcinkiewicz", "phi": encode_phi(X.phi), "equiv": X.use_equiv_norm}
    raise TypeError(f"cannot encode {type(X).__name__}")


def parse_json(text: str, what: str) -> Any:
    """``json.loads`` with the error location folded into a :class:`CodecError`."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodecError(f"--{what}", f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None

"""Run configurations: flat ``key=value`` text, one model per file.

Tokens are separated by whitespace or newlines; ``#`` starts a comment.
Vectors are comma separated. A bare token is either a model name or a
boolean flag (``random``). Numbers may use ``pi`` and simple arithmetic
(``theta=pi/2``). Unknown keys are errors.

Example::

    model=asymmetric_xxz
    N=4 Gamma=1 Delta=0.5
    w=0.3,-0.1,0.2,0
    checks=pseudo_hermiticity,isospectrality
"""

from __future__ import annotations

import ast
import hashlib
import json
import math
import operator
from dataclasses import dataclass, field

import numpy as np

from . import calogero, spin_chain
from .errors import CapacityError, ConfigError, UsageError, WorkbenchError

MODELS = ("asymmetric_xxz", "symmetric_xxz", "general_pt", "haldane_shastry", "calogero_grid", "calogero_fock")
CHECKS = (
    "pseudo_hermiticity",
    "isospectrality",
    "reality",
    "pt_symmetry",
    "evolution",
    "oracle_xx",
    "exact_calogero",
    "conjugation",
)

APPLICABLE = {
    "asymmetric_xxz": ("pseudo_hermiticity", "isospectrality", "reality", "pt_symmetry", "evolution", "oracle_xx"),
    "symmetric_xxz": ("pseudo_hermiticity", "isospectrality", "reality", "pt_symmetry", "evolution", "oracle_xx"),
    "general_pt": ("reality", "pt_symmetry"),
    "haldane_shastry": ("pseudo_hermiticity", "isospectrality", "reality", "evolution"),
    "calogero_grid": ("isospectrality", "reality", "pt_symmetry", "exact_calogero"),
    "calogero_fock": ("pseudo_hermiticity", "conjugation"),
}

_COMMON = {
    "model": ("str", None),
    "checks": ("list", "all"),
    "seed": ("int", None),
    "tolerance_scale": ("float", 1.0),
    "output": ("str", None),
    "format": ("str", "json"),
}
_CHAIN = {
    "N": ("int", None),
    "Gamma": ("float", 1.0),
    "Delta": ("float", 0.0),
    "A": ("vector", 0.0),
    "B": ("vector", 0.0),
    "C": ("vector", 0.0),
    "w": ("vector", 0.0),
    "gamma": ("vector", None),
    "decouple_metric": ("bool", False),
    "random": ("bool", False),
    "theta": ("float", 0.0),
    "t_max": ("float", 10.0),
    "steps": ("int", 101),
    "preset": ("str", None),
    "q": ("float", None),
    "phase": ("float", None),
}
KEYS = {
    "asymmetric_xxz": _CHAIN,
    "symmetric_xxz": _CHAIN,
    "general_pt": {
        "N": ("int", None),
        "Gamma": ("float", 1.0),
        "Delta": ("float", 0.0),
        "gamma_b": ("vector", 1.0),
        "delta_b": ("vector", 1.0),
        "alphaR": ("vector", 0.0),
        "alphaI": ("vector", 0.0),
        "betaR": ("vector", 0.0),
        "betaI": ("vector", 0.0),
        "C": ("vector", 0.0),
        "theta": ("float", 0.0),
        "random": ("bool", False),
    },
    "haldane_shastry": {
        "N": ("int", None),
        "sign": ("int", 1),
        "w": ("vector", 0.0),
        "gamma": ("vector", None),
        "decouple_metric": ("bool", False),
        "random": ("bool", False),
        "t_max": ("float", 10.0),
        "steps": ("int", 101),
    },
    "calogero_grid": {
        "lambda": ("float", 2.0),
        "phi": ("float", 0.1),
        "n": ("int", 61),
        "L": ("float", 6.0),
        "levels": ("int", 5),
    },
    "calogero_fock": {
        "d": ("int", 20),
        "gamma": ("float", 0.3),
    },
}
ALIASES = {"λ": "lambda", "φ": "phi", "Γ": "Gamma", "Δ": "Delta", "θ": "theta", "lam": "lambda"}

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _number(text: str) -> float:
    text = text.replace("−", "-").replace("π", "pi")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError:
        raise ValueError(text) from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(text)

    value = ev(tree)
    if not math.isfinite(value):
        raise ValueError(text)
    return value


def _convert(kind, raw):
    if kind == "str":
        return raw
    if kind == "list":
        return [s for s in raw.split(",") if s]
    if kind == "bool":
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(raw)
    if kind == "int":
        value = _number(raw)
        if value != int(value):
            raise ValueError(raw)
        return int(value)
    if kind == "float":
        return _number(raw)
    if kind == "vector":
        parts = raw.split(",")
        if any(not p.strip() for p in parts):
            raise ValueError(raw)
        return [_number(p) for p in parts]
    raise AssertionError(kind)


def tokenize(text: str):
    """Yield ``(key, value_or_None, line, column)`` for every token."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        col = 0
        for piece in body.split():
            col = body.index(piece, col) + 1
            if "=" in piece:
                key, _, value = piece.partition("=")
                if not key or not value:
                    raise ConfigError(f"malformed token {piece!r}", lineno, col)
                yield key, value, lineno, col
            else:
                yield piece, None, lineno, col
            col += len(piece) - 1


@dataclass
class RunConfig:
    """Validated run description.

    ``params`` holds the model object (``ChainParams``, ``TildeParams``,
    ``GridSpec``) or, for ``calogero_fock``, a ``dict``; ``settings`` holds
    run controls (``theta``, ``t_max``, ``steps``, ``sign``, ``levels``...).
    """

    model: str
    params: object
    checks: list
    settings: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)
    report_only: set = field(default_factory=set)
    seed: int | None = None
    tolerance_scale: float = 1.0
    output: str | None = None
    format: str = "json"

    def echo(self) -> dict:
        """Input keys as given (after alias resolution), in canonical order."""
        return {k: self.raw[k] for k in sorted(self.raw)}

    def config_hash(self) -> str:
        blob = json.dumps(self.echo(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Parse and validate a configuration.

    ``overrides`` (string values, e.g. from CLI flags) replace keys from the
    text before validation.
    """
    given: dict[str, tuple[str, int, int]] = {}
    model = None
    for key, value, line, col in tokenize(text):
        key = ALIASES.get(key, key)
        if value is None:
            if key in MODELS:
                value = key
                key = "model"
            else:
                value = "true"
        if key in given:
            raise ConfigError(f"duplicate key {key!r}", line, col)
        given[key] = (value, line, col)
        if key == "model":
            model = value
    for key, value in (overrides or {}).items():
        if value is not None:
            given[key] = (str(value), None, None)
            if key == "model":
                model = str(value)
    if model is None:
        raise ConfigError("no model given")
    if model not in MODELS:
        line, col = given["model"][1:]
        raise ConfigError(f"unknown model {model!r}; choose from {', '.join(MODELS)}", line, col)

    schema = dict(_COMMON, **KEYS[model])
    values: dict = {}
    for key, (raw, line, col) in given.items():
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for model {model}", line, col)
        kind = schema[key][0]
        try:
            values[key] = _convert(kind, raw)
        except ValueError:
            raise ConfigError(f"bad {kind} value {raw!r} for key {key!r}", line, col) from None
    raw_echo = {k: values[k] for k in values if k not in ("output", "format")}

    fmt = values.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {fmt!r}")
    tolerance_scale = values.get("tolerance_scale", 1.0)
    if not tolerance_scale > 0:
        raise ConfigError("tolerance_scale must be positive")

    def get(key):
        return values.get(key, schema[key][1])

    try:
        params, settings = _BUILDERS[model](get, values)
    except (ConfigError, CapacityError):
        raise
    except WorkbenchError as exc:
        raise ConfigError(str(exc)) from exc

    checks = _resolve_checks(model, get("checks"), params)
    report_only = set()
    if get("checks") in ("all", ["all"]) and "pt_symmetry" in checks and not _pt_claimed(params, settings):
        report_only.add("pt_symmetry")
    return RunConfig(
        model=model,
        params=params,
        checks=checks,
        settings=settings,
        report_only=report_only,
        raw=raw_echo,
        seed=values.get("seed"),
        tolerance_scale=tolerance_scale,
        output=values.get("output"),
        format=fmt,
    )


def _oracle_applicable(params) -> bool:
    return (
        isinstance(params, spin_chain.ChainParams)
        and params.Delta == 0.0
        and not np.any(params.A)
        and not np.any(params.B)
    )


def _pt_claimed(params, settings) -> bool:
    """Whether the field parameters meet the PT condition (so invariance is asserted)."""
    if isinstance(params, spin_chain.ChainParams):
        return spin_chain.pt_condition(params.A, params.B, settings.get("theta", 0.0))
    if isinstance(params, spin_chain.TildeParams):
        return spin_chain.pt_condition_general(params.alphaR, params.alphaI, params.betaR, params.betaI, params.theta)
    return True


def _resolve_checks(model, requested, params):
    applicable = APPLICABLE[model]
    if requested == ["all"] or requested == "all":
        return [c for c in applicable if c != "oracle_xx" or _oracle_applicable(params)]
    out = []
    for name in requested:
        if name not in CHECKS:
            raise ConfigError(f"unknown check {name!r}")
        if name not in applicable:
            raise ConfigError(f"check {name!r} does not apply to model {model}")
        if name == "oracle_xx" and not _oracle_applicable(params):
            raise ConfigError("check 'oracle_xx' needs Delta = 0 and A = B = 0")
        if name not in out:
            out.append(name)
    return out


def _rng(values):
    if "seed" not in values:
        raise ConfigError("random parameters need an explicit seed")
    return np.random.default_rng(values["seed"])


def _chain(model):
    def build(get, values):
        settings = {"theta": get("theta"), "t_max": get("t_max"), "steps": get("steps")}
        if settings["steps"] < 2:
            raise ConfigError("steps must be >= 2")
        name = get("preset")
        if name is not None:
            if get("random"):
                raise ConfigError("preset and random are mutually exclusive")
            args = {"N": get("N")}
            extra = {"q": "q", "phase": "phi"}
            for key, arg in extra.items():
                if key in values:
                    args[arg] = values[key]
            for key in ("Gamma", "Delta", "A", "B", "C", "w"):
                if key in values:
                    v = values[key]
                    args[key] = v[0] if len(v) == 1 else v
            if args["N"] is None:
                raise ConfigError("preset needs N")
            p = spin_chain.preset(name, **args)
            settings["preset"] = name
        else:
            for key in ("q", "phase"):
                if key in values:
                    raise ConfigError(f"key {key!r} only applies together with a preset")
            n = get("N")
            if n is None:
                raise ConfigError("N is required")
            if get("random"):
                base = spin_chain.random_chain_params(n, _rng(values))
                fields = {k: getattr(base, k) for k in ("Gamma", "Delta", "A", "B", "C", "w")}
                if model == "symmetric_xxz":
                    fields["w"] = np.full(n, base.w[0])
            else:
                fields = {}
            for key in ("Gamma", "Delta"):
                if key in values or key not in fields:
                    fields[key] = get(key)
            for key in ("A", "B", "C", "w"):
                if key in values or key not in fields:
                    v = get(key)
                    fields[key] = v if np.ndim(v) == 0 or len(v) != 1 else v[0]
            gamma = get("gamma")
            p = spin_chain.ChainParams(
                N=n, gamma=gamma, tie_metric=not get("decouple_metric"), label="random" if get("random") else "", **fields
            )
        if model == "symmetric_xxz" and not np.all(p.w == p.w[0]):
            raise ConfigError("symmetric_xxz needs a uniform deformation w")
        return p, settings

    return build


def _general(get, values):
    n = get("N")
    if n is None:
        raise ConfigError("N is required")
    fields = {}
    if get("random"):
        rng = _rng(values)
        base = spin_chain.random_chain_params(n, rng)
        fields = vars(spin_chain.tilde_from_chain(base)).copy()
        fields.pop("theta")
        fields.pop("N")
    for key in ("Gamma", "Delta", "gamma_b", "delta_b", "alphaR", "alphaI", "betaR", "betaI", "C"):
        if key in values or key not in fields:
            v = get(key)
            fields[key] = v[0] if isinstance(v, list) and len(v) == 1 else v
    return spin_chain.TildeParams(N=n, theta=get("theta"), **fields), {"theta": get("theta")}


def _haldane(get, values):
    n = get("N")
    if n is None:
        raise ConfigError("N is required")
    if n < 3:
        raise ConfigError("haldane_shastry needs N >= 3")
    if n > spin_chain.MAX_SITES_HS:
        raise CapacityError(f"haldane_shastry is limited to N <= {spin_chain.MAX_SITES_HS}", dim=2**n)
    if get("sign") not in (1, -1):
        raise ConfigError("sign must be 1 or -1")
    if get("steps") < 2:
        raise ConfigError("steps must be >= 2")
    if get("random") and "w" not in values:
        w = _rng(values).uniform(-1, 1, n)
    else:
        w = get("w")
        w = w[0] if len(w) == 1 else w
    # ChainParams carries the w/gamma tie and validation; only N, w, gamma are used
    p = spin_chain.ChainParams(N=n, w=w, gamma=get("gamma"), tie_metric=not get("decouple_metric"))
    return p, {"sign": get("sign"), "t_max": get("t_max"), "steps": get("steps")}


def _grid(get, values):
    try:
        g = calogero.GridSpec(L=get("L"), n=get("n"), lam=get("lambda"), phi=get("phi"))
    except UsageError as exc:
        raise ConfigError(str(exc)) from exc
    return g, {"levels": get("levels")}


def _fock(get, values):
    d = get("d")
    if d < 8:
        raise ConfigError("d must be >= 8")
    if abs(get("gamma")) > 1.5:
        raise ConfigError("|gamma| must not exceed 1.5")
    return {"d": d, "gamma": get("gamma")}, {}


_BUILDERS = {
    "asymmetric_xxz": _chain("asymmetric_xxz"),
    "symmetric_xxz": _chain("symmetric_xxz"),
    "general_pt": _general,
    "haldane_shastry": _haldane,
    "calogero_grid": _grid,
    "calogero_fock": _fock,
}

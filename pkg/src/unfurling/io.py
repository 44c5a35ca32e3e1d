"""JSON file loading with uniform parse errors."""

from __future__ import annotations

import json
from pathlib import Path

from .cartan_graph import CartanDatum, GraphMap, ValuedGraph
from .params import ParamPack
from .scalars import field_to_json  # noqa: F401  (re-exported for the CLI)
from .unfurl import Spectra


class ParseError(ValueError):
    pass


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _wrap(fn, what, *args):
    try:
        return fn(*args)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed {what}: {exc}") from exc


def load_datum(path) -> CartanDatum:
    return _wrap(CartanDatum.from_json, "Cartan datum", read_json(path))


def load_pack(path, datum: CartanDatum) -> ParamPack:
    return _wrap(ParamPack.from_json, "parameter pack", read_json(path), datum)


def load_spectra(path, datum: CartanDatum, pack: ParamPack) -> Spectra:
    return _wrap(Spectra.from_json, "spectra", read_json(path), datum, pack.field)


def load_graph(path) -> ValuedGraph:
    return _wrap(ValuedGraph.from_json, "graph", read_json(path))


def load_map(path, domain: ValuedGraph, codomain: ValuedGraph) -> GraphMap:
    return _wrap(GraphMap.from_json, "graph map", read_json(path), domain, codomain)


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)

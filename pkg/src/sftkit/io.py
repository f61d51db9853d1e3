"""JSON (de)serialization for groups, SFTs, homomorphisms, tiles and configurations.

Canonical output sorts keys and indents by two spaces, so the same object
always serializes to the same bytes and ``digest`` is stable.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path
from typing import Any

from .automorphism import AutMatrix, shear
from .errors import MalformedInput, SftError
from .groups import (
    FREE_ABELIAN,
    HEISENBERG3,
    SEMIDIRECT,
    GroupDescriptor,
    GroupElement,
    Homomorphism,
    _default_names,
)
from .lattice import Lattice
from .sft import Alphabet, Configuration, Domain, Pattern, Sft, WangTile, WangTileSet


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def load_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc


def _malformed(fn):
    def wrapper(data, *args, **kwargs):
        try:
            return fn(data, *args, **kwargs)
        except MalformedInput:
            raise
        except SftError as exc:
            raise MalformedInput(f"{fn.__name__}: {exc}") from exc
        except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
            raise MalformedInput(f"{fn.__name__}: {exc}") from exc

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def group_to_json(g: GroupDescriptor) -> dict:
    out: dict[str, Any] = {"family": g.family}
    if g.family != HEISENBERG3:
        out["rank"] = g.rank
    if g.family == SEMIDIRECT:
        out["matrix"] = [list(r) for r in g.matrix]
    if g.generator_names != _default_names(g.family, g.rank):
        out["generator_names"] = list(g.generator_names)
    natural = g.rank + 1 if g.family == SEMIDIRECT else g.rank
    if g.declared_hirsch != natural:
        out["hirsch"] = g.declared_hirsch
    return out


@_malformed
def group_from_json(d: dict) -> GroupDescriptor:
    fam = d["family"]
    if fam == HEISENBERG3:
        rank = 3
    elif fam == SEMIDIRECT:
        rank = int(d.get("rank", len(d["matrix"])))
    elif fam == FREE_ABELIAN:
        rank = int(d["rank"])
    else:
        raise ValueError(f"unknown family {fam!r}")
    matrix = tuple(tuple(int(v) for v in row) for row in d["matrix"]) if fam == SEMIDIRECT else None
    return GroupDescriptor(fam, rank, matrix, tuple(d.get("generator_names", ())), int(d.get("hirsch", -1)))


def element_to_json(g: GroupElement) -> dict:
    return {"coords": list(g.coords)}


def _element(group: GroupDescriptor, d) -> GroupElement:
    coords = d["coords"] if isinstance(d, dict) else d
    return GroupElement(group, tuple(int(c) for c in coords))


def sft_to_json(x: Sft) -> dict:
    out = {
        "group": group_to_json(x.group),
        "alphabet": list(x.alphabet),
        "forbidden": [
            {"support": [element_to_json(g) for g in p.support],
             "symbols": [x.alphabet[s] for s in p.symbols]}
            for p in x.forbidden
        ],
    }
    if x.meta:
        out["meta"] = x.meta
    return out


@_malformed
def sft_from_json(d: dict) -> Sft:
    group = group_from_json(d["group"])
    alphabet = Alphabet(tuple(d["alphabet"]))
    forbidden = []
    for p in d.get("forbidden", []):
        support, symbols = p["support"], p["symbols"]
        if len(support) != len(symbols):
            raise ValueError("support and symbols differ in length")
        entries = tuple((_element(group, g), alphabet.index(s)) for g, s in zip(support, symbols))
        forbidden.append(Pattern(group, entries))
    return Sft(group, alphabet, tuple(forbidden), dict(d.get("meta", {})))


def hom_to_json(h: Homomorphism) -> dict:
    out = {
        "source": group_to_json(h.source),
        "target": group_to_json(h.target),
        "kind": h.kind,
        "images": [element_to_json(g) for g in h.images],
    }
    if h.kernel_generators:
        out["kernel"] = [element_to_json(g) for g in h.kernel_generators]
    return out


@_malformed
def hom_from_json(d: dict) -> Homomorphism:
    src, tgt = group_from_json(d["source"]), group_from_json(d["target"])
    images = tuple(_element(tgt, g) for g in d["images"])
    kernel = tuple(_element(src, g) for g in d.get("kernel", ()))
    return Homomorphism(src, tgt, images, d.get("kind", "general"), kernel)


@_malformed
def chain_from_json(d) -> list[Homomorphism]:
    items = d["chain"] if isinstance(d, dict) else d
    return [hom_from_json(h) for h in items]


def tiles_to_json(t: WangTileSet) -> dict:
    return {"tiles": [{"name": name, "n": tile.north, "e": tile.east, "s": tile.south, "w": tile.west}
                      for name, tile in zip(t.names, t.tiles)]}


@_malformed
def tiles_from_json(d: dict) -> WangTileSet:
    tiles = tuple(WangTile(str(t["n"]), str(t["e"]), str(t["s"]), str(t["w"])) for t in d["tiles"])
    names = tuple(str(t["name"]) for t in d["tiles"]) if all("name" in t for t in d["tiles"]) else ()
    return WangTileSet(tiles, names)


def external_tiles(name: str = "jeandel_rao") -> WangTileSet:
    """Bundled Wang tile data from outside sources (see the file's provenance field)."""
    text = resources.files("sftkit.data").joinpath(f"{name}.json").read_text()
    return tiles_from_json(json.loads(text))


def domain_to_json(dom: Domain) -> dict:
    if dom.is_torus:
        return {"kind": "torus", "lattice": [list(r) for r in dom.lattice.basis]}
    if dom.radius is not None:
        return {"kind": "ball", "radius": dom.radius}
    return {"kind": "window", "cells": [list(g.coords) for g in dom.cells]}


def _domain(group: GroupDescriptor, d: dict) -> Domain:
    kind = d["kind"]
    if kind == "torus":
        return Domain.torus(group, Lattice(d["lattice"]))
    if kind == "ball":
        return Domain.ball(group, int(d["radius"]))
    if kind == "window":
        return Domain.window(group, [_element(group, c) for c in d["cells"]])
    raise ValueError(f"unknown domain kind {kind!r}")


def config_to_json(c: Configuration, alphabet: Alphabet) -> dict:
    return {
        "group": group_to_json(c.group),
        "alphabet": list(alphabet),
        "domain": domain_to_json(c.domain),
        "values": [alphabet[v] for v in c.values],
    }


@_malformed
def config_from_json(d: dict) -> tuple[Configuration, Alphabet]:
    group = group_from_json(d["group"])
    alphabet = Alphabet(tuple(d["alphabet"]))
    dom = _domain(group, d["domain"])
    values = d["values"]
    if isinstance(values, dict):
        # {"x,y": symbol} keyed form; keys may be any representative on a torus
        vals = [None] * len(dom)
        for key, sym in values.items():
            pos = dom.position(_element(group, [int(v) for v in key.split(",")]))
            if pos is None:
                raise ValueError(f"cell {key} is outside the domain")
            vals[pos] = alphabet.index(sym)
        if any(v is None for v in vals):
            raise ValueError("values do not cover the domain")
        return Configuration(dom, tuple(vals)), alphabet
    return Configuration(dom, tuple(alphabet.index(s) for s in values)), alphabet


@_malformed
def automorphism_from_json(d: dict) -> AutMatrix:
    if "matrix" in d:
        return AutMatrix(d["matrix"])
    if "shear" in d:
        return shear(d["shear"]["u"], d["shear"]["v"])
    raise ValueError("expected a 'matrix' or 'shear' key")

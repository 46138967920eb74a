"""On-disk formats: JSON documents for spaces, maps, chains, and
catalogs, with every scalar an exact rational string "p/q" or "p".

Map files reference their domain and codomain space files by path,
resolved relative to the map file (or the POLYBAN_WORKSPACE root when
set).
"""

from __future__ import annotations

import json
import os
from typing import List

from .colimits import Chain
from .errors import InputError
from .injectivity import MorphismCatalog, catalog
from .maps import LinearMap
from .rationals import rat, rat_str
from .spaces import PolyhedralSpace, make_space

WORKSPACE_ENV = "POLYBAN_WORKSPACE"


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _resolve(ref: str, relative_to: str) -> str:
    if os.path.isabs(ref):
        return ref
    root = os.environ.get(WORKSPACE_ENV)
    if root and os.path.exists(os.path.join(root, ref)):
        return os.path.join(root, ref)
    return os.path.join(os.path.dirname(os.path.abspath(relative_to)), ref)


def _rat_rows(rows, what: str):
    try:
        return [[rat(x) for x in row] for row in rows]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"non-rational entry in {what}: {exc}") from exc


def load_space(path: str) -> PolyhedralSpace:
    doc = _load_json(path)
    if not isinstance(doc, dict) or ("vertices" in doc) == ("facets" in doc):
        raise InputError(f"{path}: need exactly one of 'vertices' or 'facets'")
    key = "vertices" if "vertices" in doc else "facets"
    rows = _rat_rows(doc[key], f"{path}:{key}")
    if "dim" in doc and any(len(r) != doc["dim"] for r in rows):
        raise InputError(f"{path}: rows do not match dim = {doc['dim']}")
    if key == "vertices":
        return make_space(vertices=rows)
    return make_space(facets=rows)


def save_space(space: PolyhedralSpace, path: str) -> None:
    doc = {
        "dim": space.dim,
        "vertices": [[rat_str(x) for x in v] for v in space.ball_vertices],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_map(path: str) -> LinearMap:
    doc = _load_json(path)
    for key in ("domain", "codomain", "matrix"):
        if key not in doc:
            raise InputError(f"{path}: missing field {key!r}")
    domain = load_space(_resolve(doc["domain"], path))
    codomain = load_space(_resolve(doc["codomain"], path))
    matrix = _rat_rows(doc["matrix"], f"{path}:matrix")
    try:
        return LinearMap(domain, codomain, tuple(tuple(r) for r in matrix))
    except Exception as exc:
        raise InputError(f"{path}: {exc}") from exc


def save_map(f: LinearMap, path: str, domain_ref: str, codomain_ref: str) -> None:
    doc = {
        "domain": domain_ref,
        "codomain": codomain_ref,
        "matrix": [[rat_str(x) for x in row] for row in f.matrix],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_chain(path: str) -> Chain:
    doc = _load_json(path)
    if "links" not in doc:
        raise InputError(f"{path}: missing field 'links'")
    links = [load_map(_resolve(p, path)) for p in doc["links"]]
    if links:
        spaces = [links[0].domain] + [l.codomain for l in links]
    elif "spaces" in doc and doc["spaces"]:
        spaces = [load_space(_resolve(doc["spaces"][0], path))]
    else:
        raise InputError(f"{path}: a chain needs links or at least one space")
    return Chain(tuple(spaces), tuple(links))


def load_catalog(path: str) -> MorphismCatalog:
    doc = _load_json(path)
    if "maps" not in doc or not isinstance(doc["maps"], list):
        raise InputError(f"{path}: missing field 'maps'")
    named = []
    for entry in doc["maps"]:
        if "name" not in entry or "path" not in entry:
            raise InputError(f"{path}: catalog entries need 'name' and 'path'")
        named.append((entry["name"], load_map(_resolve(entry["path"], path))))
    return catalog(named)


def parse_vectors(text: str) -> List[tuple]:
    """Assignment syntax: vectors split by ';', coordinates by ','."""
    try:
        return [tuple(rat(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad vector list {text!r}: {exc}") from exc


def load_formula(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc

"""Reading the curve catalog (see ``data/catalog.txt`` for the grammar)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path

from .curve import CurveModel, elliptic_curve, hyperelliptic_curve, plane_curve, projective_line
from .errors import CatalogError
from .ff import GF, make_field
from .polyarith import MultiPoly
from .twovar import PicProfile


@dataclass
class CatalogEntry:
    name: str
    p: int
    f: int
    model: str
    params: dict = dc_field(default_factory=dict)
    expect_N: list[int] | None = None
    expect_L: list[int] | None = None
    expect_h: int | None = None
    profile: dict[int, list[int]] = dc_field(default_factory=dict)

    @property
    def field(self) -> GF:
        return make_field(self.p, self.f)

    def build(self) -> CurveModel:
        F = self.field
        try:
            if self.model == "line":
                return projective_line(F, self.name)
            if self.model == "elliptic":
                return elliptic_curve(F, int(self.params["a"]), int(self.params["b"]), self.name)
            if self.model == "hyperelliptic":
                return hyperelliptic_curve(F, _ints(self.params["f"]), self.name)
            if self.model == "plane":
                return plane_curve(F, _parse_plane(F, self.params["poly"]), self.name)
        except KeyError as e:
            raise CatalogError(f"{self.name}: missing key {e}") from None
        raise CatalogError(f"{self.name}: unknown model {self.model!r}")

    def pic_profile(self) -> PicProfile | None:
        if not self.profile or self.expect_h is None:
            return None
        rows = [self.profile[n] for n in sorted(self.profile)]
        g = (len(rows) + 1) // 2
        return PicProfile(g, self.expect_h, tuple(tuple(r) for r in rows))


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split()]


def _expand_row(text: str) -> list[int]:
    out = []
    for tok in text.split():
        if "*" in tok:
            v, k = tok.split("*")
            out.extend([int(v)] * int(k))
        else:
            out.append(int(tok))
    return out


def _parse_plane(F: GF, text: str) -> MultiPoly:
    terms = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            c, exps = part.split(":")
            e = tuple(int(x) for x in exps.split(","))
        except ValueError:
            raise CatalogError(f"bad plane term {part!r}") from None
        if len(e) != 3:
            raise CatalogError(f"plane term {part!r} needs three exponents")
        terms[e] = F.add(terms.get(e, 0), int(c) % F.q)
    return MultiPoly(F, terms, 3)


def _parse_field(text: str) -> tuple[int, int]:
    if "^" in text:
        p, f = text.split("^")
        return int(p), int(f)
    return int(text), 1


def parse_catalog(text: str) -> list[CatalogEntry]:
    entries = []
    block: dict[str, str] = {}

    def flush():
        if not block:
            return
        if "name" not in block or "field" not in block or "model" not in block:
            raise CatalogError(f"block {block} lacks name, field or model")
        p, f = _parse_field(block["field"])
        e = CatalogEntry(block["name"], p, f, block["model"])
        for k, v in block.items():
            if k in ("name", "field", "model"):
                continue
            if k == "expect.N":
                e.expect_N = _ints(v)
            elif k == "expect.L":
                e.expect_L = _ints(v)
            elif k == "expect.h":
                e.expect_h = int(v)
            elif k.startswith("profile."):
                e.profile[int(k.split(".", 1)[1])] = _expand_row(v)
            else:
                e.params[k] = v
        entries.append(e)
        block.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            flush()
            continue
        if "=" not in line:
            raise CatalogError(f"line {lineno}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        if k in block:
            raise CatalogError(f"line {lineno}: duplicate key {k!r}")
        block[k] = v
    flush()
    names = [e.name for e in entries]
    if len(set(names)) != len(names):
        raise CatalogError("duplicate curve names")
    return entries


def default_catalog_text() -> str:
    return resources.files("curvezeta").joinpath("data/catalog.txt").read_text()


def load_catalog(path: str | os.PathLike | None = None) -> dict[str, CatalogEntry]:
    text = Path(path).read_text() if path else default_catalog_text()
    return {e.name: e for e in parse_catalog(text)}


def resolve(spec: str, catalog: dict[str, CatalogEntry] | None = None) -> CatalogEntry:
    """``NAME`` or ``catalog/NAME``, looked up in the given or shipped catalog."""
    catalog = catalog if catalog is not None else load_catalog()
    name = spec.split("/", 1)[1] if spec.startswith("catalog/") else spec
    if name not in catalog:
        raise CatalogError(f"unknown curve {spec!r}; known: {', '.join(catalog)}")
    return catalog[name]

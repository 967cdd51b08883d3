"""Homology of Loday complexes, tabulated by total degree and weight."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .loday import LodayComplex, LodaySpec
from .sparse import SparseMatrix, rank, solve


class HomologyError(ValueError):
    pass


@dataclass
class HomologyTable:
    """Dimensions ``dims[(d, w)]`` of homology in total degree d and weight w."""

    field: str
    dims: dict = dc_field(default_factory=dict)
    max_degree: int = 0
    max_weight: int = 0
    label: str = ""

    def get(self, d: int, w: Optional[int] = None) -> int:
        if w is None:
            return sum(v for (d2, _), v in self.dims.items() if d2 == d)
        return self.dims.get((d, w), 0)

    def by_degree(self) -> list:
        return [self.get(d) for d in range(self.max_degree + 1)]

    def entries(self):
        return sorted(self.dims.items())

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "field": self.field,
            "max_degree": self.max_degree,
            "max_weight": self.max_weight,
            "dims": [[d, w, v] for (d, w), v in self.entries()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HomologyTable":
        return cls(
            data["field"], {(int(d), int(w)): int(v) for d, w, v in data["dims"]},
            int(data["max_degree"]), int(data["max_weight"]), data.get("label", ""),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "HomologyTable":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["degree", "weight", "dim"])
        for (d, w), v in self.entries():
            wr.writerow([d, w, v])
        return buf.getvalue()


def strand_homology(cx: LodayComplex, q: int, s: int, w: int, ranks: Optional[dict] = None) -> int:
    """Dimension of homology at simplicial degree q of the internal-degree-s strand."""
    ranks = {} if ranks is None else ranks

    def rk(k):
        if k not in ranks:
            ranks[k] = rank(cx.differential(*k)) if k[0] >= 1 else 0
        return ranks[k]

    n = len(cx.basis(q, s, w))
    return n - rk((q, s, w)) - rk((q + 1, s, w))


def homology_dims(cx, max_degree: Optional[int] = None, weights=None, label: str = "") -> HomologyTable:
    """Total-degree homology ``H_d`` for ``d <= max_degree`` in each weight."""
    if isinstance(cx, LodaySpec):
        cx = LodayComplex(cx)
    D = cx.spec.degree_budget if max_degree is None else max_degree
    if D > cx.spec.degree_budget:
        raise HomologyError(f"degree {D} exceeds the budget {cx.spec.degree_budget}")
    ws = list(cx.weights()) if weights is None else list(weights)
    ranks: dict = {}
    dims = {}
    for w in ws:
        for d in range(D + 1):
            total = 0
            for q in range(d + 1):
                total += strand_homology(cx, q, d - q, w, ranks)
            if total:
                dims[(d, w)] = total
    return HomologyTable(cx.field.name, dims, D, max(ws) if ws else 0, label)


def euler_check(cx: LodayComplex, w: int, s: int = 0) -> bool:
    """Alternating chain count equals alternating homology count on a strand.

    Only meaningful through the truncation: compares degrees ``q <= D`` with the
    rank of the outgoing differential at ``D + 1`` accounted for.
    """
    D = cx.spec.degree_budget - s
    if D < 0:
        return True
    chi_c = sum((-1) ** q * len(cx.basis(q, s, w)) for q in range(D + 1))
    chi_h = sum((-1) ** q * strand_homology(cx, q, s, w) for q in range(D + 1))
    r = rank(cx.differential(D + 1, s, w))
    return chi_c == chi_h + (-1) ** D * r


def solve_boundary(cx: LodayComplex, q: int, s: int, w: int, target: dict):
    """Find a chain ``z`` in block (q+1, s, w) with ``dz = target``, or None.

    ``target`` maps basis monomials of block (q, s, w) to coefficients.
    Returned as ``{monomial: coefficient}``.
    """
    idx = cx.basis_index(q, s, w)
    b = {}
    for m, c in target.items():
        if m not in idx:
            raise HomologyError(f"{m} is not a basis monomial of block {(q, s, w)}")
        b[idx[m]] = c
    M = cx.differential(q + 1, s, w)
    z = solve(M, b)
    if z is None:
        return None
    src = cx.basis(q + 1, s, w)
    return {src[k]: v for k, v in sorted(z.items())}


def compare_tables(a: HomologyTable, b: HomologyTable):
    """First ``(d, w, a_value, b_value)`` where the tables differ, or None.

    Scans degrees, then weights, over the common range.
    """
    D = min(a.max_degree, b.max_degree)
    W = min(a.max_weight, b.max_weight)
    for d in range(D + 1):
        for w in range(W + 1):
            if a.get(d, w) != b.get(d, w):
                return (d, w, a.get(d, w), b.get(d, w))
    return None


def compare_full_vs_normalized(spec, max_degree: Optional[int] = None) -> dict:
    """Homology of the full (Moore) complex against the normalized one.

    The two must agree; returns both tables and the first disagreement.
    """
    from dataclasses import replace
    full = homology_dims(LodayComplex(replace(spec, normalized=False)), max_degree, label="full")
    norm = homology_dims(LodayComplex(replace(spec, normalized=True)), max_degree, label="normalized")
    div = compare_tables(full, norm)
    return {"equal": div is None, "first_divergence": div, "full": full, "normalized": norm}

"""E^2 pages of the spectral sequence of a twisted cartesian product.

For ``E = F x_tau B`` the Loday construction over E is the twisted Loday
construction over B of the fiberwise construction.  Filtering by columns,
the E^2 term is the homology, in simplicial degree p, of the twisted Loday
construction over B of the graded fiber homology algebra, restricted to its
internal degree q strand.  The fiber homology algebra is supplied by the
caller; multiplicative structure on homology is not extracted here.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .algebra import Algebra, AlgebraAction, exterior, scaling_action
from .field import Field
from .homology import HomologyTable, homology_dims, strand_homology
from .loday import LodayComplex, LodaySpec, Twist
from .simplicial import TruncatedSimplicialSet, TwistingFunction, cyclic_group, sphere


@dataclass
class E2Page:
    """Dimensions ``dims[(p, q, w)]`` of E^2_{p,q} in weight w."""

    field: str
    dims: dict = dc_field(default_factory=dict)
    max_total: int = 0
    max_weight: int = 0
    provenance: dict = dc_field(default_factory=dict)

    def get(self, p: int, q: int, w: Optional[int] = None) -> int:
        if w is None:
            return sum(v for (p2, q2, _), v in self.dims.items() if (p2, q2) == (p, q))
        return self.dims.get((p, q, w), 0)

    def total(self, n: int, w: Optional[int] = None) -> int:
        return sum(self.get(p, n - p, w) for p in range(n + 1))

    def rows(self) -> list:
        return sorted({q for (_, q, _) in self.dims})

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "max_total": self.max_total,
            "max_weight": self.max_weight,
            "provenance": self.provenance,
            "dims": [[p, q, w, v] for (p, q, w), v in sorted(self.dims.items())],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "E2Page":
        return cls(data["field"], {(p, q, w): v for p, q, w, v in data["dims"]},
                   data["max_total"], data["max_weight"], data.get("provenance", {}))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["p", "q", "weight", "dim"])
        for (p, q, w), v in sorted(self.dims.items()):
            wr.writerow([p, q, w, v])
        return buf.getvalue()


def e2_page(B: TruncatedSimplicialSet, fiber: Algebra, action: Optional[AlgebraAction],
            tau: Optional[TwistingFunction], max_total: int, max_weight: Optional[int] = None) -> E2Page:
    """E^2_{p,q} for p + q <= max_total, from the fiber homology algebra.

    Uses the unpointed twisted Loday construction of ``fiber`` over ``B``.
    """
    twist = Twist(tau, action) if tau is not None else None
    spec = LodaySpec(B, fiber, "unpointed", twist, max_total, max_weight)
    cx = LodayComplex(spec)
    ranks: dict = {}
    dims = {}
    for w in cx.weights():
        for n in range(max_total + 1):
            for p in range(n + 1):
                h = strand_homology(cx, p, n - p, w, ranks)
                if h:
                    dims[(p, n - p, w)] = h
    prov = {
        "base": repr(B),
        "fiber": fiber.label or repr(fiber),
        "twisted": tau is not None and not tau.is_trivial(),
    }
    return E2Page(fiber.field.name, dims, max_total, spec.weight_budget, prov)


def twisted_hochschild_exterior(field: Field, sign: int, degrees: int) -> HomologyTable:
    """Homology of the twisted Hochschild complex of Λ(εx), εx -> sign·εx.

    Unpointed (coefficients Λ(εx) itself), reported by total degree.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    E = exterior(field)
    S = sphere(1, degrees + 1)
    G = cyclic_group(2)
    tau = TwistingFunction.from_edges(S, G, {"a": 1})
    twist = Twist(tau, scaling_action(E, {"ex": sign}))
    cx = LodayComplex(LodaySpec(S, E, "unpointed", twist, degrees))
    return homology_dims(cx, label=f"twisted HH of exterior, sign {sign:+d}")


def circle_positions(S: TruncatedSimplicialSet, q: int) -> list:
    """Simplices of the minimal circle at level q in Hochschild position order.

    Position 0 is the basepoint; position j >= 1 is found from ``d_0``, which
    merges positions 0 and 1 and shifts the rest down by one.
    """
    base = S.basepoint
    pos = {base[q]: 0}

    def position(lvl, x):
        if x == base[lvl]:
            return 0
        y = S.face[lvl][0][x]
        return 1 if y == base[lvl - 1] else position(lvl - 1, y) + 1

    order = [None] * S.size(q)
    for x in range(S.size(q)):
        order[position(q, x) if q else 0] = x
    if None in order:
        raise ValueError("not a minimal circle")
    return order


def hochschild_monomial(cx: LodayComplex, q: int, labels) -> tuple:
    """Basis monomial and sign of the Hochschild tensor ``labels[0] ⊗ ... ⊗ labels[q]``.

    The sign is that of reordering the odd factors from position order to
    simplex order, so that ``sign * monomial`` is the tensor.
    """
    A = cx.A
    order = circle_positions(cx.X, q)
    items = [(order[j], A.index(lab) if isinstance(lab, str) else lab) for j, lab in enumerate(labels)]
    odd = [x for x, lab in items if A.degrees[lab] % 2]
    inversions = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i] > odd[j])
    mono = tuple(sorted((x, lab) for x, lab in items if lab != A.unit))
    return mono, (-1) ** inversions


def twisted_exterior_coefficient(field: Field, k: int, sign: int = -1) -> object:
    """Coefficient of ``(εx)^{⊗k}`` in the twisted differential of ``1 ⊗ (εx)^{⊗k}``."""
    E = exterior(field)
    S = sphere(1, k + 1)
    tau = TwistingFunction.from_edges(S, cyclic_group(2), {"a": 1})
    cx = LodayComplex(LodaySpec(S, E, "unpointed", Twist(tau, scaling_action(E, {"ex": sign})), k))
    src, s1 = hochschild_monomial(cx, k, [E.unit] + ["ex"] * k)
    tgt, s2 = hochschild_monomial(cx, k - 1, ["ex"] * k)
    d = cx.boundary(k, src)
    others = {m: c for m, c in d.items() if m != tgt}
    if others:
        raise ValueError("unexpected terms in the boundary")
    return field.mul(d.get(tgt, field.zero), field(s1 * s2))


def collapse_check(page: E2Page, direct: HomologyTable, max_degree: Optional[int] = None) -> dict:
    """Compare total E^2 dimensions with direct homology, degree by degree.

    Equality is necessary for degeneration at E^2; it is reported, not assumed.
    Comparison is per weight when both sides carry weights.
    """
    D = min(page.max_total, direct.max_degree) if max_degree is None else max_degree
    W = min(page.max_weight, direct.max_weight)
    mismatches = []
    for n in range(D + 1):
        for w in range(W + 1):
            a, b = page.total(n, w), direct.get(n, w)
            if a != b:
                mismatches.append({"degree": n, "weight": w, "e2": a, "direct": b})
    return {"equal": not mismatches, "mismatches": mismatches, "max_degree": D, "max_weight": W}

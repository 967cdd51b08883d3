"""Finite structure-constant presentations of (graded-)commutative algebras.

An algebra is a basis with homological degrees, optional weights, a unit,
sparse structure constants ``e_i e_j = sum_k c_ij^k e_k`` and an
augmentation.  Infinite algebras such as k[t] only exist behind a weight
cap: products that would leave the cap are recorded as overflow and raise
:class:`WeightOverflow` if anything ever asks for them.
"""

from __future__ import annotations

from itertools import product as iproduct

from .field import Field
from .simplicial import FiniteGroup, cyclic_group


class AlgebraError(ValueError):
    pass


class WeightOverflow(ArithmeticError):
    """A product left the weight (or degree) cap of a capped algebra."""


class Algebra:
    """Structure-constant algebra over an exact field.

    ``table[(i, j)]`` is a dict ``{k: c}`` for nonzero products only;
    ``overflow`` holds the pairs whose product exceeds the caps.
    """

    def __init__(self, field: Field, names, degrees, weights, unit, table, augmentation,
                 graded_commutative=True, overflow=(), label=""):
        self.field = field
        self.names = list(names)
        self.degrees = list(degrees)
        self.weights = list(weights) if weights is not None else None
        self.unit = unit
        self.table = table
        self.augmentation = [field(a) for a in augmentation]
        self.graded_commutative = graded_commutative
        self.overflow = frozenset(overflow)
        self.label = label
        if len(self.degrees) != self.dim or len(self.augmentation) != self.dim:
            raise AlgebraError("basis data lengths disagree")
        if self.weights is not None and len(self.weights) != self.dim:
            raise AlgebraError("weight list length disagrees with basis")

    @property
    def dim(self) -> int:
        return len(self.names)

    def weight(self, i) -> int:
        return self.weights[i] if self.weights is not None else 0

    def mul_basis(self, i, j) -> dict:
        if (i, j) in self.overflow:
            raise WeightOverflow(f"{self.names[i]} * {self.names[j]} exceeds the cap of {self.label or 'algebra'}")
        return self.table.get((i, j), {})

    def mul(self, u: dict, v: dict) -> dict:
        F = self.field
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                ab = F.mul(a, b)
                for k, c in self.mul_basis(i, j).items():
                    s = F.add(out.get(k, F.zero), F.mul(ab, c))
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def basis_vector(self, i) -> dict:
        return {i: self.field.one}

    def index(self, name) -> int:
        return self.names.index(name)

    def __repr__(self):
        return f"Algebra({self.label or '?'}, dim={self.dim}, field={self.field!r})"

    def to_dict(self) -> dict:
        F = self.field
        return {
            "field": F.name,
            "label": self.label,
            "basis": [
                {"name": n, "degree": d, **({"weight": self.weights[k]} if self.weights is not None else {}),
                 "augmentation": F.to_str(self.augmentation[k])}
                for k, (n, d) in enumerate(zip(self.names, self.degrees))
            ],
            "unit": self.unit,
            "graded_commutative": self.graded_commutative,
            "products": [[i, j, {str(k): F.to_str(c) for k, c in sorted(v.items())}]
                         for (i, j), v in sorted(self.table.items())],
            "overflow": sorted([list(p) for p in self.overflow]),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Algebra":
        try:
            F = Field.from_name(data["field"])
            basis = data["basis"]
            names = [b["name"] for b in basis]
            degrees = [int(b.get("degree", 0)) for b in basis]
            weights = [int(b["weight"]) for b in basis] if all("weight" in b for b in basis) else None
            aug = [F.parse(b.get("augmentation", "0")) for b in basis]
            table = {}
            for i, j, v in data.get("products", []):
                vals = {int(k): F.parse(c) for k, c in v.items()}
                vals = {k: c for k, c in vals.items() if c}
                if vals:
                    table[(int(i), int(j))] = vals
            overflow = [tuple(p) for p in data.get("overflow", [])]
            return cls(F, names, degrees, weights, int(data["unit"]), table, aug,
                       data.get("graded_commutative", True), overflow, data.get("label", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise AlgebraError(f"malformed algebra record: {exc}") from exc


def _sign(k) -> int:
    return -1 if k % 2 else 1


def validate_algebra(A: Algebra) -> list[str]:
    """Exhaustive check of the algebra axioms on basis triples."""
    F = A.field
    errs = []
    n = A.dim
    u = A.unit
    if not 0 <= u < n:
        return ["unit index out of range"]
    if A.degrees[u] != 0 or A.weight(u) != 0:
        errs.append("unit must have degree 0 and weight 0")
    for i in range(n):
        if A.table.get((u, i), {}) != {i: F.one} or A.table.get((i, u), {}) != {i: F.one}:
            errs.append(f"unit law fails for {A.names[i]}")

    def safe(i, j):
        try:
            return A.mul_basis(i, j)
        except WeightOverflow:
            return None

    for i, j in iproduct(range(n), repeat=2):
        ij = safe(i, j)
        if ij is None:
            continue
        for k, c in ij.items():
            if A.degrees[k] != A.degrees[i] + A.degrees[j]:
                errs.append(f"degree not additive on {A.names[i]}*{A.names[j]}")
            if A.weights is not None and A.weights[k] != A.weights[i] + A.weights[j]:
                errs.append(f"weight not additive on {A.names[i]}*{A.names[j]}")
        ji = safe(j, i)
        if ji is not None:
            sgn = _sign(A.degrees[i] * A.degrees[j]) if A.graded_commutative else 1
            want = {k: F.mul(F(sgn), c) for k, c in ji.items()}
            if want != ij:
                errs.append(f"(graded) commutativity fails on {A.names[i]}, {A.names[j]}")
        # augmentation is multiplicative
        lhs = F.zero
        for k, c in ij.items():
            lhs = F.add(lhs, F.mul(c, A.augmentation[k]))
        if lhs != F.mul(A.augmentation[i], A.augmentation[j]):
            errs.append(f"augmentation not multiplicative on {A.names[i]}, {A.names[j]}")
    for i in range(n):
        if (A.degrees[i] > 0 or A.weight(i) > 0) and A.augmentation[i]:
            errs.append(f"augmentation does not kill {A.names[i]}")
    if A.augmentation[u] != F.one:
        errs.append("augmentation of the unit is not 1")
    for i, j, k in iproduct(range(n), repeat=3):
        ij = safe(i, j)
        jk = safe(j, k)
        if ij is None or jk is None:
            continue
        try:
            left = A.mul(ij, {k: F.one})
            right = A.mul({i: F.one}, jk)
        except WeightOverflow:
            continue
        if left != right:
            errs.append(f"associativity fails on ({A.names[i]}, {A.names[j]}, {A.names[k]})")
            if len(errs) > 20:
                break
    return errs


# -- families -----------------------------------------------------------------

def _monomial_name(var, e):
    if e == 0:
        return "1"
    return var if e == 1 else f"{var}^{e}"


def truncated_poly(field: Field, m: int, var: str = "t") -> Algebra:
    """k[t]/t^m with weight(t^i) = i."""
    if m < 1:
        raise AlgebraError("truncated_poly needs m >= 1")
    F = field
    table = {}
    for i in range(m):
        for j in range(m):
            if i + j < m:
                table[(i, j)] = {i + j: F.one}
    return Algebra(F, [_monomial_name(var, i) for i in range(m)], [0] * m, list(range(m)), 0,
                   table, [1] + [0] * (m - 1), label=f"{F.name}[{var}]/{var}^{m}")


def poly_weight_capped(field: Field, W: int, var: str = "t") -> Algebra:
    """k[t] restricted to weights <= W; products beyond W are overflow."""
    if W < 0:
        raise AlgebraError("weight cap must be nonnegative")
    F = field
    table, overflow = {}, []
    for i in range(W + 1):
        for j in range(W + 1):
            if i + j <= W:
                table[(i, j)] = {i + j: F.one}
            else:
                overflow.append((i, j))
    return Algebra(F, [_monomial_name(var, i) for i in range(W + 1)], [0] * (W + 1), list(range(W + 1)), 0,
                   table, [1] + [0] * W, overflow=overflow, label=f"{F.name}[{var}]<=w{W}")


def quotient_by_poly(field: Field, coefficients, var: str = "t") -> Algebra:
    """k[t]/q(t) for ``q = a_1 t + ... + a_m t^m`` given as ``[a_1, ..., a_m]``."""
    F = field
    a = [F.parse(c) for c in coefficients]
    m = len(a)
    if m == 0 or not a[-1]:
        raise AlgebraError("leading coefficient of q(t) must be nonzero")
    # t^m = -(a_1 t + ... + a_{m-1} t^{m-1}) / a_m
    inv = F.inv(a[-1])
    top = {k: F.neg(F.mul(a[k - 1], inv)) for k in range(1, m) if a[k - 1]}

    def reduce(e) -> dict:
        vec = {e: F.one}
        while True:
            big = [k for k in vec if k >= m]
            if not big:
                return vec
            k = max(big)
            c = vec.pop(k)
            for j, x in top.items():
                tgt = k - m + j
                s = F.add(vec.get(tgt, F.zero), F.mul(c, x))
                if s:
                    vec[tgt] = s
                else:
                    vec.pop(tgt, None)

    table = {}
    for i in range(m):
        for j in range(m):
            r = reduce(i + j)
            if r:
                table[(i, j)] = r
    pure_power = all(not x for x in a[:-1])
    weights = list(range(m)) if pure_power else None
    return Algebra(F, [_monomial_name(var, i) for i in range(m)], [0] * m, weights, 0, table,
                   [1] + [0] * (m - 1), label=f"{F.name}[{var}]/q")


def free_graded_commutative(field: Field, generators, degree_cap=None, weight_cap=None) -> Algebra:
    """Free graded-commutative algebra on ``[(name, degree, weight), ...]``.

    Odd generators square to zero; the basis is the set of monomials whose
    degree and weight respect the caps.  Products leaving the caps are
    overflow.
    """
    F = field
    gens = [(str(g[0]), int(g[1]), int(g[2]) if len(g) > 2 and g[2] is not None else 0) for g in generators]
    if degree_cap is None and weight_cap is None and any(d % 2 == 0 for _, d, _ in gens):
        raise AlgebraError("an even generator needs a degree or weight cap")
    if degree_cap is not None and degree_cap < 0 or weight_cap is not None and weight_cap < 0:
        raise AlgebraError("caps must be nonnegative")
    for name, d, w in gens:
        if d == 0 and w == 0:
            raise AlgebraError(f"generator {name} has degree 0 and weight 0")
        if d % 2 == 0 and degree_cap is not None and weight_cap is None and d == 0:
            raise AlgebraError(f"degree-0 generator {name} needs a weight cap")

    def ok(exps):
        deg = sum(e * g[1] for e, g in zip(exps, gens))
        wt = sum(e * g[2] for e, g in zip(exps, gens))
        if degree_cap is not None and deg > degree_cap:
            return False
        if weight_cap is not None and wt > weight_cap:
            return False
        return True

    monos = [()]
    for g in gens:
        new = []
        for m in monos:
            e = 0
            while True:
                cand = m + (e,)
                pad = cand + (0,) * (len(gens) - len(cand))
                if not ok(pad):
                    break
                new.append(cand)
                if g[1] % 2:
                    if e == 1:
                        break
                e += 1
        monos = new
    monos.sort(key=lambda m: (sum(e * g[1] for e, g in zip(m, gens)),
                              sum(e * g[2] for e, g in zip(m, gens)), tuple(-e for e in m)))
    index = {m: k for k, m in enumerate(monos)}
    odd = [g[1] % 2 == 1 for g in gens]

    def name(m):
        parts = [_monomial_name(g[0], e) for e, g in zip(m, gens) if e]
        return "*".join(parts) if parts else "1"

    table, overflow = {}, []
    for a in monos:
        for b in monos:
            c = tuple(x + y for x, y in zip(a, b))
            if any(o and e > 1 for o, e in zip(odd, c)):
                continue
            if c not in index:
                overflow.append((index[a], index[b]))
                continue
            sign = 0
            for i, eb in enumerate(b):
                if odd[i] and eb:
                    sign += sum(1 for j in range(i + 1, len(gens)) if odd[j] and a[j])
            table[(index[a], index[b])] = {index[c]: F(_sign(sign))}
    degs = [sum(e * g[1] for e, g in zip(m, gens)) for m in monos]
    wts = [sum(e * g[2] for e, g in zip(m, gens)) for m in monos]
    has_weights = any(g[2] for g in gens)
    label = "gF(" + ",".join(g[0] for g in gens) + ")"
    A = Algebra(F, [name(m) for m in monos], degs, wts if has_weights else None, index[(0,) * len(gens)],
                table, [1 if k == index[(0,) * len(gens)] else 0 for k in range(len(monos))],
                overflow=overflow, label=label)
    A.monomials = monos
    A.generators = [g[0] for g in gens]
    return A


def exterior(field: Field, name: str = "ex", weight: int = 1) -> Algebra:
    """Lambda(ex) with ex in degree 1."""
    return free_graded_commutative(field, [(name, 1, weight)])


def ground_field_algebra(field: Field) -> Algebra:
    return Algebra(field, ["1"], [0], [0], 0, {(0, 0): {0: field.one}}, [1], label=field.name)


def _check_same_field(A, B):
    if A.field != B.field:
        raise AlgebraError(f"field mismatch: {A.field!r} vs {B.field!r}")


def tensor_power(algebras, label=None) -> Algebra:
    """Koszul-signed tensor product of a list of algebras; basis = index tuples."""
    algebras = list(algebras)
    if not algebras:
        raise AlgebraError("empty tensor product")
    F = algebras[0].field
    for B in algebras[1:]:
        _check_same_field(algebras[0], B)
    tuples = list(iproduct(*[range(A.dim) for A in algebras]))
    index = {t: k for k, t in enumerate(tuples)}
    table, overflow = {}, []
    for a in tuples:
        for b in tuples:
            # sign from moving each b_i left past a_j for j > i
            sign = 0
            for i, bi in enumerate(b):
                di = algebras[i].degrees[bi]
                if di % 2:
                    sign += sum(algebras[j].degrees[a[j]] for j in range(i + 1, len(a)))
            try:
                factors = [A.mul_basis(x, y) for A, x, y in zip(algebras, a, b)]
            except WeightOverflow:
                overflow.append((index[a], index[b]))
                continue
            if any(not f for f in factors):
                continue
            out = {}
            s = F(_sign(sign))
            for combo in iproduct(*[list(f.items()) for f in factors]):
                c = s
                for _, v in combo:
                    c = F.mul(c, v)
                k = index[tuple(x for x, _ in combo)]
                out[k] = F.add(out.get(k, F.zero), c)
            out = {k: v for k, v in out.items() if v}
            if out:
                table[(index[a], index[b])] = out
    names = ["(x)".join(A.names[x] for A, x in zip(algebras, t)) for t in tuples]
    degs = [sum(A.degrees[x] for A, x in zip(algebras, t)) for t in tuples]
    if all(A.weights is not None for A in algebras):
        wts = [sum(A.weights[x] for A, x in zip(algebras, t)) for t in tuples]
    else:
        wts = None
    aug = []
    for t in tuples:
        c = F.one
        for A, x in zip(algebras, t):
            c = F.mul(c, A.augmentation[x])
        aug.append(c)
    unit = index[tuple(A.unit for A in algebras)]
    A = Algebra(F, names, degs, wts, unit, table, aug, overflow=overflow,
                label=label or " (x) ".join(A.label for A in algebras))
    A.factor_tuples = tuples
    A.factors = algebras
    return A


def tensor(A: Algebra, B: Algebra) -> Algebra:
    return tensor_power([A, B])


# -- group actions ------------------------------------------------------------

class AlgebraAction:
    """Left action of a finite group by matrices: ``matrices[g][j] = image of e_j``."""

    def __init__(self, algebra: Algebra, group: FiniteGroup, matrices):
        self.algebra = algebra
        self.group = group
        self.matrices = matrices

    def apply_basis(self, g, j) -> dict:
        return self.matrices[g][j]

    def apply(self, g, v: dict) -> dict:
        F = self.algebra.field
        out: dict = {}
        for j, a in v.items():
            for k, c in self.matrices[g][j].items():
                s = F.add(out.get(k, F.zero), F.mul(a, c))
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def to_dict(self) -> dict:
        F = self.algebra.field
        return {
            "group_order": self.group.order,
            "matrices": [[{str(k): F.to_str(c) for k, c in sorted(col.items())} for col in m]
                         for m in self.matrices],
        }


def trivial_algebra_action(A: Algebra, G: FiniteGroup) -> AlgebraAction:
    ident = [{j: A.field.one} for j in range(A.dim)]
    return AlgebraAction(A, G, [ident for _ in G.elements])


def scaling_action(A: Algebra, scalars: dict, order: int = 2) -> AlgebraAction:
    """C_order acting on a free graded-commutative algebra by rescaling generators.

    The generator of the group sends generator ``g`` to ``scalars[g] * g``
    (default 1), hence a monomial to the product of the scalars.
    """
    monos = getattr(A, "monomials", None)
    if monos is None:
        raise AlgebraError("scaling actions need a free graded-commutative algebra")
    F = A.field
    G = cyclic_group(order)
    per_gen = [F.parse(scalars.get(name, 1)) for name in A.generators]
    gen = []
    for j, m in enumerate(monos):
        c = F.one
        for e, s in zip(m, per_gen):
            for _ in range(e):
                c = F.mul(c, s)
        gen.append(c)
    mats = []
    cur = [F.one] * A.dim
    for _ in G.elements:
        mats.append([{j: cur[j]} for j in range(A.dim)])
        cur = [F.mul(a, b) for a, b in zip(cur, gen)]
    return AlgebraAction(A, G, mats)


def cyclic_permutation_action(A: Algebra, n: int | None = None) -> AlgebraAction:
    """C_n on an n-fold tensor power: ``gamma(a_1 (x) ... (x) a_n) = +- a_n (x) a_1 (x) ... (x) a_{n-1}``."""
    tuples = getattr(A, "factor_tuples", None)
    if tuples is None:
        raise AlgebraError("cyclic permutation action needs a tensor power")
    factors = A.factors
    n = len(factors)
    if any(f is not factors[0] and f.to_dict() != factors[0].to_dict() for f in factors):
        raise AlgebraError("cyclic permutation needs equal tensor factors")
    F = A.field
    G = cyclic_group(n)
    index = {t: k for k, t in enumerate(tuples)}
    D = factors[0].degrees

    def rotate(t):
        sign = D[t[-1]] * sum(D[x] for x in t[:-1])
        return (t[-1],) + t[:-1], F(_sign(sign))

    mats = []
    for g in G.elements:
        cols = []
        for t in tuples:
            s = F.one
            u = t
            for _ in range(g):
                u, s2 = rotate(u)
                s = F.mul(s, s2)
            cols.append({index[u]: s})
        mats.append(cols)
    return AlgebraAction(A, G, mats)


def validate_action(A: Algebra, action: AlgebraAction) -> list[str]:
    """Empty iff every group element acts by a degree/weight-preserving automorphism."""
    F = A.field
    G = action.group
    errs = []
    n = A.dim
    for g in G.elements:
        M = action.matrices[g]
        gname = G.names[g]
        if len(M) != n:
            errs.append(f"{gname}: matrix has {len(M)} columns, expected {n}")
            continue
        if M[A.unit] != {A.unit: F.one}:
            errs.append(f"{gname} does not fix the unit")
        for j in range(n):
            for k in M[j]:
                if A.degrees[k] != A.degrees[j] or A.weight(k) != A.weight(j):
                    errs.append(f"{gname} does not preserve degree/weight on {A.names[j]}")
                    break
        for i, j in iproduct(range(n), repeat=2):
            try:
                lhs = action.apply(g, A.mul_basis(i, j))
                rhs = A.mul(M[i], M[j])
            except WeightOverflow:
                continue
            if lhs != rhs:
                errs.append(f"{gname} is not multiplicative on ({A.names[i]}, {A.names[j]})")
                break
        # augmentation preserved
        for j in range(n):
            img = F.zero
            for k, c in M[j].items():
                img = F.add(img, F.mul(c, A.augmentation[k]))
            if img != A.augmentation[j]:
                errs.append(f"{gname} does not preserve the augmentation on {A.names[j]}")
                break
    if errs:
        return errs
    ident = [{j: F.one} for j in range(n)]
    if action.matrices[G.identity] != ident:
        errs.append("identity element does not act trivially")
    for g, h in iproduct(G.elements, G.elements):
        gh = G.mul(g, h)
        for j in range(n):
            if action.apply(g, action.matrices[h][j]) != action.matrices[gh][j]:
                errs.append(f"group law fails for ({G.names[g]}, {G.names[h]})")
                break
    return errs

"""Normalized (twisted) Loday chain complexes over truncated simplicial sets.

A basis monomial at simplicial level q is a tuple of ``(simplex, label)``
pairs, sorted by simplex index, listing only the non-unit labels.  The
basepoint carries a label of the coefficient algebra C, every other simplex
a label of A.  Blocks are keyed by ``(q, s, w)``: simplicial degree, internal
(homological) degree of the labels, and weight.  The total degree is q + s.

Sign convention: the factors of a level are ordered by simplex index.  A face
map regroups labels by target simplex (stable in source order), which costs
the Koszul sign of that permutation, multiplies each group in source order,
and carries the simplicial sign ``(-1)^i``.  For twisted constructions the
face ``d_0`` first applies ``tau(b)`` to the label over ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Optional

from .algebra import Algebra, AlgebraAction, WeightOverflow, ground_field_algebra, validate_action
from .simplicial import TruncatedSimplicialSet, TwistingFunction
from .sparse import SparseMatrix


class LodayError(ValueError):
    pass


class BudgetExceeded(LodayError):
    pass


class ComplexInvariantError(AssertionError):
    """d o d != 0 on some block; carries the block key."""


class Coefficients:
    """Coefficient algebra C at the basepoint with a structure map A -> C."""

    def __init__(self, C: Algebra, phi, kind="general"):
        self.C = C
        self.phi = phi  # phi[j] = image of A-basis element j as a dict over C
        self.kind = kind

    @classmethod
    def reduced(cls, A: Algebra) -> "Coefficients":
        k = ground_field_algebra(A.field)
        return cls(k, [{0: a} if a else {} for a in A.augmentation], "reduced")

    @classmethod
    def unpointed(cls, A: Algebra) -> "Coefficients":
        return cls(A, [{j: A.field.one} for j in range(A.dim)], "unpointed")


@dataclass(frozen=True)
class Twist:
    tau: TwistingFunction
    action: AlgebraAction


@dataclass
class LodaySpec:
    X: TruncatedSimplicialSet
    A: Algebra
    coefficients: object = "reduced"
    twist: Optional[Twist] = None
    degree_budget: Optional[int] = None
    weight_budget: Optional[int] = None
    normalized: bool = True

    def __post_init__(self):
        if self.degree_budget is None:
            self.degree_budget = self.X.N - 1
        if self.degree_budget + 1 > self.X.N:
            raise BudgetExceeded(
                f"degree budget {self.degree_budget} needs truncation >= {self.degree_budget + 1}, have {self.X.N}")
        if self.weight_budget is None:
            # every label weighs at most max(weights); this bound covers all chains
            wmax = 0 if self.A.weights is None else max(self.A.weights)
            self.weight_budget = wmax * self.X.size(self.degree_budget + 1)
        if isinstance(self.coefficients, str):
            if self.coefficients == "reduced":
                self.coefficients = Coefficients.reduced(self.A)
            elif self.coefficients == "unpointed":
                self.coefficients = Coefficients.unpointed(self.A)
            else:
                raise LodayError(f"unknown coefficient mode {self.coefficients!r}")
        if self.twist is not None:
            tau = self.twist.tau
            if tau.B.level_sizes[: self.X.N + 1] != self.X.level_sizes:
                raise LodayError("twisting function is defined on a different simplicial set")
            errs = tau.validate()
            if errs:
                raise LodayError("invalid twisting function: " + errs[0])
            errs = validate_action(self.A, self.twist.action)
            if errs:
                raise LodayError("invalid algebra action: " + errs[0])
            if self.coefficients.kind == "general":
                raise LodayError("twists are supported with reduced or unpointed coefficients")


def _odd(d) -> bool:
    return d % 2 == 1


class LodayComplex:
    """Lazily built blocks of the (normalized) Loday complex of a spec."""

    def __init__(self, spec: LodaySpec):
        self.spec = spec
        self.X = spec.X
        self.A = spec.A
        self.coeff = spec.coefficients
        self.C = self.coeff.C
        self.field = spec.A.field
        if self.C.field != self.field:
            raise LodayError("coefficient algebra over a different field")
        self._basis: dict = {}
        self._index: dict = {}
        self._diff: dict = {}
        self.has_odd = any(_odd(d) for d in self.A.degrees) or any(_odd(d) for d in self.C.degrees)
        self.min_weight = min((self.A.weight(j) for j in range(self.A.dim) if j != self.A.unit), default=0)

    # -- level data ---------------------------------------------------------
    @cached_property
    def _masks(self):
        out = []
        for q in range(self.X.N + 1):
            masks = [0] * self.X.size(q)
            for i, img in enumerate(self.X.degenerate_images(q)):
                bit = 1 << i
                for s in range(self.X.size(q)):
                    if s not in img:
                        masks[s] |= bit
            out.append(masks)
        return out

    def _label_data(self, q, s):
        """Non-unit labels available on simplex s of level q: (label, weight, degree)."""
        if s == self.X.basepoint[q]:
            C = self.C
            return [(j, C.weight(j), C.degrees[j]) for j in range(C.dim) if j != C.unit]
        A = self.A
        return [(j, A.weight(j), A.degrees[j]) for j in range(A.dim) if j != A.unit]

    def is_normalized(self, q, mono) -> bool:
        if not self.spec.normalized or q == 0:
            return True
        m = 0
        masks = self._masks[q]
        for s, _ in mono:
            m |= masks[s]
        return m == (1 << q) - 1

    def _check_budget(self, q, s, w):
        sp = self.spec
        if q > sp.degree_budget + 1 or q > self.X.N:
            raise BudgetExceeded(f"simplicial degree {q} beyond budget {sp.degree_budget + 1}")
        if w > sp.weight_budget:
            raise BudgetExceeded(f"weight {w} beyond budget {sp.weight_budget}")

    # -- bases --------------------------------------------------------------
    def basis(self, q: int, s: int, w: int) -> list:
        key = (q, s, w)
        if key in self._basis:
            return self._basis[key]
        self._check_budget(q, s, w)
        if q < 0 or s < 0 or w < 0:
            return []
        n = self.X.size(q)
        labels = [self._label_data(q, x) for x in range(n)]
        masks = self._masks[q] if self.spec.normalized else [0] * n
        full = (1 << q) - 1 if self.spec.normalized else 0
        suffix = [0] * (n + 1)
        for x in range(n - 1, -1, -1):
            suffix[x] = suffix[x + 1] | (masks[x] if labels[x] else 0)
        out = []
        cur = []
        min_w = self.min_weight

        def rec(x, mask, wrem, drem):
            if (mask | suffix[x]) != full:
                return
            if x == n or (wrem == 0 and drem == 0 and min_w > 0):
                if wrem == 0 and drem == 0 and mask == full:
                    out.append(tuple(cur))
                return
            rec(x + 1, mask, wrem, drem)
            mx = mask | masks[x]
            for lab, lw, ld in labels[x]:
                if lw <= wrem and ld <= drem:
                    cur.append((x, lab))
                    rec(x + 1, mx, wrem - lw, drem - ld)
                    cur.pop()

        rec(0, 0, w, s)
        out.sort()
        self._basis[key] = out
        self._index[key] = {m: k for k, m in enumerate(out)}
        return out

    def basis_index(self, q, s, w) -> dict:
        self.basis(q, s, w)
        return self._index[(q, s, w)]

    # -- face maps ----------------------------------------------------------
    def _label_degree(self, q, x, lab):
        if x == self.X.basepoint[q]:
            return self.C.degrees[lab]
        return self.A.degrees[lab]

    def face_image(self, q: int, mono: tuple, i: int, keep_degenerate: bool = False) -> dict:
        """``(-1)^i d_i`` of a basis monomial in the (normalized) basis of level q-1.

        The simplicial sign is folded in together with the Koszul sign.
        """
        F = self.field
        A, C = self.A, self.C
        X = self.X
        fmap = X.face[q][i]
        base_src = X.basepoint[q]
        base_tgt = X.basepoint[q - 1]
        twist = self.spec.twist if i == 0 else None
        sign = i % 2
        if self.has_odd:
            degs = [self._label_degree(q, x, lab) for x, lab in mono]
            tg = [fmap[x] for x, _ in mono]
            for a in range(len(mono)):
                if degs[a] % 2:
                    for b in range(a + 1, len(mono)):
                        if tg[b] < tg[a] and degs[b] % 2:
                            sign += 1
        groups: dict = {}
        for x, lab in mono:
            groups.setdefault(fmap[x], []).append((x, lab))
        # each group -> vector over its label basis (A, or C at the basepoint)
        factors = []
        for t in sorted(groups):
            items = groups[t]
            vecs = []
            for x, lab in items:
                if x == base_src:
                    vecs.append({lab: F.one})
                    continue
                if twist is not None:
                    g = twist.tau(q, x)
                    v = twist.action.apply_basis(g, lab)
                else:
                    v = {lab: F.one}
                if t == base_tgt:
                    v = self._to_C(v)
                vecs.append(v)
            alg = C if t == base_tgt else A
            prod = vecs[0]
            for v in vecs[1:]:
                prod = alg.mul(prod, v)
                if not prod:
                    return {}
            if not prod:
                return {}
            unit = alg.unit
            factors.append([((t, lab) if lab != unit else None, c) for lab, c in prod.items()])
        result: dict = {}
        c0 = F.one if sign % 2 == 0 else F.neg(F.one)
        partial = [((), c0)]
        for opts in factors:
            nxt = []
            for mono2, c in partial:
                for entry, cc in opts:
                    nxt.append((mono2 + (entry,) if entry is not None else mono2, F.mul(c, cc)))
            partial = nxt
        for mono2, c in partial:
            if not keep_degenerate and not self.is_normalized(q - 1, mono2):
                continue
            s2 = F.add(result.get(mono2, F.zero), c)
            if s2:
                result[mono2] = s2
            else:
                result.pop(mono2, None)
        return result

    def _to_C(self, v: dict) -> dict:
        if self.coeff.kind == "unpointed":
            return v
        F = self.field
        out: dict = {}
        for j, a in v.items():
            for k, c in self.coeff.phi[j].items():
                s = F.add(out.get(k, F.zero), F.mul(a, c))
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def boundary(self, q: int, mono: tuple) -> dict:
        """Sum of face images (each already carries its sign ``(-1)^i``)."""
        F = self.field
        out: dict = {}
        for i in range(q + 1):
            for m, c in self.face_image(q, mono, i).items():
                v = F.add(out.get(m, F.zero), c)
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def differential(self, q: int, s: int, w: int) -> SparseMatrix:
        """Matrix of d: C_(q,s,w) -> C_(q-1,s,w)."""
        key = (q, s, w)
        if key in self._diff:
            return self._diff[key]
        src = self.basis(q, s, w)
        if q == 0:
            M = SparseMatrix(0, len(src), self.field)
        else:
            tgt_index = self.basis_index(q - 1, s, w)
            F = self.field
            cols = []
            for mono in src:
                col = {}
                for i in range(q + 1):
                    for m, c in self.face_image(q, mono, i).items():
                        r = tgt_index.get(m)
                        if r is None:
                            raise LodayError(f"face of {mono} left the basis of block {(q - 1, s, w)}: {m}")
                        v = F.add(col.get(r, F.zero), c)
                        if v:
                            col[r] = v
                        else:
                            col.pop(r, None)
                cols.append(col)
            M = SparseMatrix(len(tgt_index), len(src), self.field, cols)
        self._diff[key] = M
        return M

    def check_d_squared(self, q: int, s: int, w: int):
        if q < 2:
            return
        d1 = self.differential(q, s, w)
        d0 = self.differential(q - 1, s, w)
        if not d0.matmul(d1).is_zero():
            raise ComplexInvariantError(f"d o d != 0 on block (q={q}, s={s}, w={w})")

    # -- enumeration of blocks ----------------------------------------------
    def weights(self):
        return range(self.spec.weight_budget + 1) if self.A.weights is not None else range(1)

    def blocks(self):
        """All (q, s, w) with total degree q + s <= D + 1 and w <= W."""
        D = self.spec.degree_budget
        for w in self.weights():
            for q in range(D + 2):
                for s in range(D + 2 - q):
                    yield (q, s, w)

    def chain_dims(self) -> dict:
        return {k: len(self.basis(*k)) for k in self.blocks()}

    def build_all(self, check: bool = True):
        for k in self.blocks():
            self.differential(*k)
            if check:
                self.check_d_squared(*k)
        return self

    def export_block(self, q, s, w) -> str:
        return self.differential(q, s, w).to_text()


def enumerate_basis(spec: LodaySpec, q: int, w: int, s: Optional[int] = None) -> list:
    cx = LodayComplex(spec)
    if s is not None:
        return cx.basis(q, s, w)
    out = []
    for s2 in range(spec.degree_budget + 2 - q):
        out.extend(cx.basis(q, s2, w))
    return out


def build_complex(spec: LodaySpec, check: bool = True) -> LodayComplex:
    """Build every block within the budgets; verifies d o d = 0 on each."""
    return LodayComplex(spec).build_all(check)


def face_image(spec_or_complex, q, mono, i) -> dict:
    cx = spec_or_complex if isinstance(spec_or_complex, LodayComplex) else LodayComplex(spec_or_complex)
    return cx.face_image(q, mono, i)


def monomial_weight(cx: LodayComplex, q, mono) -> int:
    base = cx.X.basepoint[q]
    return sum(cx.C.weight(l) if x == base else cx.A.weight(l) for x, l in mono)


# -- fiberwise construction for twisted cartesian products --------------------

class FiberwiseTwistedLoday:
    """Twisted Loday construction over B of the fiberwise Loday algebra of F.

    Simplices of ``E = F x_tau B`` are pairs; this class computes face maps in
    two stages (fiber face ``d_i^F``, then ``tau(b)`` permuting fiber coordinates
    for ``i = 0``, then products over ``b`` with a common image), independently
    of the diagonal face tables of E.  Only unpointed, degree-0 algebras.
    """

    def __init__(self, F_set, B, tau, set_action, A: Algebra, E_complex: LodayComplex):
        if any(A.degrees):
            raise LodayError("fiberwise check supports ungraded algebras only")
        self.F, self.B, self.tau, self.act, self.A = F_set, B, tau, set_action, A
        self.E = E_complex

    def face_image(self, q, mono, i) -> dict:
        Fs, B, A = self.F, self.B, self.A
        K = self.A.field
        nb_src = B.size(q)
        nb_tgt = B.size(q - 1)
        # stage 1: fiber face inside each b-column
        columns: dict = {}
        for x, lab in mono:
            f, b = divmod(x, nb_src)
            f2 = Fs.face[q][i][f]
            if i == 0:
                f2 = self.act.perm[self.tau(q, b)][q - 1][f2]
            columns.setdefault(b, {}).setdefault(f2, []).append(lab)
        # stage 2: multiply columns with a common image in B
        cells: dict = {}
        for b, col in columns.items():
            c = B.face[q][i][b]
            for f2, labs in col.items():
                cells.setdefault(f2 * nb_tgt + c, []).extend(labs)
        result = [((), K.one)]
        for y in sorted(cells):
            v = {cells[y][0]: K.one}
            for lab in cells[y][1:]:
                v = A.mul(v, {lab: K.one})
            if not v:
                return {}
            result = [(m + (((y, l),) if l != A.unit else ()), K.mul(c, cc)) for m, c in result for l, cc in v.items()]
        out = {}
        for m, c in result:
            if self.E.is_normalized(q - 1, m):
                out[m] = K.add(out.get(m, K.zero), c)
        return {m: c for m, c in out.items() if c}

    def differential(self, q, s, w) -> SparseMatrix:
        E = self.E
        src = E.basis(q, s, w)
        tgt = E.basis_index(q - 1, s, w)
        K = self.A.field
        cols = []
        for mono in src:
            col = {}
            for i in range(q + 1):
                for m, c in self.face_image(q, mono, i).items():
                    r = tgt[m]
                    col[r] = K.add(col.get(r, K.zero), K.neg(c) if i % 2 else c)
            cols.append({r: v for r, v in col.items() if v})
        return SparseMatrix(len(tgt), len(src), K, cols)

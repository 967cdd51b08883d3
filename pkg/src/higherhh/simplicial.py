"""Finite pointed simplicial sets stored levelwise up to a truncation level.

Every simplex of every level is stored explicitly, degenerate ones included,
together with full face and degeneracy tables.  Sets generated from a list
of nondegenerate cells keep the Eilenberg-Zilber normal form of each simplex
(a surjection ``[q] -> [m]`` and a cell of dimension ``m``) so that cell maps
can be extended to simplicial automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iproduct
from math import comb
from typing import Sequence


class SimplicialError(ValueError):
    pass


class InvalidTruncation(SimplicialError):
    pass


class TruncatedSimplicialSet:
    """Levels ``0..N`` of a pointed simplicial set.

    ``face[q][i][s]`` is the index of ``d_i`` of simplex ``s`` of level ``q``
    (``q >= 1``), ``degen[q][i][s]`` the index of ``s_i`` of simplex ``s`` of
    level ``q`` in level ``q + 1`` (``q < N``).  Simplices within a level are
    totally ordered by index; tensor factors follow that order.
    """

    def __init__(self, N, names, face, degen, basepoint, normal_forms=None, cells=None):
        self.N = N
        self.names = names
        self.face = face
        self.degen = degen
        self.basepoint = basepoint
        self.normal_forms = normal_forms
        self.cells = cells
        self.nondegenerate = self._nondegenerate_flags()

    def _nondegenerate_flags(self):
        flags = [[True] * len(self.names[q]) for q in range(self.N + 1)]
        for q in range(self.N):
            for table in self.degen[q]:
                for t in table:
                    if 0 <= t < len(flags[q + 1]):
                        flags[q + 1][t] = False
        return flags

    def size(self, q: int) -> int:
        return len(self.names[q])

    @property
    def level_sizes(self) -> tuple:
        return tuple(len(x) for x in self.names)

    def index(self, q: int, name: str) -> int:
        return self.names[q].index(name)

    def nondegenerate_count(self, q: int) -> int:
        return sum(self.nondegenerate[q])

    def euler_characteristic(self) -> int:
        """Alternating count of nondegenerate simplices through level N."""
        return sum((-1) ** q * self.nondegenerate_count(q) for q in range(self.N + 1))

    def degenerate_images(self, q: int) -> list:
        """For level ``q``: ``sets[i]`` = image of ``s_i`` from level ``q - 1``."""
        if q == 0:
            return []
        return [frozenset(t) for t in self.degen[q - 1]]

    def nondegenerate_directions(self, q: int) -> list:
        """For each simplex of level ``q``, the set of ``i`` with simplex not in im(s_i)."""
        out = [set() for _ in range(self.size(q))]
        for i, img in enumerate(self.degenerate_images(q)):
            for s in range(self.size(q)):
                if s not in img:
                    out[s].add(i)
        return [frozenset(x) for x in out]

    def truncate(self, N: int) -> "TruncatedSimplicialSet":
        if N > self.N:
            raise InvalidTruncation(f"cannot extend truncation {self.N} to {N}")
        nf = self.normal_forms[: N + 1] if self.normal_forms else None
        return TruncatedSimplicialSet(
            N, self.names[: N + 1], self.face[: N + 1], self.degen[:N],
            self.basepoint[: N + 1], nf, self.cells,
        )

    def to_dict(self) -> dict:
        return {
            "truncation": self.N,
            "levels": [list(x) for x in self.names],
            "faces": [None] + [[list(t) for t in self.face[q]] for q in range(1, self.N + 1)],
            "degeneracies": [[list(t) for t in self.degen[q]] for q in range(self.N)],
            "basepoint": list(self.basepoint),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TruncatedSimplicialSet":
        try:
            N = int(data["truncation"])
            names = [list(x) for x in data["levels"]]
            faces = [None] + [[list(t) for t in data["faces"][q]] for q in range(1, N + 1)]
            degen = [[list(t) for t in data["degeneracies"][q]] for q in range(N)]
            base = [int(b) for b in data["basepoint"]]
        except (KeyError, IndexError, TypeError) as exc:
            raise SimplicialError(f"malformed simplicial set record: {exc}") from exc
        if len(names) != N + 1:
            raise SimplicialError("levels do not match truncation")
        return cls(N, names, faces, degen, base)

    def __repr__(self):
        return f"TruncatedSimplicialSet(N={self.N}, sizes={self.level_sizes})"


# -- validation ----------------------------------------------------------------

def validate(X: TruncatedSimplicialSet) -> list[str]:
    """List every violated simplicial identity; empty iff ``X`` is valid."""
    errs: list[str] = []
    N = X.N
    sizes = [X.size(q) for q in range(N + 1)]
    if len(X.basepoint) != N + 1:
        return [f"basepoint family has {len(X.basepoint)} entries, expected {N + 1}"]

    def name(q, s):
        return X.names[q][s] if 0 <= s < sizes[q] else f"<{s}>"

    for q in range(1, N + 1):
        if len(X.face[q]) != q + 1:
            errs.append(f"level {q}: expected {q + 1} face maps")
            return errs
        for i, t in enumerate(X.face[q]):
            if len(t) != sizes[q] or any(not 0 <= v < sizes[q - 1] for v in t):
                errs.append(f"d_{i} on level {q} is not a total map into level {q - 1}")
                return errs
    for q in range(N):
        if len(X.degen[q]) != q + 1:
            errs.append(f"level {q}: expected {q + 1} degeneracy maps")
            return errs
        for i, t in enumerate(X.degen[q]):
            if len(t) != sizes[q] or any(not 0 <= v < sizes[q + 1] for v in t):
                errs.append(f"s_{i} on level {q} is not a total map into level {q + 1}")
                return errs
            if len(set(t)) != len(t):
                errs.append(f"s_{i} on level {q} is not injective")
    d, s = X.face, X.degen
    # d_i d_j = d_{j-1} d_i  for i < j
    for q in range(2, N + 1):
        for j in range(q + 1):
            for i in range(j):
                for x in range(sizes[q]):
                    if d[q - 1][i][d[q][j][x]] != d[q - 1][j - 1][d[q][i][x]]:
                        errs.append(f"d_{i} d_{j} = d_{j - 1} d_{i} fails on {name(q, x)} (level {q})")
    for q in range(N):
        for j in range(q + 1):
            for x in range(sizes[q]):
                y = s[q][j][x]
                for i in range(q + 2):
                    if q == 0 and i > 1:
                        continue
                    lhs = d[q + 1][i][y]
                    if i < j:
                        rhs = s[q - 1][j - 1][d[q][i][x]]
                        rule = f"d_{i} s_{j} = s_{j - 1} d_{i}"
                    elif i in (j, j + 1):
                        rhs = x
                        rule = f"d_{i} s_{j} = id"
                    else:
                        rhs = s[q - 1][j][d[q][i - 1][x]]
                        rule = f"d_{i} s_{j} = s_{j} d_{i - 1}"
                    if lhs != rhs:
                        errs.append(f"{rule} fails on {name(q, x)} (level {q})")
    # s_i s_j = s_{j+1} s_i  for i <= j
    for q in range(N - 1):
        for j in range(q + 1):
            for i in range(j + 1):
                for x in range(sizes[q]):
                    if s[q + 1][i][s[q][j][x]] != s[q + 1][j + 1][s[q][i][x]]:
                        errs.append(f"s_{i} s_{j} = s_{j + 1} s_{i} fails on {name(q, x)} (level {q})")
    for q in range(N + 1):
        b = X.basepoint[q]
        if not 0 <= b < sizes[q]:
            errs.append(f"basepoint out of range on level {q}")
            continue
        if q >= 1 and any(t[b] != X.basepoint[q - 1] for t in d[q]):
            errs.append(f"basepoint family not closed under faces at level {q}")
        if q < N and any(t[b] != X.basepoint[q + 1] for t in s[q]):
            errs.append(f"basepoint family not closed under degeneracies at level {q}")
    return errs


# -- cell-generated sets -------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    name: str
    dim: int
    faces: tuple = ()  # entries: (cell name, surjection tuple)


def _surjections(q: int, m: int):
    """Non-decreasing surjections ``[q] -> [m]`` as tuples."""
    if m > q:
        return
    for jumps in combinations(range(1, q + 1), m):
        out, v = [], 0
        js = set(jumps)
        for k in range(q + 1):
            if k in js:
                v += 1
            out.append(v)
        yield tuple(out)


def _degeneracy_word(sig: tuple) -> str:
    idx = [i for i in range(len(sig) - 1) if sig[i] == sig[i + 1]]
    return "".join(f"s{i}" for i in reversed(idx))


def _normalize_face(entry, cell_dims):
    if isinstance(entry, str):
        return (entry, tuple(range(cell_dims[entry] + 1)))
    cname, sig = entry
    return (cname, tuple(sig))


def from_cells(cells: Sequence[Cell], N: int, basepoint: str) -> TruncatedSimplicialSet:
    """Simplicial set generated by nondegenerate cells, truncated at level N.

    Each face of a cell of dimension ``m`` is given as ``(cell, surjection)``
    where the surjection ``[m-1] -> [dim cell]`` encodes the degeneracy
    applied to that cell (a bare name means the identity surjection).
    """
    if N < 0:
        raise InvalidTruncation("truncation level must be nonnegative")
    cells = list(cells)
    order = {c.name: k for k, c in enumerate(cells)}
    if basepoint not in order or next(c for c in cells if c.name == basepoint).dim != 0:
        raise SimplicialError(f"basepoint {basepoint!r} is not a vertex")
    dims = {c.name: c.dim for c in cells}
    faces = {}
    for c in cells:
        if len(c.faces) != (c.dim + 1 if c.dim > 0 else 0):
            raise SimplicialError(f"cell {c.name} has {len(c.faces)} faces, expected {c.dim + 1}")
        fs = []
        for e in c.faces:
            fn, sig = _normalize_face(e, dims)
            if fn not in dims:
                raise SimplicialError(f"cell {c.name}: unknown face cell {fn!r}")
            if len(sig) != c.dim or sorted(set(sig)) != list(range(dims[fn] + 1)) or list(sig) != sorted(sig):
                raise SimplicialError(f"cell {c.name}: bad surjection {sig} onto {fn}")
            fs.append((fn, sig))
        faces[c.name] = fs

    # put the basepoint first
    cell_rank = dict(order)
    cell_rank[basepoint] = -1

    forms = []
    for q in range(N + 1):
        level = []
        for c in cells:
            for sig in _surjections(q, c.dim):
                level.append((sig, c.name))
        level.sort(key=lambda f: (cell_rank[f[1]], tuple(-x for x in f[0])))
        forms.append(level)
    index = [{f: k for k, f in enumerate(level)} for level in forms]

    def face_of(sig, cname, i):
        tau = sig[:i] + sig[i + 1:]
        m = dims[cname]
        if len(set(tau)) == m + 1:
            return (tau, cname)
        j = next(v for v in range(m + 1) if v not in tau)
        tau2 = tuple(v - 1 if v > j else v for v in tau)
        fn, rho = faces[cname][j]
        return (tuple(rho[v] for v in tau2), fn)

    face = [None]
    for q in range(1, N + 1):
        face.append([[index[q - 1][face_of(sig, cn, i)] for (sig, cn) in forms[q]] for i in range(q + 1)])
    degen = []
    for q in range(N):
        degen.append([[index[q + 1][(sig[: i + 1] + sig[i:], cn)] for (sig, cn) in forms[q]]
                      for i in range(q + 1)])
    names = [[_degeneracy_word(sig) + cn for (sig, cn) in level] for level in forms]
    base = [index[q][((0,) * (q + 1), basepoint)] for q in range(N + 1)]
    return TruncatedSimplicialSet(N, names, face, degen, base, normal_forms=forms,
                                  cells={c.name: c for c in cells})


def point(N: int = 0) -> TruncatedSimplicialSet:
    return from_cells([Cell("*", 0)], N, "*")


def sphere(n: int, N: int) -> TruncatedSimplicialSet:
    """Minimal pointed n-sphere: one vertex and one nondegenerate n-cell."""
    if n < 1:
        raise SimplicialError("sphere dimension must be positive")
    if N < n:
        raise InvalidTruncation(f"truncation {N} is below the sphere dimension {n}")
    cell = Cell("a" if n == 1 else f"e{n}", n, tuple(("*", (0,) * n) for _ in range(n + 1)))
    return from_cells([Cell("*", 0), cell], N, "*")


def circle_two_cell(N: int = 1, orientation: str = "cyclic") -> TruncatedSimplicialSet:
    """Circle with vertices v0, v1 and edges a0, a1.

    ``cyclic``: a0 runs v0 -> v1 and a1 runs v1 -> v0 (the double-cover
    picture).  ``parallel``: both edges run v1 -> v0, so exchanging them is a
    simplicial automorphism (the flip used for the Klein bottle).
    """
    if N < 1:
        raise InvalidTruncation("two-cell circle needs truncation >= 1")
    if orientation == "cyclic":
        a0 = Cell("a0", 1, ("v1", "v0"))
        a1 = Cell("a1", 1, ("v0", "v1"))
    elif orientation == "parallel":
        a0 = Cell("a0", 1, ("v0", "v1"))
        a1 = Cell("a1", 1, ("v0", "v1"))
    else:
        raise SimplicialError(f"unknown orientation {orientation!r}")
    return from_cells([Cell("v0", 0), Cell("v1", 0), a0, a1], N, "v0")


def cell_names_by_level(X: TruncatedSimplicialSet, q: int) -> list:
    return [n for n, nd in zip(X.names[q], X.nondegenerate[q]) if nd]


# -- products and wedges -------------------------------------------------------

def _check_same_N(X, Y):
    if X.N != Y.N:
        raise InvalidTruncation(f"truncation levels differ: {X.N} vs {Y.N}")


def product(X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    """Levelwise cartesian product, simplices ordered lexicographically."""
    _check_same_N(X, Y)
    N = X.N
    ny = [Y.size(q) for q in range(N + 1)]
    names = [[f"({a},{b})" for a in X.names[q] for b in Y.names[q]] for q in range(N + 1)]
    face = [None]
    for q in range(1, N + 1):
        m = ny[q - 1]
        face.append([[fx * m + fy for fx in X.face[q][i] for fy in Y.face[q][i]] for i in range(q + 1)])
    degen = []
    for q in range(N):
        m = ny[q + 1]
        degen.append([[sx * m + sy for sx in X.degen[q][i] for sy in Y.degen[q][i]] for i in range(q + 1)])
    base = [X.basepoint[q] * ny[q] + Y.basepoint[q] for q in range(N + 1)]
    return TruncatedSimplicialSet(N, names, face, degen, base)


def wedge(X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    """Levelwise disjoint union with the basepoint families identified."""
    _check_same_N(X, Y)
    N = X.N
    maps = []  # per level: index of Y simplex in the wedge
    names = []
    for q in range(N + 1):
        nx = X.size(q)
        m, k = {}, nx
        for s in range(Y.size(q)):
            if s == Y.basepoint[q]:
                m[s] = X.basepoint[q]
            else:
                m[s] = k
                k += 1
        maps.append(m)
        names.append(list(X.names[q]) + [Y.names[q][s] + "'" for s in range(Y.size(q)) if s != Y.basepoint[q]])
    ys = [[s for s in range(Y.size(q)) if s != Y.basepoint[q]] for q in range(N + 1)]
    face = [None]
    for q in range(1, N + 1):
        face.append([list(X.face[q][i]) + [maps[q - 1][Y.face[q][i][s]] for s in ys[q]] for i in range(q + 1)])
    degen = []
    for q in range(N):
        degen.append([list(X.degen[q][i]) + [maps[q + 1][Y.degen[q][i][s]] for s in ys[q]] for i in range(q + 1)])
    return TruncatedSimplicialSet(N, names, face, degen, list(X.basepoint))


def bouquet(dims: Sequence[int], N: int) -> TruncatedSimplicialSet:
    """Iterated wedge of minimal spheres of the given dimensions."""
    X = point(N)
    for n in dims:
        X = wedge(X, sphere(n, N))
    return X


def torus(n: int, N: int) -> TruncatedSimplicialSet:
    X = sphere(1, N)
    for _ in range(n - 1):
        X = product(X, sphere(1, N))
    return X


def torus_cell_bouquet(n: int, N: int) -> TruncatedSimplicialSet:
    """Wedge of C(n, k) copies of S^k for k = 1..n (the cells of the n-torus)."""
    dims = [k for k in range(1, n + 1) for _ in range(comb(n, k))]
    return bouquet(dims, N)


# -- groups, actions, twisting functions --------------------------------------

class FiniteGroup:
    """Finite group given by a multiplication table on ``range(order)``."""

    def __init__(self, mult, identity=0, names=None):
        self.mult = [list(r) for r in mult]
        self.order = len(self.mult)
        self.identity = identity
        self.names = names or [f"g{k}" for k in range(self.order)]
        self.inverse = []
        for g in range(self.order):
            inv = [h for h in range(self.order) if self.mult[g][h] == identity]
            self.inverse.append(inv[0] if len(inv) == 1 else None)

    def mul(self, g, h):
        return self.mult[g][h]

    def inv(self, g):
        return self.inverse[g]

    @property
    def elements(self):
        return range(self.order)

    def validate(self) -> list[str]:
        errs = []
        n = self.order
        G = range(n)
        for g in G:
            if len(self.mult[g]) != n or any(not 0 <= x < n for x in self.mult[g]):
                return [f"row {g} of the multiplication table is malformed"]
        for g in G:
            if self.mult[self.identity][g] != g or self.mult[g][self.identity] != g:
                errs.append(f"identity law fails for {self.names[g]}")
            if self.inverse[g] is None or self.mult[self.inverse[g]][g] != self.identity:
                errs.append(f"{self.names[g]} has no two-sided inverse")
        for a, b, c in iproduct(G, G, G):
            if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]]:
                errs.append(f"associativity fails on ({a},{b},{c})")
                break
        return errs


def cyclic_group(n: int) -> FiniteGroup:
    """C_n with element k standing for gamma^k."""
    names = ["e"] + [f"gamma^{k}" if k > 1 else "gamma" for k in range(1, n)]
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], 0, names)


class SetAction:
    """Left action of a finite group on a simplicial set: ``perm[g][q][s]``."""

    def __init__(self, X: TruncatedSimplicialSet, G: FiniteGroup, perm):
        self.X = X
        self.G = G
        self.perm = perm

    def act(self, g, q, s):
        return self.perm[g][q][s]

    def validate(self) -> list[str]:
        X, G = self.X, self.G
        errs = []
        for g in G.elements:
            for q in range(X.N + 1):
                p = self.perm[g][q]
                if sorted(p) != list(range(X.size(q))):
                    errs.append(f"{G.names[g]} is not a bijection on level {q}")
                    continue
                if q >= 1:
                    for i in range(q + 1):
                        for s in range(X.size(q)):
                            if X.face[q][i][p[s]] != self.perm[g][q - 1][X.face[q][i][s]]:
                                errs.append(f"{G.names[g]} does not commute with d_{i} on level {q}")
                                break
                if q < X.N:
                    for i in range(q + 1):
                        for s in range(X.size(q)):
                            if X.degen[q][i][p[s]] != self.perm[g][q + 1][X.degen[q][i][s]]:
                                errs.append(f"{G.names[g]} does not commute with s_{i} on level {q}")
                                break
        if errs:
            return errs
        for g, h in iproduct(G.elements, G.elements):
            gh = G.mul(g, h)
            for q in range(X.N + 1):
                if any(self.perm[g][q][self.perm[h][q][s]] != self.perm[gh][q][s] for s in range(X.size(q))):
                    errs.append(f"action law fails for ({G.names[g]}, {G.names[h]}) on level {q}")
        if any(self.perm[G.identity][q] != list(range(X.size(q))) for q in range(X.N + 1)):
            errs.append("identity does not act trivially")
        return errs


def trivial_action(X, G) -> SetAction:
    return SetAction(X, G, [[list(range(X.size(q))) for q in range(X.N + 1)] for _ in G.elements])


def cell_action(X: TruncatedSimplicialSet, G: FiniteGroup, cell_maps) -> SetAction:
    """Extend per-element cell permutations ``cell_maps[g] = {cell: cell}`` to X."""
    if X.normal_forms is None:
        raise SimplicialError("cell actions need a cell-generated simplicial set")
    perm = []
    for g in G.elements:
        cm = cell_maps.get(g, {}) if isinstance(cell_maps, dict) else cell_maps[g]
        levels = []
        for q in range(X.N + 1):
            idx = {f: k for k, f in enumerate(X.normal_forms[q])}
            levels.append([idx[(sig, cm.get(cn, cn))] for (sig, cn) in X.normal_forms[q]])
        perm.append(levels)
    return SetAction(X, G, perm)


def constant_group_set(G: FiniteGroup, N: int) -> tuple:
    """G as a constant simplicial set with G acting by left multiplication."""
    names = [[G.names[g] for g in G.elements] for _ in range(N + 1)]
    ident = list(G.elements)
    face = [None] + [[list(ident) for _ in range(q + 1)] for q in range(1, N + 1)]
    degen = [[list(ident) for _ in range(q + 1)] for q in range(N)]
    F = TruncatedSimplicialSet(N, names, face, degen, [G.identity] * (N + 1))
    perm = [[[G.mul(g, f) for f in G.elements] for _ in range(N + 1)] for g in G.elements]
    return F, SetAction(F, G, perm)


class TwistingFunction:
    """Group elements ``tau[q][s]`` on simplices of B of positive dimension."""

    def __init__(self, B: TruncatedSimplicialSet, G: FiniteGroup, tau):
        self.B = B
        self.G = G
        self.tau = tau

    def __call__(self, q, s):
        return self.tau[q][s]

    @classmethod
    def from_edges(cls, B: TruncatedSimplicialSet, G: FiniteGroup, edges: dict) -> "TwistingFunction":
        """Extend values on nondegenerate 1-simplices (by name) to all of B.

        Degenerate 1-simplices get the identity; higher levels are forced by
        ``tau(b) = tau(d_0 b)^{-1} tau(d_1 b)``.
        """
        tau = [None]
        if B.N >= 1:
            lvl = []
            for s, name in enumerate(B.names[1]):
                if not B.nondegenerate[1][s]:
                    lvl.append(G.identity)
                else:
                    lvl.append(edges.get(name, G.identity))
            unknown = set(edges) - set(B.names[1])
            if unknown:
                raise SimplicialError(f"unknown edges {sorted(unknown)}")
            tau.append(lvl)
        for q in range(2, B.N + 1):
            d0, d1 = B.face[q][0], B.face[q][1]
            tau.append([G.mul(G.inv(tau[q - 1][d0[s]]), tau[q - 1][d1[s]]) for s in range(B.size(q))])
        return cls(B, G, tau)

    @classmethod
    def trivial(cls, B, G) -> "TwistingFunction":
        return cls(B, G, [None] + [[G.identity] * B.size(q) for q in range(1, B.N + 1)])

    def is_trivial(self) -> bool:
        return all(g == self.G.identity for lvl in self.tau[1:] for g in lvl)

    def validate(self) -> list[str]:
        B, G, tau = self.B, self.G, self.tau
        errs = []
        e = G.identity
        for q in range(1, B.N + 1):
            if len(tau[q]) != B.size(q):
                return [f"tau is not defined on all of level {q}"]
        for q in range(2, B.N + 1):
            for s in range(B.size(q)):
                n = B.names[q][s]
                want = G.mul(G.inv(tau[q - 1][B.face[q][0][s]]), tau[q - 1][B.face[q][1][s]])
                if tau[q][s] != want:
                    errs.append(f"tau(b) = tau(d0 b)^-1 tau(d1 b) fails on {n}")
                for i in range(2, q + 1):
                    if tau[q - 1][B.face[q][i][s]] != tau[q][s]:
                        errs.append(f"tau(d{i} b) = tau(b) fails on {n}")
        for q in range(B.N):
            for s in range(B.size(q)):
                if tau[q + 1][B.degen[q][0][s]] != e:
                    errs.append(f"tau(s0 b) = e fails on {B.names[q][s]}")
                if q >= 1:
                    for i in range(1, q + 1):
                        if tau[q + 1][B.degen[q][i][s]] != tau[q][s]:
                            errs.append(f"tau(s{i} b) = tau(b) fails on {B.names[q][s]}")
        return errs


def tcp(F: TruncatedSimplicialSet, B: TruncatedSimplicialSet, tau: TwistingFunction,
        action: SetAction) -> TruncatedSimplicialSet:
    """Twisted cartesian product with ``d_0(f, b) = (tau(b) d_0 f, d_0 b)``."""
    _check_same_N(F, B)
    if tau.B is not B and tau.B.level_sizes != B.level_sizes:
        raise SimplicialError("twisting function lives on a different base")
    errs = tau.validate()
    if errs:
        raise SimplicialError("invalid twisting function: " + "; ".join(errs[:3]))
    errs = action.validate()
    if errs:
        raise SimplicialError("action is not simplicial: " + "; ".join(errs[:3]))
    N = F.N
    nb = [B.size(q) for q in range(N + 1)]
    names = [[f"({a},{b})" for a in F.names[q] for b in B.names[q]] for q in range(N + 1)]
    face = [None]
    for q in range(1, N + 1):
        m = nb[q - 1]
        maps = []
        for i in range(q + 1):
            row = []
            for f in range(F.size(q)):
                df = F.face[q][i][f]
                for b in range(nb[q]):
                    db = B.face[q][i][b]
                    if i == 0:
                        row.append(action.perm[tau(q, b)][q - 1][df] * m + db)
                    else:
                        row.append(df * m + db)
            maps.append(row)
        face.append(maps)
    degen = []
    for q in range(N):
        m = nb[q + 1]
        degen.append([[sf * m + sb for sf in F.degen[q][i] for sb in B.degen[q][i]] for i in range(q + 1)])
    base = [F.basepoint[q] * nb[q] + B.basepoint[q] for q in range(N + 1)]
    return TruncatedSimplicialSet(N, names, face, degen, base)


def klein_bottle(N: int) -> TruncatedSimplicialSet:
    """Klein bottle as the TCP of the parallel two-cell circle over S^1 twisted by the flip."""
    F = circle_two_cell(N, "parallel")
    B = sphere(1, N)
    G = cyclic_group(2)
    act = cell_action(F, G, {1: {"a0": "a1", "a1": "a0"}})
    tau = TwistingFunction.from_edges(B, G, {"a": 1})
    return tcp(F, B, tau, act)


def cyclic_cover(n: int, N: int) -> TruncatedSimplicialSet:
    """Connected n-fold cover of S^1 as the TCP of constant C_n over S^1."""
    G = cyclic_group(n)
    F, act = constant_group_set(G, N)
    B = sphere(1, N)
    tau = TwistingFunction.from_edges(B, G, {"a": 1})
    return tcp(F, B, tau, act)

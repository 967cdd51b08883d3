"""Scenarios, stability reports, golden tables and the report cache.

A scenario is a JSON (or YAML) document naming a space, an algebra, a
field, budgets and a task; ``run_scenario`` turns it into a deterministic
report.  Reports are cached under the SHA-256 of the canonical scenario
text plus the engine version.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from importlib import resources
from itertools import product as iproduct
from math import comb
from pathlib import Path
from typing import Optional

from . import __version__
from . import algebra as alg
from . import simplicial as simp
from .field import Field, FieldError
from .homology import HomologyTable, compare_tables, homology_dims
from .loday import LodayComplex, LodaySpec, Twist
from .spectral import collapse_check, e2_page
from .torusdiag import relation_check

CACHE_ENV = "HIGHERHH_CACHE"


class ScenarioError(ValueError):
    """Invalid scenario; ``path`` names the offending field, ``line`` its line if known."""

    def __init__(self, path: str, message: str, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = f" (line {line})" if line else ""
        super().__init__(f"{path}: {message}{where}")


# -- parsing ------------------------------------------------------------------

def parse_scenario_text(text: str, fmt: str = "json") -> dict:
    if fmt in ("yaml", "yml"):
        import yaml
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise ScenarioError("<document>", str(exc).splitlines()[0],
                                mark.line + 1 if mark else None) from None
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError("<document>", exc.msg, exc.lineno) from None
    if not isinstance(data, dict):
        raise ScenarioError("<document>", "top level must be a mapping")
    try:
        check_scenario(data)
    except ScenarioError as exc:
        if exc.line is None:
            key = exc.path.split(".")[-1].split("[")[0]
            raise ScenarioError(exc.path, str(exc).split(": ", 1)[1], _locate(text, key)) from None
        raise
    return data


def _locate(text: str, key: str) -> Optional[int]:
    pat = re.compile(r'(^|[\s{,"])' + re.escape(key) + r'"?\s*:')
    for i, line in enumerate(text.splitlines(), 1):
        if pat.search(line):
            return i
    return None


def load_scenario(path) -> dict:
    path = Path(path)
    fmt = "yaml" if path.suffix in (".yaml", ".yml") else "json"
    return parse_scenario_text(path.read_text(), fmt)


TASKS = ("homology", "stability", "e2", "diagonal")
MAX_DEGREE = 12
MAX_WEIGHT = 40


def _req(d: dict, key: str, path: str):
    if key not in d:
        raise ScenarioError(f"{path}.{key}" if path else key, "missing required field")
    return d[key]


def _int(v, path, lo=0, hi=None):
    if not isinstance(v, int) or isinstance(v, bool) or v < lo or (hi is not None and v > hi):
        rng = f">= {lo}" if hi is None else f"in {lo}..{hi}"
        raise ScenarioError(path, f"expected an integer {rng}, got {v!r}")
    return v


def check_scenario(s: dict):
    """Validate field by field; raises ScenarioError naming the field path."""
    _req(s, "name", "")
    task = _req(s, "task", "")
    if task not in TASKS:
        raise ScenarioError("task", f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    try:
        Field.from_name(s.get("field", "Q"))
    except FieldError as exc:
        raise ScenarioError("field", str(exc)) from None
    b = s.get("budgets", {})
    if not isinstance(b, dict):
        raise ScenarioError("budgets", "expected a mapping")
    if "degree" in b:
        _int(b["degree"], "budgets.degree", 0, MAX_DEGREE)
    if "weight" in b:
        _int(b["weight"], "budgets.weight", 0, MAX_WEIGHT)
    if task == "homology":
        _check_space(_req(s, "space", ""), "space")
        _check_algebra(_req(s, "algebra", ""), "algebra")
        if s.get("coefficients", "reduced") not in ("reduced", "unpointed"):
            raise ScenarioError("coefficients", "expected 'reduced' or 'unpointed'")
        if "twist" in s:
            _check_twist(s["twist"], "twist")
    elif task == "stability":
        _check_algebra(_req(s, "algebra", ""), "algebra")
        _int(_req(s, "n", ""), "n", 1, 4)
    elif task == "e2":
        _check_space(_req(s, "base", ""), "base")
        _check_algebra(_req(s, "fiber", ""), "fiber")
        _check_twist(_req(s, "twist", ""), "twist")
        if "direct" in s:
            d = s["direct"]
            _check_space(_req(d, "space", "direct"), "direct.space")
            _check_algebra(_req(d, "algebra", "direct"), "direct.algebra")
    elif task == "diagonal":
        _int(_req(s, "n", ""), "n", 1, 3)
        _int(_req(s, "k", ""), "k", 1, 6)
        if s.get("mode", 3) not in (1, 2, 3):
            raise ScenarioError("mode", "expected 1, 2 or 3")


SPACES = ("point", "sphere", "torus", "bouquet", "circle_two_cell", "klein_bottle",
          "cyclic_cover", "product", "wedge", "explicit")


def _check_space(sp, path):
    if not isinstance(sp, dict):
        raise ScenarioError(path, "expected a mapping")
    t = _req(sp, "type", path)
    if t not in SPACES:
        raise ScenarioError(f"{path}.type", f"unknown space {t!r}")
    if t in ("sphere", "torus", "cyclic_cover"):
        _int(_req(sp, "n", path), f"{path}.n", 1)
    if t == "bouquet":
        dims = _req(sp, "dims", path)
        if not isinstance(dims, list) or not dims:
            raise ScenarioError(f"{path}.dims", "expected a nonempty list")
        for i, d in enumerate(dims):
            _int(d, f"{path}.dims[{i}]", 1)
    if t in ("product", "wedge"):
        fs = _req(sp, "factors", path)
        if not isinstance(fs, list) or len(fs) < 2:
            raise ScenarioError(f"{path}.factors", "expected at least two factors")
        for i, f in enumerate(fs):
            _check_space(f, f"{path}.factors[{i}]")


ALGEBRAS = ("truncated_poly", "poly", "quotient", "free", "exterior", "ground", "tensor_power", "explicit")


def _check_algebra(a, path):
    if not isinstance(a, dict):
        raise ScenarioError(path, "expected a mapping")
    fam = _req(a, "family", path)
    if fam not in ALGEBRAS:
        raise ScenarioError(f"{path}.family", f"unknown algebra family {fam!r}")
    if fam == "truncated_poly":
        _int(_req(a, "m", path), f"{path}.m", 1)
    if fam == "quotient":
        cs = _req(a, "coefficients", path)
        if not isinstance(cs, list) or not cs:
            raise ScenarioError(f"{path}.coefficients", "expected a nonempty list a_1..a_m")
    if fam == "free":
        gens = _req(a, "generators", path)
        for i, g in enumerate(gens):
            if not (isinstance(g, list) and len(g) == 3):
                raise ScenarioError(f"{path}.generators[{i}]", "expected [name, degree, weight]")
    if fam == "tensor_power":
        _check_algebra(_req(a, "of", path), f"{path}.of")
        _int(_req(a, "n", path), f"{path}.n", 1)


def _check_twist(t, path):
    if not isinstance(t, dict):
        raise ScenarioError(path, "expected a mapping")
    _int(_req(t, "group_order", path), f"{path}.group_order", 1)
    act = _req(t, "action", path)
    if act.get("type") not in ("cyclic_permutation", "scaling", "trivial"):
        raise ScenarioError(f"{path}.action.type", f"unknown action {act.get('type')!r}")


# -- building -----------------------------------------------------------------

def build_space(sp: dict, N: int) -> simp.TruncatedSimplicialSet:
    t = sp["type"]
    if t == "point":
        X = simp.point(N)
    elif t == "sphere":
        X = simp.sphere(sp["n"], N)
    elif t == "torus":
        X = simp.torus(sp["n"], N)
    elif t == "bouquet":
        X = simp.bouquet(sp["dims"], N)
    elif t == "circle_two_cell":
        X = simp.circle_two_cell(N, sp.get("orientation", "cyclic"))
    elif t == "klein_bottle":
        X = simp.klein_bottle(N)
    elif t == "cyclic_cover":
        X = simp.cyclic_cover(sp["n"], N)
    elif t in ("product", "wedge"):
        parts = [build_space(f, N) for f in sp["factors"]]
        X = parts[0]
        for Y in parts[1:]:
            X = simp.product(X, Y) if t == "product" else simp.wedge(X, Y)
    else:
        X = simp.TruncatedSimplicialSet.from_dict(sp["data"])
        if X.N < N:
            raise ScenarioError("space.data", f"explicit space truncated at {X.N}, need {N}")
        X = X.truncate(N)
    return X


def build_algebra(a: dict, F: Field, W: int) -> alg.Algebra:
    fam = a["family"]
    if fam == "truncated_poly":
        return alg.truncated_poly(F, a["m"], a.get("var", "t"))
    if fam == "poly":
        return alg.poly_weight_capped(F, a.get("weight_cap", W), a.get("var", "t"))
    if fam == "quotient":
        return alg.quotient_by_poly(F, a["coefficients"], a.get("var", "t"))
    if fam == "free":
        gens = [tuple(g) for g in a["generators"]]
        return alg.free_graded_commutative(F, gens, a.get("degree_cap"), a.get("weight_cap", W))
    if fam == "exterior":
        return alg.exterior(F, a.get("name", "ex"), a.get("weight", 1))
    if fam == "ground":
        return alg.ground_field_algebra(F)
    if fam == "tensor_power":
        base = build_algebra(a["of"], F, W)
        return alg.tensor_power([base] * a["n"])
    A = alg.Algebra.from_dict(a["data"])
    if A.field != F:
        raise ScenarioError("algebra.data", "explicit algebra over a different field")
    return A


def build_twist(t: dict, X, A) -> Twist:
    G = simp.cyclic_group(t["group_order"])
    tau = simp.TwistingFunction.from_edges(X, G, t.get("edges", {}))
    act = t["action"]
    if act["type"] == "cyclic_permutation":
        action = alg.cyclic_permutation_action(A)
    elif act["type"] == "scaling":
        action = alg.scaling_action(A, act["scalars"], t["group_order"])
    else:
        action = alg.trivial_algebra_action(A, G)
    return Twist(tau, action)


def _budgets(s):
    b = s.get("budgets", {})
    return b.get("degree", 3), b.get("weight", 2)


def build_complex_from_scenario(s: dict, weights=None) -> LodayComplex:
    F = Field.from_name(s.get("field", "Q"))
    D, W = _budgets(s)
    X = build_space(s["space"], D + 1)
    A = build_algebra(s["algebra"], F, W)
    twist = build_twist(s["twist"], X, A) if "twist" in s else None
    return LodayComplex(LodaySpec(X, A, s.get("coefficients", "reduced"), twist, D, W))


# -- golden tables --------------------------------------------------------------

def graded_commutative_table(generators, max_degree: int, max_weight: int, field: str = "Q",
                             label: str = "") -> HomologyTable:
    """Monomial counts of a free graded-commutative algebra by (degree, weight).

    ``generators`` are ``(degree, weight)`` pairs; odd-degree ones square to zero.
    """
    dims: dict = {(0, 0): 1}
    for deg, wt in generators:
        new: dict = {}
        top = 1 if deg % 2 else max(max_degree // max(deg, 1), max_weight // max(wt, 1)) + 1
        for (d, w), v in dims.items():
            for e in range(top + 1):
                d2, w2 = d + e * deg, w + e * wt
                if d2 > max_degree or w2 > max_weight:
                    break
                new[(d2, w2)] = new.get((d2, w2), 0) + v
        dims = new
    return HomologyTable(field, dims, max_degree, max_weight, label)


def _sphere_trunc_generators(k: int, m: int):
    """Loday homology of k[t]/t^m over S^k: free on x_k (weight 1), y_(k+1) (weight m)."""
    return [(k, 1), (k + 1, m)]


def bouquet_generators(n: int, m: int):
    gens = []
    for k in range(1, n + 1):
        for _ in range(comb(n, k)):
            gens += _sphere_trunc_generators(k, m)
    return gens


_GOLDEN = re.compile(r"^(HH(?P<k>\d+|n)_(?P<f>Q|Fp|F\d+)_(?P<kind>poly|trunc)(?P<m>\d*)"
                     r"|bouquet_T(?P<bn>\d+)_(?P<bf>Q|Fp|F\d+)_trunc(?P<bm>\d+)"
                     r"|klein_(?P<kf>F\d+|Q))$")

GOLDEN_NAMES = ("HH1_Fp_poly", "HH2_Fp_poly", "HHn_Q_trunc", "HH1_Q_poly", "HH2_Q_poly",
                "bouquet_T2_Q_trunc2", "klein_F3")


def expected_table(name: str, max_degree: Optional[int] = None, max_weight: Optional[int] = None,
                   n: int = 1) -> HomologyTable:
    """Known answers by name.

    ``HH{k}_{field}_poly``: k[t] over S^k, exterior (k odd) or polynomial (k even)
    on one class of degree k and weight 1.  ``HH{k}_{field}_trunc{m}``: k[t]/t^m
    over S^k (m defaults to 2; ``HHn`` takes k from ``n``).  ``bouquet_T{n}_..._trunc{m}``:
    the bouquet of spheres with the cells of T^n.  ``klein_{field}``: k[x] ⊗ Λ(εx)
    for the unpointed Klein bottle construction.
    """
    mt = _GOLDEN.match(name)
    if not mt:
        raise KeyError(f"unknown expected table {name!r}")
    D = 3 if max_degree is None else max_degree
    W = D if max_weight is None else max_weight
    if mt.group("kind"):
        k = n if mt.group("k") == "n" else int(mt.group("k"))
        fname = mt.group("f")
        if mt.group("kind") == "poly":
            if name.startswith("HH2_Fp") and max_degree is None:
                D, W = 6, 3 if max_weight is None else max_weight
            gens = [(k, 1)]
        else:
            gens = _sphere_trunc_generators(k, int(mt.group("m") or 2))
            if max_degree is None:
                D = 4
                W = 4 if max_weight is None else max_weight
    elif mt.group("bn"):
        fname = mt.group("bf")
        gens = bouquet_generators(int(mt.group("bn")), int(mt.group("bm")))
    else:
        fname = mt.group("kf")
        gens = [(0, 1), (1, 1)]
    return graded_commutative_table(gens, D, W, fname, name)


# -- stability ------------------------------------------------------------------

@dataclass
class StabilityReport:
    torus: HomologyTable
    bouquet: HomologyTable
    verdicts: dict = dc_field(default_factory=dict)
    first_divergence: Optional[tuple] = None

    @property
    def equal(self) -> bool:
        return self.first_divergence is None

    def to_dict(self) -> dict:
        return {
            "torus": self.torus.to_dict(),
            "bouquet": self.bouquet.to_dict(),
            "verdicts": {f"{d},{w}": v for (d, w), v in sorted(self.verdicts.items())},
            "first_divergence": list(self.first_divergence) if self.first_divergence else None,
        }


def bouquet_for_torus(n: int, N: int) -> simp.TruncatedSimplicialSet:
    dims = [k for k in range(1, n + 1) for _ in range(comb(n, k))]
    return simp.bouquet(dims, N)


def _table_for(X, A, D, W, label, jobs=1):
    cx = LodayComplex(LodaySpec(X, A, "reduced", None, D, W))
    return homology_dims(cx, label=label)


def stability_compare(A: alg.Algebra, n: int, max_degree: int, max_weight: int) -> StabilityReport:
    """Compare the Loday homology of T^n with that of its cell bouquet."""
    if max_degree < n:
        raise ScenarioError("budgets.degree", f"degree budget {max_degree} cannot certify degree {n}")
    N = max_degree + 1
    T = _table_for(simp.torus(n, N), A, max_degree, max_weight, f"T^{n}")
    B = _table_for(bouquet_for_torus(n, N), A, max_degree, max_weight, f"bouquet of T^{n}")
    verdicts = {}
    for d in range(max_degree + 1):
        for w in range(max_weight + 1):
            a, b = T.get(d, w), B.get(d, w)
            verdicts[(d, w)] = "equal" if a == b else ("torus smaller" if a < b else "torus larger")
    div = compare_tables(T, B)
    return StabilityReport(T, B, verdicts, div)


# -- running scenarios ------------------------------------------------------------

def canonical(s: dict) -> str:
    return json.dumps(s, sort_keys=True, separators=(",", ":"))


def scenario_key(s: dict) -> str:
    return hashlib.sha256((canonical(s) + "\n" + __version__).encode()).hexdigest()


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "higherhh"


def _homology_weight(s: dict, w: int) -> dict:
    cx = build_complex_from_scenario(s)
    t = homology_dims(cx, weights=[w])
    return {f"{d},{w2}": v for (d, w2), v in t.entries()}


def _run_homology(s: dict, jobs: int) -> dict:
    D, W = _budgets(s)
    cx = build_complex_from_scenario(s)
    ws = list(cx.weights())
    if jobs > 1 and len(ws) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_homology_weight, [s] * len(ws), ws))
        dims = {}
        for part in parts:
            dims.update(part)
        table = HomologyTable(cx.field.name, {tuple(map(int, k.split(","))): v for k, v in dims.items()},
                              D, max(ws), s["name"])
    else:
        table = homology_dims(cx, label=s["name"])
    out = {"tables": {"homology": table}, "checks": {}}
    exp = s.get("expect", {})
    if "table" in exp:
        ref = expected_table(exp["table"], D, W, exp.get("n", 1))
        div = compare_tables(table, ref)
        out["checks"]["expected_table"] = {"name": exp["table"], "passed": div is None,
                                          "first_divergence": list(div) if div else None}
    if "by_degree" in exp:
        got = table.by_degree()[: len(exp["by_degree"])]
        out["checks"]["by_degree"] = {"expected": exp["by_degree"], "got": got,
                                     "passed": got == exp["by_degree"]}
    return out


def _run_stability(s: dict, jobs: int) -> dict:
    F = Field.from_name(s.get("field", "Q"))
    D, W = _budgets(s)
    A = build_algebra(s["algebra"], F, W)
    rep = stability_compare(A, s["n"], D, W)
    out = {"tables": {"torus": rep.torus, "bouquet": rep.bouquet},
           "verdicts": {f"{d},{w}": v for (d, w), v in sorted(rep.verdicts.items())},
           "first_divergence": list(rep.first_divergence) if rep.first_divergence else None,
           "checks": {}}
    exp = s.get("expect", {})
    if "diverges" in exp:
        ok = (rep.first_divergence is not None) == exp["diverges"]
        if ok and exp["diverges"] and "degree" in exp:
            ok = rep.first_divergence[0] == exp["degree"]
        out["checks"]["divergence"] = {"expected": exp, "passed": ok}
    return out


def _run_e2(s: dict, jobs: int) -> dict:
    F = Field.from_name(s.get("field", "Q"))
    D, W = _budgets(s)
    B = build_space(s["base"], D + 1)
    H = build_algebra(s["fiber"], F, W)
    tw = build_twist(s["twist"], B, H)
    page = e2_page(B, H, tw.action, tw.tau, D, W)
    out = {"e2": page.to_dict(), "tables": {}, "checks": {}}
    exp = s.get("expect", {})
    if "rows" in exp:
        out["checks"]["rows"] = {"expected": exp["rows"], "got": page.rows(),
                                 "passed": page.rows() == exp["rows"]}
    if "direct" in s:
        d = s["direct"]
        X = build_space(d["space"], D + 1)
        A = build_algebra(d["algebra"], F, W)
        direct = homology_dims(LodayComplex(LodaySpec(X, A, d.get("coefficients", "unpointed"), None, D, W)),
                               label="direct")
        out["tables"]["direct"] = direct
        rep = collapse_check(page, direct)
        out["checks"]["collapse"] = {"passed": rep["equal"] == exp.get("collapse", True),
                                     "mismatches": rep["mismatches"]}
    return out


def _run_diagonal(s: dict, jobs: int) -> dict:
    F = Field.from_name(s.get("field", "Q"))
    rep = relation_check(s["n"], s["k"], s.get("mode", 3), F)
    want = s.get("expect", {}).get("holds", True)
    return {"relation": {"n": rep["n"], "k": rep["k"], "mode": rep["mode"], "holds": rep["holds"],
                         "count": len(rep["results"])},
            "tables": {}, "checks": {"relation": {"passed": rep["holds"] == want}}}


_RUNNERS = {"homology": _run_homology, "stability": _run_stability, "e2": _run_e2, "diagonal": _run_diagonal}


def _table_csv(name: str, t: HomologyTable) -> list:
    return [f"{name},{d},{w},{v}" for (d, w), v in t.entries()]


def render_report(s: dict, result: dict) -> tuple:
    """Report JSON text and CSV mirror; both deterministic."""
    doc = {
        "engine_version": __version__,
        "scenario": s,
        "key": scenario_key(s),
        "tables": {name: {f"{d},{w}": v for (d, w), v in t.entries()}
                   for name, t in sorted(result.get("tables", {}).items())},
    }
    for k in ("verdicts", "first_divergence", "e2", "relation"):
        if k in result:
            doc[k] = result[k]
    doc["checks"] = result.get("checks", {})
    doc["passed"] = all(c.get("passed", True) for c in doc["checks"].values())
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    rows = ["table,degree,weight,dim"]
    for name, t in sorted(result.get("tables", {}).items()):
        rows += _table_csv(name, t)
    if "e2" in result:
        rows += [f"e2[p={p};q={q}],{p + q},{w},{v}" for p, q, w, v in result["e2"]["dims"]]
    return text, "\n".join(rows) + "\n"


@dataclass
class RunResult:
    report: dict
    report_text: str
    csv_text: str
    cached: bool
    seconds: float

    @property
    def passed(self) -> bool:
        return self.report["passed"]


def _cache_read(path: Path, key: str):
    try:
        data = json.loads(path.read_text())
        if data.get("key") != key:
            return None
        rep, csv_text = data["report"], data["csv"]
        if hashlib.sha256((rep + csv_text).encode()).hexdigest() != data.get("digest"):
            return None
        json.loads(rep)
        return rep, csv_text
    except (OSError, ValueError, KeyError, TypeError):
        return None


def run_scenario(s: dict, out_dir=None, cache: bool = True, cache_dir=None, jobs: int = 1) -> RunResult:
    """Run one scenario; writes ``<name>.json`` and ``<name>.csv`` into ``out_dir`` if given.

    Timings go to a ``<name>.timings.json`` sidecar so the reports stay byte-identical.
    """
    check_scenario(s)
    key = scenario_key(s)
    t0 = time.perf_counter()
    hit = None
    cpath = None
    if cache:
        cdir = Path(cache_dir) if cache_dir else default_cache_dir()
        cpath = cdir / f"{key}.json"
        if cpath.exists():
            hit = _cache_read(cpath, key)
    if hit is not None:
        text, csv_text = hit
        cached = True
    else:
        result = _RUNNERS[s["task"]](s, jobs)
        text, csv_text = render_report(s, result)
        cached = False
        if cpath is not None:
            cpath.parent.mkdir(parents=True, exist_ok=True)
            digest = hashlib.sha256((text + csv_text).encode()).hexdigest()
            cpath.write_text(json.dumps({"key": key, "report": text, "csv": csv_text, "digest": digest}))
    secs = time.perf_counter() - t0
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{s['name']}.json").write_text(text)
        (out / f"{s['name']}.csv").write_text(csv_text)
        (out / f"{s['name']}.timings.json").write_text(
            json.dumps({"seconds": round(secs, 3), "cached": cached}) + "\n")
    return RunResult(json.loads(text), text, csv_text, cached, secs)


# -- bundled scenarios ------------------------------------------------------------

def bundled_scenario_names() -> list:
    files = resources.files("higherhh").joinpath("scenarios")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def bundled_scenario(name: str) -> dict:
    p = resources.files("higherhh").joinpath("scenarios", f"{name}.json")
    if not p.is_file():
        raise KeyError(f"no bundled scenario {name!r}")
    return parse_scenario_text(p.read_text())

"""Named identity checks, run singly or swept over every small multiset."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .algebra import SparsePolynomial
from .bijections import (Psi, phi, phi_inverse, phi_of_partition, psi1, psi1_inverse, psi2,
                         psi2_inverse)
from .core import (GuardExceeded, MultisetSpec, RootedWord, check_guard, double_descents,
                   enumerate_quasi_stirling, enumerate_rooted, multisets_up_to, sibling_stats,
                   word_stats)
from .jsonio import to_json
from .partitions import (barred_count_formula, class_of_partition, count_barred, enumerate_barred,
                         enumerate_partitions, partition_stats)
from .polynomials import (T, XYZ, cyclic_eulerian_xy, egf_coefficient, egf_power_side,
                          eulerian_egf_series, eulerian_t, eulerian_t_recurrence, eulerian_xy,
                          gamma_extract, multiset_carlitz_lhs, multiset_carlitz_rhs, partial_gamma,
                          qstirling_poly, qstirling_t, rhs_multiset_eulerian,
                          series_over_one_minus_t, stirling2, stirling_poly)
from .trees import (class_of, edge_words, enumerate_trees, forget_order, tree_stats,
                    validate_tree)

DEFAULT_ORDER = 10
BARRED_ENUMERATION_BARS = 4


@dataclass
class Outcome:
    ok: bool
    detail: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None


@dataclass
class CheckResult:
    id: str
    anchor: str
    params: dict
    status: str  # pass | fail | skipped
    detail: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"id": self.id, "anchor": self.anchor, "params": to_json(self.params),
               "status": self.status, "detail": to_json(self.detail)}
        if self.counterexample is not None:
            out["counterexample"] = to_json(self.counterexample)
        return out


@dataclass(frozen=True)
class Identity:
    id: str
    anchor: str
    params: tuple[str, ...]
    check: Callable[[dict], Outcome]
    applies: Callable[[MultisetSpec, int], Optional[dict]]
    min_n: int = 1


def _first_difference(a, b) -> Optional[dict]:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return {"index": i, "lhs": x, "rhs": y}
    if len(a) != len(b):
        return {"index": min(len(a), len(b)), "lhs_length": len(a), "rhs_length": len(b)}
    return None


def _compare_lists(lhs, rhs, **detail) -> Outcome:
    diff = _first_difference(lhs, rhs)
    return Outcome(diff is None, {**detail, "coefficients": list(lhs)}, diff)


def _compare_polys(named: dict) -> Outcome:
    items = list(named.items())
    first_name, first = items[0]
    for name, p in items[1:]:
        if p != first:
            return Outcome(False, {}, {first_name: first, name: p})
    return Outcome(True, {"polynomial": first})


def _poly_of(vars, counts: Counter) -> SparsePolynomial:
    return SparsePolynomial(vars, dict(counts))


# -- classical baselines --------------------------------------------------------


def _carlitz_classic(p: dict) -> Outcome:
    n, order = p["n"], p["order"]
    a = eulerian_t(n)
    if a != eulerian_t_recurrence(n):
        return Outcome(False, {}, {"enumerated": a, "recurrence": eulerian_t_recurrence(n)})
    return _compare_lists([j ** n for j in range(order + 1)],
                          series_over_one_minus_t(a, n + 1, order))


def _eulerian_egf(p: dict) -> Outcome:
    n = p["n"]
    return _compare_polys({"enumerated": eulerian_t(n),
                           "series": egf_coefficient(eulerian_egf_series(n), n)})


def _stirling_carlitz(p: dict) -> Outcome:
    n, order = p["n"], p["order"]
    return _compare_lists([stirling2(j + n, j) for j in range(order + 1)],
                          series_over_one_minus_t(stirling_poly(n), 2 * n + 1, order))


def _cyclic_eulerian(p: dict) -> Outcome:
    n = p["n"]
    return _compare_polys({"cyclic": cyclic_eulerian_xy(n), "scaled": eulerian_xy(n - 1) * n})


def _bivariate_gamma(p: dict) -> Outcome:
    n = p["n"]
    res = gamma_extract(eulerian_xy(n))
    counts = Counter(word_stats(w).des for w in itertools.permutations(range(1, n + 1))
                     if double_descents(w) == 0)
    direct = [counts[j] for j in range(len(res.gammas))]
    ok = res.positive and list(res.gammas) == direct and sum(counts.values()) == sum(direct)
    cex = None if ok else {"extracted": list(res.gammas), "counted": dict(counts),
                           "failure": res.failure}
    return Outcome(ok, {"gammas": list(res.gammas)}, cex)


# -- multiplicity-two specialisations ----------------------------------------------


def _twos(n: int) -> MultisetSpec:
    return MultisetSpec((2,) * n)


def _qstirling_eulerian_k2(p: dict) -> Outcome:
    n = p["n"]
    lhs = qstirling_t(_twos(n)) * (n + 1)
    rhs = egf_coefficient(eulerian_egf_series(n) ** (n + 1), n)
    return _compare_polys({"scaled_enumerator": lhs, "egf_power": rhs})


def _qstirling_carlitz_k2(p: dict) -> Outcome:
    n, order = p["n"], p["order"]
    lhs = [j ** n * math.comb(j + n, j) for j in range(order + 1)]
    return _compare_lists(lhs, series_over_one_minus_t(qstirling_t(_twos(n)) * (n + 1),
                                                       2 * n + 1, order))


# -- multiset identities --------------------------------------------------------


def _multiset_eulerian(p: dict) -> Outcome:
    m = p["multiset"]
    return _compare_polys({"scaled_enumerator": qstirling_poly(m) * m.k,
                           "multinomial_sum": rhs_multiset_eulerian(m),
                           "egf_power": egf_power_side(m)})


def _multiset_carlitz(p: dict) -> Outcome:
    m, order = p["multiset"], p["order"]
    lhs = multiset_carlitz_lhs(m, order)
    out = _compare_lists(lhs, multiset_carlitz_rhs(m, order))
    if not out.ok:
        return out
    barred = [count_barred(m.n, m.k, j) for j in range(order + 1)]
    diff = _first_difference(lhs, barred)
    if diff:
        return Outcome(False, {}, {"barred": diff})
    return out


def _rooted_count(p: dict) -> Outcome:
    m = p["multiset"]
    words = sum(1 for _ in enumerate_quasi_stirling(m))
    rooted = sum(1 for _ in enumerate_rooted(m))
    weight = sum(qstirling_poly(m).terms.values()) * m.k
    ok = rooted == m.k * words == weight
    return Outcome(ok, {"rooted": rooted, "words": words, "k": m.k},
                   None if ok else {"rooted": rooted, "k_times_words": m.k * words,
                                    "coefficient_sum": weight})


def _phi_statistics(p: dict) -> Outcome:
    m = p["multiset"]
    if p.get("word") is not None:
        rw = RootedWord(tuple(p["word"]), p.get("root"))
        trees = [phi_inverse(rw, m)]
    else:
        check_guard(m.M, p.get("max_M"))
        trees = enumerate_trees(m)
    images = set()
    last = None
    count = 0
    for t in trees:
        count += 1
        bad = validate_tree(t)
        if bad:
            return Outcome(False, {}, {"tree": t, "violation": bad[0].message})
        rw = phi(t)
        ts, ws = tree_stats(t), word_stats(rw.word)
        if tuple(ts) != tuple(ws) or phi_inverse(rw, m) != t or rw in images:
            return Outcome(False, {}, {"tree": t, "word": rw, "tree_stats": list(ts),
                                       "word_stats": list(ws)})
        images.add(rw)
        last = list(ts)
    if p.get("word") is not None:
        return Outcome(True, {"stats": last})
    rooted = set(enumerate_rooted(m))
    if images != rooted:
        return Outcome(False, {}, {"trees": count, "rooted_words": len(rooted)})
    return Outcome(True, {"trees": count})


def _bnk_gf(p: dict) -> Outcome:
    m = p["multiset"]
    n, k = m.n, m.k
    counts: Counter = Counter()
    for b in enumerate_partitions(n, k, p.get("max_M")):
        s = partition_stats(b)
        if s.des + s.asc + s.emp != n + k:
            return Outcome(False, {}, {"partition": b, "stats": list(s)})
        counts[(s.des, s.asc, s.emp)] += 1
    return _compare_polys({"partitions": _poly_of(XYZ, counts),
                           "multinomial_sum": rhs_multiset_eulerian(m)})


def _class_gf(p: dict) -> Outcome:
    m = p["multiset"]
    seen = set()
    for t in enumerate_trees(m, p.get("max_M")):
        key = forget_order(t)
        if key in seen:
            continue
        seen.add(key)
        members = list(class_of(t))
        tree_side = Counter(tuple(tree_stats(u)) for u in members)
        image = Psi(t)
        parts = list(class_of_partition(image))
        part_side = Counter((s.des, s.asc, s.emp) for s in map(partition_stats, parts))
        if tree_side != part_side or {Psi(u) for u in members} != set(parts):
            return Outcome(False, {}, {"tree": t, "partition": image,
                                       "tree_side": _poly_of(XYZ, tree_side),
                                       "partition_side": _poly_of(XYZ, part_side)})
    return Outcome(True, {"classes": len(seen)})


def _three_way(p: dict) -> Outcome:
    m = p["multiset"]
    seen = set()
    graphs = set()
    for t in enumerate_trees(m, p.get("max_M")):
        ut = forget_order(t)
        if ut in seen:
            continue
        seen.add(ut)
        g = psi1(ut)
        blocks = psi2(g)
        a, b = ut.distinct_in_labels(), g.distinct_in_labels()
        c = {i: len(blk) for i, blk in enumerate(blocks)}
        if not a == b == c:
            return Outcome(False, {}, {"unordered_tree": ut, "tree": a, "graph": b, "blocks": c})
        if psi1_inverse(g) != ut or psi2_inverse(blocks, m) != g or g in graphs:
            return Outcome(False, {}, {"unordered_tree": ut, "graph": g})
        graphs.add(g)
        if edge_words(t).keys() - set(range(m.k)):
            return Outcome(False, {}, {"tree": t})
    ok = len(seen) == len(graphs) == m.k ** m.n
    return Outcome(ok, {"unordered_trees": len(seen)},
                   None if ok else {"unordered_trees": len(seen), "expected": m.k ** m.n})


def _barred_count(p: dict) -> Outcome:
    m, order = p["multiset"], p["order"]
    n, k = m.n, m.k
    for j in range(order + 1):
        c = count_barred(n, k, j, p.get("max_M"))
        f = barred_count_formula(n, k, j)
        if c != f:
            return Outcome(False, {}, {"bars": j, "counted": c, "formula": f})
        if j <= BARRED_ENUMERATION_BARS:
            e = sum(1 for _ in enumerate_barred(n, k, j, p.get("max_M")))
            if e != c:
                return Outcome(False, {}, {"bars": j, "enumerated": e, "counted": c})
    des = Counter(partition_stats(b).des for b in enumerate_partitions(n, k, p.get("max_M")))
    gf = series_over_one_minus_t(_poly_of(T, Counter({(d,): c for d, c in des.items()})),
                                 m.M + 1, order)
    return _compare_lists([count_barred(n, k, j) for j in range(order + 1)], gf)


def _partial_gamma(p: dict) -> Outcome:
    m = p["multiset"]
    table = partial_gamma(m, p.get("max_M"))
    ok = table.ok and table.nonnegative
    cex = None
    if not ok:
        cex = {"mismatches": table.mismatches,
               "negatives": {f"{i},{j}": v for (i, j), v in table.by_slice.items() if v < 0}}
    return Outcome(ok, {"gammas": [list(r) for r in table.rows()]}, cex)


def _transfer_fact(p: dict) -> Outcome:
    m = p["multiset"]
    left: Counter = Counter()
    images = set()
    for b in enumerate_partitions(m.n, m.k, p.get("max_M")):
        s = partition_stats(b)
        rw = phi_of_partition(b, m)
        ss = sibling_stats(rw.word)
        got = (word_stats(rw.word).plat, ss.sd, ss.dsd)
        if got != (s.emp, s.des, s.dd) or rw in images:
            return Outcome(False, {}, {"partition": b, "rooted_word": rw,
                                       "partition_triple": [s.emp, s.des, s.dd],
                                       "word_triple": list(got)})
        images.add(rw)
        left[(s.emp, s.des, s.dd)] += 1
    right: Counter = Counter()
    for rw in enumerate_rooted(m):
        ss = sibling_stats(rw.word)
        right[(word_stats(rw.word).plat, ss.sd, ss.dsd)] += 1
    ok = left == right
    rows = [[*key, c] for key, c in sorted(left.items())]
    return Outcome(ok, {"triples": rows},
                   None if ok else {"partitions": rows,
                                    "rooted": [[*key, c] for key, c in sorted(right.items())]})


# -- registry --------------------------------------------------------------------


def _all_ones(m: MultisetSpec, order: int) -> Optional[dict]:
    return {"n": m.n} if set(m.multiplicities) == {1} else None


def _all_ones_order(m: MultisetSpec, order: int) -> Optional[dict]:
    return {"n": m.n, "order": order} if set(m.multiplicities) == {1} else None


def _all_twos(m: MultisetSpec, order: int) -> Optional[dict]:
    return {"n": m.n} if set(m.multiplicities) == {2} else None


def _all_twos_order(m: MultisetSpec, order: int) -> Optional[dict]:
    return {"n": m.n, "order": order} if set(m.multiplicities) == {2} else None


def _every(m: MultisetSpec, order: int) -> Optional[dict]:
    return {"multiset": m}


def _every_order(m: MultisetSpec, order: int) -> Optional[dict]:
    return {"multiset": m, "order": order}


REGISTRY: dict[str, Identity] = {i.id: i for i in [
    Identity("carlitz-classic", "Carlitz identity: powers of m against the Eulerian polynomial",
             ("n", "order"), _carlitz_classic, _all_ones_order, min_n=0),
    Identity("eulerian-egf", "exponential generating function of the Eulerian polynomials",
             ("n",), _eulerian_egf, _all_ones, min_n=0),
    Identity("stirling-carlitz", "second-kind Stirling numbers against the Stirling descent polynomial",
             ("n", "order"), _stirling_carlitz, _all_twos_order, min_n=0),
    Identity("qstirling-eulerian-k2", "quasi-Stirling descent polynomial as a power of the Eulerian "
             "generating function, every multiplicity two", ("n",), _qstirling_eulerian_k2, _all_twos),
    Identity("qstirling-carlitz-k2", "Carlitz-type identity for quasi-Stirling permutations, every "
             "multiplicity two", ("n", "order"), _qstirling_carlitz_k2, _all_twos_order),
    Identity("multiset-eulerian", "multiset quasi-Stirling enumerator against the multinomial sum of "
             "bivariate Eulerian polynomials", ("multiset",), _multiset_eulerian, _every),
    Identity("multiset-carlitz", "Carlitz-type identity for quasi-Stirling multipermutations",
             ("multiset", "order"), _multiset_carlitz, _every_order),
    Identity("rooted-count", "rooted quasi-Stirling multipermutations number k times the unrooted ones",
             ("multiset",), _rooted_count, _every),
    Identity("phi-statistics", "tree to rooted word bijection sends (cdes, casc, leaf*) to "
             "(des, asc, plat)", ("multiset", "word", "root"), _phi_statistics, _every),
    Identity("bnk-gf", "ordered block partitions counted by (des, asc, emp)",
             ("multiset",), _bnk_gf, _every),
    Identity("class-gf", "equivalence classes of trees and of partitions share generating functions",
             ("multiset",), _class_gf, _every),
    Identity("three-way", "unordered trees, regular graphs and unordered partitions agree vertex by "
             "vertex", ("multiset",), _three_way, _every),
    Identity("cyclic-eulerian", "bivariate cyclic Eulerian polynomial is n times the previous "
             "bivariate Eulerian polynomial", ("n",), _cyclic_eulerian, _all_ones),
    Identity("barred-count", "barred partitions counted by number of bars",
             ("multiset", "order"), _barred_count, _every_order),
    Identity("bivariate-gamma", "gamma expansion of the bivariate Eulerian polynomial counts "
             "permutations without double descents", ("n",), _bivariate_gamma, _all_ones),
    Identity("partial-gamma", "partial gamma expansion of the quasi-Stirling enumerator, three ways",
             ("multiset",), _partial_gamma, _every),
    Identity("transfer-fact", "partition triple (emp, des, dd) carried to rooted word triple "
             "(plat, sd, dsd)", ("multiset",), _transfer_fact, _every),
]}


def normalize_params(identity: Identity, params: dict) -> dict:
    """Coerce user parameters; multisets may be given as multiplicity lists."""
    out = {}
    for name in identity.params:
        if name in params and params[name] is not None:
            out[name] = params[name]
    if "multiset" in identity.params:
        if "multiset" not in out:
            raise ValueError(f"{identity.id} needs a multiset")
        m = out["multiset"]
        out["multiset"] = m if isinstance(m, MultisetSpec) else MultisetSpec(tuple(m))
    if "n" in identity.params:
        if "n" not in out:
            raise ValueError(f"{identity.id} needs n")
        out["n"] = int(out["n"])
        if out["n"] < identity.min_n:
            raise ValueError(f"{identity.id} needs n >= {identity.min_n}")
    if "order" in identity.params:
        out["order"] = int(out.get("order", DEFAULT_ORDER))
        if out["order"] < 0:
            raise ValueError("order must be >= 0")
    if "word" in out:
        out["word"] = tuple(int(x) for x in out["word"])
    return out


def _guard_size(identity: Identity, params: dict) -> int:
    if "multiset" in params:
        if params.get("word") is not None:
            return 0
        return params["multiset"].M
    n = params["n"]
    return 2 * n if identity.check in (_stirling_carlitz, _qstirling_eulerian_k2,
                                       _qstirling_carlitz_k2) else n


def run_identity(identity_id: str, params: dict, max_M: Optional[int] = None) -> CheckResult:
    if identity_id not in REGISTRY:
        raise KeyError(f"unknown identity {identity_id!r}; known: {', '.join(sorted(REGISTRY))}")
    identity = REGISTRY[identity_id]
    p = normalize_params(identity, params)
    shown = dict(p)
    try:
        check_guard(_guard_size(identity, p), max_M)
        if max_M is not None:
            p["max_M"] = max_M
        out = identity.check(p)
    except GuardExceeded as exc:
        return CheckResult(identity.id, identity.anchor, shown, "skipped", {"reason": str(exc)})
    return CheckResult(identity.id, identity.anchor, shown, "pass" if out.ok else "fail",
                       out.detail, out.counterexample)


def sweep_tasks(max_M: int, order: int = DEFAULT_ORDER) -> list[tuple[str, dict]]:
    tasks = []
    for m in multisets_up_to(max_M):
        for identity in REGISTRY.values():
            params = identity.applies(m, order)
            if params is not None:
                tasks.append((identity.id, params))
    return tasks


def _run_task(task: tuple[str, dict, Optional[int]]) -> dict:
    identity_id, params, max_M = task
    return run_identity(identity_id, params, max_M).to_json()


def sweep(max_M: int, jobs: int = 1, order: int = DEFAULT_ORDER,
          guard: Optional[int] = None) -> dict:
    """Every applicable identity on every multiset with M <= max_M.

    The report lists results in task order, so it does not depend on ``jobs``.
    """
    check_guard(max_M, guard)
    tasks = [(i, p, guard) for i, p in sweep_tasks(max_M, order)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=1))
    else:
        results = [_run_task(t) for t in tasks]
    status = Counter(r["status"] for r in results)
    return {"max_M": max_M, "order": order, "multisets": len(multisets_up_to(max_M)),
            "checks": len(results), "passed": status["pass"], "failed": status["fail"],
            "skipped": status["skipped"], "ok": status["fail"] == 0 and status["skipped"] == 0,
            "results": results}

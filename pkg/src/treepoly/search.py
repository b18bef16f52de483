"""Exhaustive classification of free trees by invariant, plus the shipped
exhibit pairs."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from itertools import islice
from typing import Callable, Iterable, Iterator

from .invariants import csf_powersum, gdp, hdp, soup, stp
from .trees import FREE_TREE_COUNTS, Tree, canonical_code, generate_free_trees, is_isomorphic, parse_tree

log = logging.getLogger(__name__)

INVARIANTS = ("csf", "gdp", "hdp", "stp", "soup", "hdp+gdp")
DEFAULT_MAX_N = 16
HARD_MAX_N = 19
CODE_VERSION = "1"
CACHE_ENV = "TREEPOLY_CACHE"
CHUNK = 256


class SearchCapError(ValueError):
    pass


def serialize(t: Tree, invariant: str) -> str:
    """Canonical text of an invariant; equal invariants give equal text."""
    if invariant == "csf":
        return csf_powersum(t).to_text()
    if invariant == "gdp":
        return gdp(t).to_text()
    if invariant == "hdp":
        return hdp(t).to_text()
    if invariant == "stp":
        return stp(t).to_text()
    if invariant == "soup":
        return soup(t).to_text()
    if invariant == "hdp+gdp":
        return hdp(t).to_text() + "\n" + gdp(t).to_text()
    raise ValueError(f"unknown invariant {invariant!r}; choose from {', '.join(INVARIANTS)}")


def _digest(text: str) -> bytes:
    return hashlib.blake2b(text.encode(), digest_size=16).digest()


@dataclass(frozen=True)
class Fingerprint:
    invariant: str
    digest: bytes
    payload: str | None = None

    @classmethod
    def of(cls, t: Tree, invariant: str, keep_payload: bool = True) -> "Fingerprint":
        text = serialize(t, invariant)
        return cls(invariant, _digest(text), text if keep_payload else None)


# ---------------------------------------------------------------------------
# map phase
# ---------------------------------------------------------------------------

def _fingerprint_chunk(args: tuple[str, list[tuple[int, list[tuple[int, int]]]]]) -> list[tuple[bytes, bytes, str]]:
    invariant, chunk = args
    out = []
    for n, edges in chunk:
        t = Tree(n, edges)
        fp = Fingerprint.of(t, invariant)
        out.append((canonical_code(t), fp.digest, fp.payload))
    return out


def _chunks(trees: Iterable[Tree], size: int) -> Iterator[list[tuple[int, list[tuple[int, int]]]]]:
    it = iter(trees)
    while True:
        block = [(t.n, list(t.edges)) for t in islice(it, size)]
        if not block:
            return
        yield block


def _fingerprints(n: int, invariant: str, jobs: int) -> list[tuple[bytes, bytes, str]]:
    work = ((invariant, c) for c in _chunks(generate_free_trees(n), CHUNK))
    if jobs <= 1:
        rows = [r for w in work for r in _fingerprint_chunk(w)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = [r for part in pool.map(_fingerprint_chunk, work) for r in part]
    rows.sort()
    return rows


# ---------------------------------------------------------------------------
# reduce phase
# ---------------------------------------------------------------------------

def _group(rows: list[tuple[bytes, bytes, str]], key: Callable) -> list[list[bytes]]:
    groups: dict = defaultdict(list)
    for row in rows:
        groups[key(row)].append(row[0])
    return sorted(sorted(g) for g in groups.values())


def _group_by_digest(rows: list[tuple[bytes, bytes, str]]) -> list[list[bytes]]:
    """Group by digest, then split any digest bucket whose payloads differ."""
    return _group(rows, lambda r: (r[1], r[2]))


def _check_n(n: int, allow_large: bool, max_n: int) -> None:
    if n < 1:
        raise SearchCapError("n must be at least 1")
    if n > HARD_MAX_N:
        raise SearchCapError(f"n={n} exceeds the hard limit {HARD_MAX_N}")
    if n > max_n:
        if not allow_large:
            raise SearchCapError(f"n={n} exceeds the cap {max_n}; pass allow_large to go up to {HARD_MAX_N}")
        log.warning("classifying n=%d: %d trees, expect a long run", n, FREE_TREE_COUNTS[n])


def _cache_path(cache_dir: str | os.PathLike, n: int, invariant: str) -> str:
    return os.path.join(os.fspath(cache_dir), f"{invariant.replace('+', '_')}-n{n}-v{CODE_VERSION}.json")


def _valid_cached(report: dict, n: int, invariant: str) -> bool:
    try:
        hist = {int(k): v for k, v in report["histogram"].items()}
        return (report["n"] == n and report["invariant"] == invariant
                and report["num_trees"] == FREE_TREE_COUNTS[n]
                and sum(k * v for k, v in hist.items()) == FREE_TREE_COUNTS[n])
    except (KeyError, TypeError, ValueError, AttributeError):
        return False


def classify(n: int, invariant: str, jobs: int = 1, *, max_n: int = DEFAULT_MAX_N,
             allow_large: bool = False, cache_dir: str | os.PathLike | None = None) -> dict:
    """Partition all free trees on ``n`` vertices by ``invariant``.

    The report lists every class of size at least two with its members
    (canonical code in hex, edge list) sorted by canonical code, and a
    histogram of class sizes.  Apart from ``elapsed_ms`` it does not depend
    on ``jobs``."""
    if invariant not in INVARIANTS:
        raise ValueError(f"unknown invariant {invariant!r}; choose from {', '.join(INVARIANTS)}")
    _check_n(n, allow_large, max_n)
    cache_dir = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    if cache_dir:
        path = _cache_path(cache_dir, n, invariant)
        if os.path.exists(path):
            with open(path) as fh:
                cached = json.load(fh)
            if _valid_cached(cached, n, invariant):
                return cached
            log.warning("ignoring stale cache file %s", path)

    start = time.perf_counter()
    rows = _fingerprints(n, invariant, jobs)
    classes = _group_by_digest(rows)
    hist: dict[int, int] = defaultdict(int)
    for c in classes:
        hist[len(c)] += 1
    total = sum(len(c) for c in classes)
    if total != FREE_TREE_COUNTS[n]:
        raise RuntimeError(f"generated {total} trees on {n} vertices, expected {FREE_TREE_COUNTS[n]}")

    by_code = {}
    nontrivial = [c for c in classes if len(c) > 1]
    wanted = {code for c in nontrivial for code in c}
    if wanted:
        for t in generate_free_trees(n):
            code = canonical_code(t)
            if code in wanted:
                by_code[code] = t
    report = {
        "n": n,
        "invariant": invariant,
        "num_trees": total,
        "classes": [
            {"size": len(c), "members": [{"code": code.hex(), "edges": by_code[code].edge_list()} for code in c]}
            for c in nontrivial
        ],
        "histogram": {str(k): hist[k] for k in sorted(hist)},
        "elapsed_ms": round((time.perf_counter() - start) * 1000, 1),
    }
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        with open(_cache_path(cache_dir, n, invariant), "w") as fh:
            json.dump(report, fh, indent=1)
    return report


def report_json(report: dict, with_timing: bool = False) -> str:
    """Stable serialization; timing is dropped unless asked for, so two runs
    of the same classification compare byte for byte."""
    data = dict(report)
    if not with_timing:
        data.pop("elapsed_ms", None)
    return json.dumps(data, indent=1, sort_keys=True)


def nontrivial_class_count(report: dict, size: int = 2) -> int:
    return sum(1 for c in report["classes"] if c["size"] == size)


def classes_by_full_comparison(n: int, invariant: str) -> list[list[bytes]]:
    """Oracle partition: group on the full serialization, no hashing."""
    rows = [(canonical_code(t), b"", serialize(t, invariant)) for t in generate_free_trees(n)]
    return _group(rows, lambda r: r[2])


def classes_by_digest(n: int, invariant: str, jobs: int = 1) -> list[list[bytes]]:
    return _group_by_digest(_fingerprints(n, invariant, jobs))


# ---------------------------------------------------------------------------
# comparing invariants
# ---------------------------------------------------------------------------

COMPARED = ("gdp", "hdp", "stp", "soup")


def _refines(fine: list[list[str]], coarse: list[list[str]]) -> tuple[bool, list[list[str]]]:
    """Does the partition ``fine`` refine ``coarse``?  Only classes of size
    at least two are given; singletons are implicit."""
    where = {code: i for i, c in enumerate(coarse) for code in c}
    bad = []
    for c in fine:
        owners = {where.get(code, ("alone", code)) for code in c}
        if len(owners) > 1:
            bad.append(c)
    return not bad, bad


def compare_invariants(n: int, jobs: int = 1, *, max_n: int = DEFAULT_MAX_N,
                       allow_large: bool = False) -> dict:
    """For every ordered pair (A, B) of invariants: whether the partition by
    A refines the partition by B, with the A-classes that straddle several
    B-classes as counterexamples."""
    parts = {}
    for inv in COMPARED:
        rep = classify(n, inv, jobs, max_n=max_n, allow_large=allow_large)
        parts[inv] = [[m["code"] for m in c["members"]] for c in rep["classes"]]
    pairs = []
    for a in COMPARED:
        for b in COMPARED:
            if a == b:
                continue
            ok, bad = _refines(parts[a], parts[b])
            pairs.append({"finer": a, "coarser": b, "refines": ok, "counterexamples": bad})
    return {"n": n, "classes": parts, "pairs": pairs}


def same_partition(report: dict, a: str, b: str) -> bool:
    ab = next(p for p in report["pairs"] if p["finer"] == a and p["coarser"] == b)
    ba = next(p for p in report["pairs"] if p["finer"] == b and p["coarser"] == a)
    return ab["refines"] and ba["refines"]


# ---------------------------------------------------------------------------
# exhibits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Exhibit:
    name: str
    first: Tree
    second: Tree
    relation: dict


class ExhibitDataError(RuntimeError):
    pass


def _data_file(name: str) -> bytes:
    return resources.files("treepoly").joinpath("data", name).read_bytes()


def builtin_exhibits() -> list[Exhibit]:
    """The shipped exhibit pairs, each file checked against the sha256
    manifest before it is parsed."""
    manifest = json.loads(_data_file("manifest.json"))
    out = []
    for item in manifest["exhibits"]:
        trees = []
        for fname in item["files"]:
            raw = _data_file(fname)
            if hashlib.sha256(raw).hexdigest() != manifest["sha256"][fname]:
                raise ExhibitDataError(f"checksum mismatch for {fname}")
            trees.append(parse_tree(raw.decode()))
        if [t.n for t in trees] != [item["n"]] * 2:
            raise ExhibitDataError(f"{item['name']}: expected two trees on {item['n']} vertices")
        out.append(Exhibit(item["name"], trees[0], trees[1], item["relation"]))
    return out


def _coefficient(t: Tree, invariant: str, exponents: list[int]) -> int:
    poly = {"gdp": gdp, "hdp": hdp, "stp": stp, "soup": soup}[invariant](t)
    return poly.coefficient(tuple(exponents))


def check_exhibit(ex: Exhibit) -> list[tuple[str, bool]]:
    """Re-derive each documented property of an exhibit pair."""
    results = [("non-isomorphic", not is_isomorphic(ex.first, ex.second))]
    for inv in ex.relation.get("equal", []):
        results.append((f"{inv} equal", serialize(ex.first, inv) == serialize(ex.second, inv)))
    for inv in ex.relation.get("different", []):
        results.append((f"{inv} different", serialize(ex.first, inv) != serialize(ex.second, inv)))
    for spec in ex.relation.get("coefficients", []):
        got = [_coefficient(t, spec["invariant"], spec["exponents"]) for t in (ex.first, ex.second)]
        results.append((f"{spec['invariant']} coefficient {spec['exponents']} = {spec['values']} (got {got})",
                        got == spec["values"]))
    return results

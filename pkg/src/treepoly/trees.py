"""Labeled trees, canonical codes, free-tree generation and the structural
operations used to build trees with equal invariants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .algebra import Composition, check_composition

Edge = tuple[int, int]


class TreeError(ValueError):
    """Input does not describe a tree."""


class BadLabelError(TreeError):
    pass


class DuplicateEdgeError(TreeError):
    pass


class CycleError(TreeError):
    pass


class DisconnectedError(TreeError):
    pass


class Tree:
    """A tree on vertices ``0..n-1``.

    Edges are stored as sorted pairs in input order; ``adj[v]`` is the
    sorted tuple of neighbours of ``v``.
    """

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if not isinstance(n, int) or n < 1:
            raise TreeError(f"vertex count must be a positive integer, got {n!r}")
        norm: list[Edge] = []
        seen: set[Edge] = set()
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in edges:
            u, v = int(e[0]), int(e[1])
            for x in (u, v):
                if not 0 <= x < n:
                    raise BadLabelError(f"vertex label {x} outside 0..{n - 1}")
            if u == v:
                raise CycleError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
            ru, rv = find(u), find(v)
            if ru == rv:
                raise CycleError(f"edge {key[0]}-{key[1]} closes a cycle")
            parent[ru] = rv
            norm.append(key)
        if len(norm) != n - 1:
            raise DisconnectedError(f"{n} vertices but only {len(norm)} edges: graph is disconnected")
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in norm:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.n = n
        self.edges = tuple(norm)
        self.adj = tuple(tuple(sorted(a)) for a in nbrs)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if len(self.adj[v]) == 1]

    def leaf_count(self) -> int:
        """Number of leaves; a single vertex has none, an edge has two."""
        return sum(1 for a in self.adj if len(a) == 1)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self.n == other.n and self.edge_set() == other.edge_set()

    def __hash__(self):
        return hash((self.n, self.edge_set()))

    def __repr__(self):
        return f"Tree(n={self.n}, edges={list(self.edges)})"

    def relabel(self, perm: Sequence[int]) -> "Tree":
        """Tree with vertex ``v`` renamed ``perm[v]``."""
        return Tree(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def to_text(self) -> str:
        lines = [f"n={self.n}"]
        lines += [f"{u} {v}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"

    def edge_list(self) -> list[list[int]]:
        return [[u, v] for u, v in sorted(self.edges)]

    def components_without(self, u: int, v: int) -> tuple[set[int], set[int]]:
        """Vertex sets of the two components of ``T - uv``: (side of u, side of v)."""
        if not self.has_edge(u, v):
            raise TreeError(f"{u}-{v} is not an edge")
        side = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in side and not (x == u and y == v):
                    side.add(y)
                    stack.append(y)
        return side, set(range(self.n)) - side


def parse_tree(text: str) -> Tree:
    """Parse an edge-list document: one ``u v`` pair per line, optionally
    preceded by ``n=K``.  Blank lines and ``#`` comments are ignored."""
    n = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("n="):
            if n is not None or edges:
                raise TreeError(f"line {lineno}: 'n=' must be the first entry")
            try:
                n = int(line[2:])
            except ValueError:
                raise TreeError(f"line {lineno}: bad vertex count {line!r}") from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TreeError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise BadLabelError(f"line {lineno}: non-integer label in {raw!r}") from None
        if u < 0 or v < 0:
            raise BadLabelError(f"line {lineno}: negative label in {raw!r}")
        edges.append((u, v))
    if n is None:
        if not edges:
            raise TreeError("empty edge list and no 'n=' line")
        n = 1 + max(max(e) for e in edges)
    return Tree(n, edges)


def read_tree(path) -> Tree:
    with open(path, encoding="utf-8") as fh:
        return parse_tree(fh.read())


# ---------------------------------------------------------------------------
# canonical codes
# ---------------------------------------------------------------------------

def centroids(t: Tree) -> list[int]:
    n = t.n
    order, parent = _bfs_order(t, 0)
    size = [1] * n
    for v in reversed(order):
        p = parent[v]
        if p >= 0:
            size[p] += size[v]
    best = []
    for v in range(n):
        heaviest = n - size[v]
        for w in t.adj[v]:
            if w != parent[v]:
                heaviest = max(heaviest, size[w])
        if 2 * heaviest <= n:
            best.append(v)
    return best


def _bfs_order(t: Tree, root: int) -> tuple[list[int], list[int]]:
    parent = [-1] * t.n
    parent[root] = root
    order = [root]
    for v in order:
        for w in t.adj[v]:
            if parent[w] == -1:
                parent[w] = v
                order.append(w)
    parent[root] = -1
    return order, parent


def rooted_code(t: Tree, root: int) -> bytes:
    """AHU parenthesis code of ``t`` rooted at ``root``, children sorted."""
    order, parent = _bfs_order(t, root)
    codes: list[bytes] = [b""] * t.n
    kids: list[list[bytes]] = [[] for _ in range(t.n)]
    for v in reversed(order):
        kids[v].sort()
        codes[v] = b"(" + b"".join(kids[v]) + b")"
        p = parent[v]
        if p >= 0:
            kids[p].append(codes[v])
    return codes[root]


def canonical_code(t: Tree) -> bytes:
    """Isomorphism-complete code: smallest rooted code over the centroids."""
    return min(rooted_code(t, c) for c in centroids(t))


def is_isomorphic(a: Tree, b: Tree) -> bool:
    return a.n == b.n and canonical_code(a) == canonical_code(b)


# ---------------------------------------------------------------------------
# free-tree generation (level sequences, constant amortized time)
# ---------------------------------------------------------------------------

def _level_sequence_tree(levels: Sequence[int]) -> Tree:
    last_at_depth: dict[int, int] = {}
    edges = []
    for i, d in enumerate(levels):
        if d > 0:
            edges.append((last_at_depth[d - 1], i))
        last_at_depth[d] = i
    return Tree(len(levels), edges)


def _next_rooted(seq: list[int], p: int | None = None) -> list[int] | None:
    if p is None:
        p = len(seq) - 1
        while seq[p] == 1:
            p -= 1
    if p == 0:
        return None
    q = p - 1
    while seq[q] != seq[p] - 1:
        q -= 1
    out = list(seq)
    for i in range(p, len(out)):
        out[i] = out[i - p + q]
    return out


def _split(seq: Sequence[int]) -> tuple[list[int], list[int]]:
    """Split a level sequence into the first principal subtree (re-leveled)
    and the remainder."""
    m = len(seq)
    ones = 0
    for i, d in enumerate(seq):
        if d == 1:
            ones += 1
            if ones == 2:
                m = i
                break
    left = [d - 1 for d in seq[1:m]]
    rest = [0] + list(seq[m:])
    return left, rest


def _next_free(seq: list[int]) -> list[int] | None:
    left, rest = _split(seq)
    lh, rh = max(left), max(rest)
    ok = rh >= lh
    if ok and rh == lh:
        if len(left) > len(rest) or (len(left) == len(rest) and left > rest):
            ok = False
    if ok:
        return seq
    p = len(left)
    cand = _next_rooted(seq, p)
    if cand is None:
        return None
    if seq[p] > 2:
        new_left, _ = _split(cand)
        suffix = list(range(1, max(new_left) + 2))
        cand[-len(suffix):] = suffix
    return cand


def generate_free_trees(n: int) -> Iterator[Tree]:
    """One tree per isomorphism class on ``n`` vertices, labeled by the
    preorder of its canonical level sequence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        yield Tree(1, [])
        return
    if n == 2:
        yield Tree(2, [(0, 1)])
        return
    seq: list[int] | None = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
    while seq is not None:
        seq = _next_free(seq)
        if seq is not None:
            yield _level_sequence_tree(seq)
            seq = _next_rooted(seq)


# counts of free trees (OEIS A000055), used to sanity-check enumerations
FREE_TREE_COUNTS = [0, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159,
                    7741, 19320, 48629, 123867, 317955, 823065]


# ---------------------------------------------------------------------------
# near-contraction
# ---------------------------------------------------------------------------

def _near_contract_edges(t: Tree, v: int, w: int) -> list[Edge]:
    out = []
    for a, b in t.edges:
        if a == w and b != v:
            out.append((v, b))
        elif b == w and a != v:
            out.append((v, a))
        else:
            out.append((a, b))
    return out


def near_contract(t: Tree, e: Sequence[int]) -> Tree:
    """``T ⊙ e`` for a non-leaf edge ``e = (v, w)``: the neighbours of ``w``
    other than ``v`` are moved onto ``v`` and ``w`` stays as a pendant leaf
    of ``v``.  Labels are preserved."""
    v, w = int(e[0]), int(e[1])
    if not (0 <= v < t.n and 0 <= w < t.n) or not t.has_edge(v, w):
        raise TreeError(f"{v}-{w} is not an edge of the tree")
    if t.degree(v) < 2 or t.degree(w) < 2:
        raise TreeError(f"{v}-{w} is a leaf edge")
    return Tree(t.n, _near_contract_edges(t, v, w))


def non_leaf_edges(t: Tree) -> list[Edge]:
    return [(u, v) for u, v in t.edges if t.degree(u) >= 2 and t.degree(v) >= 2]


# ---------------------------------------------------------------------------
# caterpillars
# ---------------------------------------------------------------------------

def cat(alpha: Sequence[int]) -> Tree:
    """Caterpillar with signature ``alpha``: spine vertices ``0..k-1``, spine
    vertex ``i`` carrying ``alpha[i] - 1`` pendant leaves, leaves numbered
    from ``k`` in spine order."""
    alpha = check_composition(alpha)
    k = len(alpha)
    if k >= 2 and (alpha[0] < 2 or alpha[-1] < 2):
        raise ValueError(f"caterpillar signature needs first and last parts >= 2: {alpha}")
    edges = [(i, i + 1) for i in range(k - 1)]
    nxt = k
    for i, a in enumerate(alpha):
        for _ in range(a - 1):
            edges.append((i, nxt))
            nxt += 1
    return Tree(nxt, edges)


class NotCaterpillarError(TreeError):
    pass


def spine(t: Tree) -> list[int]:
    """Spine of a caterpillar (n >= 3) listed from one end to the other."""
    if t.n < 3:
        raise NotCaterpillarError("caterpillar spine needs at least 3 vertices")
    inner = [v for v in range(t.n) if t.degree(v) >= 2]
    inner_set = set(inner)
    sdeg = {v: sum(1 for w in t.adj[v] if w in inner_set) for v in inner}
    if any(d > 2 for d in sdeg.values()):
        raise NotCaterpillarError("non-leaf vertices do not form a path")
    if len(inner) == 1:
        return inner
    ends = [v for v in inner if sdeg[v] == 1]
    start = min(ends)
    path = [start]
    prev = -1
    while len(path) < len(inner):
        cur = path[-1]
        nxt = next(w for w in t.adj[cur] if w in inner_set and w != prev)
        prev = cur
        path.append(nxt)
    return path


def signature(t: Tree) -> Composition:
    """Signature of a caterpillar, normalized to the lexicographically
    smaller of itself and its reversal."""
    path = spine(t)
    sig = tuple(1 + sum(1 for w in t.adj[v] if t.degree(w) == 1) for v in path)
    return min(sig, sig[::-1])


def is_caterpillar(t: Tree) -> bool:
    try:
        spine(t)
    except NotCaterpillarError:
        return False
    return True


# ---------------------------------------------------------------------------
# polarized trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolarizedTree:
    tree: Tree
    left: int
    right: int

    def __post_init__(self):
        for x in (self.left, self.right):
            if not 0 <= x < self.tree.n:
                raise TreeError(f"end {x} is not a vertex")


def polarized_point() -> PolarizedTree:
    return PolarizedTree(Tree(1, []), 0, 0)


def polarized_path(k: int) -> PolarizedTree:
    """Path on ``k`` vertices with its ends at the two extremes."""
    return PolarizedTree(Tree(k, [(i, i + 1) for i in range(k - 1)]), 0, k - 1)


def polarized_concat(a: PolarizedTree, b: PolarizedTree) -> PolarizedTree:
    """``A · B``: disjoint union plus the edge from the right end of ``A`` to
    the left end of ``B``.  Vertices of ``B`` are shifted by ``A.tree.n``."""
    off = a.tree.n
    edges = list(a.tree.edges) + [(u + off, v + off) for u, v in b.tree.edges]
    edges.append((a.right, b.left + off))
    return PolarizedTree(Tree(off + b.tree.n, edges), a.left, b.right + off)


def polarized_near_concat(a: PolarizedTree, b: PolarizedTree) -> PolarizedTree:
    """``A ⊙ B``: the concatenation with its joining edge near-contracted.
    An end that was merged away (``B``'s left end) is represented by the
    merged vertex."""
    joined = polarized_concat(a, b)
    v, w = a.right, b.left + a.tree.n
    t = Tree(joined.tree.n, _near_contract_edges(joined.tree, v, w))
    right = v if joined.right == w else joined.right
    return PolarizedTree(t, joined.left, right)


def odot_power(a: PolarizedTree, i: int) -> PolarizedTree:
    if i < 1:
        raise ValueError("power must be >= 1")
    out = a
    for _ in range(i - 1):
        out = polarized_near_concat(out, a)
    return out


def compose_tree(beta: Sequence[int], a: PolarizedTree) -> PolarizedTree:
    """``β ∘ A = A^{⊙β1} · A^{⊙β2} · …``."""
    beta = check_composition(beta)
    out = odot_power(a, beta[0])
    for b in beta[1:]:
        out = polarized_concat(out, odot_power(a, b))
    return out


def cap(a: PolarizedTree) -> Tree:
    """Attach a pendant leaf at each end; for a caterpillar-shaped input this
    realizes ``1 ⊙ α ⊙ 1``."""
    n = a.tree.n
    edges = list(a.tree.edges) + [(a.left, n), (a.right, n + 1)]
    return Tree(n + 2, edges)


def induced_subtree(t: Tree, vertices: Iterable[int]) -> tuple[Tree, dict[int, int]]:
    """Subgraph induced on ``vertices`` (which must be connected), relabelled
    in increasing order.  Returns the tree and the old-to-new label map."""
    keep = sorted(set(vertices))
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in t.edges if u in index and v in index]
    return Tree(len(keep), edges), index


def edge_split(t: Tree, e: Sequence[int]) -> tuple[Tree, Tree]:
    """``(T1', T2')`` for the edge ``e = vw``: the component of ``T - e``
    containing ``v`` with ``e`` kept (so ``w`` is a pendant leaf), and the
    same for ``w``."""
    v, w = int(e[0]), int(e[1])
    side_v, side_w = t.components_without(v, w)
    t1, _ = induced_subtree(t, side_v | {w})
    t2, _ = induced_subtree(t, side_w | {v})
    return t1, t2

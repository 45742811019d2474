"""The orthogonality graph of nonzero vectors and functionals of GF(q)^n.

One side of the graph holds the q^n - 1 nonzero column vectors, the other
holds the q^n - 1 nonzero functionals (row vectors); functional f_u is
adjacent to vector v exactly when u . v = 0.  Vertex ids are lexicographic:
vectors come first (id = lex rank of coords among nonzero tuples), then
functionals at the same rank offset by q^n - 1.

Adjacency rows are Python ints used as bitsets (bit i = vertex id i), which
keeps set algebra exact and fast at the sizes this package targets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .gf import Field
from .linalg import dot, kernel_basis, scalar_mul, span_nonzero

VEC = "vec"
FUN = "fun"


def _bits(mask: int):
    """Yield the set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Line:
    """A scalar class: all nonzero multiples of one monic representative."""
    side: str
    rep: tuple
    members: tuple  # vertex ids, ascending


class LfGraph:
    """Built by build(); treat instances as immutable once constructed."""

    def __init__(self, field: Field, n: int, adj: list[int]):
        self.field = field
        self.n = n
        self.q = field.q
        self.nv = field.q ** n - 1  # vertices per side
        self.adj = adj
        self._lines = None
        self._line_of = None
        self._vec_coords = None
        self._n2_partner = None

    # ---------- vertex indexing ----------

    @property
    def num_vertices(self) -> int:
        return 2 * self.nv

    def vec_id(self, coords) -> int:
        r = 0
        for c in coords:
            r = r * self.q + c
        if r == 0:
            raise ValueError("the zero vector is not a vertex")
        return r - 1

    def fun_id(self, coords) -> int:
        return self.vec_id(coords) + self.nv

    def is_vec(self, vid: int) -> bool:
        return vid < self.nv

    def mirror(self, vid: int) -> int:
        """The same coordinates on the other side."""
        return vid - self.nv if vid >= self.nv else vid + self.nv

    def coords_of(self, vid: int) -> tuple[str, tuple]:
        if not 0 <= vid < self.num_vertices:
            raise ValueError(f"vertex id {vid} out of range")
        side = VEC if vid < self.nv else FUN
        r = (vid if vid < self.nv else vid - self.nv) + 1
        coords = []
        for _ in range(self.n):
            r, c = divmod(r, self.q)
            coords.append(c)
        return side, tuple(reversed(coords))

    def vec_coords(self) -> list[tuple]:
        """Coordinates of every vector vertex, indexed by vector id."""
        if self._vec_coords is None:
            self._vec_coords = [self.coords_of(v)[1] for v in range(self.nv)]
        return self._vec_coords

    # ---------- basic invariants ----------

    def degree(self, vid: int) -> int:
        if not 0 <= vid < self.num_vertices:
            raise ValueError(f"vertex id {vid} out of range")
        return self.adj[vid].bit_count()

    def check_regular(self) -> bool:
        want = self.q ** (self.n - 1) - 1
        return all(row.bit_count() == want for row in self.adj)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for v in range(self.nv):
            out.extend((v, f) for f in _bits(self.adj[v]))
        out.sort()
        return out

    def components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for s in range(self.num_vertices):
            if (seen >> s) & 1:
                continue
            comp = 0
            frontier = 1 << s
            while frontier:
                comp |= frontier
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
            seen |= comp
            comps.append(list(_bits(comp)))
        return comps

    # ---------- scalar classes ----------

    def _monic_reps(self):
        """All monic vectors of GF(q)^n in ascending lexicographic order."""
        from itertools import product
        for lead in range(self.n - 1, -1, -1):
            for tail in product(range(self.q), repeat=self.n - 1 - lead):
                yield (0,) * lead + (1,) + tail

    def lines(self) -> list[Line]:
        """Scalar classes, vector side first, each side in lex order of rep."""
        if self._lines is None:
            F = self.field
            vec_lines = []
            fun_lines = []
            for rep in self._monic_reps():
                members = sorted(self.vec_id(scalar_mul(F, r, rep)) for r in F.units())
                vec_lines.append(Line(VEC, rep, tuple(members)))
                fun_lines.append(Line(FUN, rep, tuple(m + self.nv for m in members)))
            self._lines = vec_lines + fun_lines
            lof = [0] * self.num_vertices
            for idx, line in enumerate(self._lines):
                for m in line.members:
                    lof[m] = idx
            self._line_of = lof
        return self._lines

    def line_of(self, vid: int) -> int:
        if self._line_of is None:
            self.lines()
        return self._line_of[vid]

    def neighbor_set(self, line: Line) -> int:
        """Common adjacency bitset of every member of the class."""
        return self.adj[line.members[0]]

    def line_mask(self, line: Line) -> int:
        mask = 0
        for m in line.members:
            mask |= 1 << m
        return mask

    def twin_classes(self) -> list[tuple[int, ...]]:
        """Vertices grouped by identical neighbor bitsets."""
        groups: dict[int, list[int]] = {}
        for v in range(self.num_vertices):
            groups.setdefault(self.adj[v], []).append(v)
        return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def build(field: Field, n: int, max_vertices: int = 100_000) -> LfGraph:
    """Construct the graph for GF(q)^n.

    The guard rejects instances whose vertex count exceeds max_vertices;
    pass a larger bound explicitly to go beyond the default.
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    nv = field.q ** n - 1
    if 2 * nv > max_vertices:
        raise ValueError(
            f"graph would have {2 * nv} vertices, over the {max_vertices} guard")
    g = LfGraph(field, n, [0] * (2 * nv))
    adj = g.adj
    # one kernel per functional class: members of the class share it
    for rep in g._monic_reps():
        kmask = 0
        for w in span_nonzero(field, kernel_basis(field, rep)):
            kmask |= 1 << g.vec_id(w)
        fmask = 0
        fids = [g.fun_id(scalar_mul(field, r, rep)) for r in field.units()]
        for fid in fids:
            fmask |= 1 << fid
        for fid in fids:
            adj[fid] = kmask
        for vid in _bits(kmask):
            adj[vid] |= fmask
    return g


# ---------- domination ----------

def is_dominating(g: LfGraph, dset, target: str = VEC, mode: str = "standard") -> bool:
    """Does dset dominate the chosen target under the chosen rule?

    standard: every target vertex is in dset or has a neighbor in dset.
    total:    every target vertex has a neighbor in dset.
    """
    dmask = 0
    for v in dset:
        dmask |= 1 << v
    for v in _covered_ids(g, target):
        hit = g.adj[v] & dmask
        if mode == "standard":
            hit |= dmask & (1 << v)
        if not hit:
            return False
    return True


def _covered_ids(g: LfGraph, target: str) -> range:
    if target == VEC:
        return range(g.nv)
    if target == FUN:
        return range(g.nv, g.num_vertices)
    if target == "all":
        return range(g.num_vertices)
    raise ValueError(f"unknown target {target!r}")


def _candidate_ids(g: LfGraph, target: str) -> range:
    # one-sided domination draws dominators from the opposite side
    if target == VEC:
        return range(g.nv, g.num_vertices)
    if target == FUN:
        return range(g.nv)
    return range(g.num_vertices)


def domination_number(g: LfGraph, target: str = VEC, mode: str = "standard",
                      method: str = "branch", max_search: int = 200) -> tuple[int, tuple]:
    """Exact minimum size and one minimum witness set.

    target: "vec", "fun" (dominators come from the other side) or "all".
    mode:   "standard" or "total".
    method: "branch" (branch and bound) or "exhaustive" (subset sweep,
            only for graphs of at most 20 vertices).
    """
    if mode not in ("standard", "total"):
        raise ValueError(f"unknown mode {mode!r}")
    if method not in ("branch", "exhaustive"):
        raise ValueError(f"unknown method {method!r}")
    if method == "branch" and g.num_vertices > max_search:
        raise ValueError(
            f"{g.num_vertices} vertices is over the exact-search guard {max_search}")
    if method == "exhaustive" and g.num_vertices > 20:
        raise ValueError("exhaustive search is limited to 20 vertices")

    if target == "all" and mode == "total":
        # total constraints of each side only involve the other side, so the
        # whole-graph instance splits into the two one-sided instances
        s1, w1 = domination_number(g, VEC, "total", method, max_search)
        s2, w2 = domination_number(g, FUN, "total", method, max_search)
        return s1 + s2, tuple(sorted(w1 + w2))

    covered = list(_covered_ids(g, target))
    cands = list(_candidate_ids(g, target))
    pos = {v: i for i, v in enumerate(covered)}
    cover_masks = []
    for c in cands:
        mask = 0
        for v in _bits(g.adj[c]):
            if v in pos:
                mask |= 1 << pos[v]
        if mode == "standard" and c in pos:
            mask |= 1 << pos[c]
        cover_masks.append(mask)
    if method == "exhaustive":
        size, chosen = _min_cover_exhaustive(cover_masks, len(covered))
    else:
        size, chosen = _min_cover(cover_masks, len(covered))
    return size, tuple(sorted(cands[i] for i in chosen))


def _min_cover_exhaustive(cover: list[int], m: int) -> tuple[int, tuple]:
    full = (1 << m) - 1
    idxs = range(len(cover))
    for k in range(len(cover) + 1):
        for combo in combinations(idxs, k):
            acc = 0
            for i in combo:
                acc |= cover[i]
            if acc == full:
                return k, combo
    raise ValueError("instance is infeasible")


def _min_cover(cover: list[int], m: int) -> tuple[int, tuple]:
    """Exact minimum set cover by branch and bound over candidate masks."""
    full = (1 << m) - 1
    acc = 0
    for c in cover:
        acc |= c
    if acc != full:
        raise ValueError("instance is infeasible")

    # drop dominated candidates (anything covered by a superset peer)
    keep = []
    for i, ci in enumerate(cover):
        if not ci:
            continue
        dominated = False
        for j, cj in enumerate(cover):
            if i != j and ci & ~cj == 0 and (ci != cj or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    keep.sort(key=lambda i: -cover[i].bit_count())
    masks = [cover[i] for i in keep]

    elem_cov = [[] for _ in range(m)]
    for idx, mask in enumerate(masks):
        for e in _bits(mask):
            elem_cov[e].append(idx)

    # greedy upper bound doubles as the initial witness
    best_sel: list[int] = []
    uncov = full
    while uncov:
        idx = max(range(len(masks)), key=lambda i: (masks[i] & uncov).bit_count())
        best_sel.append(idx)
        uncov &= ~masks[idx]
    best = [len(best_sel), best_sel]
    maxc = max(mask.bit_count() for mask in masks)

    def dfs(uncovered: int, chosen: list[int]):
        if not uncovered:
            if len(chosen) < best[0]:
                best[0] = len(chosen)
                best[1] = list(chosen)
            return
        need = -(-uncovered.bit_count() // maxc)
        if len(chosen) + need >= best[0]:
            return
        pick, width = -1, None
        for e in _bits(uncovered):
            w = len(elem_cov[e])
            if width is None or w < width:
                pick, width = e, w
                if w <= 1:
                    break
        for idx in elem_cov[pick]:
            chosen.append(idx)
            dfs(uncovered & ~masks[idx], chosen)
            chosen.pop()

    dfs(full, [])
    return best[0], tuple(keep[i] for i in best[1])


# ---------- export ----------

def graph6_bytes(n: int, edges) -> bytes:
    """Standard graph6 encoding of an n-vertex graph with the given edges."""
    if not 0 <= n < (1 << 18):
        raise ValueError(f"vertex count {n} out of graph6 range")
    if n <= 62:
        head = bytes([n + 63])
    else:
        head = bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    present = set()
    for i, j in edges:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"bad edge ({i}, {j})")
        present.add((min(i, j), max(i, j)))
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if (i, j) in present else 0)
    body = bytearray()
    for base in range(0, len(bits), 6):
        group = bits[base:base + 6]
        group += [0] * (6 - len(group))
        val = 0
        for b in group:
            val = (val << 1) | b
        body.append(val + 63)
    return head + bytes(body)


def parse_graph6(data: bytes) -> tuple[int, set[tuple[int, int]]]:
    """Decode graph6 bytes back to (vertex count, edge set)."""
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<"):]
    if not data:
        raise ValueError("empty graph6 data")
    if data[0] == 126:
        if len(data) < 4:
            raise ValueError("truncated graph6 header")
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    if n < 0:
        raise ValueError("bad graph6 header")
    need = n * (n - 1) // 2
    bits = []
    for byte in body:
        v = byte - 63
        if not 0 <= v < 64:
            raise ValueError(f"bad graph6 byte {byte}")
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    if len(bits) < need:
        raise ValueError("graph6 body too short")
    edges = set()
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.add((i, j))
            k += 1
    return n, edges


def to_graph6(g: LfGraph) -> bytes:
    return graph6_bytes(g.num_vertices, g.edges())


def to_edgelist_json(g: LfGraph) -> bytes:
    vertices = []
    for vid in range(g.num_vertices):
        side, coords = g.coords_of(vid)
        vertices.append({"id": vid, "side": side, "coords": list(coords)})
    doc = {
        "q": g.q,
        "n": g.n,
        "vertices": vertices,
        "edges": [list(e) for e in g.edges()],
    }
    return json.dumps(doc, separators=(",", ":")).encode("ascii")


def parse_edgelist_json(data: bytes) -> dict:
    doc = json.loads(data)
    for key in ("q", "n", "vertices", "edges"):
        if key not in doc:
            raise ValueError(f"edge-list document is missing {key!r}")
    return doc


def export(g: LfGraph, fmt: str) -> bytes:
    if fmt == "graph6":
        return to_graph6(g)
    if fmt in ("json", "edge-list-json"):
        return to_edgelist_json(g)
    raise ValueError(f"unsupported export format {fmt!r}")

"""Automorphisms of the orthogonality graph: generators, enumeration,
closed-form counts, structure checks, and the constructive decomposition.

A vertex permutation is a tuple image with image[v] = target of vertex v.
Composition is function composition: (a.compose(b))(v) = a(b(v)).

The decomposition factors a verified automorphism into the generator chain
sigma^s . chi_P . pi_j . tau for n >= 3, or delta . chi_P . phi_bar . tau
for n = 2.  Each recovery step validates the structural fact it relies on
and reports a witness when that fact fails, because a failure on a genuine
automorphism is exactly the interesting outcome.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import permutations

from .gf import field_from_order
from .linalg import (dot, is_invertible, mat_inv, mat_mul, mat_vec, monic_rep,
                     random_invertible, rank, transpose)
from .graph import FUN, VEC, LfGraph, _bits, build


class VertexPerm:
    """A permutation of the vertex ids of one graph."""

    __slots__ = ("g", "image")

    def __init__(self, g: LfGraph, image):
        image = tuple(image)
        n = g.num_vertices
        if len(image) != n:
            raise ValueError(f"image has length {len(image)}, expected {n}")
        seen = bytearray(n)
        for v in image:
            if not 0 <= v < n or seen[v]:
                raise ValueError("image is not a permutation of the vertex ids")
            seen[v] = 1
        self.g = g
        self.image = image

    def apply(self, vid: int) -> int:
        return self.image[vid]

    def compose(self, other: "VertexPerm") -> "VertexPerm":
        """self after other: (self.compose(other))(v) = self(other(v))."""
        mine = self.image
        return VertexPerm(self.g, tuple(mine[x] for x in other.image))

    def inverse(self) -> "VertexPerm":
        inv = [0] * len(self.image)
        for v, t in enumerate(self.image):
            inv[t] = v
        return VertexPerm(self.g, inv)

    def is_identity(self) -> bool:
        return all(v == t for v, t in enumerate(self.image))

    def __eq__(self, other):
        return isinstance(other, VertexPerm) and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        return f"VertexPerm({list(self.image)})"


def identity_perm(g: LfGraph) -> VertexPerm:
    return VertexPerm(g, range(g.num_vertices))


# ---------- adjacency preservation ----------

def automorphism_defect(g: LfGraph, perm: VertexPerm):
    """None if perm preserves adjacency, else a broken edge (x, y)."""
    adj = g.adj
    img = perm.image
    for x in range(g.num_vertices):
        row = adj[img[x]]
        for y in _bits(adj[x]):
            if not (row >> img[y]) & 1:
                return (x, y)
    return None


def is_automorphism(g: LfGraph, perm: VertexPerm) -> bool:
    return automorphism_defect(g, perm) is None


def permute_mask(perm: VertexPerm, mask: int) -> int:
    out = 0
    img = perm.image
    for v in _bits(mask):
        out |= 1 << img[v]
    return out


# ---------- generators ----------

def chi_p(g: LfGraph, P) -> VertexPerm:
    """v -> P v on vectors, f_u -> f_{(P^-1)^T u} on functionals."""
    F = g.field
    Pinv_t = transpose(mat_inv(F, P))
    nv = g.nv
    image = [0] * g.num_vertices
    for vid, coords in enumerate(g.vec_coords()):
        image[vid] = g.vec_id(mat_vec(F, P, coords))
        image[vid + nv] = g.vec_id(mat_vec(F, Pinv_t, coords)) + nv
    return VertexPerm(g, image)


def pi_extend(g: LfGraph, j: int) -> VertexPerm:
    """Coordinatewise field automorphism a -> a^(p^j) on both sides."""
    F = g.field
    if not 0 <= j < F.k:
        raise ValueError(f"Frobenius exponent {j} out of range [0, {F.k})")
    nv = g.nv
    image = [0] * g.num_vertices
    for vid, coords in enumerate(g.vec_coords()):
        tid = g.vec_id(tuple(F.frobenius(c, j) for c in coords))
        image[vid] = tid
        image[vid + nv] = tid + nv
    return VertexPerm(g, image)


def sigma_swap(g: LfGraph) -> VertexPerm:
    """Exchange each vector with the functional of the same coordinates."""
    return VertexPerm(g, [g.mirror(v) for v in range(g.num_vertices)])


def tau_from_table(g: LfGraph, table: dict[int, int]) -> VertexPerm:
    """Permute members inside twin classes; unlisted vertices stay fixed.

    Each listed entry must stay inside its class, and per class the listed
    keys and values must coincide as sets (so the result is a bijection).
    """
    image = list(range(g.num_vertices))
    per_class: dict[int, list[tuple[int, int]]] = {}
    for src, dst in table.items():
        if not 0 <= src < g.num_vertices or not 0 <= dst < g.num_vertices:
            raise ValueError(f"vertex id out of range in entry {src} -> {dst}")
        cls = g.line_of(src)
        if g.line_of(dst) != cls:
            raise ValueError(f"entry {src} -> {dst} crosses twin classes")
        per_class.setdefault(cls, []).append((src, dst))
    for cls, entries in per_class.items():
        keys = sorted(src for src, _ in entries)
        vals = sorted(dst for _, dst in entries)
        if keys != vals:
            raise ValueError(f"entries for class {cls} are not a permutation")
        for src, dst in entries:
            image[src] = dst
    return VertexPerm(g, image)


def phi_bar(g: LfGraph, phi) -> VertexPerm:
    """Extend a zero-fixing permutation phi of GF(q) to the n = 2 graph.

    f_{a e1 + b e2} -> f_{a e1 + a phi(b/a) e2} when a != 0, else fixed;
    c e1 + d e2 -> c e1 - c phi(-c/d)^-1 e2 when c d != 0, else fixed.
    """
    if g.n != 2:
        raise ValueError("phi_bar is defined for n = 2 only")
    F = g.field
    phi = tuple(phi)
    if len(phi) != F.q or phi[0] != 0 or sorted(phi) != list(range(F.q)):
        raise ValueError("phi must be a permutation of the field fixing 0")
    nv = g.nv
    image = list(range(g.num_vertices))
    for vid, (c, d) in enumerate(g.vec_coords()):
        a, b = c, d
        if a != 0:
            u = (a, F.mul(a, phi[F.mul(F.inv(a), b)]))
            image[vid + nv] = g.vec_id(u) + nv
        if c != 0 and d != 0:
            t = phi[F.neg(F.mul(c, F.inv(d)))]
            v = (c, F.neg(F.mul(c, F.inv(t))))
            image[vid] = g.vec_id(v)
    return VertexPerm(g, image)


def _vec_partners(g: LfGraph) -> list[int]:
    """For each vector class index i, the class index of its orthogonal line."""
    if g._n2_partner is None:
        if g.n != 2:
            raise ValueError("orthogonal pairing applies to n = 2 only")
        F = g.field
        lines = g.lines()
        half = len(lines) // 2
        rep_idx = {lines[i].rep: i for i in range(half)}
        partner = []
        for i in range(half):
            c, d = lines[i].rep
            partner.append(rep_idx[monic_rep(F, (d, F.neg(c)))])
        g._n2_partner = partner
    return g._n2_partner


def _mirror_line(g: LfGraph, image: list[int], line) -> None:
    for u in line.members:
        image[u] = u + g.nv
        image[u + g.nv] = u


def _delta_impl(g: LfGraph, rho: VertexPerm) -> VertexPerm:
    lines = g.lines()
    half = len(lines) // 2
    partner = _vec_partners(g)
    # a component counts as crossed when rho's image of some vector line
    # is its functional part; the flag lives on the target component, not
    # the source, so that delta(V) = rho(V) as sets
    crossing = [False] * half
    for i in range(half):
        t = rho.image[lines[i].members[0]]
        if t >= g.nv:
            m = g.line_of(t) - half
            crossing[partner[m]] = True
    image = list(range(g.num_vertices))
    done = set()
    for i in range(half):
        if i in done:
            continue
        j = partner[i]
        done.add(i)
        done.add(j)
        if i == j:
            if crossing[i]:
                _mirror_line(g, image, lines[i])
        elif crossing[i] and crossing[j]:
            # both components of the orthogonal pair cross: the plain mirror
            # exchanges them and lands on the right sides
            _mirror_line(g, image, lines[i])
            _mirror_line(g, image, lines[j])
        elif crossing[i] != crossing[j]:
            # only one crosses: swap the two parts inside that component
            a = i if crossing[i] else j
            vmem = lines[a].members
            fmem = lines[half + partner[a]].members
            for u, f in zip(vmem, fmem):
                image[u] = f
                image[f] = u
    delta = VertexPerm(g, image)
    vec_mask = (1 << g.nv) - 1
    want = 0
    for v in range(g.nv):
        want |= 1 << rho.image[v]
    have = 0
    for v in range(g.nv):
        have |= 1 << delta.image[v]
    assert have == want, "delta misses rho's side pattern"
    return delta


def delta_for(g: LfGraph, rho: VertexPerm) -> VertexPerm:
    """The n = 2 side-swap automorphism matching rho's crossing pattern.

    A component is crossed when rho maps some vector line onto its
    functional part.  delta mirrors both components of an orthogonal pair
    when both are crossed and swaps the two parts inside the component
    when only one is, so delta(V) = rho(V) and delta^-1 . rho maps the
    vector side to itself.
    """
    if g.n != 2:
        raise ValueError("delta_for applies to n = 2 only")
    defect = automorphism_defect(g, rho)
    if defect is not None:
        raise ValueError(f"rho is not an automorphism (broken edge {defect})")
    return _delta_impl(g, rho)


# ---------- class action and structure checks ----------

class LineActionError(ValueError):
    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


def line_action(g: LfGraph, perm: VertexPerm) -> list[int]:
    """The induced permutation of class indices, or a witnessed failure."""
    defect = automorphism_defect(g, perm)
    if defect is not None:
        raise LineActionError("perm is not an automorphism", defect)
    lines = g.lines()
    mapping = []
    for line in lines:
        first = g.line_of(perm.image[line.members[0]])
        for m in line.members[1:]:
            if g.line_of(perm.image[m]) != first:
                raise LineActionError("class image is split",
                                      (line.members[0], m))
        mapping.append(first)
    if sorted(mapping) != list(range(len(lines))):
        raise LineActionError("class action is not a bijection", mapping)
    return mapping


@dataclass
class StructureVerdict:
    side_behavior: str          # "preserved" | "swapped" | "mixed"
    side_purity: bool
    n_commutes: bool
    intersection: bool | None          # checked when sides are preserved
    intersection_swapped: bool | None  # checked through sigma when swapped
    witness: object | None

    def ok(self) -> bool:
        return (self.side_purity and self.n_commutes
                and self.intersection is not False
                and self.intersection_swapped is not False)


def _intersection_holds(g: LfGraph, psi: VertexPerm) -> tuple[bool, object]:
    """For side-preserving psi: psi(F_H) equals the intersection of
    psi-images of every class neighborhood containing F_H."""
    lines = g.lines()
    half = len(lines) // 2
    lmap = line_action(g, psi)
    full = (1 << g.num_vertices) - 1
    for j in range(half, len(lines)):
        fmask = g.line_mask(lines[j])
        inter = full
        for i in range(half):
            if fmask & ~g.neighbor_set(lines[i]) == 0:
                inter &= g.neighbor_set(lines[lmap[i]])
        if inter != permute_mask(psi, fmask):
            return False, {"fun_class": j}
    return True, None


def check_structure(g: LfGraph, perm: VertexPerm) -> StructureVerdict:
    """Evaluate the structural facts every automorphism should satisfy."""
    lmap = line_action(g, perm)  # raises LineActionError when ill-defined
    lines = g.lines()
    half = len(lines) // 2
    nv = g.nv
    img = perm.image
    vec_to_fun = sum(1 for v in range(nv) if img[v] >= nv)
    if vec_to_fun == 0:
        behavior = "preserved"
    elif vec_to_fun == nv:
        behavior = "swapped"
    else:
        behavior = "mixed"

    witness = None
    if g.n >= 3:
        purity = behavior != "mixed"
        if not purity:
            witness = {"side": "mixed image of the vector side"}
    else:
        # each component (an orthogonal pair of classes) must land in one
        # component; compute component labels through the class action
        partner = _vec_partners(g)
        comp_of_line = list(range(half)) + [partner[j] for j in range(half)]
        purity = True
        for i in range(half):
            a = comp_of_line[lmap[i]]
            b = comp_of_line[lmap[half + partner[i]]]
            if a != b:
                purity = False
                witness = {"component": i}
                break

    n_comm = True
    for idx, line in enumerate(lines):
        if permute_mask(perm, g.neighbor_set(line)) != g.neighbor_set(lines[lmap[idx]]):
            n_comm = False
            if witness is None:
                witness = {"class": idx}
            break

    inter = inter_sw = None
    if behavior == "preserved":
        inter, w = _intersection_holds(g, perm)
        if not inter and witness is None:
            witness = w
    elif behavior == "swapped":
        inter_sw, w = _intersection_holds(g, sigma_swap(g).compose(perm))
        if not inter_sw and witness is None:
            witness = w

    return StructureVerdict(behavior, purity, n_comm, inter, inter_sw, witness)


# ---------- enumeration ----------

def _automorphism_search(adj: list[int], collect: list | None = None) -> int:
    """Count (and optionally collect) all adjacency-preserving bijections
    of an arbitrary graph given as bitset rows.  Plain forward-checking
    backtracking; no structural assumptions."""
    n = len(adj)
    if n == 0:
        if collect is not None:
            collect.append(())
        return 1
    full = (1 << n) - 1
    degs = [a.bit_count() for a in adj]
    bydeg: dict[int, int] = {}
    for v in range(n):
        bydeg[degs[v]] = bydeg.get(degs[v], 0) | (1 << v)
    init = [bydeg[degs[v]] for v in range(n)]
    image = [0] * n
    count = 0

    def rec(cands: list[int], remaining: int):
        nonlocal count
        if remaining == 0:
            count += 1
            if collect is not None:
                collect.append(tuple(image))
            return
        pick, best = -1, None
        m = remaining
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            pc = cands[v].bit_count()
            if best is None or pc < best:
                best, pick = pc, v
                if pc <= 1:
                    break
        if best == 0:
            return
        v = pick
        rem2 = remaining & ~(1 << v)
        av = adj[v]
        opts = cands[v]
        while opts:
            low = opts & -opts
            c = low.bit_length() - 1
            opts ^= low
            ac = adj[c]
            ncands = list(cands)
            ok = True
            m2 = rem2
            notc = ~(1 << c)
            while m2:
                l2 = m2 & -m2
                u = l2.bit_length() - 1
                m2 ^= l2
                cu = ncands[u] & notc
                cu &= ac if (av >> u) & 1 else ~ac
                if cu == 0:
                    ok = False
                    break
                ncands[u] = cu
            if ok:
                image[v] = c
                rec(ncands, rem2)

    rec(init, full)
    return count


_AUTOS_CACHE: dict[tuple, tuple] = {}


def _graph_key(g: LfGraph) -> tuple:
    return (g.field.p, g.field.k, g.field.modulus, g.n)


def all_automorphisms(g: LfGraph, max_vertices: int = 20) -> tuple:
    """Every automorphism as an image tuple, via direct vertex search."""
    if g.num_vertices > max_vertices:
        raise ValueError(
            f"direct enumeration is limited to {max_vertices} vertices")
    key = _graph_key(g)
    if key not in _AUTOS_CACHE:
        out: list = []
        _automorphism_search(g.adj, out)
        _AUTOS_CACHE[key] = tuple(out)
    return _AUTOS_CACHE[key]


def iter_automorphisms(g: LfGraph, max_vertices: int = 20):
    for img in all_automorphisms(g, max_vertices):
        yield VertexPerm(g, img)


def quotient_adjacency(g: LfGraph, max_classes: int = 32) -> list[int]:
    """Bitset adjacency of the class quotient (classes as single nodes)."""
    lines = g.lines()
    half = len(lines) // 2
    if half > max_classes:
        raise ValueError(f"{half} classes per side is over the {max_classes} guard")
    F = g.field
    qadj = [0] * (2 * half)
    for i in range(half):
        for j in range(half):
            if dot(F, lines[half + j].rep, lines[i].rep) == 0:
                qadj[i] |= 1 << (half + j)
                qadj[half + j] |= 1 << i
    return qadj


def count_automorphisms(g: LfGraph, method: str = "quotient",
                        max_vertices: int = 20, max_classes: int = 32) -> int:
    """Exact automorphism count.

    method "vertex": direct enumeration of vertex bijections (small graphs).
    method "quotient": enumerate automorphisms of the class quotient, then
    multiply by the within-class factor ((q-1)!)^(2M); any quotient
    automorphism lifts because classes are twins of size q-1.
    """
    if method == "vertex":
        return len(all_automorphisms(g, max_vertices))
    if method == "quotient":
        qadj = quotient_adjacency(g, max_classes)
        base = _automorphism_search(qadj)
        m = len(qadj) // 2
        return base * math.factorial(g.q - 1) ** (2 * m)
    raise ValueError(f"unknown method {method!r}")


def count_class_stabilizers(g: LfGraph, max_vertices: int = 20) -> int:
    """Enumerated automorphisms that map every twin class to itself."""
    lof = [g.line_of(v) for v in range(g.num_vertices)]
    count = 0
    for img in all_automorphisms(g, max_vertices):
        if all(lof[t] == lof[v] for v, t in enumerate(img)):
            count += 1
    return count


def count_component_isomorphisms(g: LfGraph) -> int:
    """Brute count of adjacency-preserving bijections between the first
    two components (n = 2 only)."""
    if g.n != 2:
        raise ValueError("component isomorphisms are counted for n = 2 only")
    comps = g.components()
    src, dst = comps[0], comps[1]
    k = len(src)
    count = 0
    for pi in permutations(dst):
        ok = True
        for s in range(k):
            row = g.adj[src[s]]
            prow = g.adj[pi[s]]
            for t in range(s + 1, k):
                if ((row >> src[t]) & 1) != ((prow >> pi[t]) & 1):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count


# ---------- closed-form counts ----------

def _validate_q(q: int) -> None:
    from .gf import factor_prime_power
    factor_prime_power(q)


def formula_card_n2(q: int) -> int:
    """(q+1)! * (2 ((q-1)!)^2)^(q+1)"""
    _validate_q(q)
    return math.factorial(q + 1) * (2 * math.factorial(q - 1) ** 2) ** (q + 1)


def formula_card_general(q: int, n: int) -> int:
    """2 * M! * ((q-1)!)^(2M) with M = (q^n - 1)/(q - 1), for n >= 3."""
    _validate_q(q)
    if n < 3:
        raise ValueError("the general count applies to n >= 3")
    m = (q ** n - 1) // (q - 1)
    return 2 * math.factorial(m) * math.factorial(q - 1) ** (2 * m)


def formula_twin_stabilizer(q: int, n: int) -> int:
    """((q-1)!)^(2M): automorphisms fixing every class setwise."""
    _validate_q(q)
    if n < 2:
        raise ValueError("dimension must be >= 2")
    m = (q ** n - 1) // (q - 1)
    return math.factorial(q - 1) ** (2 * m)


def formula_component_isos(q: int) -> int:
    """2 ((q-1)!)^2: isomorphisms between two n = 2 components."""
    _validate_q(q)
    return 2 * math.factorial(q - 1) ** 2


# ---------- randomized construction helpers ----------

def random_twin_permutation(g: LfGraph, rng) -> VertexPerm:
    """A random member shuffle inside every twin class."""
    table: dict[int, int] = {}
    for cls in g.twin_classes():
        members = list(cls)
        shuffled = members[:]
        rng.shuffle(shuffled)
        for a, b in zip(members, shuffled):
            if a != b:
                table[a] = b
    return tau_from_table(g, table)


def random_automorphism(g: LfGraph, rng) -> VertexPerm:
    """A random automorphism built constructively (seeded, reproducible).

    For n >= 3 this samples the generator chain sigma^s.chi_P.pi_j.tau.
    For n = 2 it samples a component permutation with independent part
    bijections, which covers asymmetric side-crossing patterns too.
    """
    F = g.field
    if g.n >= 3:
        perm = chi_p(g, random_invertible(F, g.n, rng))
        j = rng.randrange(F.k)
        if j:
            perm = perm.compose(pi_extend(g, j))
        perm = perm.compose(random_twin_permutation(g, rng))
        if rng.random() < 0.5:
            perm = sigma_swap(g).compose(perm)
        return perm
    lines = g.lines()
    half = len(lines) // 2
    partner = _vec_partners(g)
    target = list(range(half))
    rng.shuffle(target)
    image = [0] * g.num_vertices
    for i in range(half):
        t = target[i]
        vec_dst = list(lines[t].members)
        fun_dst = list(lines[half + partner[t]].members)
        if rng.random() < 0.5:
            vec_dst, fun_dst = fun_dst, vec_dst
        rng.shuffle(vec_dst)
        rng.shuffle(fun_dst)
        for a, b in zip(lines[i].members, vec_dst):
            image[a] = b
        for a, b in zip(lines[half + partner[i]].members, fun_dst):
            image[a] = b
    return VertexPerm(g, image)


# ---------- decomposition ----------

class DecompositionError(Exception):
    def __init__(self, step: str, witness):
        super().__init__(f"decomposition failed at step {step!r}")
        self.step = step
        self.witness = witness


@dataclass
class Decomposition:
    """Generator factorization of one automorphism.

    n >= 3: sigma^swap . chi_P . pi_frob . tau     (delta, phi unused)
    n  = 2: delta . chi_P . phi_bar(phi) . tau     (swap, frob unused)
    """
    swap: bool
    delta: VertexPerm | None
    P: tuple
    frob: int | None
    phi: tuple | None
    tau: VertexPerm


def compose(g: LfGraph, d: Decomposition) -> VertexPerm:
    """Multiply a decomposition back into a single vertex permutation."""
    perm = chi_p(g, d.P)
    if g.n >= 3:
        if d.frob is None or d.phi is not None or d.delta is not None:
            raise ValueError("n >= 3 decompositions use swap/P/frob/tau only")
        perm = perm.compose(pi_extend(g, d.frob)).compose(d.tau)
        if d.swap:
            perm = sigma_swap(g).compose(perm)
        return perm
    if d.phi is None or d.frob is not None or d.swap:
        raise ValueError("n = 2 decompositions use delta/P/phi/tau only")
    perm = perm.compose(phi_bar(g, d.phi)).compose(d.tau)
    if d.delta is not None:
        perm = d.delta.compose(perm)
    return perm


def decompose(g: LfGraph, perm: VertexPerm) -> Decomposition:
    """Factor an automorphism into generators; see Decomposition.

    Raises DecompositionError naming the step and a witness whenever one
    of the structural facts the recovery relies on fails to hold.
    """
    defect = automorphism_defect(g, perm)
    if defect is not None:
        raise DecompositionError("not-automorphism", {"edge": defect})
    if g.n >= 3:
        return _decompose_general(g, perm)
    return _decompose_n2(g, perm)


def _basis_change(g: LfGraph, rho_p: VertexPerm):
    """P whose columns are the images of the standard basis under rho_p."""
    F = g.field
    n = g.n
    cols = []
    for i in range(n):
        e = tuple(1 if t == i else 0 for t in range(n))
        tid = rho_p.image[g.vec_id(e)]
        side, coords = g.coords_of(tid)
        if side != VEC:
            raise DecompositionError("side-mixed", {"basis": i})
        cols.append(coords)
    if rank(F, cols) < n:
        raise DecompositionError("dependent-basis", {"images": cols})
    return tuple(zip(*cols))


def _check_class_stable(g: LfGraph, tau: VertexPerm) -> None:
    for v in range(g.num_vertices):
        if g.line_of(tau.image[v]) != g.line_of(v):
            raise DecompositionError("twin-residual",
                                     {"vertex": v, "image": tau.image[v]})


def _decompose_general(g: LfGraph, rho: VertexPerm) -> Decomposition:
    F = g.field
    n, q, nv = g.n, g.q, g.nv
    sides = [rho.image[v] >= nv for v in range(nv)]
    if all(sides):
        swap = True
        rho_p = sigma_swap(g).compose(rho)
    elif not any(sides):
        swap = False
        rho_p = rho
    else:
        a = sides.index(True)
        b = sides.index(False)
        raise DecompositionError("side-mixed", {"to_fun": a, "to_vec": b})

    P = _basis_change(g, rho_p)
    rho1 = chi_p(g, mat_inv(F, P)).compose(rho_p)

    # recover the per-axis trace of the field permutation from the images
    # of e1 + a*e_axis, which must stay supported on {e1, e_axis}
    tabs = {}
    for axis in range(1, n):
        tab = [0] * q
        for a in F.units():
            coords = [0] * n
            coords[0] = 1
            coords[axis] = a
            side, img = g.coords_of(rho1.image[g.vec_id(tuple(coords))])
            m = monic_rep(F, img)
            ok = (m[0] == 1 and m[axis] != 0
                  and all(m[t] == 0 for t in range(n) if t not in (0, axis)))
            if not ok:
                raise DecompositionError("support",
                                         {"axis": axis, "a": a, "image": list(m)})
            tab[a] = m[axis]
        if len(set(tab)) != q:
            raise DecompositionError("support", {"axis": axis, "table": tab})
        tabs[axis] = tab

    scale = tabs[1][1]
    pi_norm = [F.mul(tabs[1][a], F.inv(scale)) for a in range(q)]
    jstar = next((j for j in range(F.k)
                  if all(pi_norm[a] == F.frobenius(a, j) for a in range(q))), None)
    if jstar is None:
        raise DecompositionError("frobenius", {"pi": pi_norm})

    Q = tuple(tuple((1 if (i, j) == (0, 0) else tabs[i][1] if i == j else 0)
                    for j in range(n)) for i in range(n))
    tau = pi_extend(g, jstar).inverse().compose(
        chi_p(g, mat_inv(F, Q)).compose(rho1))
    _check_class_stable(g, tau)
    return Decomposition(swap, None, mat_mul(F, P, Q), jstar, None, tau)


def _decompose_n2(g: LfGraph, rho: VertexPerm) -> Decomposition:
    F = g.field
    q = g.q
    delta = _delta_impl(g, rho)
    rho_p = delta.inverse().compose(rho)

    P = _basis_change(g, rho_p)
    if not is_invertible(F, P):
        raise DecompositionError("dependent-basis", {"P": P})
    rho1 = chi_p(g, mat_inv(F, P)).compose(rho_p)

    # the functional classes f_{e1 + a e2} must map among themselves
    phi = [0] * q
    for a in range(q):
        side, img = g.coords_of(rho1.image[g.fun_id((1, a))])
        if side != FUN:
            raise DecompositionError("side-mixed", {"a": a})
        m = monic_rep(F, img)
        if m[0] != 1:
            raise DecompositionError("support", {"a": a, "image": list(m)})
        phi[a] = m[1]
    if phi[0] != 0 or len(set(phi)) != q:
        raise DecompositionError("phi", {"table": phi})

    tau = phi_bar(g, phi).inverse().compose(rho1)
    _check_class_stable(g, tau)
    return Decomposition(False, delta, P, None, tuple(phi), tau)


# ---------- serialization ----------

def perm_to_json(perm: VertexPerm) -> str:
    doc = {"q": perm.g.q, "n": perm.g.n, "image": list(perm.image)}
    return json.dumps(doc, separators=(",", ":"))


def perm_from_json(text, g: LfGraph | None = None) -> VertexPerm:
    doc = json.loads(text)
    for key in ("q", "n", "image"):
        if key not in doc:
            raise ValueError(f"permutation document is missing {key!r}")
    if g is None:
        g = build(field_from_order(doc["q"]), doc["n"])
    elif (g.q, g.n) != (doc["q"], doc["n"]):
        raise ValueError("permutation document does not match the graph")
    return VertexPerm(g, doc["image"])


def _tau_tables(g: LfGraph, tau: VertexPerm) -> dict[str, list[int]]:
    tables = {}
    for line in g.lines():
        if any(tau.image[m] != m for m in line.members):
            key = f"{line.side}:{','.join(map(str, line.rep))}"
            tables[key] = [tau.image[m] for m in line.members]
    return tables


def decomposition_to_json(g: LfGraph, d: Decomposition) -> str:
    doc = {
        "q": g.q,
        "n": g.n,
        "swap": d.swap,
        "P": [list(row) for row in d.P],
        "frob": d.frob,
        "phi": None if d.phi is None else list(d.phi),
        "delta": None if d.delta is None else list(d.delta.image),
        "tau": _tau_tables(g, d.tau),
    }
    return json.dumps(doc, separators=(",", ":"))


def decomposition_from_json(text, g: LfGraph | None = None) -> Decomposition:
    doc = json.loads(text)
    for key in ("q", "n", "swap", "P", "frob", "phi", "delta", "tau"):
        if key not in doc:
            raise ValueError(f"decomposition document is missing {key!r}")
    if g is None:
        g = build(field_from_order(doc["q"]), doc["n"])
    elif (g.q, g.n) != (doc["q"], doc["n"]):
        raise ValueError("decomposition document does not match the graph")
    by_key = {f"{line.side}:{','.join(map(str, line.rep))}": line
              for line in g.lines()}
    table: dict[int, int] = {}
    for key, images in doc["tau"].items():
        line = by_key.get(key)
        if line is None or len(images) != len(line.members):
            raise ValueError(f"bad tau table for {key!r}")
        for src, dst in zip(line.members, images):
            table[src] = dst
    tau = tau_from_table(g, table)
    delta = None if doc["delta"] is None else VertexPerm(g, doc["delta"])
    phi = None if doc["phi"] is None else tuple(doc["phi"])
    P = tuple(tuple(row) for row in doc["P"])
    return Decomposition(bool(doc["swap"]), delta, P, doc["frob"], phi, tau)

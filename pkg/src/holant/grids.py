"""Signature grids, the brute-force Holant oracle, and the #CSP bridges.

A signature grid is a graph whose vertices carry signatures; each vertex
lists its incident edges in counterclockwise order starting from a marked
first edge (a rotation system), which is all the planarity the
constructions ever need.  Edges left unmatched are dangling: they are the
outer variables of an unfinished gate rather than summed over.

This module also houses the two polynomial-time #CSP evaluators for the
product and affine families, and the exact Vandermonde solver used by the
interpolation harness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ._embedding import is_planar_embedding
from .classes import is_affine, is_product
from .scalar import ONE, SQRT2, ZERO, ZETA8, Scalar, i_power
from .signatures import ARITY_CAP, Signature, equality

#: Brute force refuses beyond these sizes instead of degrading.
EDGE_CAP = 24
VAR_CAP = 20


@dataclass(frozen=True)
class GridVertex:
    signature: Signature
    edges: tuple

    @property
    def degree(self) -> int:
        return len(self.edges)


class SignatureGrid:
    """Vertices with signatures, edges by shared ids, optional dangling ids.

    `vertices` is a sequence of (signature, edge-id sequence) pairs; the
    edge list of a vertex is its counterclockwise rotation and position 0
    is the marked first edge.  Every edge id must appear exactly twice
    among the vertices (an internal edge; twice at one vertex is a
    self-loop) or once among the vertices and once in `dangling` (an
    outer variable of a gate).  `sides` optionally labels each vertex
    "left" or "right" for the bipartite evaluation form.
    """

    __slots__ = ("vertices", "dangling", "sides", "_occurrences")

    def __init__(self, vertices, dangling=(), sides=None):
        vs = []
        for sig, edges in vertices:
            if not isinstance(sig, Signature):
                raise TypeError("vertex signature must be a Signature")
            vs.append(GridVertex(sig, tuple(edges)))
        self.vertices = tuple(vs)
        self.dangling = tuple(dangling)
        if sides is not None:
            sides = tuple(sides)
            if len(sides) != len(self.vertices):
                raise ValueError("one side label per vertex required")
            bad = [s for s in sides if s not in ("left", "right")]
            if bad:
                raise ValueError(f"side labels must be left/right, got {bad[0]!r}")
        self.sides = sides

        occ = {}
        for vi, v in enumerate(self.vertices):
            if v.signature.arity != v.degree:
                raise ValueError(
                    f"vertex {vi} has arity {v.signature.arity} "
                    f"but {v.degree} incident edges")
            for slot, e in enumerate(v.edges):
                occ.setdefault(e, []).append((vi, slot))
        if len(set(self.dangling)) != len(self.dangling):
            raise ValueError("dangling edge ids must be distinct")
        for e in self.dangling:
            if len(occ.get(e, ())) != 1:
                raise ValueError(f"dangling edge {e!r} must touch exactly one vertex slot")
        for e, places in occ.items():
            want = 1 if e in set(self.dangling) else 2
            if len(places) != want:
                raise ValueError(
                    f"edge {e!r} appears {len(places)} times; "
                    f"expected {want}")
        self._occurrences = occ

    # -- structure -----------------------------------------------------------

    @property
    def edge_ids(self) -> tuple:
        return tuple(self._occurrences)

    @property
    def internal_edge_ids(self) -> tuple:
        dang = set(self.dangling)
        return tuple(e for e in self._occurrences if e not in dang)

    def occurrences(self, edge):
        return tuple(self._occurrences[edge])

    def is_planar(self) -> bool:
        """Euler check of the rotation system, dangling edges included.

        Each dangling edge gets a phantom endpoint of degree 1, then every
        connected component must satisfy V - E + F = 2.
        """
        dart = {}
        for j, e in enumerate(self._occurrences):
            dart[e] = 2 * j
        rotations = []
        used = {e: 0 for e in self._occurrences}
        for v in self.vertices:
            rot = []
            for e in v.edges:
                rot.append(dart[e] + used[e])
                used[e] += 1
            rotations.append(tuple(rot))
        for e in self.dangling:
            rotations.append((dart[e] + 1,))
        return is_planar_embedding(rotations)

    def map_sides(self, left_fn, right_fn) -> SignatureGrid:
        """New grid with left/right signatures rewritten by the two maps.

        Requires side labels and a proper bipartition: every internal
        edge must join a left vertex to a right vertex.
        """
        if self.sides is None:
            raise ValueError("grid carries no bipartition labels")
        if self.dangling:
            raise ValueError("bipartite rewriting applies to closed grids")
        for e, places in self._occurrences.items():
            (v1, _), (v2, _) = places
            if self.sides[v1] == self.sides[v2]:
                raise ValueError(
                    f"edge {e!r} joins two {self.sides[v1]} vertices; "
                    "grid is not bipartite")
        out = []
        for v, side in zip(self.vertices, self.sides):
            fn = left_fn if side == "left" else right_fn
            out.append((fn(v.signature), v.edges))
        return SignatureGrid(out, sides=self.sides)

    def __repr__(self):
        return (f"SignatureGrid({len(self.vertices)} vertices, "
                f"{len(self.internal_edge_ids)} edges, "
                f"{len(self.dangling)} dangling)")


def _vertex_tables(grid: SignatureGrid, edge_bit):
    tables = []
    for v in grid.vertices:
        positions = tuple(edge_bit[e] for e in v.edges)
        tables.append((positions, v.signature.values))
    return tables


def brute_force_holant(grid: SignatureGrid) -> Scalar:
    """Sum over all edge assignments of the product of vertex values.

    The desk-scale oracle: exact, exponential, refuses beyond EDGE_CAP
    edges.  Dangling edges are an error; a gate is evaluated with
    gate_signature instead.
    """
    if grid.dangling:
        raise ValueError("grid has dangling edges; use gate_signature")
    edges = grid.edge_ids
    m = len(edges)
    if m > EDGE_CAP:
        raise ValueError(f"{m} edges exceeds the brute-force cap of {EDGE_CAP}")
    edge_bit = {e: j for j, e in enumerate(edges)}
    tables = _vertex_tables(grid, edge_bit)
    total = ZERO
    for a in range(1 << m):
        prod = ONE
        for positions, values in tables:
            idx = 0
            for p in positions:
                idx = (idx << 1) | ((a >> p) & 1)
            val = values[idx]
            if not val:
                prod = None
                break
            prod = prod * val
        if prod is not None:
            total = total + prod
    return total


def gate_signature(grid: SignatureGrid) -> Signature:
    """The signature a gate induces on its dangling edges.

    Entry at y sums over internal edge assignments with dangling edge j
    pinned to bit j of y (dangling order, x1 first).
    """
    k = len(grid.dangling)
    if k > ARITY_CAP:
        raise ValueError(f"{k} dangling edges exceeds the arity cap")
    edges = grid.edge_ids
    if len(edges) > EDGE_CAP:
        raise ValueError(
            f"{len(edges)} edges exceeds the brute-force cap of {EDGE_CAP}")
    internal = [e for e in edges if e not in set(grid.dangling)]
    ordered = list(grid.dangling) + internal
    edge_bit = {e: j for j, e in enumerate(ordered)}
    tables = _vertex_tables(grid, edge_bit)
    m = len(ordered)
    out = [ZERO] * (1 << k)
    for a in range(1 << m):
        prod = ONE
        for positions, values in tables:
            idx = 0
            for p in positions:
                idx = (idx << 1) | ((a >> p) & 1)
            val = values[idx]
            if not val:
                prod = None
                break
            prod = prod * val
        if prod is not None:
            # dangling edge j sits at bit j of a; x1 is the MSB of y
            y = 0
            for j in range(k):
                y |= ((a >> j) & 1) << (k - 1 - j)
            out[y] = out[y] + prod
    return Signature(out)


def two_stretch(grid: SignatureGrid) -> SignatureGrid:
    """Subdivide every internal edge with a binary equality vertex.

    Holant-preserving and planarity-preserving.  Side labels are dropped:
    the new equality vertices belong to neither side.
    """
    dang = set(grid.dangling)
    new_vertices = [[v.signature, list(v.edges)] for v in grid.vertices]
    eq2 = equality(2)
    extra = []
    for e, places in grid._occurrences.items():
        if e in dang:
            continue
        (v1, s1), (v2, s2) = places
        new_vertices[v1][1][s1] = (e, 0)
        new_vertices[v2][1][s2] = (e, 1)
        extra.append((eq2, ((e, 0), (e, 1))))
    out = [(sig, tuple(edges)) for sig, edges in new_vertices]
    return SignatureGrid(out + extra, dangling=grid.dangling)


# -- #CSP ----------------------------------------------------------------------


@dataclass(frozen=True)
class CspInstance:
    """Counting CSP: num_vars variables, constraints as (signature, scope).

    Scopes are tuples of 0-based variable ids; a variable may repeat
    within one scope.  The instance value is the sum over all {0,1}
    assignments of the product of constraint values.
    """

    num_vars: int
    constraints: tuple

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        checked = []
        for sig, on in self.constraints:
            on = tuple(on)
            if not isinstance(sig, Signature):
                raise TypeError("constraint signature must be a Signature")
            if len(on) != sig.arity:
                raise ValueError(
                    f"scope {on} does not match arity {sig.arity}")
            if any(not 0 <= v < self.num_vars for v in on):
                raise ValueError(f"scope {on} references a missing variable")
            checked.append((sig, on))
        object.__setattr__(self, "constraints", tuple(checked))


def brute_force_csp(instance: CspInstance) -> Scalar:
    """Exhaustive #CSP sum; refuses beyond VAR_CAP variables."""
    n = instance.num_vars
    if n > VAR_CAP:
        raise ValueError(f"{n} variables exceeds the brute-force cap of {VAR_CAP}")
    total = ZERO
    for a in range(1 << n):
        prod = ONE
        for sig, on in instance.constraints:
            idx = 0
            for v in on:
                idx = (idx << 1) | ((a >> v) & 1)
            val = sig[idx]
            if not val:
                prod = None
                break
            prod = prod * val
        if prod is not None:
            total = total + prod
    return total


def csp_to_grid(instance: CspInstance) -> SignatureGrid:
    """The bipartite Holant form: equality vertices | constraint vertices.

    Each variable becomes an equality vertex of arity equal to its number
    of scope occurrences, wired to the constraint vertices in occurrence
    order.  A variable with no occurrences becomes a [1,1] vertex joined
    to a partner [1,1] vertex, contributing the factor 2 it is due.
    """
    occurrences = [[] for _ in range(instance.num_vars)]
    edge_of = {}
    counter = itertools.count()
    for ci, (_, on) in enumerate(instance.constraints):
        for j, v in enumerate(on):
            e = next(counter)
            edge_of[(ci, j)] = e
            occurrences[v].append(e)

    vertices = []
    sides = []
    for v in range(instance.num_vars):
        if occurrences[v]:
            vertices.append((equality(len(occurrences[v])),
                             tuple(occurrences[v])))
            sides.append("left")
    for ci, (sig, on) in enumerate(instance.constraints):
        vertices.append((sig, tuple(edge_of[(ci, j)] for j in range(len(on)))))
        sides.append("right")
    for v in range(instance.num_vars):
        if not occurrences[v]:
            e = next(counter)
            vertices.append((equality(1), (e,)))
            sides.append("left")
            vertices.append((equality(1), (e,)))
            sides.append("right")
    return SignatureGrid(vertices, sides=sides)


# -- product-family evaluator ---------------------------------------------------


def eval_product_csp(instance: CspInstance) -> Scalar:
    """Polynomial-time value of an instance whose constraints are all in
    the product family.

    Every constraint factors into unaries and antipodal-pair blocks; the
    blocks become parity relations between variables, handled by a
    union-find, and the unaries become per-component weight pairs.  Each
    component contributes (weight at root 0) + (weight at root 1); a
    parity conflict kills the whole sum.
    """
    n = instance.num_vars
    parent = list(range(n))
    offset = [0] * n  # parity of node relative to its parent

    def find(v):
        root, par = v, 0
        while parent[root] != root:
            par ^= offset[root]
            root = parent[root]
        # path compression with parity rewrite
        node, acc = v, par
        while parent[node] != node:
            nxt, noff = parent[node], offset[node]
            parent[node], offset[node] = root, acc
            acc ^= noff
            node = nxt
        return root, par

    weights = [(ONE, ONE) for _ in range(n)]
    dead = False
    scale = ONE

    def attach(v, w0, w1):
        root, par = find(v)
        a, b = (w0, w1) if par == 0 else (w1, w0)
        r0, r1 = weights[root]
        weights[root] = (r0 * a, r1 * b)

    def union(u, v, parity):
        nonlocal dead
        ru, pu = find(u)
        rv, pv = find(v)
        if ru == rv:
            if pu ^ pv != parity:
                dead = True
            return
        parent[rv] = ru
        offset[rv] = pu ^ pv ^ parity
        a0, a1 = weights[ru]
        b0, b1 = weights[rv]
        if offset[rv]:
            b0, b1 = b1, b0
        weights[ru] = (a0 * b0, a1 * b1)

    zero_instance = False
    for sig, on in instance.constraints:
        analysis = is_product(sig)
        if not analysis:
            raise ValueError(
                f"constraint on {on} is outside the product family: "
                f"{analysis.witness}")
        if sig.is_zero:
            zero_instance = True
            continue
        for positions, g in analysis.factors:
            gvars = tuple(on[p - 1] for p in positions)
            k = g.arity
            if k == 0:
                scale = scale * g[0]
            elif k == 1:
                attach(gvars[0], g[0], g[1])
            else:
                s = min(g.support())
                a, b = g[s], g[s ^ ((1 << k) - 1)]
                bit0 = (s >> (k - 1)) & 1
                attach(gvars[0], *((a, b) if bit0 == 0 else (b, a)))
                for j in range(1, k):
                    bitj = (s >> (k - 1 - j)) & 1
                    union(gvars[0], gvars[j], bit0 ^ bitj)
    if zero_instance or dead:
        return ZERO
    total = scale
    for v in range(n):
        if parent[v] == v:
            w0, w1 = weights[v]
            total = total * (w0 + w1)
    return total


# -- affine-family evaluator ----------------------------------------------------


def _quad_add(quad, mask, c):
    c %= 4
    if not c:
        return
    cur = (quad.get(mask, 0) + c) % 4
    if cur:
        quad[mask] = cur
    else:
        quad.pop(mask, None)


def _quad_substitute(quad, p, mask, const):
    """Replace variable p by (XOR of `mask` variables) xor const in a
    multilinear Z4 quadratic with even cross terms.

    Uses the mod-4 lift (L + const)^2 of a mod-2 sum L, which keeps cross
    terms even: odd coefficients only ever multiply the linear part.
    """
    pbit = 1 << p
    moved = [(m, c) for m, c in quad.items() if m & pbit]
    for m, _ in moved:
        del quad[m]
    js = [j for j in range(mask.bit_length()) if (mask >> j) & 1]
    for m, c in moved:
        rest = m & ~pbit
        if rest == 0:
            # c * x_p -> c * (sum + const)^2 expanded multilinearly
            for a in range(len(js)):
                _quad_add(quad, 1 << js[a], c * (1 + 2 * const))
                for b in range(a + 1, len(js)):
                    _quad_add(quad, (1 << js[a]) | (1 << js[b]), 2 * c)
            _quad_add(quad, 0, c * const)
        else:
            # c * x_p * x_q with c even: distribute over the sum
            assert c % 2 == 0, "odd cross term"
            for j in js:
                _quad_add(quad, (1 << j) | rest, c)
            if const:
                _quad_add(quad, rest, c)


def _gauss_sum(variables, quad) -> Scalar:
    """Exact sum of i^Q over all {0,1} assignments of `variables`.

    Eliminates the lowest-index variable first.  Writing Q = a*x + 2xL + R,
    the inner sum 1 + i^a(-1)^L either doubles and pins the parity of L
    (a even) or contributes sqrt(2)*zeta8^{+-1} and folds i^{+-L} back
    into R (a odd).
    """
    active = sorted(variables)
    factor = ONE
    while active:
        t = active.pop(0)
        tbit = 1 << t
        a = quad.pop(tbit, 0)
        lvars = []
        for m in [m for m in quad if m & tbit]:
            c = quad.pop(m)
            assert c == 2, "odd cross term"
            lvars.append(m & ~tbit)
        if a % 2:
            factor = factor * SQRT2 * (ZETA8 if a == 1 else ZETA8.inverse())
            lift = 3 if a == 1 else 1
            for x in range(len(lvars)):
                _quad_add(quad, lvars[x], lift)
                for y in range(x + 1, len(lvars)):
                    _quad_add(quad, lvars[x] | lvars[y], 2 * lift)
        else:
            target = 0 if a == 0 else 1
            if not lvars:
                if target == 1:
                    return ZERO
                factor = factor * 2
            else:
                factor = factor * 2
                pivot = min(m.bit_length() - 1 for m in lvars)
                rest = 0
                for m in lvars:
                    rest ^= m
                rest &= ~(1 << pivot)
                _quad_substitute(quad, pivot, rest, target)
                active.remove(pivot)
    return factor * i_power(quad.get(0, 0))


def eval_affine_csp(instance: CspInstance) -> Scalar:
    """Polynomial-time value of an instance whose constraints are all
    affine.

    Supports become one global Z2 linear system; phases become one global
    Z4 quadratic on the constraints' free variables.  After eliminating
    the pivots, the remaining sum of i^Q is evaluated by quadratic Gauss
    sums, variable by variable.
    """
    n = instance.num_vars
    scale = ONE
    rows = []  # (mask, rhs) over variable bits 1 << v
    quad = {}
    for sig, on in instance.constraints:
        analysis = is_affine(sig)
        if not analysis:
            raise ValueError(
                f"constraint on {on} is outside the affine family: "
                f"{analysis.reason}")
        if sig.is_zero:
            return ZERO
        scale = scale * analysis.scale
        sup = analysis.support
        k = sig.arity
        for cmask, rhs in sup.constraints:
            gmask = 0
            for p in range(1, k + 1):
                if (cmask >> (k - p)) & 1:
                    gmask ^= 1 << on[p - 1]
            rows.append((gmask, rhs))
        free = sup.free
        kf = len(free)
        for mono, c in analysis.polynomial.coefficients:
            gmask = 0
            for j, p in enumerate(free):
                if (mono >> (kf - 1 - j)) & 1:
                    gmask |= 1 << on[p - 1]
            _quad_add(quad, gmask, c)

    # RREF of the support system, pivoting on the lowest variable index
    pivots = {}
    for gmask, rhs in rows:
        for p, (pmask, prhs) in pivots.items():
            if (gmask >> p) & 1:
                gmask ^= pmask
                rhs ^= prhs
        if gmask == 0:
            if rhs:
                return ZERO
            continue
        p = (gmask & -gmask).bit_length() - 1
        pivots[p] = (gmask, rhs)
    for p in list(pivots):
        pmask, prhs = pivots[p]
        for q, (qmask, qrhs) in pivots.items():
            if q != p and (qmask >> p) & 1:
                pivots[q] = (qmask ^ pmask, qrhs ^ prhs)

    free_vars = [v for v in range(n) if v not in pivots]
    for p, (pmask, prhs) in pivots.items():
        _quad_substitute(quad, p, pmask & ~(1 << p), prhs)
    bad = [m for m in quad if any((m >> v) & 1 for v in pivots)]
    assert not bad, "pivot variable survived substitution"
    return scale * _gauss_sum(free_vars, quad)


# -- interpolation harness ------------------------------------------------------


def vandermonde_interpolate(xs, ys) -> tuple:
    """Exact coefficients c with sum_l c_l * xs_k^l = ys_k for all k.

    Square system; xs must be pairwise distinct (the Vandermonde matrix
    is then invertible over the field).
    """
    from .signatures import _coerce_scalar

    xs = [_coerce_scalar(x) for x in xs]
    ys = [_coerce_scalar(y) for y in ys]
    m = len(xs)
    if len(ys) != m:
        raise ValueError("xs and ys must have equal length")
    if len(set(xs)) != m:
        raise ValueError("interpolation nodes must be pairwise distinct")
    rows = []
    for k in range(m):
        row = [ONE]
        for _ in range(m - 1):
            row.append(row[-1] * xs[k])
        row.append(ys[k])
        rows.append(row)
    # Gaussian elimination over the field
    for col in range(m):
        pivot = next(r for r in range(col, m) if rows[r][col])
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [v * inv for v in rows[col]]
        for r in range(m):
            if r != col and rows[r][col]:
                c = rows[r][col]
                rows[r] = [a - c * b for a, b in zip(rows[r], rows[col])]
    return tuple(rows[k][m] for k in range(m))

"""Planar perfect-matching counting and matchgate-realized grid evaluation.

The pipeline is the classical one: orient the edges of an embedded planar
graph so that every bounded face has an odd number of clockwise edges,
then the Pfaffian of the signed adjacency matrix counts perfect matchings
up to one global sign, which is resolved against a single explicitly
found matching.  Everything stays in the exact scalar field, so the usual
absolute-value trick for the sign is unavailable and the combinatorial
calibration is load-bearing, not a convenience.

Matchgate fragments are embedded weighted graphs with ordered dangling
stubs; their signatures are weighted matching counts with dangling edges
forced in or out.  Grids whose vertices all carry such realizations are
evaluated by stitching the fragments into one planar graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ._embedding import is_planar_embedding, trace_faces
from .scalar import ONE, ZERO, Scalar, parse_scalar, scalar_to_json
from .signatures import Signature, _coerce_scalar

#: enumerate_pm refuses beyond this many vertices.
ENUM_CAP = 20
#: fragment_signature refuses beyond this many internal vertices.
FRAGMENT_CAP = 20


class PlanarGraph:
    """An embedded weighted graph: vertex count, edges, rotation system.

    `edges[e] = (u, v, w)` with u != v and w a nonzero scalar; parallel
    edges are allowed.  `rotation[v]` lists incident edge indices in
    counterclockwise order; each edge index appears exactly once at each
    endpoint.  The constructor runs the Euler check on every connected
    component, so a constructed graph always carries a plane embedding.
    """

    __slots__ = ("num_vertices", "edges", "rotation")

    def __init__(self, num_vertices, edges, rotation):
        n = int(num_vertices)
        if n < 0:
            raise ValueError("negative vertex count")
        es = []
        for u, v, w in edges:
            if not 0 <= u < n or not 0 <= v < n:
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            w = _coerce_scalar(w)
            if not w:
                raise ValueError(f"edge ({u}, {v}) has weight zero")
            es.append((u, v, w))
        self.num_vertices = n
        self.edges = tuple(es)
        rot = tuple(tuple(r) for r in rotation)
        if len(rot) != n:
            raise ValueError("one rotation per vertex required")
        seen = [0] * len(es)
        for v, r in enumerate(rot):
            for e in r:
                if not 0 <= e < len(es):
                    raise ValueError(f"rotation of vertex {v} names a missing edge {e}")
                if v not in self.edges[e][:2]:
                    raise ValueError(f"edge {e} does not touch vertex {v}")
                seen[e] += 1
        if any(c != 2 for c in seen):
            bad = seen.index(next(c for c in seen if c != 2))
            raise ValueError(f"edge {bad} must appear exactly once at each endpoint")
        self.rotation = rot
        if not is_planar_embedding(self._dart_rotations()):
            raise ValueError("rotation system is not a plane embedding")

    def _dart_rotations(self):
        # edge e has darts 2e (u side) and 2e+1 (v side)
        out = []
        for v, r in enumerate(self.rotation):
            out.append(tuple(2 * e if v == self.edges[e][0] else 2 * e + 1
                             for e in r))
        return out

    def adjacency(self):
        """Per-vertex list of (neighbor, weight, edge index)."""
        adj = [[] for _ in range(self.num_vertices)]
        for e, (u, v, w) in enumerate(self.edges):
            adj[u].append((v, w, e))
            adj[v].append((u, w, e))
        return adj

    def __repr__(self):
        return (f"PlanarGraph({self.num_vertices} vertices, "
                f"{len(self.edges)} edges)")


def _matching_sum(adj, mask, memo):
    """Weighted count of perfect matchings on the alive-vertex mask."""
    if mask == 0:
        return ONE
    got = memo.get(mask)
    if got is not None:
        return got
    u = (mask & -mask).bit_length() - 1
    rest = mask & ~(1 << u)
    total = ZERO
    for v, w, _ in adj[u]:
        if rest & (1 << v):
            total = total + w * _matching_sum(adj, rest & ~(1 << v), memo)
    memo[mask] = total
    return total


def enumerate_pm(g: PlanarGraph) -> Scalar:
    """Brute-force weighted perfect-matching count.

    Accepts anything with num_vertices and edges; the embedding is never
    consulted.  An odd vertex count yields zero, not an error.
    """
    n = g.num_vertices
    if n > ENUM_CAP:
        raise ValueError(f"{n} vertices exceeds the enumeration cap of {ENUM_CAP}")
    if n % 2:
        return ZERO
    adj = [[] for _ in range(n)]
    for u, v, w in g.edges:
        adj[u].append((v, w, None))
        adj[v].append((u, w, None))
    return _matching_sum(adj, (1 << n) - 1, {})


def kasteleyn_orient(g: PlanarGraph) -> tuple:
    """An orientation making every bounded face clockwise-odd.

    Returns a tuple over edges: 0 orients edge e from u to v, 1 the other
    way.  The first traced face plays the outer face; every other face
    ends up with an odd number of edges oriented against its traversal,
    which is the clockwise-odd property under counterclockwise rotations.
    Requires a connected graph; the property is re-checked before
    returning.
    """
    n = g.num_vertices
    m = len(g.edges)
    # connectivity via union-find
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in g.edges:
        parent[find(u)] = find(v)
    if n and len({find(v) for v in range(n)}) != 1:
        raise ValueError("kasteleyn_orient needs a connected graph")

    faces = trace_faces(g._dart_rotations())
    face_of = {}
    for fi, face in enumerate(faces):
        for d in face:
            face_of[d] = fi

    # BFS spanning tree over edges
    tree = [False] * m
    seen_v = [False] * (n or 1)
    if n:
        seen_v[0] = True
        queue = [0]
        adj = g.adjacency()
        while queue:
            u = queue.pop(0)
            for v, _, e in adj[u]:
                if not seen_v[v]:
                    seen_v[v] = True
                    tree[e] = True
                    queue.append(v)

    orient = [0] * m
    fixed = [False] * m
    for e in range(m):
        if tree[e]:
            fixed[e] = True

    # dual tree on the non-tree edges, rooted at the outer face
    dual = [[] for _ in faces]
    for e in range(m):
        if not tree[e]:
            f1, f2 = face_of[2 * e], face_of[2 * e + 1]
            dual[f1].append((f2, e))
            dual[f2].append((f1, e))
    outer = 0
    parent_edge = {outer: None}
    order = [outer]
    stack = [outer]
    while stack:
        f = stack.pop()
        for nf, e in dual[f]:
            if nf not in parent_edge:
                parent_edge[nf] = e
                order.append(nf)
                stack.append(nf)

    def clockwise(d):
        e = d >> 1
        return 2 * e + orient[e] == d ^ 1

    for f in reversed(order):
        if f == outer:
            continue
        e = parent_edge[f]
        count = sum(1 for d in faces[f] if fixed[d >> 1] and clockwise(d))
        d = 2 * e if face_of[2 * e] == f else 2 * e + 1
        orient[e] = (d ^ 1) & 1 if count % 2 == 0 else d & 1
        fixed[e] = True

    if not all(fixed):
        raise ValueError("embedding left an edge unoriented; dual structure broken")
    for fi, face in enumerate(faces):
        if fi == outer:
            continue
        if sum(1 for d in face if clockwise(d)) % 2 == 0:
            raise ValueError("clockwise-odd postcondition failed")
    return tuple(orient)


def pfaffian(matrix) -> Scalar:
    """Exact Pfaffian of a skew-symmetric scalar matrix.

    Skew elimination: congruence operations clear the first row beyond
    the pivot, the 2x2 leading block splits off, and the product of
    pivots (with swap signs) is the Pfaffian.  Odd dimension gives zero;
    a non-skew matrix is an error.
    """
    a = [[_coerce_scalar(x) for x in row] for row in matrix]
    n = len(a)
    for row in a:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i, n):
            if a[i][j] != -a[j][i]:
                raise ValueError(f"matrix is not skew-symmetric at ({i}, {j})")
    if n % 2:
        return ZERO
    sign = 1
    result = ONE
    for k in range(0, n, 2):
        # pivot into position (k, k+1)
        if not a[k][k + 1]:
            j = next((t for t in range(k + 2, n) if a[k][t]), None)
            if j is None:
                return ZERO
            for row in a:
                row[k + 1], row[j] = row[j], row[k + 1]
            a[k + 1], a[j] = a[j], a[k + 1]
            sign = -sign
        pivot = a[k][k + 1]
        result = result * pivot
        inv = pivot.inverse()
        for j in range(k + 2, n):
            if a[k][j]:
                c = a[k][j] * inv
                for t in range(n):
                    a[j][t] = a[j][t] - c * a[k + 1][t]
                for t in range(n):
                    a[t][j] = a[t][j] - c * a[t][k + 1]
    return result if sign == 1 else -result


def _find_matching(adj, mask):
    """One perfect matching on the alive mask as (u, v, edge) triples.

    Backtracking on the lowest alive vertex; None when no matching
    exists.
    """
    if mask == 0:
        return []
    u = (mask & -mask).bit_length() - 1
    rest = mask & ~(1 << u)
    for v, _, e in adj[u]:
        if rest & (1 << v):
            sub = _find_matching(adj, rest & ~(1 << v))
            if sub is not None:
                return [(u, v, e)] + sub
    return None


def _permutation_sign(seq) -> int:
    n = len(seq)
    seen = [False] * n
    rank = {x: i for i, x in enumerate(sorted(seq))}
    perm = [rank[x] for x in seq]
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _count_component(g: PlanarGraph) -> Scalar:
    """FKT count for one connected graph."""
    n = g.num_vertices
    if n % 2:
        return ZERO
    if n == 0:
        return ONE
    adj = g.adjacency()
    calibration = _find_matching(adj, (1 << n) - 1)
    if calibration is None:
        return ZERO
    orient = kasteleyn_orient(g)
    mat = [[ZERO] * n for _ in range(n)]
    for e, (u, v, w) in enumerate(g.edges):
        if orient[e]:
            u, v = v, u
        mat[u][v] = mat[u][v] + w
        mat[v][u] = mat[v][u] - w
    pf = pfaffian(mat)
    # the sign every matching carries in the Pfaffian expansion
    pairs = sorted((u, v) if u < v else (v, u) for u, v, _ in calibration)
    flat = [x for pair in pairs for x in pair]
    sign = _permutation_sign(flat)
    for (u, v, e) in calibration:
        hi = max(u, v)
        head = g.edges[e][1] if orient[e] == 0 else g.edges[e][0]
        if head != hi:
            sign = -sign
    return pf if sign == 1 else -pf


def _components(g: PlanarGraph):
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in g.edges:
        parent[find(u)] = find(v)
    groups = {}
    for v in range(g.num_vertices):
        groups.setdefault(find(v), []).append(v)
    for verts in groups.values():
        index = {v: i for i, v in enumerate(verts)}
        edge_ids = [e for e, (u, v, _) in enumerate(g.edges) if find(u) == find(verts[0])]
        eindex = {e: i for i, e in enumerate(edge_ids)}
        edges = [(index[g.edges[e][0]], index[g.edges[e][1]], g.edges[e][2])
                 for e in edge_ids]
        rotation = [tuple(eindex[e] for e in g.rotation[v]) for v in verts]
        yield PlanarGraph(len(verts), edges, rotation)


def count_pm_fkt(g: PlanarGraph) -> Scalar:
    """Weighted perfect-matching count via Kasteleyn orientation and
    Pfaffian, exact over the scalar field.

    Disconnected graphs are counted per component and multiplied.  An
    isolated vertex therefore gives zero, as it must.
    """
    total = ONE
    for comp in _components(g):
        value = _count_component(comp)
        if not value:
            return ZERO
        total = total * value
    return total


# -- matchgate fragments ---------------------------------------------------------


class MatchgateFragment:
    """An embedded weighted graph with ordered dangling stubs.

    `dangling[j]` is the internal vertex carrying stub j; stub j stands
    for signature variable j+1.  Rotations use a combined id space:
    dangling stubs take ids 0..k-1 in variable order, internal edges take
    ids k..k+m-1 in edge-list order.  All stubs must lie on one face with
    their cyclic order matching the variable order (the outer-boundary
    condition that makes stitching into a planar grid planar again).
    """

    __slots__ = ("num_vertices", "edges", "rotation", "dangling")

    def __init__(self, num_vertices, edges, rotation, dangling):
        n = int(num_vertices)
        if n < 0:
            raise ValueError("negative vertex count")
        es = []
        for u, v, w in edges:
            if not 0 <= u < n or not 0 <= v < n:
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            w = _coerce_scalar(w)
            if not w:
                raise ValueError(f"edge ({u}, {v}) has weight zero")
            es.append((u, v, w))
        self.num_vertices = n
        self.edges = tuple(es)
        self.dangling = tuple(dangling)
        k = len(self.dangling)
        m = len(es)
        for j, v in enumerate(self.dangling):
            if not 0 <= v < n:
                raise ValueError(f"stub {j} attaches to a missing vertex {v}")
        rot = tuple(tuple(r) for r in rotation)
        if len(rot) != n:
            raise ValueError("one rotation per vertex required")
        seen = [0] * (k + m)
        for v, r in enumerate(rot):
            for t in r:
                if not 0 <= t < k + m:
                    raise ValueError(f"rotation of vertex {v} names a missing id {t}")
                if t < k:
                    if self.dangling[t] != v:
                        raise ValueError(f"stub {t} listed at the wrong vertex {v}")
                elif v not in es[t - k][:2]:
                    raise ValueError(f"edge id {t} does not touch vertex {v}")
                seen[t] += 1
        for t, c in enumerate(seen):
            want = 1 if t < k else 2
            if c != want:
                raise ValueError(f"id {t} appears {c} times in the rotation system")
        self.rotation = rot
        self._check_embedding()

    def _dart_rotations(self):
        """Dart rotations including one phantom vertex per stub."""
        k = len(self.dangling)
        out = []
        for v, r in enumerate(self.rotation):
            darts = []
            for t in r:
                if t < k:
                    darts.append(2 * t)
                else:
                    darts.append(2 * t if v == self.edges[t - k][0] else 2 * t + 1)
            out.append(tuple(darts))
        for j in range(k):
            out.append((2 * j + 1,))
        return out

    def _check_embedding(self):
        rotations = self._dart_rotations()
        if not is_planar_embedding(rotations):
            raise ValueError("rotation system is not a plane embedding")
        k = len(self.dangling)
        if k == 0:
            return
        faces = trace_faces(rotations)
        home = None
        for face in faces:
            if 1 in face:
                home = face
                break
        stubs = [d for d in home if d % 2 and d // 2 < k]
        if len(stubs) != k:
            raise ValueError("dangling stubs do not share one face")
        seq = [d // 2 for d in stubs]
        start = seq.index(0)
        if any(seq[(start + t) % k] != t for t in range(k)):
            raise ValueError(
                f"dangling stubs out of cyclic order on the outer face: {seq}")

    @property
    def arity(self) -> int:
        return len(self.dangling)

    def internal_graph(self) -> PlanarGraph:
        """The embedded graph with the stubs stripped."""
        k = len(self.dangling)
        rotation = [tuple(t - k for t in r if t >= k) for r in self.rotation]
        return PlanarGraph(self.num_vertices, self.edges, rotation)

    def __repr__(self):
        return (f"MatchgateFragment({self.num_vertices} vertices, "
                f"{len(self.edges)} edges, arity {self.arity})")


def fragment_signature(frag: MatchgateFragment) -> Signature:
    """The signature the fragment realizes.

    Entry at y is the weighted perfect-matching count of the internal
    graph with the vertex under stub j removed exactly when bit j of y is
    set (stub j forced into the matching); a stub pattern consuming a
    vertex twice contributes zero.
    """
    n = frag.num_vertices
    if n > FRAGMENT_CAP:
        raise ValueError(
            f"{n} internal vertices exceeds the fragment cap of {FRAGMENT_CAP}")
    k = frag.arity
    adj = [[] for _ in range(n)]
    for u, v, w in frag.edges:
        adj[u].append((v, w, None))
        adj[v].append((u, w, None))
    memo = {}
    full = (1 << n) - 1
    values = []
    for y in range(1 << k):
        mask = full
        dead = False
        for j in range(k):
            if (y >> (k - 1 - j)) & 1:
                bit = 1 << frag.dangling[j]
                if not mask & bit:
                    dead = True
                    break
                mask &= ~bit
        values.append(ZERO if dead else _matching_sum(adj, mask, memo))
    return Signature(values)


def evaluate_matchgate_grid(grid, realizations) -> Scalar:
    """Holant value of a closed grid whose signatures all carry matchgate
    realizations.

    Each realization is verified against its vertex signature, the
    fragments are stitched along grid edges into one embedded graph
    (each grid edge joins two stub attachment vertices with a unit
    edge), and the matching count of the stitched graph is the Holant
    value.
    """
    if grid.dangling:
        raise ValueError("grid has dangling edges; matchgate evaluation needs a closed grid")
    realizations = list(realizations)
    if len(realizations) != len(grid.vertices):
        raise ValueError("one realization per grid vertex required")
    for i, (vertex, frag) in enumerate(zip(grid.vertices, realizations)):
        if frag is None:
            raise ValueError(f"vertex {i} has no realization")
        if frag.arity != vertex.degree:
            raise ValueError(
                f"vertex {i}: realization arity {frag.arity} "
                f"!= degree {vertex.degree}")
        if fragment_signature(frag) != vertex.signature:
            raise ValueError(
                f"vertex {i}: realization does not produce its signature")

    offsets = []
    total_vertices = 0
    for frag in realizations:
        offsets.append(total_vertices)
        total_vertices += frag.num_vertices

    edges = []
    # per grid vertex, the global id its local combined ids map to
    id_maps = []
    for i, frag in enumerate(realizations):
        k = frag.arity
        local = {}
        for e, (u, v, w) in enumerate(frag.edges):
            local[k + e] = len(edges)
            edges.append((u + offsets[i], v + offsets[i], w))
        id_maps.append(local)

    drop = set()
    for edge_id in grid.edge_ids:
        places = grid.occurrences(edge_id)
        (i1, s1), (i2, s2) = places
        a = realizations[i1].dangling[s1] + offsets[i1]
        b = realizations[i2].dangling[s2] + offsets[i2]
        if a == b:
            # a stitched self-loop can never be matched, and forcing both
            # stubs consumes the vertex twice, so only the all-unused term
            # survives: dropping the edge is exact
            drop.add((i1, s1))
            drop.add((i2, s2))
            continue
        gid = len(edges)
        edges.append((a, b, ONE))
        id_maps[i1][s1] = gid
        id_maps[i2][s2] = gid

    rotation = [None] * total_vertices
    for i, frag in enumerate(realizations):
        for v, r in enumerate(frag.rotation):
            rotation[v + offsets[i]] = tuple(
                id_maps[i][t] for t in r
                if not (t < frag.arity and (i, t) in drop))
    stitched = PlanarGraph(total_vertices, edges, rotation)
    return count_pm_fkt(stitched)


# -- the builtin realization library ---------------------------------------------


_LIBRARY_PATH = Path(__file__).with_name("matchgates.json")
_library_cache = None


def fragment_to_json(frag: MatchgateFragment) -> dict:
    return {
        "vertices": frag.num_vertices,
        "edges": [{"u": u, "v": v, "w": scalar_to_json(w)}
                  for u, v, w in frag.edges],
        "rotation": [list(r) for r in frag.rotation],
        "dangling": list(frag.dangling),
    }


def fragment_from_json(obj) -> MatchgateFragment:
    edges = [(e["u"], e["v"], parse_scalar(e["w"])) for e in obj["edges"]]
    return MatchgateFragment(obj["vertices"], edges,
                             [tuple(r) for r in obj["rotation"]],
                             tuple(obj["dangling"]))


def _load_library():
    global _library_cache
    if _library_cache is None:
        entries = []
        data = json.loads(_LIBRARY_PATH.read_text())
        for item in data:
            frag = fragment_from_json(item["fragment"])
            sig = Signature([parse_scalar(v) for v in item["signature"]])
            if fragment_signature(frag) != sig:
                raise ValueError(
                    f"library entry {item['name']!r} does not realize "
                    "its stated signature")
            entries.append((item["name"], sig, frag))
        _library_cache = tuple(entries)
    return _library_cache


def _scaled(frag: MatchgateFragment, scale: Scalar) -> MatchgateFragment:
    """The same gate times a scalar: a far-away weighted edge."""
    if scale == ONE:
        return frag
    n = frag.num_vertices
    new_id = frag.arity + len(frag.edges)
    edges = list(frag.edges) + [(n, n + 1, scale)]
    rotation = list(frag.rotation) + [(new_id,), (new_id,)]
    return MatchgateFragment(n + 2, edges, rotation, frag.dangling)


def _all_zero_fragment(k: int, weight: Scalar) -> MatchgateFragment:
    """weight * [y == 0...0], connected for every arity."""
    if k == 0:
        return MatchgateFragment(2, [(0, 1, weight)], [(0,), (0,)], ())
    # stubs at a_j, legs a_j - u_j, hub u_j - c, pendant c - d
    a = list(range(k))
    u = list(range(k, 2 * k))
    c, d = 2 * k, 2 * k + 1
    edges = []
    for j in range(k):
        edges.append((a[j], u[j], ONE))
    for j in range(k):
        edges.append((u[j], c, ONE))
    edges.append((c, d, weight))
    rotation = []
    for j in range(k):
        rotation.append((j, k + j))              # stub j, then leg j
    for j in range(k):
        rotation.append((k + j, 2 * k + j))      # leg j, then hub edge j
    rotation.append(tuple(2 * k + j for j in range(k)) + (3 * k,))
    rotation.append((3 * k,))
    return MatchgateFragment(2 * k + 2, edges, rotation, tuple(a))


def _all_one_fragment(k: int, weight: Scalar) -> MatchgateFragment:
    """weight * [y == 1...1], connected for every arity."""
    if k == 0:
        return MatchgateFragment(2, [(0, 1, weight)], [(0,), (0,)], ())
    a = list(range(k))
    c, d = k, k + 1
    edges = [(a[j], c, ONE) for j in range(k)]
    edges.append((c, d, weight))
    rotation = [(j, k + j) for j in range(k)]
    rotation.append(tuple(k + j for j in range(k)) + (2 * k,))
    rotation.append((2 * k,))
    return MatchgateFragment(k + 2, edges, rotation, tuple(a))


def _exact_one_fragment(k: int) -> MatchgateFragment:
    return MatchgateFragment(1, [], [tuple(range(k))], (0,) * k)


def builtin_fragment(f: Signature):
    """A realization of f from the builtin library, or None.

    Covers the library entries and their nonzero scalar multiples, plus
    the weighted families a*[y=0..0], b*[y=1..1] at any arity and
    [a,0,b] at arity two.
    """
    if f.is_zero:
        return None
    for _, sig, frag in _load_library():
        if sig.arity != f.arity:
            continue
        if f == sig:
            return frag
        ref = min(sig.support())
        if sig.support() == f.support():
            scale = f[ref] / sig[ref]
            if f == sig * scale:
                return _scaled(frag, scale)
    n = f.arity
    support = f.support()
    full = (1 << n) - 1
    if support == {0}:
        return _all_zero_fragment(n, f[0])
    if support == {full}:
        return _all_one_fragment(n, f[full])
    if n == 2 and support == {0, 3}:
        # path p - u - v - q with stubs at p and q: entry(00) is the
        # product of the outer weights, entry(11) the middle weight
        return MatchgateFragment(
            4, [(0, 1, f[0]), (1, 2, f[3]), (2, 3, ONE)],
            [(0, 2), (2, 3), (3, 4), (4, 1)], (0, 3))
    weight_one = {1 << j for j in range(n)}
    if support == weight_one:
        vals = {f[1 << j] for j in range(n)}
        if len(vals) == 1:
            return _scaled(_exact_one_fragment(n), f[1 << (n - 1)])
    return None

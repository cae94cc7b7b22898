"""Face tracing for rotation systems (combinatorial embeddings).

A rotation system lists, per vertex, the cyclic counterclockwise order of
its darts.  Darts come in twin pairs d, d^1 (the two halves of one edge).
Faces are orbits of the successor map d -> rotation-next of twin(d); the
orbit count plugs into Euler's formula, which is the whole planarity
certificate used here.  No geometry anywhere.
"""

from __future__ import annotations


def trace_faces(rotations) -> list:
    """Face orbits as dart tuples; deterministic order."""
    succ = {}
    for rot in rotations:
        for k, d in enumerate(rot):
            if d in succ:
                raise ValueError(f"dart {d} appears twice in the rotation system")
            succ[d] = rot[(k + 1) % len(rot)]
    for d in succ:
        if d ^ 1 not in succ:
            raise ValueError(f"dart {d} has no twin")
    faces = []
    seen = set()
    for d0 in succ:
        if d0 in seen:
            continue
        face = []
        d = d0
        while True:
            seen.add(d)
            face.append(d)
            d = succ[d ^ 1]
            if d == d0:
                break
        faces.append(tuple(face))
    return faces


def is_planar_embedding(rotations) -> bool:
    """Does V - E + F = 2 hold on every connected component?

    Components with no edges are trivially planar.  Raises on a malformed
    rotation system (duplicate or unmatched darts).
    """
    faces = trace_faces(rotations)
    nv = len(rotations)
    parent = list(range(nv))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    vertex_of = {}
    for v, rot in enumerate(rotations):
        for d in rot:
            vertex_of[d] = v
    for d, v in vertex_of.items():
        u = vertex_of[d ^ 1]
        parent[find(u)] = find(v)

    verts = {}
    edges = {}
    fcount = {}
    for v in range(nv):
        if rotations[v]:
            r = find(v)
            verts[r] = verts.get(r, 0) + 1
            edges[r] = edges.get(r, 0) + len(rotations[v])
    for face in faces:
        r = find(vertex_of[face[0]])
        fcount[r] = fcount.get(r, 0) + 1
    return all(verts[r] - edges[r] // 2 + fcount.get(r, 0) == 2
               for r in verts)

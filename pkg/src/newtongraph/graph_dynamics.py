"""Graph maps between sphere maps, winding data, and extendability.

A weak graph map sends vertices to vertices and each dart to a
non-backtracking dart path in the codomain, with opposite darts carrying
reversed paths.  A graph map is the special case of single-dart paths;
:func:`promote` subdivides the domain so every weak map becomes one.

``local_degree`` discretizes the winding of a map germ at a vertex: each
corner between consecutive darts sweeps between 1 and m unit corners at
the image vertex (m its valence), and the total sweep is deg * m.

``check_regular_extension`` decides whether a graph map extends to an
orientation-preserving branched cover of the sphere whose branching is
confined to the vertices: every face boundary must cover each unit corner
of the codomain at most once.  Folding a face over itself forces a branch
point in its interior and is reported as a conflict.
"""

from .errors import DanglingReference, IncoherentLocalMap, InvalidGraphMap
from .planar_map import build_planar_map, edge_key, sort_key

__all__ = [
    "WeakGraphMap",
    "GraphMap",
    "PromotedMap",
    "OrbitResult",
    "RegularExtensionReport",
    "build_weak_graph_map",
    "build_graph_map",
    "promote",
    "local_degree",
    "critical_points",
    "check_regular_extension",
    "edge_orbit",
]


class WeakGraphMap:
    """Vertex assignment plus a dart-path for every domain dart."""

    __slots__ = ("domain", "codomain", "_vertex_map", "_dart_paths")

    def __init__(self, domain, codomain, vertex_map, dart_paths):
        self.domain = domain
        self.codomain = codomain
        self._vertex_map = vertex_map
        self._dart_paths = dart_paths

    def vertex_image(self, v):
        try:
            return self._vertex_map[v]
        except KeyError:
            raise DanglingReference("vertex", v, "graph map domain") from None

    def dart_path(self, d):
        try:
            return self._dart_paths[d]
        except KeyError:
            raise DanglingReference("dart", d, "graph map domain") from None

    @property
    def vertex_map(self):
        return dict(self._vertex_map)

    @property
    def dart_paths(self):
        return dict(self._dart_paths)

    def is_graph_map(self):
        return all(len(p) == 1 for p in self._dart_paths.values())

    def __repr__(self):
        kind = "GraphMap" if self.is_graph_map() else "WeakGraphMap"
        return f"{kind}({len(self._vertex_map)} vertices)"


class GraphMap(WeakGraphMap):
    """Weak graph map whose dart paths all have length one."""

    __slots__ = ()

    def dart_image(self, d):
        return self.dart_path(d)[0]


def _path_end(codomain, path):
    return codomain.origin(codomain.twin(path[-1]))


def _check_path(codomain, path, start, end, dart):
    if not path:
        raise InvalidGraphMap(f"empty path for dart {dart!r}")
    for p in path:
        if p not in codomain.darts:
            raise DanglingReference("dart", p, f"path of {dart!r}")
    if codomain.origin(path[0]) != start:
        raise InvalidGraphMap(
            f"path of dart {dart!r} starts at {codomain.origin(path[0])!r}, "
            f"expected {start!r}"
        )
    for a, b in zip(path, path[1:]):
        if codomain.origin(b) != _path_end(codomain, (a,)):
            raise InvalidGraphMap(f"path of dart {dart!r} is not continuous")
        if b == codomain.twin(a):
            raise InvalidGraphMap(f"path of dart {dart!r} backtracks at {a!r}")
    if _path_end(codomain, path) != end:
        raise InvalidGraphMap(
            f"path of dart {dart!r} ends at {_path_end(codomain, path)!r}, "
            f"expected {end!r}"
        )


def build_weak_graph_map(domain, codomain, vertex_map, dart_paths):
    """Validate and construct a weak graph map.

    ``dart_paths`` may specify either or both darts of an edge; a missing
    direction is filled in with the reversed twin path, and if both are
    present they must be mutual reverses.
    """
    vm = {}
    for v in domain.vertices:
        if v not in vertex_map:
            raise InvalidGraphMap(f"no image for vertex {v!r}")
        w = vertex_map[v]
        if w not in codomain.vertices:
            raise DanglingReference("vertex", w, f"image of {v!r}")
        vm[v] = w
    for v in vertex_map:
        if v not in vm:
            raise DanglingReference("vertex", v, "graph map domain")

    paths = {}
    codomain_darts = set(codomain.darts)
    for d, path in dart_paths.items():
        if d not in domain.darts:
            raise DanglingReference("dart", d, "graph map dart paths")
        path = tuple(path)
        for p in path:
            if p not in codomain_darts:
                raise DanglingReference("dart", p, f"path of {d!r}")
        paths[d] = path
    for d in list(paths):
        t = domain.twin(d)
        reversed_path = tuple(codomain.twin(p) for p in reversed(paths[d]))
        if t in paths:
            if paths[t] != reversed_path:
                raise InvalidGraphMap(
                    f"paths of darts {d!r} and {t!r} are not mutual reverses"
                )
        else:
            paths[t] = reversed_path
    for d in domain.darts:
        if d not in paths:
            raise InvalidGraphMap(f"no path for dart {d!r}")
        _check_path(
            codomain,
            paths[d],
            vm[domain.origin(d)],
            vm[domain.origin(domain.twin(d))],
            d,
        )

    cls = GraphMap if all(len(p) == 1 for p in paths.values()) else WeakGraphMap
    return cls(domain, codomain, vm, paths)


def build_graph_map(domain, codomain, vertex_map, dart_paths):
    gm = build_weak_graph_map(domain, codomain, vertex_map, dart_paths)
    if not gm.is_graph_map():
        raise InvalidGraphMap("dart paths longer than one edge; promote first")
    return gm


# ---------------------------------------------------------------------------
# promotion


class PromotedMap:
    """Result of subdividing a weak map's domain into a graph map.

    ``vertex_origin`` sends each subdivision vertex to ``(edge, i)``, the
    source edge (canonical dart pair) and its 1-based position along the
    direction of the edge's lesser dart.  ``edge_refinement`` sends every
    original edge to the ordered tuple of edges replacing it.
    """

    __slots__ = ("graph_map", "vertex_origin", "edge_refinement")

    def __init__(self, graph_map, vertex_origin, edge_refinement):
        self.graph_map = graph_map
        self.vertex_origin = vertex_origin
        self.edge_refinement = edge_refinement


def promote(weak):
    """Subdivide domain edges so every dart maps to a single dart."""
    dom, cod = weak.domain, weak.codomain
    rotations = {v: list(dom.rotation(v)) for v in dom.vertices}
    twins = []
    vertex_map = {v: weak.vertex_image(v) for v in dom.vertices}
    dart_paths = {}
    vertex_origin = {}
    edge_refinement = {}

    for a, b in dom.edges:
        path = weak.dart_path(a)
        k = len(path)
        if k == 1:
            twins.append((a, b))
            dart_paths[a] = path
            edge_refinement[(a, b)] = ((a, b),)
            continue
        rev = weak.dart_path(b)
        chain = [dom.origin(a)]
        for i in range(1, k):
            mid = ("subdiv", a, b, i)
            chain.append(mid)
            rotations[mid] = []
            vertex_origin[mid] = ((a, b), i)
            vertex_map[mid] = cod.origin(path[i])
        chain.append(dom.origin(b))
        new_edges = []
        for i in range(k):
            fwd = ("sd", a, i)
            bwd = ("sd", b, k - 1 - i)
            twins.append((fwd, bwd))
            new_edges.append(edge_key(fwd, bwd))
            dart_paths[fwd] = (path[i],)
            dart_paths[bwd] = (rev[k - 1 - i],)
            if i == 0:
                pos = rotations[chain[0]].index(a)
                rotations[chain[0]][pos] = fwd
            else:
                rotations[chain[i]].append(fwd)
            if i == k - 1:
                pos = rotations[chain[k]].index(b)
                rotations[chain[k]][pos] = bwd
            else:
                rotations[chain[i + 1]].append(bwd)
        edge_refinement[(a, b)] = tuple(new_edges)

    for mid in vertex_origin:
        rotations[mid] = tuple(rotations[mid])
    new_map = build_planar_map({v: tuple(r) for v, r in rotations.items()}, twins)
    gm = build_graph_map(new_map, cod, vertex_map, dart_paths)
    return PromotedMap(gm, vertex_origin, edge_refinement)


# ---------------------------------------------------------------------------
# winding


def _first_image(gm, dart):
    return gm.dart_path(dart)[0]


def corner_width(gm, a):
    """Units swept at the image vertex by the corner (a, sigma(a)).

    The corner from dart ``a`` to its rotation successor covers the unit
    corners of the image vertex starting at the position of a's image
    germ; the count is between 1 and the image valence.  Returns
    ``(start_position, width, image_vertex)``.
    """
    dom, cod = gm.domain, gm.codomain
    v = dom.origin(a)
    y = gm.vertex_image(v)
    rot_y = cod.rotation(y)
    m = len(rot_y)
    b = dom.next_at_vertex(a)
    pa = rot_y.index(_first_image(gm, a))
    pb = rot_y.index(_first_image(gm, b))
    width = ((pb - pa - 1) % m) + 1
    return pa, width, y


def local_degree(gm, vertex):
    """Winding multiplicity of the map germ at a vertex.

    Isolated vertices have degree 1 by convention.  The corner-width sum
    at a vertex is provably a multiple of the image valence; the
    divisibility check is retained defensively.
    """
    rot = gm.domain.rotation(vertex)
    if not rot:
        return 1
    y = gm.vertex_image(vertex)
    m = gm.codomain.valence(y)
    total = sum(corner_width(gm, a)[1] for a in rot)
    if total % m:
        raise IncoherentLocalMap(vertex, f"winding {total}/{m} at {vertex!r}")
    return total // m


def critical_points(gm):
    """Vertices with local degree at least two, in deterministic order."""
    return tuple(
        v
        for v in sorted(gm.domain.vertices, key=sort_key)
        if local_degree(gm, v) >= 2
    )


# ---------------------------------------------------------------------------
# regular extension


class RegularExtensionReport:
    """Outcome of the vertex-sector test for regular extendability.

    ``conflicts`` lists (image_vertex, domain_face_index, unit) triples
    where a unit corner is covered twice from within the same face.
    """

    __slots__ = ("ok", "conflicts")

    def __init__(self, ok, conflicts):
        self.ok = ok
        self.conflicts = conflicts

    def __bool__(self):
        return self.ok

    def __repr__(self):
        state = "ok" if self.ok else f"{len(self.conflicts)} conflicts"
        return f"RegularExtensionReport({state})"


def check_regular_extension(gm):
    """Test extendability to a branched cover branching only at vertices.

    Groups the unit corners covered by each domain corner by (image
    vertex, incident domain face); a repeated unit within one group means
    the face would wrap, forcing interior branching.  The corner between
    dart ``a`` and its successor lies in the face of sigma(a).
    """
    dom = gm.domain
    covered = {}
    conflicts = []
    for v in sorted(dom.vertices, key=sort_key):
        for a in dom.rotation(v):
            start, width, y = corner_width(gm, a)
            m = gm.codomain.valence(y)
            face = dom.face_index(dom.next_at_vertex(a))
            group = covered.setdefault((y, face), set())
            for t in range(width):
                unit = (start + t) % m
                if unit in group:
                    conflicts.append((y, face, unit))
                else:
                    group.add(unit)
    conflicts = tuple(sorted(set(conflicts), key=lambda c: (sort_key(c[0]), c[1], c[2])))
    return RegularExtensionReport(not conflicts, conflicts)


# ---------------------------------------------------------------------------
# edge orbits


class OrbitResult:
    """Forward orbit of an edge set under a graph self-map.

    ``sequence`` holds successive edge sets; ``preperiod`` and ``period``
    are set when a repeat was found within the iteration budget, otherwise
    ``resolved`` is False and both are None.
    """

    __slots__ = ("sequence", "preperiod", "period", "resolved")

    def __init__(self, sequence, preperiod, period, resolved):
        self.sequence = sequence
        self.preperiod = preperiod
        self.period = period
        self.resolved = resolved


def _edge_image(gm, pair):
    darts = gm.dart_path(pair[0])
    return frozenset(gm.codomain.edge_of(d) for d in darts)


def edge_orbit(gm, edge, max_iter=None):
    """Iterate an edge forward until its edge-set orbit repeats.

    The default iteration budget is the square of the edge count, enough
    for any eventually periodic single-edge orbit.
    """
    a, b = tuple(edge)
    if not gm.domain.has_edge((a, b)) and not gm.domain.has_edge((b, a)):
        raise DanglingReference("edge", edge, "edge orbit")
    if gm.domain is not gm.codomain and gm.domain.edges != gm.codomain.edges:
        raise InvalidGraphMap("edge orbits require a self-map")
    if max_iter is None:
        max_iter = max(1, len(gm.domain.edges) ** 2)

    current = frozenset({edge_key(a, b)})
    sequence = [current]
    first_seen = {current: 0}
    for step in range(1, max_iter + 1):
        nxt = frozenset()
        for pair in current:
            nxt |= _edge_image(gm, pair)
        current = nxt
        if current in first_seen:
            preperiod = first_seen[current]
            period = step - preperiod
            sequence.append(current)
            return OrbitResult(tuple(sequence), preperiod, period, True)
        first_seen[current] = step
        sequence.append(current)
    return OrbitResult(tuple(sequence), None, None, False)

"""Rotation systems on the sphere.

A planar map is stored as a rotation system: every vertex carries the
counterclockwise cyclic order of its outgoing darts, and a fixed-point-free
involution pairs each dart with its twin on the same edge.  Faces are the
orbits of ``d -> successor of twin(d)``, and sphericity is certified by the
Euler relation V - E + F = 2 on every connected component.

Dart and vertex identifiers are arbitrary hashable values; ordering between
mixed types is resolved by :func:`sort_key` so that every derived object
(face lists, canonical codes, isomorphism enumerations) is deterministic.
"""

from collections import deque
import itertools

from .errors import Disconnected, MalformedRotation, NotSphere, UnknownEdge

__all__ = [
    "PlanarMap",
    "MapIsomorphism",
    "FaceComponents",
    "build_planar_map",
    "canonical_code",
    "canonical_form",
    "face_components",
    "map_isomorphisms",
    "remove_edges",
    "sort_key",
]


def sort_key(value):
    """Total order on mixed-type identifiers.

    Integers sort before strings, strings before tuples, and anything else
    falls back to its repr.  Tuples compare componentwise by the same rule,
    which keeps synthetic ids such as subdivision tuples well ordered.
    """
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, tuple):
        return (2, tuple(sort_key(x) for x in value))
    return (3, repr(value))


def edge_key(a, b):
    """Canonical representation of the edge holding darts ``a`` and ``b``."""
    return tuple(sorted((a, b), key=sort_key))


class _UnionFind:
    def __init__(self, items):
        self._parent = {x: x for x in items}

    def find(self, x):
        p = self._parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[ra] = rb

    def classes(self):
        groups = {}
        for x in self._parent:
            groups.setdefault(self.find(x), []).append(x)
        return groups


class PlanarMap:
    """Immutable rotation system validated to live on the sphere.

    Use :func:`build_planar_map` to construct one; the constructor assumes
    already-validated data.
    """

    __slots__ = (
        "_rotations",
        "_twin",
        "_origin",
        "_succ",
        "_pred",
        "_edges",
        "_faces",
        "_face_of",
        "_face_count",
        "_components",
    )

    def __init__(self, rotations, twin, origin, succ, pred, edges, faces, face_of, face_count, components):
        self._rotations = rotations
        self._twin = twin
        self._origin = origin
        self._succ = succ
        self._pred = pred
        self._edges = edges
        self._faces = faces
        self._face_of = face_of
        self._face_count = face_count
        self._components = components

    # -- basic accessors ----------------------------------------------------

    @property
    def vertices(self):
        return tuple(self._rotations)

    @property
    def darts(self):
        return tuple(self._origin)

    @property
    def edges(self):
        """Edges as canonically ordered dart pairs."""
        return self._edges

    @property
    def faces(self):
        """Face cycles, each starting at its least dart."""
        return self._faces

    @property
    def face_count(self):
        """Number of embedded regions, counting nesting of components."""
        return self._face_count

    @property
    def components(self):
        """Vertex sets of the connected components."""
        return self._components

    def rotation(self, vertex):
        try:
            return self._rotations[vertex]
        except KeyError:
            raise MalformedRotation(f"unknown vertex {vertex!r}") from None

    def valence(self, vertex):
        return len(self.rotation(vertex))

    def origin(self, dart):
        try:
            return self._origin[dart]
        except KeyError:
            raise MalformedRotation(f"unknown dart {dart!r}") from None

    def twin(self, dart):
        try:
            return self._twin[dart]
        except KeyError:
            raise MalformedRotation(f"unknown dart {dart!r}") from None

    def next_at_vertex(self, dart):
        """Counterclockwise successor around the dart's origin."""
        return self._succ[dart]

    def prev_at_vertex(self, dart):
        return self._pred[dart]

    def edge_of(self, dart):
        return edge_key(dart, self._twin[dart])

    def twin_pairs(self):
        return self._edges

    def face_index(self, dart):
        """Index into :attr:`faces` of the face this dart borders."""
        return self._face_of[dart]

    def ring(self, dart):
        """Full rotation at origin(dart), starting from ``dart``."""
        rot = self._rotations[self._origin[dart]]
        i = rot.index(dart)
        return rot[i:] + rot[:i]

    def is_connected(self):
        return len(self._components) == 1

    def has_edge(self, pair):
        a, b = tuple(pair)
        return self._twin.get(a) == b

    def __repr__(self):
        return (
            f"PlanarMap({len(self._rotations)} vertices, "
            f"{len(self._edges)} edges, {self._face_count} faces)"
        )


def _face_orbits(origin, succ, twin):
    nxt = {d: succ[twin[d]] for d in origin}
    seen = set()
    faces = []
    for start in sorted(origin, key=sort_key):
        if start in seen:
            continue
        cycle = []
        d = start
        while d not in seen:
            seen.add(d)
            cycle.append(d)
            d = nxt[d]
        faces.append(tuple(cycle))
    return tuple(faces)


def build_planar_map(rotations, twins):
    """Validate a rotation system and return the resulting sphere map.

    ``rotations`` maps each vertex to the cyclic tuple of its darts;
    ``twins`` lists each edge as a pair of distinct darts.  Raises
    MalformedRotation for structural defects and NotSphere when some
    connected component has positive genus.
    """
    origin = {}
    rot = {}
    for v, darts in rotations.items():
        darts = tuple(darts)
        rot[v] = darts
        for d in darts:
            if d in origin:
                raise MalformedRotation(f"dart {d!r} listed more than once")
            origin[d] = v

    twin = {}
    for pair in twins:
        a, b = tuple(pair)
        if a == b:
            raise MalformedRotation(f"edge pairs dart {a!r} with itself")
        for d in (a, b):
            if d not in origin:
                raise MalformedRotation(f"twin dart {d!r} missing from rotations")
            if d in twin:
                raise MalformedRotation(f"dart {d!r} appears in two edges")
        twin[a] = b
        twin[b] = a
    if set(twin) != set(origin):
        loose = sorted(set(origin) - set(twin), key=sort_key)
        raise MalformedRotation(f"darts without a twin: {loose!r}")

    succ = {}
    pred = {}
    for v, darts in rot.items():
        for i, d in enumerate(darts):
            succ[d] = darts[(i + 1) % len(darts)]
            pred[darts[(i + 1) % len(darts)]] = d

    faces = _face_orbits(origin, succ, twin)
    face_of = {}
    for i, cyc in enumerate(faces):
        for d in cyc:
            face_of[d] = i

    uf = _UnionFind(rot)
    for d, t in twin.items():
        uf.union(origin[d], origin[t])
    comp_groups = uf.classes()
    components = tuple(
        tuple(sorted(group, key=sort_key))
        for group in sorted(comp_groups.values(), key=lambda g: sort_key(min(g, key=sort_key)))
    )

    total_faces = 0
    for comp in components:
        comp_set = set(comp)
        v_c = len(comp)
        e_c = sum(1 for a, _ in twin.items() if origin[a] in comp_set) // 2
        f_c = sum(1 for cyc in faces if origin[cyc[0]] in comp_set)
        if e_c == 0:
            f_c = 1
        if v_c - e_c + f_c != 2:
            raise NotSphere(
                f"component containing {comp[0]!r} has V-E+F = "
                f"{v_c}-{e_c}+{f_c} = {v_c - e_c + f_c}, expected 2"
            )
        total_faces += f_c
    face_count = total_faces - (len(components) - 1) if components else 0

    edges = tuple(
        sorted((edge_key(a, b) for a, b in twin.items() if sort_key(a) < sort_key(b)),
               key=sort_key)
    )
    return PlanarMap(rot, twin, origin, succ, pred, edges, faces, face_of, face_count, components)


def remove_edges(map_, edges):
    """Delete the given edges, keeping all vertices, and revalidate."""
    doomed = set()
    for pair in edges:
        a, b = tuple(pair)
        if not map_.has_edge((a, b)) and not map_.has_edge((b, a)):
            raise UnknownEdge(f"no edge with darts {a!r}, {b!r}")
        doomed.add(a)
        doomed.add(b)
    rotations = {
        v: tuple(d for d in map_.rotation(v) if d not in doomed) for v in map_.vertices
    }
    twins = [pair for pair in map_.twin_pairs() if pair[0] not in doomed]
    return build_planar_map(rotations, twins)


# ---------------------------------------------------------------------------
# canonical codes


def canonical_code(map_, anchor):
    """Integer code of the map's rotation system grown from one dart.

    Darts are labeled in breadth-first discovery order.  When a dart is
    dequeued at a vertex not yet described, the code records the valence
    followed by the labels of the full rotation ring starting at that dart
    (fresh labels are assigned in ring order); in all cases the label of the
    dart's twin follows.  The code determines the rotation system up to
    relabeling, so two connected maps are isomorphic exactly when some
    anchor gives them equal codes.
    """
    labels = {}
    queue = deque()
    counter = itertools.count(1)

    def label_of(d):
        got = labels.get(d)
        if got is None:
            got = next(counter)
            labels[d] = got
            queue.append(d)
        return got

    label_of(anchor)
    described = set()
    code = []
    while queue:
        d = queue.popleft()
        v = map_.origin(d)
        if v not in described:
            described.add(v)
            ring = map_.ring(d)
            code.append(len(ring))
            code.extend(label_of(r) for r in ring)
        code.append(label_of(map_.twin(d)))
    return tuple(code)


def canonical_form(map_):
    """Least canonical code over all anchor darts; connected maps only."""
    if not map_.is_connected():
        raise Disconnected("canonical form is defined for connected maps only")
    if not map_.darts:
        return (0,)
    return min(canonical_code(map_, d) for d in map_.darts)


# ---------------------------------------------------------------------------
# isomorphisms


class MapIsomorphism:
    """Orientation-preserving isomorphism between two sphere maps."""

    __slots__ = ("dart_map", "vertex_map")

    def __init__(self, dart_map, vertex_map):
        self.dart_map = dart_map
        self.vertex_map = vertex_map

    def __eq__(self, other):
        return (
            isinstance(other, MapIsomorphism)
            and self.dart_map == other.dart_map
            and self.vertex_map == other.vertex_map
        )

    def __hash__(self):
        return hash(tuple(sorted(self.dart_map.items(), key=lambda kv: sort_key(kv[0]))))

    def __repr__(self):
        return f"MapIsomorphism({self.vertex_map!r})"


def _component_submap(map_, comp):
    comp_set = set(comp)
    darts = [d for d in map_.darts if map_.origin(d) in comp_set]
    return comp_set, darts


def _anchored_extension(a, b, dart_a, dart_b):
    """Grow a dart bijection from one seed pair; None on conflict."""
    mapping = {}
    stack = [(dart_a, dart_b)]
    while stack:
        x, y = stack.pop()
        known = mapping.get(x)
        if known is not None:
            if known != y:
                return None
            continue
        if a.valence(a.origin(x)) != b.valence(b.origin(y)):
            return None
        mapping[x] = y
        stack.append((a.twin(x), b.twin(y)))
        stack.append((a.next_at_vertex(x), b.next_at_vertex(y)))
    if len(set(mapping.values())) != len(mapping):
        return None
    return mapping


def _component_isomorphisms(a, b, comp_a, comp_b):
    """All dart bijections between two connected components."""
    set_a, darts_a = _component_submap(a, comp_a)
    set_b, darts_b = _component_submap(b, comp_b)
    if len(darts_a) != len(darts_b) or len(set_a) != len(set_b):
        return []
    if not darts_a:
        # two isolated vertices
        return [({}, {comp_a[0]: comp_b[0]})]
    anchor = min(darts_a, key=sort_key)
    found = []
    for cand in sorted(darts_b, key=sort_key):
        m = _anchored_extension(a, b, anchor, cand)
        if m is None or len(m) != len(darts_a):
            continue
        vmap = {}
        ok = True
        for d, img in m.items():
            v, w = a.origin(d), b.origin(img)
            if vmap.setdefault(v, w) != w:
                ok = False
                break
        if ok:
            found.append((m, vmap))
    return found


def map_isomorphisms(a, b, constraints=None):
    """Enumerate the orientation-preserving isomorphisms from a to b.

    ``constraints`` is an optional partial vertex correspondence; only
    isomorphisms extending it are returned.  Disconnected maps are handled
    by matching components in all structure-compatible ways.
    """
    comps_a = a.components
    comps_b = b.components
    if len(comps_a) != len(comps_b):
        return []

    per_pair = {}
    for i, ca in enumerate(comps_a):
        for j, cb in enumerate(comps_b):
            per_pair[i, j] = _component_isomorphisms(a, b, ca, cb)

    results = []

    def assemble(i, used, acc):
        if i == len(comps_a):
            dart_map = {}
            vertex_map = {}
            for m, vm in acc:
                dart_map.update(m)
                vertex_map.update(vm)
            results.append(MapIsomorphism(dart_map, vertex_map))
            return
        for j in range(len(comps_b)):
            if j in used:
                continue
            for pair in per_pair[i, j]:
                assemble(i + 1, used | {j}, acc + [pair])

    assemble(0, frozenset(), [])

    if constraints:
        results = [
            iso
            for iso in results
            if all(iso.vertex_map.get(v) == w for v, w in constraints.items())
        ]
    return results


# ---------------------------------------------------------------------------
# complementary components of a subgraph


class FaceComponents:
    """Connected components of the sphere complement of an embedded subgraph.

    Faces of the host map are glued across every edge outside the subgraph;
    the resulting classes are in bijection with the complementary regions.
    """

    __slots__ = ("_map", "_class_of_face", "_subgraph_vertices")

    def __init__(self, map_, class_of_face, subgraph_vertices):
        self._map = map_
        self._class_of_face = class_of_face
        self._subgraph_vertices = subgraph_vertices

    def face_class(self, face_index):
        return self._class_of_face[face_index]

    def vertex_class(self, vertex):
        """Region holding a vertex, or None if it lies on the subgraph.

        Only meaningful for vertices with at least one dart; an isolated
        vertex borders no face and also yields None.
        """
        if vertex in self._subgraph_vertices:
            return None
        rot = self._map.rotation(vertex)
        if not rot:
            return None
        return self._class_of_face[self._map.face_index(rot[0])]

    def class_count(self):
        return len(set(self._class_of_face))


def face_components(map_, subgraph_edges):
    """Group host faces into complementary components of the subgraph.

    ``subgraph_edges`` lists edges of ``map_`` (as dart pairs) forming the
    embedded subgraph whose complement is being decomposed.
    """
    sub = set()
    touched = set()
    for pair in subgraph_edges:
        a, b = tuple(pair)
        if not map_.has_edge((a, b)) and not map_.has_edge((b, a)):
            raise UnknownEdge(f"no edge with darts {a!r}, {b!r}")
        sub.add(frozenset((a, b)))
        touched.add(map_.origin(a))
        touched.add(map_.origin(b))

    uf = _UnionFind(range(len(map_.faces)))
    for x, y in map_.edges:
        if frozenset((x, y)) in sub:
            continue
        uf.union(map_.face_index(x), map_.face_index(y))
    class_of_face = [uf.find(i) for i in range(len(map_.faces))]
    return FaceComponents(map_, class_of_face, touched)

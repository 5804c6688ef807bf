"""Validators for channel diagrams and Newton graphs on the sphere.

A channel diagram records how the immediate basins of the roots of a
rational map reach the fixed point at infinity: a star of edges from a
center vertex to root vertices, with parallel edges allowed as long as
every lens they bound contains another vertex of the diagram.  A Newton
graph wraps a channel diagram in a graph self-map whose edges are
stratified by the number of iterations needed to fall into the channel.

Checks are reported through :class:`~newtongraph.reporting.Report`, one
item per axiom, so callers (and the command line tool) can surface every
violated condition at once instead of stopping at the first.
"""

from dataclasses import dataclass

from .errors import DanglingReference, InvalidGraphMap, Unresolved
from .graph_dynamics import (
    build_weak_graph_map,
    check_regular_extension,
    critical_points,
    local_degree,
    promote,
)
from .planar_map import build_planar_map, edge_key, face_components, sort_key
from .reporting import FAIL, PARTIAL, PASS, UNVERIFIED, Report, ReportItem

__all__ = [
    "AbstractNewtonGraph",
    "ChannelDiagram",
    "ExtendedNewtonGraph",
    "HubbardTreeSpec",
    "RaySpec",
    "channel_diagram",
    "ray_orbit",
    "ray_period_data",
    "trees_separated",
    "validate_channel_diagram",
    "validate_extended",
    "validate_newton_graph",
]


# ---------------------------------------------------------------------------
# shared helpers


def _normalize_edge(host, pair, where):
    a, b = tuple(pair)
    if not host.has_edge((a, b)) and not host.has_edge((b, a)):
        raise DanglingReference("edge", (a, b), where)
    return edge_key(a, b)


def _induced_submap(host, edges, extra_vertices=()):
    """Submap on the given edges, inheriting the host's rotation orders.

    Vertices are the edge endpoints plus ``extra_vertices``; extras with
    no retained dart become isolated vertices.
    """
    keep = set()
    verts = set(extra_vertices)
    twins = []
    for a, b in edges:
        keep.add(a)
        keep.add(b)
        verts.add(host.origin(a))
        verts.add(host.origin(b))
        twins.append((a, b))
    rotations = {
        v: tuple(d for d in host.rotation(v) if d in keep)
        for v in sorted(verts, key=sort_key)
    }
    return build_planar_map(rotations, twins)


def _edge_ends(host, pair):
    return {host.origin(pair[0]), host.origin(pair[1])}


def _working_graph_map(gm):
    """The map itself, or its subdivision when darts map to longer paths."""
    if gm.is_graph_map():
        return gm
    return promote(gm).graph_map


# ---------------------------------------------------------------------------
# channel diagrams


@dataclass(frozen=True, eq=False)
class ChannelDiagram:
    """Star of edges from a center vertex to the root vertices.

    ``submap`` is the diagram as its own sphere map (rotations inherited
    from the host it was built from), ``edges`` the canonical dart pairs
    of the diagram edges.
    """

    submap: object
    center: object
    roots: tuple
    edges: frozenset

    @property
    def degree(self):
        return len(self.roots)


def channel_diagram(host, center, roots, edges=None):
    """Build a :class:`ChannelDiagram` sitting inside ``host``.

    ``edges`` defaults to every edge of the host, which is the right
    choice when the host *is* the diagram.  Unknown vertex or edge ids
    raise :class:`DanglingReference`; the builder does not check the
    diagram axioms, that is :func:`validate_channel_diagram`'s job.
    """
    known = set(host.vertices)
    if center not in known:
        raise DanglingReference("vertex", center, "channel diagram center")
    roots = tuple(roots)
    for r in roots:
        if r not in known:
            raise DanglingReference("vertex", r, "channel diagram roots")
    if len(set(roots)) != len(roots):
        raise ValueError("duplicate root vertices")
    if center in roots:
        raise ValueError("center cannot also be a root")
    if edges is None:
        chosen = frozenset(host.edges)
    else:
        chosen = frozenset(
            _normalize_edge(host, e, "channel diagram edges") for e in edges
        )
    submap = _induced_submap(
        host, sorted(chosen, key=sort_key), extra_vertices=(center,) + roots
    )
    return ChannelDiagram(submap, center, roots, chosen)


def validate_channel_diagram(diagram):
    """Check the four channel diagram axioms, one report item each.

    star-shape        every edge joins the center to a root
    root-access       every root is joined to the center by some edge
    edge-budget       at least three roots, at most 2d-2 edges
    bigon-separation  both sides of every parallel pair hold a vertex
    """
    sub = diagram.submap
    center = diagram.center
    roots = set(diagram.roots)
    items = []

    stray = tuple(
        e
        for e in sorted(diagram.edges, key=sort_key)
        if not (
            center in _edge_ends(sub, e)
            and len(_edge_ends(sub, e)) == 2
            and (_edge_ends(sub, e) - {center}).issubset(roots)
        )
    )
    if stray:
        items.append(
            ReportItem(
                "star-shape",
                FAIL,
                f"{len(stray)} edge(s) do not join the center to a root",
                witness=stray,
            )
        )
    else:
        items.append(ReportItem("star-shape", PASS, "every edge joins the center to a root"))

    accesses = {r: [] for r in diagram.roots}
    for e in sorted(diagram.edges, key=sort_key):
        ends = _edge_ends(sub, e)
        if center in ends and len(ends) == 2:
            other = (ends - {center}).pop()
            if other in accesses:
                accesses[other].append(e)
    cut_off = tuple(r for r in diagram.roots if not accesses[r])
    if cut_off:
        items.append(
            ReportItem(
                "root-access",
                FAIL,
                f"root(s) with no edge to the center: {len(cut_off)}",
                witness=cut_off,
            )
        )
    else:
        items.append(ReportItem("root-access", PASS, "every root reaches the center"))

    d = diagram.degree
    bound = 2 * d - 2
    count = len(diagram.edges)
    if d < 3:
        items.append(
            ReportItem("edge-budget", FAIL, f"needs at least 3 roots, got {d}")
        )
    elif count > bound:
        items.append(
            ReportItem(
                "edge-budget",
                FAIL,
                f"{count} edges exceed the budget 2d-2 = {bound} for degree {d}",
            )
        )
    else:
        items.append(
            ReportItem("edge-budget", PASS, f"{count} edge(s) within budget {bound}")
        )

    bad_pairs = []
    for r in diagram.roots:
        parallel = accesses[r]
        for i in range(len(parallel)):
            for j in range(i + 1, len(parallel)):
                regions = face_components(sub, (parallel[i], parallel[j]))
                sides = {regions.vertex_class(v) for v in sub.vertices}
                sides.discard(None)
                if len(sides) < 2:
                    bad_pairs.append((r, parallel[i], parallel[j]))
    if bad_pairs:
        items.append(
            ReportItem(
                "bigon-separation",
                FAIL,
                f"{len(bad_pairs)} parallel pair(s) bound an empty lens",
                witness=tuple(bad_pairs),
            )
        )
    else:
        items.append(
            ReportItem(
                "bigon-separation", PASS, "every parallel pair separates the diagram"
            )
        )

    return Report("channel-diagram", tuple(items))


# ---------------------------------------------------------------------------
# newton graphs


@dataclass(frozen=True, eq=False)
class AbstractNewtonGraph:
    """A graph self-map together with its channel diagram and level data.

    ``graph_map`` is a self-map of the graph (dart paths may be longer
    than one edge); ``level`` declares how many iterations the deepest
    edge needs to fall into the channel; ``degree`` is the degree of the
    branched cover the map is meant to extend to.
    """

    graph_map: object
    channel: ChannelDiagram
    level: int
    degree: int


def _check_channel_membership(host, channel):
    known = set(host.vertices)
    if channel.center not in known:
        raise DanglingReference("vertex", channel.center, "channel center")
    for r in channel.roots:
        if r not in known:
            raise DanglingReference("vertex", r, "channel roots")
    host_edges = set(host.edges)
    for e in sorted(channel.edges, key=sort_key):
        if e not in host_edges:
            raise DanglingReference("edge", e, "channel edges")


def _image_edge_sets(gm):
    host = gm.domain
    return {
        e: frozenset(host.edge_of(d) for d in gm.dart_path(e[0]))
        for e in host.edges
    }


def _edge_levels(gm, channel_edges):
    """Iterations needed for each edge to fall into the channel.

    Returns ``(levels, unreachable)`` where ``unreachable`` lists edges
    whose forward images never land entirely inside the channel.
    """
    host = gm.domain
    images = _image_edge_sets(gm)
    levels = {e: 0 for e in channel_edges}
    remaining = [e for e in host.edges if e not in levels]
    changed = True
    while remaining and changed:
        changed = False
        still = []
        for e in remaining:
            if all(x in levels for x in images[e]):
                levels[e] = 1 + max(levels[x] for x in images[e])
                changed = True
            else:
                still.append(e)
        remaining = still
    return levels, tuple(sorted(remaining, key=sort_key))


def validate_newton_graph(graph):
    """Check the Newton graph axioms against the declared level and degree.

    channel-fixed         valid channel diagram, proper subgraph, fixed
                          pointwise, degree matching the root count
    degree-extension      visible fibers fit the degree and the sector
                          test admits a regular extension
    level-stratification  every edge falls into the channel, deepest at
                          the declared level (partial: maximality of the
                          level itself is not graph-visible)
    root-channel-count    each root meets exactly (local degree - 1) >= 1
                          channel edges and borders the complement
    critical-budget       total branching at most 2d-2
    complement-connected  the closure of the complement of the channel
                          is connected
    """
    gm = graph.graph_map
    if gm.domain is not gm.codomain:
        raise InvalidGraphMap("newton graph dynamics must be a self-map")
    host = gm.domain
    channel = graph.channel
    _check_channel_membership(host, channel)
    work = _working_graph_map(gm)
    items = []

    # -- channel-fixed ------------------------------------------------------
    problems = []
    witness = []
    channel_report = validate_channel_diagram(channel)
    if channel_report.has_failures:
        failed = [it.item_id for it in channel_report.items if it.status == FAIL]
        problems.append("channel diagram invalid: " + ", ".join(failed))
    if graph.degree != channel.degree:
        problems.append(
            f"declared degree {graph.degree} does not match {channel.degree} roots"
        )
    if not channel.edges < frozenset(host.edges):
        problems.append("channel must be a proper subgraph of the graph")
    moved = [
        v
        for v in (channel.center,) + channel.roots
        if gm.vertex_image(v) != v
    ]
    if moved:
        problems.append(f"{len(moved)} channel vertex(es) not fixed")
        witness.extend(moved)
    drifting = [
        e
        for e in sorted(channel.edges, key=sort_key)
        if gm.dart_path(e[0]) != (e[0],) or gm.dart_path(e[1]) != (e[1],)
    ]
    if drifting:
        problems.append(f"{len(drifting)} channel edge(s) not fixed pointwise")
        witness.extend(drifting)
    if problems:
        items.append(
            ReportItem(
                "channel-fixed",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    else:
        items.append(
            ReportItem(
                "channel-fixed",
                PASS,
                "channel diagram valid and fixed pointwise by the dynamics",
            )
        )

    # -- degree-extension ---------------------------------------------------
    d = graph.degree
    fibers = {}
    for v in work.domain.vertices:
        fibers.setdefault(work.vertex_image(v), []).append(v)
    overfull = []
    for y in sorted(fibers, key=sort_key):
        total = sum(local_degree(work, v) for v in fibers[y])
        if total > d:
            overfull.append((y, total))
    extension = check_regular_extension(work)
    if overfull or not extension.ok:
        parts = []
        if overfull:
            parts.append(f"{len(overfull)} fiber(s) exceed degree {d}")
        if not extension.ok:
            parts.append(f"{len(extension.conflicts)} face sector conflict(s)")
        items.append(
            ReportItem(
                "degree-extension",
                FAIL,
                "; ".join(parts),
                witness=tuple(overfull) + tuple(extension.conflicts),
            )
        )
    else:
        items.append(
            ReportItem(
                "degree-extension",
                PASS,
                f"sector test passed and every visible fiber fits degree {d}",
            )
        )

    # -- level-stratification -----------------------------------------------
    problems = []
    witness = []
    levels, unreachable = _edge_levels(gm, channel.edges)
    if unreachable:
        problems.append(f"{len(unreachable)} edge(s) never fall into the channel")
        witness.extend(unreachable)
    images = _image_edge_sets(gm)
    leaking = [
        e
        for e in sorted(channel.edges, key=sort_key)
        if not images[e] <= channel.edges
    ]
    if leaking:
        problems.append(f"{len(leaking)} channel edge(s) map outside the channel")
        witness.extend(leaking)
    if not unreachable and not leaking:
        deepest = max(levels.values()) if levels else 0
        if deepest != graph.level:
            problems.append(
                f"declared level {graph.level} but the deepest edge has level {deepest}"
            )
    if not host.is_connected():
        problems.append("graph is not connected")
    if problems:
        items.append(
            ReportItem(
                "level-stratification",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    else:
        items.append(
            ReportItem(
                "level-stratification",
                PARTIAL,
                f"levels 0..{graph.level} consistent and decreasing; "
                "maximality of the declared level is not graph-visible",
            )
        )

    # -- root-channel-count -------------------------------------------------
    problems = []
    witness = []
    complement = [e for e in host.edges if e not in channel.edges]
    border = set()
    for e in complement:
        border |= _edge_ends(host, e)
    for r in channel.roots:
        expected = local_degree(work, r) - 1
        got = sum(1 for e in channel.edges if r in _edge_ends(host, e))
        if expected < 1:
            problems.append(f"root {r!r} is not a branch point")
            witness.append(r)
        elif got != expected:
            problems.append(
                f"root {r!r} meets {got} channel edge(s), expected {expected}"
            )
            witness.append(r)
        if r not in border:
            problems.append(f"root {r!r} does not border the complement")
            witness.append(r)
    if channel.center in border:
        problems.append("center borders the complement of the channel")
        witness.append(channel.center)
    if problems:
        items.append(
            ReportItem(
                "root-channel-count",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    else:
        items.append(
            ReportItem(
                "root-channel-count",
                PASS,
                "each root meets exactly its local degree minus one channel edges",
            )
        )

    # -- critical-budget ----------------------------------------------------
    branching = {
        v: local_degree(work, v) - 1
        for v in work.domain.vertices
        if local_degree(work, v) >= 2
    }
    total = sum(branching.values())
    bound = 2 * d - 2
    if total > bound:
        items.append(
            ReportItem(
                "critical-budget",
                FAIL,
                f"total branching {total} exceeds 2d-2 = {bound}",
                witness=tuple(sorted(branching.items(), key=lambda kv: sort_key(kv[0]))),
            )
        )
    else:
        items.append(
            ReportItem(
                "critical-budget", PASS, f"total branching {total} within bound {bound}"
            )
        )

    # -- complement-connected -----------------------------------------------
    if not complement:
        items.append(
            ReportItem(
                "complement-connected",
                PASS,
                "complement of the channel is empty",
            )
        )
    else:
        sub = _induced_submap(host, sorted(complement, key=sort_key))
        if sub.is_connected():
            items.append(
                ReportItem(
                    "complement-connected",
                    PASS,
                    "closure of the complement of the channel is connected",
                )
            )
        else:
            items.append(
                ReportItem(
                    "complement-connected",
                    FAIL,
                    "closure of the complement of the channel is disconnected",
                )
            )

    return Report("newton-graph", tuple(items))


# ---------------------------------------------------------------------------
# orbit and separation mechanics


def ray_orbit(gm, edge, absorbing, max_iter=None):
    """Preperiod and period of an edge orbit, discarding absorbed edges.

    Iterates the edge-set image of ``edge`` under the self-map ``gm``,
    removing at every step the edges in ``absorbing`` (typically the
    invariant subgraph the orbit is allowed to fall onto).  Returns
    ``(preperiod, period)`` of the remaining sequence of edge sets and
    raises :class:`Unresolved` when no repeat shows up within the budget.
    """
    host = gm.domain
    a, b = tuple(edge)
    if not host.has_edge((a, b)) and not host.has_edge((b, a)):
        raise DanglingReference("edge", (a, b), "ray orbit")
    if gm.domain is not gm.codomain:
        raise InvalidGraphMap("edge orbits require a self-map")
    sink = frozenset(edge_key(*tuple(p)) for p in absorbing)
    if max_iter is None:
        max_iter = max(4, len(host.edges) ** 2)

    state = frozenset({edge_key(a, b)}) - sink
    seen = {state: 0}
    for step in range(1, max_iter + 1):
        nxt = set()
        for pair in state:
            for d in gm.dart_path(pair[0]):
                nxt.add(host.edge_of(d))
        state = frozenset(nxt) - sink
        if state in seen:
            first = seen[state]
            return first, step - first
        seen[state] = step
    raise Unresolved(f"edge orbit unresolved after {max_iter} step(s)")


# ---------------------------------------------------------------------------
# extended newton graphs


@dataclass(frozen=True, eq=False)
class HubbardTreeSpec:
    """A declared invariant tree of the extended graph.

    Periodic trees declare a period ``>= 2``, the landing vertex their
    periodic access ray ends at, and the external ray period of the
    polynomial realizing the tree (supplied data, not computable from the
    graph).  Preperiodic trees declare the number of iterations until the
    image is a periodic tree.  ``is_poirier_valid`` asserts the expansivity
    and angle axioms that have no combinatorial test here; the flag is
    taken on trust and surfaced by the validator.
    """

    name: str
    vertices: tuple
    edges: frozenset
    kind: str
    period: object = None
    preperiod: object = None
    landing_vertex: object = None
    external_ray_period: object = None
    critical_marks: tuple = ()
    postcritical_marks: tuple = ()
    is_poirier_valid: bool = True


@dataclass(frozen=True, eq=False)
class RaySpec:
    """A declared access ray: one edge from the core graph to a tree.

    ``initial`` names the endpoint on the core graph, ``terminal`` the
    tree vertex the ray lands at.  ``twist`` locates the ray among the
    fundamental-group choices of its isotopy class and ``image_offset``
    shifts the twist of its image; both feed the twist equivalence solver
    and are ignored by validation.
    """

    name: str
    edge: tuple
    kind: str
    period: object = None
    preperiod: object = None
    initial: object = None
    terminal: object = None
    twist: int = 0
    image_offset: int = 0


@dataclass(frozen=True, eq=False)
class ExtendedNewtonGraph:
    """A graph self-map carrying a Newton graph, trees, and access rays.

    ``edge_types`` assigns every edge of the graph exactly one of "N"
    (core Newton graph), "H" (tree edge), "R" (ray edge).  The inner
    Newton graph is derived by restriction, not stored, so it can never
    disagree with the ambient data.
    """

    graph_map: object
    center: object
    roots: tuple
    channel_edges: frozenset
    level: int
    degree: int
    edge_types: dict
    trees: tuple
    rays: tuple


_EDGE_TYPES = ("N", "H", "R")
_TREE_KINDS = ("periodic", "preperiodic")


def _typed_edge_sets(x, host):
    """Normalize the edge typing; unknown edges or types raise."""
    host_edges = frozenset(host.edges)
    typed = {}
    for e, t in x.edge_types.items():
        ek = edge_key(*tuple(e))
        if ek not in host_edges:
            raise DanglingReference("edge", ek, "edge typing")
        if t not in _EDGE_TYPES:
            raise ValueError(f"unknown edge type {t!r} for edge {ek!r}")
        typed[ek] = t
    sets = {t: frozenset(e for e, s in typed.items() if s == t) for t in _EDGE_TYPES}
    return typed, sets["N"], sets["H"], sets["R"]


def _check_extended_membership(x, host):
    known = set(host.vertices)
    host_edges = frozenset(host.edges)
    for t in x.trees:
        if t.kind not in _TREE_KINDS:
            raise ValueError(f"unknown tree kind {t.kind!r} for {t.name!r}")
        for v in t.vertices:
            if v not in known:
                raise DanglingReference("vertex", v, f"tree {t.name!r}")
        for e in t.edges:
            if edge_key(*tuple(e)) not in host_edges:
                raise DanglingReference("edge", tuple(e), f"tree {t.name!r}")
    for r in x.rays:
        if r.kind not in _TREE_KINDS:
            raise ValueError(f"unknown ray kind {r.kind!r} for {r.name!r}")
        if edge_key(*tuple(r.edge)) not in host_edges:
            raise DanglingReference("edge", tuple(r.edge), f"ray {r.name!r}")
        for v in (r.initial, r.terminal):
            if v not in known:
                raise DanglingReference("vertex", v, f"ray {r.name!r}")
    for e in x.channel_edges:
        if edge_key(*tuple(e)) not in host_edges:
            raise DanglingReference("edge", tuple(e), "channel edges")
    if x.center not in known:
        raise DanglingReference("vertex", x.center, "center")
    for v in x.roots:
        if v not in known:
            raise DanglingReference("vertex", v, "roots")


def _tree_state(tree):
    return (
        frozenset(edge_key(*tuple(e)) for e in tree.edges),
        frozenset(tree.vertices),
    )


def _advance_state(gm, state):
    host = gm.domain
    edges, verts = state
    new_edges = frozenset(
        host.edge_of(d) for e in edges for d in gm.dart_path(e[0])
    )
    new_verts = frozenset(gm.vertex_image(v) for v in verts) | frozenset(
        v for e in new_edges for v in _edge_ends(host, e)
    )
    return (new_edges, new_verts)


def _state_within(small, big):
    """Whether one edge-and-vertex state is contained in another.

    Tree images may be proper subtrees of the declared target: an edge
    whose preimage sees no branching simply is not covered.  Containment,
    not equality, is the right return notion.
    """
    return small[0] <= big[0] and small[1] <= big[1]


def _tree_shape_problems(host, tree):
    """Structural defects: not a tree on exactly the declared vertices."""
    problems = []
    edges = sorted((edge_key(*tuple(e)) for e in tree.edges), key=sort_key)
    declared = set(tree.vertices)
    if not declared:
        return [f"tree {tree.name!r} declares no vertices"]
    for e in edges:
        if not _edge_ends(host, e) <= declared:
            problems.append(
                f"tree {tree.name!r} edge {e!r} leaves the declared vertex set"
            )
    if problems:
        return problems
    sub = _induced_submap(host, edges, extra_vertices=tree.vertices)
    if not sub.is_connected():
        problems.append(f"tree {tree.name!r} is not connected")
    if len(tree.vertices) != len(edges) + 1:
        problems.append(
            f"tree {tree.name!r} has {len(edges)} edge(s) on "
            f"{len(tree.vertices)} vertices, not acyclic"
        )
    return problems


def _ray_image_class(gm, host, edge, n_edges):
    """Non-core edges in the image path of a ray edge.

    Two rays land in the same group when their images run along the same
    ray edge; the core edges their images may also cross are immaterial.
    """
    return (
        frozenset(host.edge_of(d) for d in gm.dart_path(tuple(edge)[0])) - n_edges
    )


def _postcritical_set(gm, work):
    """Vertices on the strict forward orbit of some critical point."""
    post = set()
    for c in critical_points(work):
        v = work.vertex_image(c)
        while v not in post:
            post.add(v)
            v = gm.vertex_image(v)
    return post


def _orbit_budget(x):
    declared = sum(
        (t.period if isinstance(t.period, int) else 0)
        + (t.preperiod if isinstance(t.preperiod, int) else 0)
        for t in x.trees
    )
    return max(8, 2 * declared + len(x.trees) + 4)


def validate_extended(x):
    """Check the extended graph axioms, one report item per condition.

    edge-typing          every edge carries exactly one of the types N
                         (core graph), H (tree), R (ray), consistent with
                         the declared trees, rays, and channel; every
                         vertex lies on the core graph or on a tree
    newton-subgraph      the dynamics restrict to the N-edges, the
                         restriction is a valid Newton graph, and its
                         level is minimal: one level lower does not yet
                         separate the trees
    periodic-trees       declared periodic trees are trees disjoint from
                         the core, map back into themselves at exactly
                         their declared minimal period >= 2 with every
                         intermediate image carried by a declared
                         periodic tree, and carry valid marks and a
                         fixed landing vertex
    preperiodic-trees    declared preperiodic trees map into a periodic
                         tree in exactly the declared number of steps
                         and contain a critical or postcritical vertex
    trees-separated      distinct trees lie in distinct complementary
                         regions of the core graph
    periodic-rays        exactly one periodic ray per periodic tree,
                         landing at its landing vertex, with computed
                         period equal to the declaration and to the tree
                         period times the external ray period
    preperiodic-rays     preperiodic ray orbits match declarations; rays
                         into a periodic tree have preperiod 1 and map
                         onto the image of that tree's periodic ray;
                         every preperiodic tree is reached by at least
                         one; on each tree, every vertex sharing its
                         image with a ray landing point carries a ray of
                         its own, and rays over one image point run
                         along the same image ray
    regular-extension    the subdivided map passes the face sector test
    degree-budget        total branching equals 2d-2 exactly

    Trees whose interior axioms are not declared valid (their
    ``is_poirier_valid`` flag) turn their item unverified rather than
    failed: nothing combinatorial here can decide those axioms.
    """
    gm = x.graph_map
    if gm.domain is not gm.codomain:
        raise InvalidGraphMap("extended graph dynamics must be a self-map")
    host = gm.domain
    _check_extended_membership(x, host)
    typed, n_edges, h_edges, r_edges = _typed_edge_sets(x, host)
    work = _working_graph_map(gm)
    connected = host.is_connected()
    core_vertices = set()
    for e in n_edges:
        core_vertices |= _edge_ends(host, e)
    tree_groups = [t.vertices for t in x.trees]
    items = []

    # -- edge-typing ------------------------------------------------------------
    problems = []
    witness = []
    untyped = sorted((e for e in host.edges if e not in typed), key=sort_key)
    if untyped:
        problems.append(f"{len(untyped)} edge(s) carry no type")
        witness.extend(untyped)
    tree_edges = set()
    tree_vertices = {}
    for t in x.trees:
        for e in t.edges:
            ek = edge_key(*tuple(e))
            if ek in tree_edges:
                problems.append(f"edge {ek!r} belongs to two trees")
                witness.append(ek)
            tree_edges.add(ek)
        for v in t.vertices:
            if v in tree_vertices:
                problems.append(
                    f"vertex {v!r} belongs to trees "
                    f"{tree_vertices[v]!r} and {t.name!r}"
                )
                witness.append(v)
            tree_vertices[v] = t.name
    if tree_edges != set(h_edges):
        problems.append("H-typed edges differ from the union of tree edges")
        witness.extend(sorted(tree_edges ^ set(h_edges), key=sort_key))
    ray_edges = set()
    for r in x.rays:
        ek = edge_key(*tuple(r.edge))
        if ek in ray_edges:
            problems.append(f"edge {ek!r} is declared by two rays")
            witness.append(ek)
        ray_edges.add(ek)
    if ray_edges != set(r_edges):
        problems.append("R-typed edges differ from the declared rays")
        witness.extend(sorted(ray_edges ^ set(r_edges), key=sort_key))
    stray_channel = sorted(
        (e for e in x.channel_edges if edge_key(*tuple(e)) not in n_edges),
        key=sort_key,
    )
    if stray_channel:
        problems.append("channel edge(s) not typed N")
        witness.extend(stray_channel)
    overlap = sorted(set(tree_vertices) & core_vertices, key=sort_key)
    if overlap:
        problems.append(f"{len(overlap)} tree vertex(es) lie on the core graph")
        witness.extend(overlap)
    stranded = sorted(
        (
            v
            for v in host.vertices
            if v not in core_vertices and v not in tree_vertices
        ),
        key=sort_key,
    )
    if stranded:
        problems.append(
            f"{len(stranded)} vertex(es) lie on neither the core graph nor a tree"
        )
        witness.extend(stranded)
    for r in x.rays:
        ek = edge_key(*tuple(r.edge))
        ends = _edge_ends(host, ek)
        if ends != {r.initial, r.terminal}:
            problems.append(f"ray {r.name!r} endpoints do not match its edge")
            witness.append(ek)
            continue
        if r.initial not in core_vertices:
            problems.append(f"ray {r.name!r} does not start on the core graph")
            witness.append(r.initial)
        if r.terminal not in tree_vertices:
            problems.append(f"ray {r.name!r} does not land on a tree")
            witness.append(r.terminal)
    if problems:
        items.append(
            ReportItem(
                "edge-typing", FAIL, "; ".join(problems), witness=tuple(witness) or None
            )
        )
    else:
        items.append(
            ReportItem(
                "edge-typing",
                PASS,
                "every edge typed once and every vertex accounted for, "
                "consistent with trees, rays, and channel",
            )
        )

    # -- newton-subgraph --------------------------------------------------------
    problems = []
    witness = []
    inner_levels = None
    if not n_edges:
        problems.append("no N-typed edges")
    else:
        core = _induced_submap(host, sorted(n_edges, key=sort_key))
        core_verts = set(core.vertices)
        if x.center not in core_verts:
            problems.append("center is not on the core graph")
        wrong = sorted((r for r in x.roots if r not in core_verts), key=sort_key)
        if wrong:
            problems.append("root(s) not on the core graph")
            witness.extend(wrong)
        escapes = sorted(
            (v for v in core_verts if gm.vertex_image(v) not in core_verts),
            key=sort_key,
        )
        if escapes:
            problems.append(f"{len(escapes)} core vertex(es) map off the core")
            witness.extend(escapes)
        leaky = sorted(
            (
                e
                for e in n_edges
                if any(host.edge_of(d) not in n_edges for d in gm.dart_path(e[0]))
            ),
            key=sort_key,
        )
        if leaky:
            problems.append(f"{len(leaky)} core edge(s) map across non-core edges")
            witness.extend(leaky)
        if not problems:
            inner_gm = build_weak_graph_map(
                core,
                core,
                {v: gm.vertex_image(v) for v in core.vertices},
                {e[0]: gm.dart_path(e[0]) for e in sorted(n_edges, key=sort_key)},
            )
            channel = channel_diagram(
                core, x.center, x.roots, sorted(x.channel_edges, key=sort_key)
            )
            inner = AbstractNewtonGraph(inner_gm, channel, x.level, x.degree)
            inner_report = validate_newton_graph(inner)
            failed = [it.item_id for it in inner_report.items if it.status == FAIL]
            if failed:
                problems.append("inner graph fails: " + ", ".join(failed))
                witness.extend(failed)
            else:
                inner_levels, _ = _edge_levels(inner_gm, channel.edges)
    minimality = "level minimality not evaluated"
    if not problems and inner_levels is not None:
        if not x.trees:
            minimality = "level minimality vacuous: no trees declared"
        elif not connected:
            minimality = "level minimality not evaluated: graph is not connected"
        else:
            shallow = sorted(
                (e for e, k in inner_levels.items() if k <= x.level - 1),
                key=sort_key,
            )
            ok, _ = trees_separated(host, shallow, tree_groups)
            if ok:
                problems.append(
                    f"trees already separated at level {x.level - 1}; "
                    "the declared level is not minimal"
                )
            else:
                minimality = (
                    f"level {x.level} is minimal: level {x.level - 1} does "
                    "not separate the trees"
                )
    if problems:
        items.append(
            ReportItem(
                "newton-subgraph",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    else:
        items.append(
            ReportItem(
                "newton-subgraph",
                PASS,
                "dynamics restrict to a valid core Newton graph "
                "(inner level maximality partial as always); " + minimality,
            )
        )

    # -- periodic-trees / preperiodic-trees --------------------------------------
    crit = set(critical_points(work))
    post = _postcritical_set(gm, work)
    budget = _orbit_budget(x)
    periodic_states = [_tree_state(t) for t in x.trees if t.kind == "periodic"]
    all_states = [_tree_state(t) for t in x.trees]

    problems = []
    witness = []
    for t in x.trees:
        if t.kind != "periodic":
            continue
        shape = _tree_shape_problems(host, t)
        if shape:
            problems.extend(shape)
            witness.append(t.name)
            continue
        if not isinstance(t.period, int) or t.period < 2:
            problems.append(
                f"tree {t.name!r} must declare an integer period >= 2, "
                f"got {t.period!r}"
            )
            witness.append(t.name)
            continue
        start = _tree_state(t)
        state = start
        returned = None
        through = []
        for k in range(1, budget + 1):
            state = _advance_state(gm, state)
            if _state_within(state, start):
                returned = k
                break
            through.append(state)
        if returned is None:
            problems.append(
                f"tree {t.name!r} never maps back into itself within "
                f"{budget} steps"
            )
            witness.append(t.name)
            continue
        if returned != t.period:
            problems.append(
                f"tree {t.name!r} maps back into itself after {returned} "
                f"step(s), declared {t.period}"
            )
            witness.append(t.name)
        for k, mid in enumerate(through, start=1):
            if not any(_state_within(mid, s) for s in periodic_states):
                problems.append(
                    f"iterate {k} of tree {t.name!r} is not carried by a "
                    "declared periodic tree"
                )
                witness.append(t.name)
        bad_marks = sorted(
            (v for v in t.critical_marks if v not in crit or v not in t.vertices),
            key=sort_key,
        )
        bad_marks += sorted(
            (v for v in t.postcritical_marks if v not in post or v not in t.vertices),
            key=sort_key,
        )
        if bad_marks:
            problems.append(f"tree {t.name!r} carries invalid marks")
            witness.extend(bad_marks)
        if t.landing_vertex not in set(t.vertices):
            problems.append(f"tree {t.name!r} landing vertex is not a tree vertex")
            witness.append(t.name)
        else:
            v = t.landing_vertex
            for _ in range(t.period):
                v = gm.vertex_image(v)
            if v != t.landing_vertex:
                problems.append(
                    f"tree {t.name!r} landing vertex is not fixed by the return map"
                )
                witness.append(t.landing_vertex)
        if not isinstance(t.external_ray_period, int) or t.external_ray_period < 1:
            problems.append(
                f"tree {t.name!r} must declare an external ray period >= 1"
            )
            witness.append(t.name)
    untrusted = tuple(
        t.name for t in x.trees if t.kind == "periodic" and not t.is_poirier_valid
    )
    if problems:
        items.append(
            ReportItem(
                "periodic-trees",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    elif untrusted:
        items.append(
            ReportItem(
                "periodic-trees",
                UNVERIFIED,
                "tree-interior axioms not declared valid for: "
                + ", ".join(untrusted)
                + "; nothing here can check them",
                witness=untrusted,
            )
        )
    else:
        items.append(
            ReportItem(
                "periodic-trees",
                PASS,
                "periodic trees map back into themselves at their declared "
                "minimal periods through declared trees; interior axioms "
                "accepted as declared (landing repulsion not "
                "combinatorially verifiable)",
            )
        )

    problems = []
    witness = []
    for t in x.trees:
        if t.kind != "preperiodic":
            continue
        shape = _tree_shape_problems(host, t)
        if shape:
            problems.extend(shape)
            witness.append(t.name)
            continue
        if not isinstance(t.preperiod, int) or t.preperiod < 1:
            problems.append(
                f"tree {t.name!r} must declare an integer preperiod >= 1, "
                f"got {t.preperiod!r}"
            )
            witness.append(t.name)
            continue
        state = _tree_state(t)
        landed = None
        through = []
        for k in range(1, budget + 1):
            state = _advance_state(gm, state)
            if any(_state_within(state, s) for s in periodic_states):
                landed = k
                break
            through.append((k, state))
        if landed is None:
            problems.append(
                f"tree {t.name!r} never maps into a declared periodic tree "
                f"within {budget} steps"
            )
            witness.append(t.name)
            continue
        if landed != t.preperiod:
            problems.append(
                f"tree {t.name!r} maps into a periodic tree after {landed} "
                f"step(s), declared {t.preperiod}"
            )
            witness.append(t.name)
        for k, mid in through:
            if not any(_state_within(mid, s) for s in all_states):
                problems.append(
                    f"iterate {k} of tree {t.name!r} is not carried by a "
                    "declared tree"
                )
                witness.append(t.name)
        if not (set(t.vertices) & (crit | post)):
            problems.append(
                f"tree {t.name!r} contains no critical or postcritical vertex"
            )
            witness.append(t.name)
        bad_marks = sorted(
            (v for v in t.critical_marks if v not in crit or v not in t.vertices),
            key=sort_key,
        )
        bad_marks += sorted(
            (v for v in t.postcritical_marks if v not in post or v not in t.vertices),
            key=sort_key,
        )
        if bad_marks:
            problems.append(f"tree {t.name!r} carries invalid marks")
            witness.extend(bad_marks)
    untrusted = tuple(
        t.name for t in x.trees if t.kind == "preperiodic" and not t.is_poirier_valid
    )
    count = sum(1 for t in x.trees if t.kind == "preperiodic")
    if problems:
        items.append(
            ReportItem(
                "preperiodic-trees",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    elif untrusted:
        items.append(
            ReportItem(
                "preperiodic-trees",
                UNVERIFIED,
                "tree-interior axioms not declared valid for: "
                + ", ".join(untrusted)
                + "; nothing here can check them",
                witness=untrusted,
            )
        )
    else:
        items.append(
            ReportItem(
                "preperiodic-trees",
                PASS,
                f"{count} preperiodic tree(s) reach periodic trees as declared"
                if count
                else "no preperiodic trees declared",
            )
        )

    # -- trees-separated ----------------------------------------------------------
    if not x.trees:
        items.append(ReportItem("trees-separated", PASS, "no trees declared"))
    elif not connected:
        items.append(
            ReportItem(
                "trees-separated",
                FAIL,
                "graph is not connected, so complementary regions of the "
                "core graph are not well defined",
            )
        )
    else:
        ok, detail = trees_separated(host, sorted(n_edges, key=sort_key), tree_groups)
        if ok:
            items.append(
                ReportItem(
                    "trees-separated",
                    PASS,
                    "distinct trees lie in distinct regions of the core graph",
                )
            )
        else:
            items.append(ReportItem("trees-separated", FAIL, detail))

    # -- periodic-rays ------------------------------------------------------------
    vertex_owner = {}
    for t in x.trees:
        for v in t.vertices:
            vertex_owner[v] = t
    rays_at = {t.name: [] for t in x.trees}
    for r in x.rays:
        owner = vertex_owner.get(r.terminal)
        if owner is not None:
            rays_at[owner.name].append(r)
    problems = []
    witness = []
    for t in x.trees:
        periodic_here = [r for r in rays_at[t.name] if r.kind == "periodic"]
        if t.kind == "periodic":
            if len(periodic_here) != 1:
                problems.append(
                    f"tree {t.name!r} has {len(periodic_here)} periodic ray(s), "
                    "expected exactly 1"
                )
                witness.append(t.name)
                continue
            ray = periodic_here[0]
            if ray.terminal != t.landing_vertex:
                problems.append(
                    f"ray {ray.name!r} lands at {ray.terminal!r}, not the "
                    f"landing vertex of {t.name!r}"
                )
                witness.append(ray.name)
            expected = None
            if isinstance(t.period, int) and isinstance(t.external_ray_period, int):
                expected = t.period * t.external_ray_period
            pre, per = ray_orbit(gm, ray.edge, n_edges)
            if pre != 0:
                problems.append(
                    f"ray {ray.name!r} is not periodic (computed preperiod {pre})"
                )
                witness.append(ray.name)
            elif ray.period != per:
                problems.append(
                    f"ray {ray.name!r} declared period {ray.period!r}, computed {per}"
                )
                witness.append(ray.name)
            elif expected is not None and per != expected:
                problems.append(
                    f"ray {ray.name!r} has period {per}, expected "
                    f"{t.period} x {t.external_ray_period} = {expected}"
                )
                witness.append(ray.name)
        elif periodic_here:
            problems.append(f"preperiodic tree {t.name!r} is hit by periodic ray(s)")
            witness.extend(r.name for r in periodic_here)
    if problems:
        items.append(
            ReportItem(
                "periodic-rays",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    else:
        items.append(
            ReportItem(
                "periodic-rays",
                PASS,
                "exactly one periodic ray per periodic tree, landing and "
                "period as declared",
            )
        )

    # -- preperiodic-rays -----------------------------------------------------------
    problems = []
    witness = []
    for r in x.rays:
        if r.kind != "preperiodic":
            continue
        pre, per = ray_orbit(gm, r.edge, n_edges)
        if pre < 1:
            problems.append(f"ray {r.name!r} is periodic, not preperiodic")
            witness.append(r.name)
            continue
        if r.preperiod != pre:
            problems.append(
                f"ray {r.name!r} declared preperiod {r.preperiod!r}, computed {pre}"
            )
            witness.append(r.name)
        owner = vertex_owner.get(r.terminal)
        if owner is not None and owner.kind == "periodic":
            if pre != 1:
                problems.append(
                    f"ray {r.name!r} lands on periodic tree {owner.name!r} "
                    f"with preperiod {pre}, expected 1"
                )
                witness.append(r.name)
            anchor = [p for p in rays_at[owner.name] if p.kind == "periodic"]
            if len(anchor) == 1 and _ray_image_class(
                gm, host, r.edge, n_edges
            ) != _ray_image_class(gm, host, anchor[0].edge, n_edges):
                problems.append(
                    f"ray {r.name!r} does not map onto the image of the "
                    f"periodic ray at tree {owner.name!r}"
                )
                witness.append(r.name)
    for t in x.trees:
        landing = [r for r in rays_at[t.name] if r.kind == "preperiodic"]
        if t.kind == "preperiodic" and not landing:
            problems.append(f"preperiodic tree {t.name!r} has no preperiodic ray")
            witness.append(t.name)
    # Lift coverage.  A ray landing at a tree vertex pulls back through the
    # tree dynamics: every vertex of the tree with the same image as the
    # landing point picks up a lift of the image ray.  Each such vertex must
    # therefore carry a ray of its own, and the rays over one image point
    # must all run along the same image ray.
    for t in x.trees:
        here = rays_at[t.name]
        if not here:
            continue
        served = {r.terminal for r in here}
        targets = {gm.vertex_image(r.terminal) for r in here}
        for v in t.vertices:
            if gm.vertex_image(v) in targets and v not in served:
                problems.append(
                    f"tree {t.name!r}: vertex {v!r} shares its image with a "
                    "ray landing point but carries no ray of its own"
                )
                witness.append(v)
        groups = {}
        for r in here:
            groups.setdefault(gm.vertex_image(r.terminal), []).append(r)
        for w in sorted(groups, key=sort_key):
            members = groups[w]
            classes = {_ray_image_class(gm, host, r.edge, n_edges) for r in members}
            if len(classes) > 1:
                problems.append(
                    f"tree {t.name!r}: rays landing over {w!r} run along "
                    "different image rays"
                )
                witness.extend(r.name for r in members)
    if problems:
        items.append(
            ReportItem(
                "preperiodic-rays",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    else:
        count = sum(1 for r in x.rays if r.kind == "preperiodic")
        items.append(
            ReportItem(
                "preperiodic-rays",
                PASS,
                f"{count} preperiodic ray(s) match their declarations"
                if count
                else "no preperiodic rays declared",
            )
        )

    # -- regular-extension ------------------------------------------------------
    extension = check_regular_extension(work)
    if extension.ok:
        items.append(
            ReportItem(
                "regular-extension",
                PASS,
                "face sector test passed on the subdivided map",
            )
        )
    else:
        items.append(
            ReportItem(
                "regular-extension",
                FAIL,
                f"{len(extension.conflicts)} face sector conflict(s)",
                witness=tuple(extension.conflicts),
            )
        )

    # -- degree-budget ------------------------------------------------------------
    problems = []
    witness = []
    total = 0
    inner_total = 0
    for v in work.domain.vertices:
        b = local_degree(work, v) - 1
        total += b
        if v in core_vertices:
            inner_total += b
    bound = 2 * x.degree - 2
    if total != bound:
        problems.append(f"total branching {total} != 2d-2 = {bound}")
    if problems:
        items.append(
            ReportItem(
                "degree-budget",
                FAIL,
                "; ".join(problems),
                witness=tuple(witness) or None,
            )
        )
    else:
        items.append(
            ReportItem(
                "degree-budget",
                PASS,
                f"total branching {total} equals 2d-2 = {bound} "
                f"({inner_total} on the core, {total - inner_total} outside)",
            )
        )

    return Report("extended-newton-graph", tuple(items))


def ray_period_data(x, ray):
    """Computed orbit length of a ray against its declaration.

    Returns ``(value, verified)`` where ``value`` is the computed period
    for a ray whose orbit is periodic from the start, and the computed
    preperiod otherwise; ``verified`` says whether kind and declared
    number both match the computation.  The core graph is absorbing: the
    part of the image falling onto N-typed edges is discarded at every
    step.  Raises :class:`Unresolved` when the orbit exceeds the budget.
    """
    gm = x.graph_map
    _, n_edges, _, _ = _typed_edge_sets(x, gm.domain)
    pre, per = ray_orbit(gm, ray.edge, n_edges)
    if pre == 0:
        return per, ray.kind == "periodic" and ray.period == per
    return pre, ray.kind == "preperiodic" and ray.preperiod == pre


def trees_separated(host, subgraph_edges, vertex_groups):
    """Whether the vertex groups sit in distinct complementary regions.

    Each group must lie inside a single region of the complement of the
    subgraph, no vertex may lie on the subgraph itself, and no two groups
    may share a region.  Returns ``(ok, detail)``.
    """
    regions = face_components(host, tuple(subgraph_edges))
    taken = {}
    for group in vertex_groups:
        verts = tuple(group)
        if not verts:
            continue
        classes = {regions.vertex_class(v) for v in verts}
        if None in classes:
            stuck = sorted(
                (v for v in verts if regions.vertex_class(v) is None), key=sort_key
            )
            return False, f"vertices {stuck!r} lie on the separating subgraph"
        if len(classes) > 1:
            spread = sorted(verts, key=sort_key)
            return False, (
                f"vertices {spread!r} spread over {len(classes)} regions"
            )
        cls = classes.pop()
        if cls in taken:
            return False, (
                f"groups {sorted(taken[cls], key=sort_key)!r} and "
                f"{sorted(verts, key=sort_key)!r} share a region"
            )
        taken[cls] = verts
    return True, ""

"""Transition matrices, Perron root brackets, and annulus twist systems.

The matrix side works in exact rational arithmetic.  The spectral radius
of a nonnegative matrix is bracketed from both sides: the matrix is
split into strongly connected blocks, each block is shifted to a
primitive matrix, and power iteration yields two-sided Collatz bounds
(min and max of the componentwise ratio (Bx)_i / x_i, valid for every
positive vector).  Iterates are re-rounded to bounded denominators,
which keeps the arithmetic fast and never invalidates a bracket.

The twist side decides whether a system of affine conditions

    n_image = d * (n - position) + image_position

over the integers admits a solution.  Orbits are rho-shaped: composing
around the unique cycle either pins the cycle value (product of degrees
above one, with an integrality condition) or leaves one free integer
(all degrees one, requiring zero net shift).  Values off the cycle are
back-solved uniquely; in the free case each back-solve imposes a linear
congruence on the free integer and the congruences are merged by a
general (non-coprime) Chinese remainder step.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Optional, Tuple

from .errors import DanglingReference, NoConvergence
from .graph_dynamics import local_degree

_DENOMINATOR_CAP = 10**15


# ---------------------------------------------------------------------------
# multicurve and arc system specifications


@dataclass(frozen=True)
class CurvePreimage:
    """One component of the preimage of a curve.

    ``target`` is the index of the curve this component is isotopic to,
    or None.  A None target with ``essential`` set marks a component
    that is essential but not isotopic to any curve of the system, which
    makes the system unstable; a None target without it is an
    inessential or peripheral component and simply drops out.
    """

    degree: int
    target: Optional[int] = None
    essential: bool = False

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 1:
            raise ValueError(f"preimage degree must be a positive integer, got {self.degree!r}")
        if self.target is not None:
            object.__setattr__(self, "essential", True)


@dataclass(frozen=True)
class MulticurveSpec:
    """A multicurve with asserted covering data for each curve."""

    name: str
    curve_count: int
    preimages: Tuple[Tuple[CurvePreimage, ...], ...]

    def __post_init__(self):
        if self.curve_count < 1:
            raise ValueError("a multicurve needs at least one curve")
        if len(self.preimages) != self.curve_count:
            raise ValueError(
                f"expected {self.curve_count} preimage rows, got {len(self.preimages)}"
            )
        for row in self.preimages:
            for p in row:
                if p.target is not None and not 0 <= p.target < self.curve_count:
                    raise DanglingReference("curve", p.target, f"multicurve {self.name!r}")

    @property
    def is_stable(self):
        """True when every essential preimage component stays in the system."""
        return all(
            p.target is not None or not p.essential
            for row in self.preimages
            for p in row
        )


@dataclass(frozen=True)
class ArcPreimage:
    """One preimage component of an arc; None target drops out."""

    target: Optional[int] = None


@dataclass(frozen=True)
class ArcSystemSpec:
    """An arc system with asserted preimage data for each arc."""

    name: str
    arc_count: int
    preimages: Tuple[Tuple[ArcPreimage, ...], ...]

    def __post_init__(self):
        if self.arc_count < 1:
            raise ValueError("an arc system needs at least one arc")
        if len(self.preimages) != self.arc_count:
            raise ValueError(
                f"expected {self.arc_count} preimage rows, got {len(self.preimages)}"
            )
        for row in self.preimages:
            for p in row:
                if p.target is not None and not 0 <= p.target < self.arc_count:
                    raise DanglingReference("arc", p.target, f"arc system {self.name!r}")


def thurston_matrix(spec):
    """Exact rational transition matrix of a multicurve.

    Entry [j][i] sums 1/degree over the preimage components of curve i
    that are isotopic to curve j.
    """
    n = spec.curve_count
    a = [[Fraction(0)] * n for _ in range(n)]
    for i, row in enumerate(spec.preimages):
        for p in row:
            if p.target is not None:
                a[p.target][i] += Fraction(1, p.degree)
    return a


def arc_matrix(spec):
    """Integer transition matrix of an arc system (component counts)."""
    n = spec.arc_count
    a = [[0] * n for _ in range(n)]
    for i, row in enumerate(spec.preimages):
        for p in row:
            if p.target is not None:
                a[p.target][i] += 1
    return a


# ---------------------------------------------------------------------------
# spectral radius of a nonnegative rational matrix


@dataclass(frozen=True)
class EigenvalueResult:
    lower: Fraction
    upper: Fraction
    iterations: int

    @property
    def value(self):
        return (self.lower + self.upper) / 2

    @property
    def exact(self):
        return self.lower == self.upper


def _coerce_matrix(matrix):
    n = len(matrix)
    out = []
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix must be square")
        frow = [Fraction(x) for x in row]
        if any(x < 0 for x in frow):
            raise ValueError("matrix entries must be nonnegative")
        out.append(frow)
    return out


def _strong_components(adjacency):
    """Kosaraju strongly connected components, in some order."""
    n = len(adjacency)
    order = []
    seen = [False] * n

    def dfs(start, graph, out):
        stack = [(start, iter(graph[start]))]
        seen[start] = True
        while stack:
            v, it = stack[-1]
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, iter(graph[w])))
                    break
            else:
                stack.pop()
                out.append(v)

    for u in range(n):
        if not seen[u]:
            dfs(u, adjacency, order)
    reverse = [[] for _ in range(n)]
    for u in range(n):
        for v in adjacency[u]:
            reverse[v].append(u)
    seen = [False] * n
    components = []
    for u in reversed(order):
        if not seen[u]:
            comp = []
            dfs(u, reverse, comp)
            components.append(comp)
    return components


def _collatz_bracket(block, tol, max_iter):
    """Two-sided bracket for the Perron root of an irreducible block.

    Returns (lower, upper, iterations, converged); brackets refer to the
    block itself (the +identity shift is already removed).
    """
    n = len(block)
    b = [
        [block[i][j] + (1 if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    x = [Fraction(1)] * n
    best_lo = None
    best_hi = None
    its = 0
    for its in range(1, max_iter + 1):
        y = [sum(b[i][j] * x[j] for j in range(n)) for i in range(n)]
        ratios = [y[i] / x[i] for i in range(n)]
        lo, hi = min(ratios), max(ratios)
        best_lo = lo if best_lo is None else max(best_lo, lo)
        best_hi = hi if best_hi is None else min(best_hi, hi)
        if best_hi - best_lo <= tol:
            return best_lo - 1, best_hi - 1, its, True
        top = max(y)
        x = [(yi / top).limit_denominator(_DENOMINATOR_CAP) for yi in y]
        x = [xi if xi > 0 else Fraction(1, _DENOMINATOR_CAP) for xi in x]
    return best_lo - 1, best_hi - 1, its, False


def leading_eigenvalue(matrix, tol=1e-9, max_iter=10000):
    """Spectral radius of a nonnegative matrix as a two-sided bracket.

    Raises NoConvergence when the final bracket is wider than tol.
    """
    a = _coerce_matrix(matrix)
    n = len(a)
    if n == 0:
        return EigenvalueResult(Fraction(0), Fraction(0), 0)
    tol_f = Fraction(tol)
    adjacency = [[j for j in range(n) if a[i][j] > 0] for i in range(n)]
    lowers, uppers = [], []
    total_iterations = 0
    for comp in _strong_components(adjacency):
        if len(comp) == 1:
            s = comp[0]
            rho = a[s][s]
            lowers.append(rho)
            uppers.append(rho)
            continue
        comp = sorted(comp)
        block = [[a[u][v] for v in comp] for u in comp]
        lo, hi, its, _ = _collatz_bracket(block, tol_f, max_iter)
        lowers.append(lo)
        uppers.append(hi)
        total_iterations += its
    lower, upper = max(lowers), max(uppers)
    if upper - lower > tol_f:
        raise NoConvergence(lower, upper, total_iterations)
    return EigenvalueResult(lower, upper, total_iterations)


def is_irreducible(matrix):
    """True when the directed graph of nonzero entries is strongly
    connected; a 1x1 matrix counts only if its entry is nonzero."""
    a = _coerce_matrix(matrix)
    n = len(a)
    if n == 0:
        return False
    if n == 1:
        return a[0][0] > 0
    adjacency = [[j for j in range(n) if a[i][j] > 0] for i in range(n)]
    return len(_strong_components(adjacency)) == 1


def obstruction_verdict(spec, tol=1e-9, max_iter=10000):
    """Classify a multicurve: 'yes' (leading eigenvalue certified >= 1),
    'no' (certified < 1), 'inconclusive' (bracket straddles 1), or
    'not-applicable' (the system is unstable)."""
    if not spec.is_stable:
        return "not-applicable"
    matrix = thurston_matrix(spec)
    try:
        res = leading_eigenvalue(matrix, tol=tol, max_iter=max_iter)
        lower, upper = res.lower, res.upper
    except NoConvergence as err:
        lower, upper = err.lower, err.upper
    if lower >= 1:
        return "yes"
    if upper < 1:
        return "no"
    return "inconclusive"


# ---------------------------------------------------------------------------
# orbifold condition


def orbifold_hyperbolic_sufficient(graph_map):
    """Sufficient condition for a hyperbolic orbifold: at least three
    fixed vertices of local degree two or more.  False means unknown."""
    count = 0
    for v in graph_map.domain.vertices:
        if v in graph_map.codomain.vertices and graph_map.vertex_image(v) == v:
            if local_degree(graph_map, v) >= 2:
                count += 1
    return count >= 3


# ---------------------------------------------------------------------------
# twist systems


@dataclass(frozen=True)
class RayOrbitTwistData:
    """Twist data along one ray orbit.

    Entry i describes the annulus at step i: (covering degree onto the
    next annulus, ray position in this annulus, image ray position in
    the next annulus).  Indices preperiod..end form the cycle; the last
    entry maps back onto index ``preperiod``.
    """

    preperiod: int
    entries: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("twist data needs at least one annulus")
        if not 0 <= self.preperiod < len(self.entries):
            raise ValueError("preperiod must leave at least one periodic annulus")
        for e in self.entries:
            if len(e) != 3 or any(not isinstance(x, int) for x in e):
                raise ValueError(f"entries must be integer triples, got {e!r}")
            if e[0] < 1:
                raise ValueError("covering degrees must be positive")

    @property
    def period(self):
        return len(self.entries) - self.preperiod


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    assignment: Optional[Tuple[int, ...]]
    reason: str


@dataclass(frozen=True)
class TwistSolution:
    solvable: bool
    assignment: Optional[Dict]
    reason: str


def _merge_congruences(r1, m1, r2, m2):
    """Combine x = r1 (mod m1) and x = r2 (mod m2); None if incompatible."""
    g = gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    step = m2 // g
    t = ((r2 - r1) // g * pow(m1 // g, -1, step)) % step
    return (r1 + m1 * t) % lcm, lcm


def solve_tree_twists(tree_map, equations):
    """Solve n_image = d * n - v over the integers on a functional graph.

    ``tree_map`` sends each tree to its image tree; ``equations`` gives
    (d, v) for each tree.  Returns a TwistSolution; a returned witness
    always satisfies every equation exactly.
    """
    trees = sorted(tree_map, key=repr)
    for t in trees:
        if tree_map[t] not in tree_map:
            raise DanglingReference("tree", tree_map[t], "twist system image")
        if t not in equations:
            raise DanglingReference("tree", t, "twist system equations")

    n = len(trees)
    assignment = {}

    def cycle_through(t):
        for _ in range(n):
            t = tree_map[t]
        cyc = [t]
        u = tree_map[t]
        while u != t:
            cyc.append(u)
            u = tree_map[u]
        return cyc

    seen = set()
    for start in trees:
        if start in seen:
            continue
        cyc = cycle_through(start)
        cycset = set(cyc)
        members = [t for t in trees if set(cycle_through(t)) == cycset]
        seen.update(members)
        children = {u: [] for u in members}
        for t in members:
            if t not in cycset:
                children[tree_map[t]].append(t)

        coeff_a, coeff_b = 1, 0
        for u in cyc:
            d, v = equations[u]
            coeff_a *= d
            coeff_b = d * coeff_b - v

        if coeff_a == 1:
            if coeff_b != 0:
                return TwistSolution(False, None, "cycle forces a nonzero net twist")
            # one free integer; every value is (free + shift) / modulus
            forms = {}
            shift = 0
            for u in cyc:
                forms[u] = (shift, 1)
                d, v = equations[u]
                shift = d * shift - v
            residue, modulus = 0, 1
            stack = list(cyc)
            while stack:
                u = stack.pop()
                s_u, m_u = forms[u]
                for t in children[u]:
                    d, v = equations[t]
                    s_t, m_t = s_u + v * m_u, m_u * d
                    forms[t] = (s_t, m_t)
                    stack.append(t)
                    if m_t > 1:
                        merged = _merge_congruences(residue, modulus, -s_t % m_t, m_t)
                        if merged is None:
                            return TwistSolution(
                                False, None, "chain congruences are incompatible"
                            )
                        residue, modulus = merged
            for t, (s, m) in forms.items():
                assignment[t] = (residue + s) // m
        else:
            numerator = coeff_b
            denominator = 1 - coeff_a
            if numerator % denominator:
                return TwistSolution(False, None, "pinned cycle value is fractional")
            value = numerator // denominator
            values = {}
            for u in cyc:
                values[u] = value
                d, v = equations[u]
                value = d * value - v
            stack = list(cyc)
            while stack:
                u = stack.pop()
                for t in children[u]:
                    d, v = equations[t]
                    if (values[u] + v) % d:
                        return TwistSolution(
                            False, None, "chain value fails an integrality condition"
                        )
                    values[t] = (values[u] + v) // d
                    stack.append(t)
            assignment.update(values)

    for t in trees:
        d, v = equations[t]
        if assignment[tree_map[t]] != d * assignment[t] - v:
            raise AssertionError("twist witness failed verification")
    return TwistSolution(True, assignment, "solvable")


def rays_equivalent(data):
    """Decide solvability of the twist system along one ray orbit.

    The orbit is encoded as a functional graph on the annulus indices
    (each index maps to its successor, the last periodic index wrapping
    to the first) and handed to the general solver.
    """
    k = len(data.entries)
    tree_map = {}
    equations = {}
    for i, (d, pos, image_pos) in enumerate(data.entries):
        tree_map[i] = i + 1 if i + 1 < k else data.preperiod
        equations[i] = (d, d * pos - image_pos)
    solution = solve_tree_twists(tree_map, equations)
    if not solution.solvable:
        return EquivalenceVerdict(False, None, solution.reason)
    witness = tuple(solution.assignment[i] for i in range(k))
    return EquivalenceVerdict(True, witness, solution.reason)

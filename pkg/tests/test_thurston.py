"""Tests for transition matrices, Perron brackets, and twist systems.

Oracles:

* ``numpy.linalg.eigvals`` cross-checks the exact-rational Perron root
  bracket on random nonnegative matrices;
* twist-system solvability is cross-checked by direct enumeration of
  candidate integer assignments (vectorized over a wide window), a code
  path sharing nothing with the affine-composition solver.

Frozen cases (pure-cycle net-twist criterion, pinned fixed points,
congruence conflicts between chains) were worked out by hand first.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newtongraph.errors import NoConvergence
from newtongraph.graph_dynamics import build_graph_map
from newtongraph.planar_map import build_planar_map
from newtongraph.thurston import (
    CurvePreimage,
    EquivalenceVerdict,
    MulticurveSpec,
    RayOrbitTwistData,
    arc_matrix,
    is_irreducible,
    leading_eigenvalue,
    obstruction_verdict,
    orbifold_hyperbolic_sufficient,
    rays_equivalent,
    solve_tree_twists,
    thurston_matrix,
)

F = Fraction


# ---------------------------------------------------------------------------
# matrices and eigenvalues


def test_thurston_matrix_levy_cycle():
    spec = MulticurveSpec(
        name="levy",
        curve_count=1,
        preimages=((CurvePreimage(degree=1, target=0),),),
    )
    assert thurston_matrix(spec) == [[F(1)]]


def test_thurston_matrix_weights_sum():
    spec = MulticurveSpec(
        name="two",
        curve_count=2,
        preimages=(
            (CurvePreimage(degree=2, target=1), CurvePreimage(degree=3, target=1)),
            (CurvePreimage(degree=1, target=0), CurvePreimage(degree=2, target=None)),
        ),
    )
    a = thurston_matrix(spec)
    assert a == [[F(0), F(1)], [F(1, 2) + F(1, 3), F(0)]]


def test_leading_eigenvalue_swap_is_exactly_one():
    res = leading_eigenvalue([[F(0), F(1)], [F(1), F(0)]])
    assert res.lower == res.upper == F(1)
    assert res.exact


def test_leading_eigenvalue_zero_matrix():
    res = leading_eigenvalue([[F(0)]])
    assert res.lower == res.upper == F(0)


def test_leading_eigenvalue_triangular_exact():
    res = leading_eigenvalue([[F(2), F(0)], [F(1), F(3)]])
    assert res.lower == res.upper == F(3)
    assert res.exact


def test_leading_eigenvalue_contracting():
    res = leading_eigenvalue([[F(1, 2)]])
    assert res.lower == res.upper == F(1, 2)


def test_leading_eigenvalue_bracket_encloses_numpy():
    rng = np.random.default_rng(20260818)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        mat = [
            [
                F(int(rng.integers(0, 4)), int(rng.integers(1, 4)))
                if rng.random() < 0.6
                else F(0)
                for _ in range(n)
            ]
            for _ in range(n)
        ]
        res = leading_eigenvalue(mat, tol=1e-10, max_iter=100000)
        dense = np.array([[float(x) for x in row] for row in mat])
        rho = max(abs(np.linalg.eigvals(dense)))
        assert float(res.lower) - 1e-8 <= rho <= float(res.upper) + 1e-8
        assert float(res.upper - res.lower) <= 1e-9


def test_no_convergence_carries_bracket():
    # spectral radius is 1 + sqrt(2); a single iteration cannot reach 1e-12
    with pytest.raises(NoConvergence) as exc:
        leading_eigenvalue([[F(1), F(1)], [F(2), F(1)]], tol=1e-12, max_iter=1)
    err = exc.value
    assert err.iterations == 1
    assert err.lower < err.upper
    assert float(err.lower) <= 1 + 2 ** 0.5 <= float(err.upper)


def test_is_irreducible():
    assert is_irreducible([[F(0), F(1)], [F(1), F(0)]])
    assert not is_irreducible([[F(0), F(1)], [F(0), F(0)]])
    assert not is_irreducible([[F(0)]])
    assert is_irreducible([[F(1)]])
    assert not is_irreducible([[F(1), F(0)], [F(0), F(1)]])


def test_obstruction_verdicts():
    levy = MulticurveSpec(
        name="levy", curve_count=1, preimages=((CurvePreimage(1, 0),),)
    )
    assert obstruction_verdict(levy) == "yes"

    half = MulticurveSpec(
        name="half", curve_count=1, preimages=((CurvePreimage(2, 0),),)
    )
    assert obstruction_verdict(half) == "no"

    swap = MulticurveSpec(
        name="swap",
        curve_count=2,
        preimages=((CurvePreimage(1, 1),), (CurvePreimage(1, 0),)),
    )
    assert obstruction_verdict(swap) == "yes"

    unstable = MulticurveSpec(
        name="wild",
        curve_count=1,
        preimages=((CurvePreimage(degree=1, target=None, essential=True),),),
    )
    assert obstruction_verdict(unstable) == "not-applicable"


def test_arc_matrix_counts():
    from newtongraph.thurston import ArcPreimage, ArcSystemSpec

    spec = ArcSystemSpec(
        name="arcs",
        arc_count=2,
        preimages=(
            (ArcPreimage(target=0), ArcPreimage(target=1), ArcPreimage(target=None)),
            (ArcPreimage(target=0),),
        ),
    )
    assert arc_matrix(spec) == [[1, 1], [1, 0]]


# ---------------------------------------------------------------------------
# orbifold sufficient condition


def _fixed_critical_copies(n):
    """n disjoint copies of a fixed vertex of local degree two."""
    rotations = {}
    twins = []
    vm = {}
    paths = {}
    for i in range(n):
        r, w, x = f"r{i}", f"w{i}", f"x{i}"
        d = 10 * i
        rotations[r] = (d + 1, d + 3)
        rotations[w] = (d + 2,)
        rotations[x] = (d + 4,)
        twins += [(d + 1, d + 2), (d + 3, d + 4)]
        vm.update({r: r, w: w, x: w})
        paths.update({d + 1: (d + 1,), d + 3: (d + 1,), d + 4: (d + 2,)})
    m = build_planar_map(rotations, twins)
    return build_graph_map(m, m, vm, paths)


def test_orbifold_condition_three_fixed_criticals():
    assert orbifold_hyperbolic_sufficient(_fixed_critical_copies(3))
    assert not orbifold_hyperbolic_sufficient(_fixed_critical_copies(2))


# ---------------------------------------------------------------------------
# single-orbit twist systems


def propagate(entries, preperiod, n1):
    """Forward substitution; returns the full vector and the closure value."""
    values = [n1]
    for d, l, lp in entries:
        values.append(d * (values[-1] - l) + lp)
    return values[:-1], values[-1]


def brute_force_solvable(data, window=20000):
    """Vectorized scan over the first unknown; independent of the solver."""
    n1 = np.arange(-window, window + 1, dtype=np.int64)
    vals = n1.copy()
    keep = [vals]
    for d, l, lp in data.entries:
        vals = d * (vals - l) + lp
        keep.append(vals)
    closure_target = keep[data.preperiod]
    return bool(np.any(keep[-1] == closure_target))


def test_pure_cycle_net_twist_criterion():
    ok = RayOrbitTwistData(preperiod=0, entries=((1, 2, 5), (1, 4, 1)))
    assert ok.period == 2
    verdict = rays_equivalent(ok)
    assert verdict.equivalent
    bad = RayOrbitTwistData(preperiod=0, entries=((1, 2, 5), (1, 4, 2)))
    assert not rays_equivalent(bad).equivalent


def test_pinned_cycle_integer_fixed_point():
    data = RayOrbitTwistData(preperiod=0, entries=((2, 0, 0), (1, 0, 1)))
    verdict = rays_equivalent(data)
    assert verdict.equivalent
    values, closure = propagate(data.entries, 0, verdict.assignment[0])
    assert list(verdict.assignment) == values
    assert closure == values[0]
    assert verdict.assignment[0] == -1


def test_pinned_cycle_fractional_fixed_point():
    data = RayOrbitTwistData(preperiod=0, entries=((2, 0, 0), (2, 0, 1)))
    assert not rays_equivalent(data).equivalent


def test_preperiodic_chain_divisibility():
    solvable = RayOrbitTwistData(preperiod=1, entries=((2, 1, 0), (3, 0, 0)))
    v = rays_equivalent(solvable)
    assert v.equivalent
    assert v.assignment == (1, 0)
    stuck = RayOrbitTwistData(preperiod=1, entries=((2, 0, 1), (3, 0, 0)))
    assert not rays_equivalent(stuck).equivalent


def test_degenerate_period_one():
    data = RayOrbitTwistData(preperiod=0, entries=((1, 3, 3),))
    assert rays_equivalent(data).equivalent
    data = RayOrbitTwistData(preperiod=0, entries=((1, 3, 4),))
    assert not rays_equivalent(data).equivalent


@settings(deadline=None, max_examples=300)
@given(
    st.integers(0, 3),
    st.lists(
        st.tuples(
            st.integers(1, 3), st.integers(-2, 2), st.integers(-2, 2)
        ),
        min_size=1,
        max_size=5,
    ),
)
def test_solver_matches_brute_force(preperiod, entries):
    if preperiod >= len(entries):
        return
    data = RayOrbitTwistData(preperiod=preperiod, entries=tuple(entries))
    verdict = rays_equivalent(data)
    assert verdict.equivalent == brute_force_solvable(data)
    if verdict.equivalent:
        values, closure = propagate(data.entries, preperiod, verdict.assignment[0])
        assert tuple(values) == verdict.assignment
        assert closure == values[preperiod]


@settings(deadline=None, max_examples=200)
@given(
    st.integers(0, 2),
    st.lists(
        st.tuples(st.integers(1, 3), st.integers(-2, 2), st.integers(-2, 2)),
        min_size=2,
        max_size=4,
    ),
    st.integers(-3, 3),
    st.data(),
)
def test_reanchoring_invariance(preperiod, entries, shift, data_):
    """Shifting one annulus coordinate origin never changes solvability.

    Annulus i owns the position entry of equation i and the image entry
    of every equation whose successor annulus is i (the predecessor in
    the chain, plus the cyclic wraparound landing on the first periodic
    index).
    """
    if preperiod >= len(entries):
        return
    k = len(entries)
    i = data_.draw(st.integers(0, k - 1))
    data = RayOrbitTwistData(preperiod=preperiod, entries=tuple(entries))
    mutated = [list(e) for e in entries]
    mutated[i][1] += shift
    for j in range(k):
        successor = j + 1 if j + 1 < k else preperiod
        if successor == i:
            mutated[j][2] += shift
    data2 = RayOrbitTwistData(
        preperiod=preperiod, entries=tuple(tuple(e) for e in mutated)
    )
    assert rays_equivalent(data).equivalent == rays_equivalent(data2).equivalent


# ---------------------------------------------------------------------------
# grand-orbit tree twists


def brute_force_tree_twists(tree_map, equations, window=600):
    """Independent enumeration: scan cycle seeds, back-solve the chains.

    Every value off a cycle is uniquely determined by the value at its
    image (n_t = (n_image + v_t) / d_t), so a candidate assignment is
    fixed by one seed per component cycle; integrality of the back-solve
    is the only remaining constraint.
    """
    trees = sorted(tree_map)
    n = len(trees)

    def cycle_through(t):
        for _ in range(n):
            t = tree_map[t]
        cyc = [t]
        u = tree_map[t]
        while u != t:
            cyc.append(u)
            u = tree_map[u]
        return cyc

    components = {}
    for t in trees:
        components.setdefault(min(cycle_through(t)), []).append(t)

    for anchor, members in components.items():
        cyc = cycle_through(anchor)
        cycset = set(cyc)
        children = {u: [] for u in members}
        for t in members:
            if t not in cycset:
                children[tree_map[t]].append(t)

        def chains_integral(vals):
            stack = list(cyc)
            while stack:
                u = stack.pop()
                for t in children[u]:
                    d, v = equations[t]
                    if (vals[u] + v) % d:
                        return False
                    vals[t] = (vals[u] + v) // d
                    stack.append(t)
            return True

        satisfied = False
        for seed in range(-window, window + 1):
            vals = {cyc[0]: seed}
            closes = True
            for idx, u in enumerate(cyc):
                d, v = equations[u]
                nxt = d * vals[u] - v
                if idx + 1 < len(cyc):
                    vals[cyc[idx + 1]] = nxt
                elif nxt != seed:
                    closes = False
            if closes and chains_integral(vals):
                satisfied = True
                break
        if not satisfied:
            return False
    return True


def verify_tree_assignment(tree_map, equations, assignment):
    for t, img in tree_map.items():
        d, v = equations[t]
        if assignment[img] != d * assignment[t] - v:
            return False
    return True


def test_tree_twists_mixed_cycle_always_solvable():
    tree_map = {1: 2, 2: 1}
    equations = {1: (1, 4), 2: (2, -3)}
    res = solve_tree_twists(tree_map, equations)
    assert res.solvable
    assert verify_tree_assignment(tree_map, equations, res.assignment)


def test_tree_twists_congruence_conflict():
    tree_map = {1: 1, 2: 1, 3: 1}
    equations = {1: (1, 0), 2: (2, 1), 3: (2, 0)}
    # n1 = lambda free; chain 2: n1 = 2 n2 - 1 needs n1 odd;
    # chain 3: n1 = 2 n3 needs n1 even: conflict.
    res = solve_tree_twists(tree_map, equations)
    assert not res.solvable
    assert not brute_force_tree_twists(tree_map, equations, window=50)


def test_tree_twists_congruence_merge():
    tree_map = {1: 1, 2: 1, 3: 2}
    equations = {1: (1, 0), 2: (2, 1), 3: (3, 0)}
    # n1 odd via chain 2; n2 = (n1+1)/2 and n3 with 3 n3 = n2
    res = solve_tree_twists(tree_map, equations)
    assert res.solvable
    assert verify_tree_assignment(tree_map, equations, res.assignment)


def test_tree_twists_pure_cycle_obstructed():
    tree_map = {1: 2, 2: 1}
    equations = {1: (1, 1), 2: (1, 0)}
    assert not solve_tree_twists(tree_map, equations).solvable
    tree_map2 = {1: 2, 2: 1}
    equations2 = {1: (1, 1), 2: (1, -1)}
    res = solve_tree_twists(tree_map2, equations2)
    assert res.solvable
    assert verify_tree_assignment(tree_map2, equations2, res.assignment)


@settings(deadline=None, max_examples=120)
@given(st.data())
def test_tree_twists_match_brute_force(data_):
    k = data_.draw(st.integers(1, 4))
    trees = list(range(1, k + 1))
    tree_map = {t: data_.draw(st.sampled_from(trees)) for t in trees}
    equations = {
        t: (data_.draw(st.integers(1, 2)), data_.draw(st.integers(-2, 2)))
        for t in trees
    }
    res = solve_tree_twists(tree_map, equations)
    if res.solvable:
        assert verify_tree_assignment(tree_map, equations, res.assignment)
    else:
        assert not brute_force_tree_twists(tree_map, equations, window=120)


def test_equivalence_verdict_shape():
    data = RayOrbitTwistData(preperiod=0, entries=((1, 0, 0),))
    verdict = rays_equivalent(data)
    assert isinstance(verdict, EquivalenceVerdict)
    assert verdict.equivalent and verdict.assignment == (0,)
    assert isinstance(verdict.reason, str)

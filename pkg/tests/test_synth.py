import random
from fractions import Fraction

import numpy as np
import pytest

from budgetfd import (
    Atom,
    Cut,
    Hypergraph,
    Universe,
    canonical_hypergraph,
    check_proof,
    closure,
    decide_valid,
    parse_atom,
    parse_formula,
)
from budgetfd.entailment import hyper_eval_atom
from budgetfd.errors import BudgetFDError, CapExceededError
from budgetfd.infomodel import eval_atom_model
from budgetfd.synth import (
    EDGE,
    VERTEX,
    Path,
    ZeroVector,
    check_flip_claims,
    choice_function,
    count_paths,
    counterexample_for,
    enumerate_paths,
    eval_atom_linear,
    flip_vector,
    has_hypercycle,
    materialize_acyclic,
    package_to_json_dict,
    subspace_fd_check,
    synthesize_model,
    tree_membership,
    verify_equations_sampled,
)

from _gen import random_attr_set, random_hypergraph


def chain_graph():
    u = Universe(["a", "b", "c"])
    return Hypergraph(u, [(["a"], ["b"], 1), (["b"], ["c"], 1)])


def single_edge_graph():
    u = Universe(["a", "b"])
    return Hypergraph(u, [(["a"], ["b"], Fraction(2))])


def _random_cut_and_root(rng, h):
    u = h.universe
    while True:
        right = random_attr_set(rng, u)
        if right:
            break
    left = right.complement()
    root = rng.choice(right.indices())
    return Cut(left, right), root


def test_enumerate_paths_edgeless():
    u = Universe(["a", "b"])
    h = Hypergraph(u, [])
    pm = synthesize_model(h)
    assert enumerate_paths(pm, (VERTEX, 0), 5) == [Path(False, (0,))]
    assert count_paths(pm, 5, 100) == 2


def test_enumerate_paths_fig9(fig9):
    pm = synthesize_model(fig9)
    paths = enumerate_paths(pm, (EDGE, 0), 2)
    assert Path(True, (0, 3, 1, 5)) in paths  # <e0, v4, e1, v6>
    long_vertex_path = Path(False, (0, 0, 3, 1, 5))  # <v1, e0, v4, e1, v6>
    assert long_vertex_path in enumerate_paths(pm, (VERTEX, 0), 2)
    assert long_vertex_path.is_valid(fig9)


def test_enumerate_paths_chain():
    h = chain_graph()
    pm = synthesize_model(h)
    paths = enumerate_paths(pm, (VERTEX, 0), 4)
    assert paths == [
        Path(False, (0,)),
        Path(False, (0, 0, 1)),
        Path(False, (0, 0, 1, 1, 2)),
    ]


def test_path_validity():
    h = single_edge_graph()
    assert Path(False, (0, 0, 1)).is_valid(h)  # <a, e, b>
    assert not Path(False, (1, 0, 1)).is_valid(h)  # b is not a tail of e
    assert not Path(True, (0, 0)).is_valid(h)  # a is not a head of e
    with pytest.raises(ValueError):
        Path(True, (0,))  # edge-initiated paths end at a vertex


def test_has_hypercycle():
    assert not has_hypercycle(chain_graph())
    u = Universe(["a", "b"])
    cyc = Hypergraph(u, [(["a"], ["b"], 1), (["b"], ["a"], 1)])
    assert has_hypercycle(cyc)
    self_loop = Hypergraph(u, [(["a"], ["a"], 1)])
    assert has_hypercycle(self_loop)


def test_materialize_single_edge_equation():
    h = single_edge_graph()
    lm = materialize_acyclic(synthesize_model(h))
    assert len(lm.coords) == 4
    assert len(lm.equations) == 1
    assert lm.dimension == 3
    # the one equation ties f_e(<e,b>), f_a(<a,e,b>) and f_b(<b>)
    expected = {
        ((EDGE, 0), Path(True, (0, 1))),
        ((VERTEX, 0), Path(False, (0, 0, 1))),
        ((VERTEX, 1), Path(False, (1,))),
    }
    row = lm.equations[0]
    touched = {lm.coords[i] for i in range(len(lm.coords)) if row >> i & 1}
    assert touched == expected


def test_materialize_edgeless_full_space():
    u = Universe(["a", "b", "c"])
    lm = materialize_acyclic(synthesize_model(Hypergraph(u, [])))
    assert lm.dimension == 3
    assert sorted(lm.basis) == [1, 2, 4]


def test_materialize_dimension_matches_rank_oracle():
    rng = random.Random(81)
    checked = 0
    for _ in range(60):
        h = random_hypergraph(rng, max_vertices=4, max_edges=4)
        if has_hypercycle(h):
            continue
        lm = materialize_acyclic(synthesize_model(h))
        rows = lm.equations
        if rows:
            mat = np.array(
                [[r >> c & 1 for c in range(len(lm.coords))] for r in rows],
                dtype=np.uint8,
            )
            rank = _gf2_rank_dense(mat)
        else:
            rank = 0
        assert lm.dimension == len(lm.coords) - rank
        checked += 1
    assert checked > 25


def _gf2_rank_dense(mat):
    m = mat.copy() % 2
    rank = 0
    for col in range(m.shape[1]):
        pivots = [r for r in range(rank, m.shape[0]) if m[r, col]]
        if not pivots:
            continue
        r = pivots[0]
        m[[rank, r]] = m[[r, rank]]
        for other in range(m.shape[0]):
            if other != rank and m[other, col]:
                m[other] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def test_materialize_rejects_cyclic():
    u = Universe(["a", "b"])
    cyc = Hypergraph(u, [(["a"], ["b"], 1), (["b"], ["a"], 1)])
    with pytest.raises(BudgetFDError):
        materialize_acyclic(synthesize_model(cyc))


def test_materialize_cap():
    with pytest.raises(CapExceededError):
        materialize_acyclic(synthesize_model(chain_graph()), cap=3)


def test_subspace_fd_check_single_edge():
    h = single_edge_graph()
    lm = materialize_acyclic(synthesize_model(h))
    assert subspace_fd_check(lm, [(VERTEX, 0)], [], ())  # empty target
    assert subspace_fd_check(lm, [(VERTEX, 0), (EDGE, 0)], [(VERTEX, 1)], ())
    assert not subspace_fd_check(lm, [(VERTEX, 0)], [(VERTEX, 1)], ())


def test_eval_atom_linear_single_edge():
    h = single_edge_graph()
    u = h.universe
    lm = materialize_acyclic(synthesize_model(h))
    assert eval_atom_linear(lm, parse_atom("{a} |2 {b}", u))  # buy the edge key
    assert not eval_atom_linear(lm, parse_atom("{a} |1 {b}", u))
    assert not eval_atom_linear(lm, parse_atom("{} |2 {b}", u))
    assert eval_atom_linear(lm, parse_atom("{a} |0 {a}", u))


def test_linear_model_agrees_with_explicit_enumeration():
    rng = random.Random(82)
    checked = 0
    for _ in range(40):
        h = random_hypergraph(rng, max_vertices=3, max_edges=3)
        if has_hypercycle(h):
            continue
        lm = materialize_acyclic(synthesize_model(h))
        if lm.dimension > 8:
            continue
        explicit = lm.to_info_model()
        u = h.universe
        for _ in range(4):
            atom = Atom(
                random_attr_set(rng, u),
                random_attr_set(rng, u),
                rng.choice([Fraction(0), Fraction(1), Fraction(2)]),
            )
            mapped = Atom(
                explicit.universe.set_of(f"v:{n}" for n in atom.lhs),
                explicit.universe.set_of(f"v:{n}" for n in atom.rhs),
                atom.budget,
            )
            assert eval_atom_linear(lm, atom) == eval_atom_model(explicit, mapped)
            checked += 1
    assert checked > 40


def test_hypergraph_and_linear_semantics_agree_desk_scale():
    rng = random.Random(83)
    checked = 0
    for _ in range(60):
        h = random_hypergraph(rng, max_vertices=4, max_edges=4)
        if has_hypercycle(h):
            continue
        lm = materialize_acyclic(synthesize_model(h))
        u = h.universe
        weights = [e.weight for e in h.edges]
        sums = {Fraction(0)}
        for w in weights:
            sums |= {s + w for s in sums}
        for _ in range(5):
            atom = Atom(
                random_attr_set(rng, u),
                random_attr_set(rng, u),
                rng.choice(sorted(sums)),
            )
            assert hyper_eval_atom(h, atom) == eval_atom_linear(lm, atom), (h.to_json_dict(), atom)
            checked += 1
    assert checked > 50


def test_agreement_on_closure_coordinates():
    # rows agreeing on start∪edges coordinates agree on the closure's
    rng = random.Random(84)
    checked = 0
    for _ in range(60):
        h = random_hypergraph(rng, max_vertices=4, max_edges=4)
        if has_hypercycle(h):
            continue
        lm = materialize_acyclic(synthesize_model(h))
        a = random_attr_set(rng, h.universe)
        ids = [e for e in range(len(h.edges)) if rng.random() < 0.5]
        closed = closure(h, a, ids)
        key = [(VERTEX, i) for i in a.indices()] + [(EDGE, e) for e in ids]
        target = [(VERTEX, i) for i in closed.indices()]
        assert subspace_fd_check(lm, key, target, ())
        checked += 1
    assert checked > 25


def test_choice_function_picks_least_right_tail():
    u = Universe(["h", "k", "m"])
    h = Hypergraph(u, [(["h", "k"], ["m"], 1)])
    cut = Cut(u.empty(), u.full())
    cf = choice_function(h, cut, u.index("m"))
    assert cf.kappa == {0: u.index("h")}  # least index among {h, k}

    forced = Hypergraph(u, [(["k"], ["m"], 1)])
    cf2 = choice_function(forced, cut, u.index("m"))
    assert cf2.kappa == {0: u.index("k")}


def test_choice_function_skips_crossing_edges():
    u = Universe(["a", "b"])
    h = Hypergraph(u, [(["a"], ["b"], 1)])
    cut = Cut(u.set_of(["a"]), u.set_of(["b"]))
    cf = choice_function(h, cut, u.index("b"))
    assert cf.crossing == {0}
    assert cf.kappa == {}


def test_choice_function_requires_right_root():
    u = Universe(["a", "b"])
    h = Hypergraph(u, [])
    cut = Cut(u.set_of(["a"]), u.set_of(["b"]))
    with pytest.raises(ValueError):
        choice_function(h, cut, u.index("a"))


def test_tree_membership_examples():
    u = Universe(["u", "w", "root"])
    h = Hypergraph(u, [(["u", "w"], ["root"], 1)])
    cut = Cut(u.empty(), u.full())
    cf = choice_function(h, cut, u.index("root"))
    root = u.index("root")
    assert tree_membership(Path(False, (root,)), cf)
    assert not tree_membership(Path(False, (u.index("u"),)), cf)  # wrong end
    assert tree_membership(Path(False, (u.index("u"), 0, root)), cf)  # u = kappa(e)
    assert not tree_membership(Path(False, (u.index("w"), 0, root)), cf)
    assert tree_membership(Path(True, (0, root)), cf)


def test_flip_vector_coordinates():
    u = Universe(["x", "y", "root"])
    h = Hypergraph(
        u,
        [
            (["x"], ["root"], 1),   # crossing (tail on the left)
            (["y"], ["root"], 1),   # inside the right side
        ],
    )
    cut = Cut(u.set_of(["x"]), u.set_of(["y", "root"]))
    cf = choice_function(h, cut, u.index("root"))
    flip = flip_vector(cf)
    root = u.index("root")
    assert flip.coord((VERTEX, root), Path(False, (root,))) == 1
    # left-side vertex coordinates never flip
    x = u.index("x")
    for path in enumerate_paths(synthesize_model(h), (VERTEX, x), 3):
        assert flip.coord((VERTEX, x), path) == 0
    # non-crossing edges never flip
    assert flip.coord((EDGE, 1), Path(True, (1, root))) == 0
    # crossing edge flips exactly on tree paths
    assert flip.coord((EDGE, 0), Path(True, (0, root))) == 1


def test_zero_vector_satisfies_equations():
    rng = random.Random(85)
    for _ in range(40):
        h = random_hypergraph(rng, max_vertices=4, max_edges=5)
        pm = synthesize_model(h)
        if count_paths(pm, 5, 3000) > 3000:
            continue
        report = verify_equations_sampled(ZeroVector(), pm, 5)
        assert report.ok


def test_flip_vector_satisfies_equations_random():
    rng = random.Random(86)
    checked = 0
    while checked < 60:
        h = random_hypergraph(rng, max_vertices=5, max_edges=6)
        pm = synthesize_model(h)
        if count_paths(pm, 6, 4000) > 4000:
            continue
        cut, root = _random_cut_and_root(rng, h)
        flip = flip_vector(choice_function(h, cut, root))
        report = verify_equations_sampled(flip, pm, 6)
        assert report.ok, (h.to_json_dict(), cut, root, report.violations)
        claims = check_flip_claims(flip, pm, 6)
        assert claims.ok
        checked += 1


class _CorruptedVector:
    """Wraps a vector and toggles a single coordinate."""

    def __init__(self, base, attr, path):
        self.base = base
        self.attr = attr
        self.path = path

    def coord(self, attr, path):
        value = self.base.coord(attr, path)
        if tuple(attr) == tuple(self.attr) and path == self.path:
            value ^= 1
        return value


def test_corrupted_vector_is_caught():
    h = chain_graph()
    pm = synthesize_model(h)
    # toggle f_b(<b>): the equation for <e0,b> must break
    bad = _CorruptedVector(ZeroVector(), (VERTEX, 1), Path(False, (1,)))
    report = verify_equations_sampled(bad, pm, 4)
    assert not report.ok
    assert Path(True, (0, 1)) in report.violations


def test_verify_depth_respects_model_bound():
    h = chain_graph()
    pm = synthesize_model(h, depth=2)
    with pytest.raises(ValueError):
        verify_equations_sampled(ZeroVector(), pm, 3)


def test_counterexample_fig4(fig4_universe, fig4_premises):
    h = canonical_hypergraph(fig4_premises, fig4_universe)
    f = parse_formula("{} |4 {b}", fig4_universe)
    pkg = counterexample_for(h, f)
    assert pkg.all_checks_ok
    assert len(pkg.false_atoms) == 1
    ref = pkg.false_atoms[0]
    assert str(ref.atom) == "{} |4 {b}"
    assert ref.records, "at least the empty purchase set must be recorded"
    for rec in ref.records:
        assert not ref.atom.rhs <= rec.cut.left
        assert rec.claims.root_flipped
    assert pkg.linear is not None  # buy-edges only: acyclic
    assert pkg.linear_evals[ref.atom] is False


def test_counterexample_formula_one():
    u = Universe(["a", "b"])
    f = parse_formula(
        "{a} |1 {b} & {b} |5 {a} => ({} |5 {a} | {} |1 {b} | {b} |4 {a})", u
    )
    answer = decide_valid(f)
    assert answer.verdict == "invalid"
    pkg = counterexample_for(answer.hypergraph, f)
    assert pkg.all_checks_ok
    proved = {str(entry.atom) for entry in pkg.true_atoms}
    assert proved == {"{a} |1 {b}", "{b} |5 {a}"}
    for entry in pkg.true_atoms:
        edge_atoms = [
            Atom(e.tails, e.heads, e.weight) for e in answer.hypergraph.edges
        ]
        assert check_proof(entry.proof, edge_atoms)
    refuted = {str(ref.atom) for ref in pkg.false_atoms}
    assert refuted == {"{} |5 {a}", "{} |1 {b}", "{b} |4 {a}"}
    assert pkg.linear is None  # the countermodel is cyclic
    blob = package_to_json_dict(pkg)
    assert blob["formula"] == str(f)
    assert len(blob["false_atoms"]) == 3


def test_counterexample_requires_falsified_formula():
    u = Universe(["a"])
    h = canonical_hypergraph([], u)
    with pytest.raises(ValueError):
        counterexample_for(h, parse_formula("{a} |0 {a}", u))


def test_counterexample_with_sampled_verification():
    u = Universe(["a", "b"])
    f = parse_formula(
        "{a} |1 {b} & {b} |5 {a} => ({} |5 {a} | {} |1 {b} | {b} |4 {a})", u
    )
    answer = decide_valid(f)
    pkg = counterexample_for(
        answer.hypergraph, f, samples=25, rng=random.Random(99)
    )
    assert pkg.all_checks_ok
    for ref in pkg.false_atoms:
        for rec in ref.records:
            assert rec.equations.paths_checked <= 25


def test_verify_equations_random_flags_corruption():
    from budgetfd.synth import verify_equations_random

    h = chain_graph()
    pm = synthesize_model(h)
    bad = _CorruptedVector(ZeroVector(), (VERTEX, 1), Path(False, (1,)))
    report = verify_equations_random(bad, pm, 200, 3, random.Random(5))
    assert report.violations

"""Tree categories over a base with a marked subcategory: basis shape,
structure identities, the formal operation calculus, unit homotopies."""

import pytest

from ainfkit.category import check_stasheff, opposite
from ainfkit.freecat import LEAF
from ainfkit.functors import check_functor, strict_functor
from ainfkit.graded import Ring
from ainfkit.homquot import (OperadTerm, admissible, check_action_chain,
                             check_operad, check_reduction,
                             check_unit_homotopies, compose_terms,
                             composite_defect, filtration_level,
                             homotopy_quotient, leaf_count,
                             left_unit_homotopy, mirror_map, operad_d,
                             projection_functor, reduced_tree, term_stages,
                             term_value, tree_category, tree_shapes,
                             tree_value, unary_count, unary_spans,
                             unit_conjugation, unit_derivation,
                             unit_homotopy, valid_tree, wide_count,
                             PartialHomotopy)
from ainfkit.quiver import BoundError, all_basis_tensors, evaluate
from test_category import arrow_with_differential, path3

QQ = Ring("QQ")
ONE = (LEAF,)
FORK = (LEAF, LEAF)

_CACHE = {}


def tree_pair(which, bobj, bound=3):
    key = (which, bobj, bound)
    if key not in _CACHE:
        C = path3() if which == "path3" else arrow_with_differential()
        E = tree_category(C, frozenset([bobj]), bound)
        D = homotopy_quotient(C, frozenset([bobj]), bound)
        _CACHE[key] = (C, E, D)
    return _CACHE[key]


def test_shape_census():
    assert tree_shapes(1) == (LEAF, ONE)
    assert len(tree_shapes(2)) == 8
    assert len(tree_shapes(3)) == 80
    for n in (1, 2, 3):
        for t in tree_shapes(n):
            assert valid_tree(t) and leaf_count(t) == n
    assert not valid_tree((ONE,))
    assert (ONE,) not in tree_shapes(1)
    assert unary_count(((ONE, LEAF),)) == 2
    assert wide_count(((ONE, LEAF),)) == 1
    assert unary_spans((ONE, FORK)) == [(0, 1)]
    assert unary_spans(((ONE, LEAF),)) == [(0, 1), (0, 2)]


def test_admissible_and_reduced_and_level():
    assert admissible(ONE, (0, 1), {1})
    assert not admissible(ONE, (0, 1), {2})
    assert admissible((ONE, LEAF), (0, 1, 2), {1})
    assert not admissible((ONE, LEAF), (0, 1, 2), {2})
    assert reduced_tree(LEAF) and reduced_tree(ONE)
    assert not reduced_tree(FORK) and not reduced_tree((FORK,))
    assert reduced_tree((ONE, LEAF)) and reduced_tree(((ONE, LEAF),))
    assert filtration_level(LEAF) == (0, "D0")
    assert filtration_level(ONE) == (1, "N1")
    assert filtration_level((ONE, LEAF)) == (1, "D1")
    assert filtration_level(((ONE, LEAF),)) == (2, "N2")
    assert filtration_level((ONE, (0, 1), ("f",))) == (1, "N1")


def test_basis_membership_and_degrees():
    C, E, D = tree_pair("path3", 1)
    for (X, Y) in C.quiver.pairs():
        for nm in C.hom(X, Y).names:
            triv = (LEAF, (X, Y), (nm,))
            assert triv in E.hom(X, Y).names
            assert triv in D.hom(X, Y).names
    hooked = (ONE, (0, 1), ("f",))
    assert hooked in D.hom(0, 1).names
    assert D.quiver.degree(0, 1, hooked) == -2
    corolla = (FORK, (0, 1, 2), ("f", "g"))
    assert corolla in E.hom(0, 2).names
    assert corolla not in D.hom(0, 2).names
    assert (ONE, (0, 2), ("fg",)) not in D.hom(0, 2).names
    assert ((ONE, LEAF), (0, 1, 2), ("f", "g")) in D.hom(0, 2).names
    for (X, Y) in D.quiver.pairs():
        for t, gobjs, gnames in D.hom(X, Y).names:
            assert valid_tree(t) and reduced_tree(t)
            assert admissible(t, gobjs, D.bobjs)
            assert len(gnames) <= D.leaf_bound


def test_every_name_is_its_own_pipeline_value():
    for which in ("path3", "arrow"):
        for A in tree_pair(which, 1)[1:]:
            for (X, Y) in A.quiver.pairs():
                for nm in A.hom(X, Y).names:
                    assert tree_value(A, *nm) == A.hom(X, Y).basis_element(nm)


def test_reduced_contracts_trivial_composites():
    C, E, D = tree_pair("path3", 1)
    for n in (2, 3):
        dop = composite_defect(C, D, n)
        for objs, names in all_basis_tensors(C.quiver, n):
            assert dop.on_basis(objs, names).is_zero
    eop = composite_defect(C, E, 2)
    assert not eop.on_basis((0, 1, 2), ("f", "g")).is_zero


def test_homotopy_values_and_errors():
    C, E, D = tree_pair("path3", 1)
    x = E.hom(0, 1).basis_element((LEAF, (0, 1), ("f",)))
    hx = evaluate(E.homotopy, (0, 1), (x,))
    assert hx == E.hom(0, 1).basis_element((ONE, (0, 1), ("f",)))
    with pytest.raises(ValueError):
        evaluate(E.homotopy, (0, 1), (hx,))
    fg = E.hom(0, 2).basis_element((LEAF, (0, 2), ("fg",)))
    with pytest.raises(ValueError):
        evaluate(E.homotopy, (0, 2), (fg,))
    # closed trivial element: the homotopy is a one-sided inverse
    assert evaluate(E.b(1), (0, 1), (hx,)) == x

    C2, E2, _ = tree_pair("arrow", 1)
    u = E2.hom(0, 1).basis_element((LEAF, (0, 1), ("u",)))
    v = E2.hom(0, 1).basis_element((LEAF, (0, 1), ("v",)))
    hu = evaluate(E2.homotopy, (0, 1), (u,))
    hv = evaluate(E2.homotopy, (0, 1), (v,))
    assert evaluate(E2.b(1), (0, 1), (hu,)) == u.sub(hv)


def test_differential_squares_to_zero_on_every_name():
    for which in ("path3", "arrow"):
        for A in tree_pair(which, 1)[1:]:
            b1 = A.b(1)
            for (X, Y) in A.quiver.pairs():
                for nm in A.hom(X, Y).names:
                    once = b1.on_basis((X, Y), (nm,))
                    assert evaluate(b1, (X, Y), (once,)).is_zero, (A.name, nm)


def test_stasheff_suites():
    for which in ("path3", "arrow"):
        for A in tree_pair(which, 1)[1:]:
            rep = check_stasheff(A, samples=40, seed=0)
            assert rep.ok, rep.text()
    _, _, D = tree_pair("path3", 1)
    rep = check_stasheff(opposite(D), samples=40, seed=0)
    assert rep.ok, rep.text()


def test_projection_and_reduction():
    C, E, D = tree_pair("path3", 1)
    proj = projection_functor(E, D)
    rep = check_functor(proj, samples=40, seed=0)
    assert rep.ok, rep.text()
    rep = check_reduction(C, E, D, samples=30, seed=0)
    assert rep.ok, rep.text()


def test_differential_of_formal_generators():
    hterm = OperadTerm.basis(QQ, ONE, (0, 1))
    assert operad_d(hterm) == OperadTerm.basis(QQ, LEAF, (0, 1))
    two = OperadTerm.basis(QQ, FORK, (0, 1, 2))
    assert operad_d(two).is_zero
    three = OperadTerm.basis(QQ, (LEAF, LEAF, LEAF), (0, 0, 1, 2))
    left = OperadTerm.basis(QQ, (FORK, LEAF), (0, 0, 1, 2), coeff=-1)
    right = OperadTerm.basis(QQ, (LEAF, FORK), (0, 0, 1, 2), coeff=-1)
    assert operad_d(three) == left.add(right)


def test_unit_derivation_displays():
    two = OperadTerm.basis(QQ, FORK, (0, 1, 2))
    assert unit_derivation(two) == OperadTerm.basis(
        QQ, (LEAF, LEAF, LEAF), (0, 1, 2, 2), caps=(2,))
    hterm = OperadTerm.basis(QQ, ONE, (0, 1))
    assert unit_derivation(hterm) == OperadTerm.basis(
        QQ, ((ONE, LEAF),), (0, 1, 1), caps=(1,))


def test_composition_signs_swap_two_homotopies():
    # (H x 1)(1 x H) against (1 x H)(H x 1): odd operators anticommute
    h01 = OperadTerm.basis(QQ, ONE, (0, 1))
    h12 = OperadTerm.basis(QQ, ONE, (1, 2))
    two = OperadTerm.basis(QQ, FORK, (0, 1, 2))
    t = compose_terms(h01, compose_terms(h12, two, 1), 0)
    u = compose_terms(h12, compose_terms(h01, two, 0), 1)
    assert t == u.scale(-1)
    assert not t.is_zero


def test_commutator_on_one_operation_is_conjugation():
    two = OperadTerm.basis(QQ, FORK, (0, 1, 2))
    lhs = operad_d(unit_derivation(two)).add(unit_derivation(operad_d(two)))
    assert lhs == unit_conjugation(two)


def test_operad_identities_random():
    rep = check_operad(path3(), frozenset([1]), samples=60, seed=3)
    assert rep.ok, rep.text()


def test_term_value_matches_the_operations():
    C, E, D = tree_pair("path3", 1)
    x = E.hom(0, 1).basis_element((LEAF, (0, 1), ("f",)))
    hterm = OperadTerm.basis(QQ, ONE, (0, 1))
    assert term_value(E, hterm, (0, 1), ((LEAF, (0, 1), ("f",)),)) == \
        evaluate(E.homotopy, (0, 1), (x,))
    capped = OperadTerm.basis(QQ, FORK, (0, 1, 1), caps=(1,))
    e1 = E.hom(1, 1).basis_element((LEAF, (1, 1), ("e1",)))
    assert term_value(E, capped, (0, 1), ((LEAF, (0, 1), ("f",)),)) == \
        evaluate(E.b(2), (0, 1, 1), (x, e1))


def test_action_is_a_chain_map():
    for which in ("path3", "arrow"):
        _, E, _ = tree_pair(which, 1)
        rep = check_action_chain(E, samples=50, seed=1)
        assert rep.ok, rep.text()
        assert "0 checked" not in rep.text()


def test_unit_homotopy_values():
    C, E, D = tree_pair("path3", 1)
    h = unit_homotopy(D)
    f = D.hom(0, 1).basis_element((LEAF, (0, 1), ("f",)))
    assert h.apply(0, 1, f).is_zero
    big = [nm for nm in D.hom(0, 2).names if len(nm[2]) == D.leaf_bound]
    assert big
    with pytest.raises(BoundError):
        h.apply(0, 2, D.hom(0, 2).basis_element(big[0]))


def test_unit_homotopy_laws():
    for which, bobj in (("path3", 1), ("arrow", 1), ("arrow", 0)):
        _, _, D = tree_pair(which, bobj)
        h = unit_homotopy(D)
        hp = left_unit_homotopy(D)
        rep = check_unit_homotopies(D, h, hp)
        assert rep.ok, (which, bobj, rep.text())


def test_mirror_map_is_an_isomorphism():
    C, _, D = tree_pair("path3", 1)
    Dm = homotopy_quotient(opposite(C), frozenset([1]), D.leaf_bound,
                           name="mirror")
    opD, m = mirror_map(D, Dm)
    seen = 0
    for pair, mat in m.components.items():
        for nm, el in mat.items():
            (mnm, c), = el.items()
            assert c in (QQ.one, QQ.normalize(-1))
            seen += 1
    assert seen == sum(len(D.hom(X, Y).names) for X, Y in D.quiver.pairs())
    F = strict_functor(opD, Dm, lambda X: X, m.components, name="mirror")
    rep = check_functor(F, samples=40, seed=0)
    assert rep.ok, rep.text()


def test_scaled_homotopy_fails_the_law():
    _, _, D = tree_pair("path3", 1)
    h = unit_homotopy(D)
    hp = left_unit_homotopy(D)
    nm = (ONE, (0, 1), ("f",))
    assert not h.matrices[(0, 1)][nm].is_zero
    matrices = {pair: dict(mat) for pair, mat in h.matrices.items()}
    matrices[(0, 1)][nm] = matrices[(0, 1)][nm].scale(2)
    bad = PartialHomotopy(D, matrices)
    rep = check_unit_homotopies(D, bad, hp)
    assert not rep.ok
    assert any(name == "right law" and not ok for name, ok, _ in rep.checks)


def test_grafting_beyond_the_bound_raises():
    _, E, _ = tree_pair("path3", 1)
    a = E.hom(0, 2).basis_element((FORK, (0, 1, 2), ("f", "g")))
    b = E.hom(2, 2).basis_element((FORK, (2, 2, 2), ("e2", "e2")))
    with pytest.raises(BoundError):
        evaluate(E.b(2), (0, 2, 2), (a, b))

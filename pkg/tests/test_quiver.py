import itertools
import random

from ainfkit.graded import GradedModule, Ring
from ainfkit.quiver import (
    GradedQuiver,
    MultiOp,
    QuiverMap,
    Stage,
    all_basis_tensors,
    apply_stage,
    combine_ops,
    compose_multi,
    evaluate,
    expand_tensor,
    insert,
    random_basis_tensor,
    run_stages,
    unit_stage,
)

QQ = Ring("QQ")


def loop_quiver():
    """One object with arrows a (deg 1), z (deg 2), w (deg 3)."""
    M = GradedModule(QQ, [("a", 1), ("z", 2), ("w", 3)])
    return GradedQuiver(QQ, ["*"], {("*", "*"): M})


def op_t(q):
    # arity 1, degree 1: a -> z, z -> w
    M = q.hom("*", "*")
    table = {
        (("*", "*"), ("a",)): M.basis_element("z"),
        (("*", "*"), ("z",)): M.basis_element("w"),
    }
    return MultiOp(q, q, 1, 1, table=table, name="t")


def op_u(q):
    # arity 1, degree 2: a -> w
    M = q.hom("*", "*")
    return MultiOp(q, q, 1, 2, table={(("*", "*"), ("a",)): M.basis_element("w")}, name="u")


def state_of(q, names):
    objs = tuple(["*"] * (len(names) + 1))
    return {(objs, tuple(names)): QQ.one}


def test_insert_identity_case():
    q = loop_quiver()
    t = op_t(q)
    st = insert(t, 0, 0)
    out = apply_stage(st, state_of(q, ("a",)))
    assert out == {(("*", "*"), ("z",)): QQ.one}


def test_insert_suffix_sign():
    # prefix-identity insertion is sign-free; the suffix factors carry the sign
    q = loop_quiver()
    t = op_t(q)
    out = apply_stage(insert(t, 1, 0), state_of(q, ("a", "a")))
    assert out == {(("*",) * 3, ("a", "z")): QQ.one}
    out = apply_stage(insert(t, 0, 1), state_of(q, ("a", "a")))
    assert out == {(("*",) * 3, ("z", "a")): QQ.normalize(-1)}
    # even suffix degree: no sign
    out = apply_stage(insert(t, 0, 1), state_of(q, ("a", "z")))
    assert out == {(("*",) * 3, ("z", "z")): QQ.one}


def test_insert_nesting_is_concentric():
    q = loop_quiver()
    t = op_t(q)
    inner = insert(t, 1, 0)
    nested = insert(inner, 1, 1)
    flat = insert(t, 2, 1)
    s = state_of(q, ("a", "a", "a", "a"))
    assert apply_stage(nested, s) == apply_stage(flat, s)


def test_disjoint_insertions_commute_up_to_sign():
    q = loop_quiver()
    t, u = op_t(q), op_u(q)
    s = state_of(q, ("a", "a"))
    # odd x even: strict commutation
    one = run_stages([insert(t, 0, 1), insert(u, 1, 0)], s)
    two = run_stages([insert(u, 1, 0), insert(t, 0, 1)], s)
    assert one == two and one == {(("*",) * 3, ("z", "w")): QQ.normalize(-1)}
    # odd x odd: anticommute
    one = run_stages([insert(t, 0, 1), insert(t, 1, 0)], s)
    two = run_stages([insert(t, 1, 0), insert(t, 0, 1)], s)
    assert one == {k: QQ.neg(v) for k, v in two.items()}


def test_unit_stage_sign():
    q = loop_quiver()
    M = q.hom("*", "*")
    x = M.basis_element("a")  # degree 1 insertion element
    s = state_of(q, ("a",))
    # inserted on the right: empty suffix, no sign
    out = apply_stage(unit_stage(q, x, ("*", "*"), 1, 0), s)
    assert out == {(("*",) * 3, ("a", "a")): QQ.one}
    # inserted on the left of an odd factor: sign flips
    out = apply_stage(unit_stage(q, x, ("*", "*"), 0, 1), s)
    assert out == {(("*",) * 3, ("a", "a")): QQ.normalize(-1)}


def path_category_shifted():
    """Shifted path category of 0 -> 1 -> 2, all arrows in degree 0."""
    h01 = GradedModule(QQ, [("f", -1)])
    h12 = GradedModule(QQ, [("g", -1)])
    h02 = GradedModule(QQ, [("fg", -1)])
    q = GradedQuiver(QQ, [0, 1, 2], {(0, 1): h01, (1, 2): h12, (0, 2): h02})
    # composition in shifted coordinates: (xs tensor ys)b2 = (-1)^deg_A(y) (xy)s
    table = {((0, 1, 2), ("f", "g")): h02.basis_element("fg")}
    b2 = MultiOp(q, q, 2, 1, table=table, name="b2")
    return q, b2


def test_evaluate_path_category():
    q, b2 = path_category_shifted()
    x = q.hom(0, 1).basis_element("f", 3)
    y = q.hom(1, 2).basis_element("g", QQ.parse("1/2"))
    out = evaluate(b2, (0, 1, 2), [x, y])
    # frozen from the hand computation: plus sign, coefficient 3/2
    assert out == q.hom(0, 2).basis_element("fg", QQ.parse("3/2"))


def test_evaluate_zero_and_bilinear():
    q, b2 = path_category_shifted()
    zero = q.hom(0, 1).zero(-1)
    y = q.hom(1, 2).basis_element("g")
    assert evaluate(b2, (0, 1, 2), [zero, y]).is_zero
    x1 = q.hom(0, 1).basis_element("f", 2)
    x2 = q.hom(0, 1).basis_element("f", 5)
    lhs = evaluate(b2, (0, 1, 2), [x1.add(x2), y])
    rhs = evaluate(b2, (0, 1, 2), [x1, y]).add(evaluate(b2, (0, 1, 2), [x2, y]))
    assert lhs == rhs


def dual_numbers_shifted(odd=False):
    """Shifted 2-dim algebra k[e], e^2=0; e odd makes it the exterior algebra."""
    M = GradedModule(QQ, [("n1", -1), ("ne", 0 if odd else -1)])
    q = GradedQuiver(QQ, ["*"], {("*", "*"): M})
    deg_a = {"n1": 0, "ne": 1 if odd else 0}
    prod = {("n1", "n1"): "n1", ("n1", "ne"): "ne", ("ne", "n1"): "ne"}
    table = {}
    for (x, y), xy in prod.items():
        sign = -1 if deg_a[y] % 2 else 1
        table[(("*", "*", "*"), (x, y))] = M.basis_element(xy, sign)
    b2 = MultiOp(q, q, 2, 1, table=table, name="b2")
    return q, b2


def test_stasheff_three_sum_vanishes():
    # (1 tensor b2)b2 + (b2 tensor 1)b2 = 0 on an associative algebra: the
    # suffix Koszul signs supply the alternation
    for odd in (False, True):
        q, b2 = dual_numbers_shifted(odd)
        left = compose_multi([insert(b2, 0, 1), insert(b2, 0, 0)])
        right = compose_multi([insert(b2, 1, 0), insert(b2, 0, 0)])
        for names in itertools.product(["n1", "ne"], repeat=3):
            objs = ("*",) * 4
            total = left.on_basis(objs, names).add(right.on_basis(objs, names))
            assert total.is_zero, (odd, names)


def test_compose_single_stage_is_the_op():
    q, b2 = dual_numbers_shifted()
    comp = compose_multi([insert(b2, 0, 0)])
    for names in itertools.product(["n1", "ne"], repeat=2):
        assert comp.on_basis(("*",) * 3, names) == b2.on_basis(("*",) * 3, names)


def test_combine_ops():
    q = loop_quiver()
    t = op_t(q)
    diff = combine_ops([(t, 1), (t, -1)])
    assert diff.on_basis(("*", "*"), ("a",)).is_zero
    twice = combine_ops([(t, 1), (t, 1)])
    assert twice.on_basis(("*", "*"), ("a",)) == q.hom("*", "*").basis_element("z", 2)


def test_quiver_map_apply_and_chain():
    q, b2 = path_category_shifted()
    ident = QuiverMap(
        q, q, 0,
        {pair: {n: q.hom(*pair).basis_element(n) for n in q.hom(*pair).names}
         for pair in q.pairs()},
    )
    x = q.hom(0, 1).basis_element("f")
    assert ident.apply(0, 1, x) == x

    def zero_d(X, Y, el):
        return q.hom(X, Y).zero(el.degree + 1)

    assert ident.is_chain(zero_d, zero_d)


def test_tensor_enumeration():
    q, b2 = path_category_shifted()
    chains = list(all_basis_tensors(q, 2))
    assert chains == [((0, 1, 2), ("f", "g"))]
    singles = sorted(all_basis_tensors(q, 1))
    assert len(singles) == 3
    rng = random.Random(1)
    got = random_basis_tensor(q, 1, rng)
    assert got is not None and len(got[1]) == 1


def test_expand_tensor():
    q, b2 = path_category_shifted()
    x = q.hom(0, 1).basis_element("f", 2)
    y = q.hom(1, 2).basis_element("g", 3)
    state = expand_tensor(q, (0, 1, 2), [x, y])
    assert state == {((0, 1, 2), ("f", "g")): QQ.normalize(6)}


def test_obj_mapped_stage_continuity():
    # a functor-style arity-1 op relabeling objects keeps chains composable
    q, b2 = path_category_shifted()
    relabel = {0: "a0", 1: "a1", 2: "a2"}
    homs = {(relabel[x], relabel[y]): GradedModule(QQ, [(n, q.hom(x, y).degrees[n])
                                                        for n in q.hom(x, y).names])
            for x, y in q.pairs()}
    q2 = GradedQuiver(QQ, list(relabel.values()), homs)

    def rule(objs, names):
        X, Y = relabel[objs[0]], relabel[objs[1]]
        return q2.hom(X, Y).basis_element(names[0])

    f1 = MultiOp(q, q2, 1, 0, rule=rule, lmap=relabel.get, rmap=relabel.get, name="f1")
    st = Stage(q, [("op", f1), ("op", f1)])
    out = apply_stage(st, {((0, 1, 2), ("f", "g")): QQ.one})
    assert out == {(("a0", "a1", "a2"), ("f", "g")): QQ.one}

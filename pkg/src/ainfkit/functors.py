"""Functors, coderivations, their differential, and the cochain comparison.

Functor components and coderivation components run through the same
stage engine as the structure operations, so every placement sum below
inherits its Koszul signs from evaluation.  The differential of a
coderivation is the commutator with the structure operations, written
componentwise with functor matrix elements on the outside.
"""

import itertools
import random

from .category import add_sampled_line, sampled_check
from .quiver import (MultiOp, QuiverMap, Stage, all_basis_tensors, evaluate,
                     insert, run_stages, state_element)
from .report import Report


class AInfFunctor:
    """An object map plus degree 0 components of every arity.

    Component n maps length-n tensors of shifted source arrows to one
    shifted target arrow between the image objects.  The 0-th component
    is identically zero; validity is a separate check (check_functor).
    """

    def __init__(self, source, target, obj_map, components, name="f"):
        self.source = source
        self.target = target
        self._omap = obj_map if callable(obj_map) else (lambda X, m=dict(obj_map): m[X])
        self.components = {}
        for n, op in components.items():
            assert n >= 1 and op.arity == n and op.degree == 0
            assert op.source is source.quiver and op.target is target.quiver
            self.components[n] = op
        self.name = name

    def obj_map(self, X):
        return self._omap(X)

    def component(self, n):
        return self.components.get(n)

    @property
    def arity_top(self):
        return max(self.components) if self.components else 0

    def __repr__(self):
        return "AInfFunctor(%s: %s -> %s)" % (self.name, self.source.name, self.target.name)


def strict_functor(source, target, obj_map, images, name="f"):
    """Functor with only an arity-1 component, given as per-pair matrices."""
    omap = obj_map if callable(obj_map) else (lambda X, m=dict(obj_map): m[X])
    qm = QuiverMap(source.quiver, target.quiver, 0, images, obj_map=omap)
    return AInfFunctor(source, target, omap, {1: qm.as_multiop(name + "1")}, name=name)


def identity_functor(A, name="id"):
    def rule(objs, names):
        return A.quiver.hom(*objs).basis_element(names[0])

    op = MultiOp(A.quiver, A.quiver, 1, 0, rule=rule, name=name + "1")
    return AInfFunctor(A, A, lambda X: X, {1: op}, name=name)


def _functor_blocks(f, a):
    """Tuples of components of f whose arities sum to a (each at least 1)."""
    if a == 0:
        yield ()
        return
    for i in range(1, a + 1):
        op = f.component(i)
        if op is None:
            continue
        for rest in _functor_blocks(f, a - i):
            yield (op,) + rest


def _compositions(total, parts):
    """All tuples of the given length of nonnegative integers with that sum."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def functor_defect(f, k, objs, names):
    """Difference of the two sides of the functor equation on one tensor.

    Left side: all ways of splitting the inputs into component blocks,
    followed by a target operation.  Right side: a source operation on a
    segment, followed by one component.
    """
    A, B = f.source, f.target
    qa = A.quiver
    base = {(tuple(objs), tuple(names)): qa.ring.one}
    degree = sum(qa.degree(objs[i], objs[i + 1], names[i]) for i in range(k)) + 1
    pair = (f.obj_map(objs[0]), f.obj_map(objs[-1]))
    total = B.quiver.hom(*pair).zero(degree)
    for blocks in _functor_blocks(f, k):
        outer = B.b(len(blocks))
        if outer is None:
            continue
        st = Stage(qa, [("op", op) for op in blocks])
        state = run_stages([st, insert(outer, 0, 0)], base)
        total = total.add(state_element(B.quiver, state, pair, degree))
    for a in range(k):
        for q in range(1, k - a + 1):
            c = k - a - q
            bq, fout = A.b(q), f.component(a + 1 + c)
            if bq is None or fout is None:
                continue
            state = run_stages([insert(bq, a, c), insert(fout, 0, 0)], base)
            total = total.sub(state_element(B.quiver, state, pair, degree))
    return total


def check_functor(f, arity_bound=None, samples=30, seed=0):
    """Verify the functor equation up to a total arity on sampled tensors.

    The default bound covers every arity where either side can be
    nonzero: component blocks feeding a target operation, or a source
    operation feeding one component.
    """
    if arity_bound is None:
        top = max(1, f.arity_top)
        arity_bound = max(f.target.max_arity * top, f.source.max_arity + top - 1)
    rng = random.Random(seed)
    rep = Report("functor equation for %s" % f.name)
    for k in range(1, arity_bound + 1):
        checked, skipped, exhaustive, bad = sampled_check(
            f.source, k, samples, rng,
            lambda objs, names, k=k: functor_defect(f, k, objs, names))
        add_sampled_line(rep, "arity %02d" % k, checked, skipped, exhaustive, bad)
    return rep


def compose_functors(f, g, name=None):
    """Componentwise composite: blocks of f components feeding one of g."""
    assert f.target is g.source, "functors do not compose"

    def omap(X):
        return g.obj_map(f.obj_map(X))

    top = f.arity_top * g.arity_top
    comps = {}
    for n in range(1, top + 1):
        def rule(objs, names, n=n):
            qa = f.source.quiver
            base = {(tuple(objs), tuple(names)): qa.ring.one}
            degree = sum(qa.degree(objs[i], objs[i + 1], names[i]) for i in range(n))
            pair = (omap(objs[0]), omap(objs[-1]))
            total = g.target.quiver.hom(*pair).zero(degree)
            for blocks in _functor_blocks(f, n):
                gl = g.component(len(blocks))
                if gl is None:
                    continue
                st = Stage(qa, [("op", op) for op in blocks])
                state = run_stages([st, insert(gl, 0, 0)], base)
                total = total.add(state_element(g.target.quiver, state, pair, degree))
            return total

        comps[n] = MultiOp(f.source.quiver, g.target.quiver, n, 0, rule=rule,
                           lmap=omap, rmap=omap, name="(%s%s)%d" % (f.name, g.name, n))
    return AInfFunctor(f.source, g.target, omap, comps,
                       name=name or (f.name + g.name))


class Coderivation:
    """(f, g)-shaped transformation data of one homogeneous degree.

    Component n >= 1 maps length-n source tensors into the shifted
    target hom between the image objects under f and g; component 0 is
    a per-object element.  arity_bound caps which components are stored
    and checked; everything above it is treated as zero.
    """

    def __init__(self, source, target, degree, components, r0=None,
                 arity_bound=None, name="r"):
        assert source.source is target.source and source.target is target.target
        self.source = source
        self.target = target
        self.degree = degree
        self.components = {}
        for n, op in components.items():
            assert n >= 1 and op.arity == n and op.degree == degree
            assert op.source is source.source.quiver
            assert op.target is source.target.quiver
            self.components[n] = op
        self.r0 = {}
        for X, el in (r0 or {}).items():
            if el.is_zero:
                continue
            assert el.degree == degree
            assert el.module is source.target.quiver.hom(
                source.obj_map(X), target.obj_map(X))
            self.r0[X] = el
        if arity_bound is None:
            arity_bound = max(self.components) if self.components else 0
        self.arity_bound = arity_bound
        self.name = name

    @property
    def cat_source(self):
        return self.source.source

    @property
    def cat_target(self):
        return self.source.target

    def component(self, n):
        return self.components.get(n)

    def component0(self, X):
        if X in self.r0:
            return self.r0[X]
        mod = self.cat_target.quiver.hom(self.source.obj_map(X), self.target.obj_map(X))
        return mod.zero(self.degree)

    def component_value(self, k, objs, names):
        """Value of component k on a basis tensor, zero when absent."""
        if k == 0:
            return self.component0(objs[0])
        op = self.component(k)
        if op is not None:
            return op.on_basis(objs, names)
        qa = self.cat_source.quiver
        deg = sum(qa.degree(objs[i], objs[i + 1], names[i]) for i in range(k)) + self.degree
        mod = self.cat_target.quiver.hom(self.source.obj_map(objs[0]),
                                         self.target.obj_map(objs[-1]))
        return mod.zero(deg)

    def __repr__(self):
        return "Coderivation(%s: %s -> %s, degree %d)" % (
            self.name, self.source.name, self.target.name, self.degree)


def random_coderivation(f, g, degree, arity_bound, rng, density=0.5, name="r"):
    """Random component tables, useful for differential and square checks."""
    A, B = f.source, f.target
    qa, qb = A.quiver, B.quiver
    comps = {}
    for k in range(1, arity_bound + 1):
        table = {}
        for objs, names in all_basis_tensors(qa, k):
            mod = qb.hom(f.obj_map(objs[0]), g.obj_map(objs[-1]))
            deg = sum(qa.degree(objs[i], objs[i + 1], names[i]) for i in range(k)) + degree
            el = mod.random_element(deg, rng)
            if not el.is_zero:
                table[(tuple(objs), tuple(names))] = el
        if table:
            comps[k] = MultiOp(qa, qb, k, degree, table=table,
                               lmap=f.obj_map, rmap=g.obj_map, name="%s%d" % (name, k))
    r0 = {}
    for X in qa.objects:
        mod = qb.hom(f.obj_map(X), g.obj_map(X))
        el = mod.random_element(degree, rng, density)
        if not el.is_zero:
            r0[X] = el
    return Coderivation(f, g, degree, comps, r0=r0, arity_bound=arity_bound, name=name)


def unit_transformation(g):
    """The unit coderivation on a functor into a strictly unital target.

    Only the per-object component is nonzero; it picks the distinguished
    unit at each image object.
    """
    B = g.target
    r0 = {}
    for X in g.source.quiver.objects:
        U = g.obj_map(X)
        assert U in B.units, "target lacks a unit at %r" % (U,)
        r0[X] = B.units[U]
    return Coderivation(g, g, -1, {}, r0=r0, arity_bound=0, name=g.name + "u")


def _commutator_tail(r, k, objs, names):
    """The source-side half of the differential: operations fed into r."""
    A = r.cat_source
    qa, qb = A.quiver, r.cat_target.quiver
    base = {(tuple(objs), tuple(names)): qa.ring.one}
    degree = sum(qa.degree(objs[i], objs[i + 1], names[i]) for i in range(k)) + r.degree + 1
    pair = (r.source.obj_map(objs[0]), r.target.obj_map(objs[-1]))
    total = qb.hom(*pair).zero(degree)
    for a in range(k):
        for q in range(1, k - a + 1):
            c = k - a - q
            bq, rout = A.b(q), r.component(a + 1 + c)
            if bq is None or rout is None:
                continue
            state = run_stages([insert(bq, a, c), insert(rout, 0, 0)], base)
            total = total.add(state_element(qb, state, pair, degree))
    return total


def b1_value(r, k, objs, names):
    """One basis-tensor value of the differential of a coderivation.

    First the placement sum: functor matrix elements of the source and
    target functors around one component of r (the 0-th component enters
    as a fixed-element block at the junction object), followed by one
    target operation.  Then minus (-1)^deg(r) times the source-side sum.
    """
    f, g = r.source, r.target
    A, B = r.cat_source, r.cat_target
    qa, qb = A.quiver, B.quiver
    base = {(tuple(objs), tuple(names)): qa.ring.one}
    degree = sum(qa.degree(objs[i], objs[i + 1], names[i]) for i in range(k)) + r.degree + 1
    pair = (f.obj_map(objs[0]), g.obj_map(objs[-1]))
    total = qb.hom(*pair).zero(degree)
    for a in range(k + 1):
        for q in range(k - a + 1):
            c = k - a - q
            if q == 0:
                X = objs[a]
                el = r.component0(X)
                if el.is_zero:
                    continue
                mid = ("el", el, (f.obj_map(X), g.obj_map(X)))
            else:
                op = r.component(q)
                if op is None:
                    continue
                mid = ("op", op)
            for fb in _functor_blocks(f, a):
                for gb in _functor_blocks(g, c):
                    outer = B.b(len(fb) + 1 + len(gb))
                    if outer is None:
                        continue
                    blocks = [("op", x) for x in fb] + [mid] + [("op", x) for x in gb]
                    state = run_stages([Stage(qa, blocks), insert(outer, 0, 0)], base)
                    total = total.add(state_element(qb, state, pair, degree))
    flip = -1 if r.degree % 2 == 0 else 1
    return total.add(_commutator_tail(r, k, objs, names).scale(flip))


def B1(r):
    """The differential of a coderivation, componentwise up to its bound."""
    f, g = r.source, r.target
    A, B = r.cat_source, r.cat_target
    comps = {}
    for n in range(1, r.arity_bound + 1):
        comps[n] = MultiOp(A.quiver, B.quiver, n, r.degree + 1,
                           rule=lambda objs, names, n=n: b1_value(r, n, objs, names),
                           lmap=f.obj_map, rmap=g.obj_map,
                           name="%sB1_%d" % (r.name, n))
    r0 = {}
    b1B = B.b(1)
    if b1B is not None:
        for X, el in r.r0.items():
            img = evaluate(b1B, (f.obj_map(X), g.obj_map(X)), (el,))
            if not img.is_zero:
                r0[X] = img
    return Coderivation(f, g, r.degree + 1, comps, r0=r0,
                        arity_bound=r.arity_bound, name=r.name + "B1")


def theta_value(rs, k, objs, names, chain=None):
    """Insertion sum: each coderivation placed once, in order, between
    functor matrix elements, then one target operation.

    chain gives the functors around the insertions; by default it is
    read off the coderivations themselves.
    """
    rs = list(rs)
    if chain is None:
        chain = [rs[0].source] + [r.target for r in rs]
    n = len(rs)
    for i in range(n):
        assert rs[i].source is chain[i] and rs[i].target is chain[i + 1], \
            "coderivations do not chain"
    A = chain[0].source
    B = chain[0].target
    qa, qb = A.quiver, B.quiver
    base = {(tuple(objs), tuple(names)): qa.ring.one}
    degree = sum(qa.degree(objs[i], objs[i + 1], names[i]) for i in range(k)) \
        + sum(r.degree for r in rs) + 1
    pair = (chain[0].obj_map(objs[0]), chain[-1].obj_map(objs[-1]))
    total = qb.hom(*pair).zero(degree)
    for split in _compositions(k, 2 * n + 1):
        fas = split[0::2]
        ps = split[1::2]
        mids = []
        ok = True
        pos = 0
        for i in range(n):
            pos += fas[i]
            if ps[i] == 0:
                X = objs[pos]
                el = rs[i].component0(X)
                if el.is_zero:
                    ok = False
                    break
                mids.append(("el", el, (chain[i].obj_map(X), chain[i + 1].obj_map(X))))
            else:
                op = rs[i].component(ps[i])
                if op is None:
                    ok = False
                    break
                mids.append(("op", op))
            pos += ps[i]
        if not ok:
            continue
        per = [list(_functor_blocks(chain[i], fas[i])) for i in range(n + 1)]
        for fblocks in itertools.product(*per):
            outer = B.b(sum(len(fb) for fb in fblocks) + n)
            if outer is None:
                continue
            blocks = []
            for i in range(n):
                blocks.extend(("op", op) for op in fblocks[i])
                blocks.append(mids[i])
            blocks.extend(("op", op) for op in fblocks[n])
            state = run_stages([Stage(qa, blocks), insert(outer, 0, 0)], base)
            total = total.add(state_element(qb, state, pair, degree))
    return total


def Bn(rs, category=None, arity_bound=None, name=None):
    """Composition of several coderivations: insertion, then operations.

    With a single coderivation the source-side commutator term is added,
    so the result agrees with B1.  With none this is the structure of
    the given category carried by its identity functor.
    """
    rs = list(rs)
    if not rs:
        assert category is not None, "empty composition needs a category"
        chain = [identity_functor(category)]
    else:
        chain = [rs[0].source] + [r.target for r in rs]
    fsrc, ftgt = chain[0], chain[-1]
    A, B = fsrc.source, fsrc.target
    degree = sum(r.degree for r in rs) + 1
    if arity_bound is None:
        arity_bound = max([r.arity_bound for r in rs], default=A.max_arity)
    flip = None
    if len(rs) == 1:
        flip = -1 if rs[0].degree % 2 == 0 else 1
    label = name or ("B%d(%s)" % (len(rs), ",".join(r.name for r in rs)))
    comps = {}
    for n in range(1, arity_bound + 1):
        def rule(objs, names, n=n):
            total = theta_value(rs, n, objs, names, chain=chain)
            if flip is not None:
                total = total.add(_commutator_tail(rs[0], n, objs, names).scale(flip))
            return total

        comps[n] = MultiOp(A.quiver, B.quiver, n, degree, rule=rule,
                           lmap=fsrc.obj_map, rmap=ftgt.obj_map,
                           name="%s_%d" % (label, n))
    r0 = {}
    for X in A.quiver.objects:
        val = theta_value(rs, 0, (X,), (), chain=chain)
        if not val.is_zero:
            r0[X] = val
    return Coderivation(fsrc, ftgt, degree, comps, r0=r0,
                        arity_bound=arity_bound, name=label)


def coderivations_equal(r1, r2):
    """Exact componentwise equality up to the larger arity bound."""
    if r1.degree != r2.degree:
        return False
    qa = r1.cat_source.quiver
    for X in qa.objects:
        if r1.component0(X) != r2.component0(X):
            return False
    bound = max(r1.arity_bound, r2.arity_bound)
    for k in range(1, bound + 1):
        for objs, names in all_basis_tensors(qa, k):
            if r1.component_value(k, objs, names) != r2.component_value(k, objs, names):
                return False
    return True


def check_b1_square(r, samples=25, seed=0):
    """Exact vanishing of the squared differential on one coderivation."""
    rng = random.Random(seed)
    rr = B1(B1(r))
    rep = Report("squared differential on %s" % r.name)
    A = r.cat_source
    ok0 = all(rr.component0(X).is_zero for X in A.quiver.objects)
    rep.add("arity 00", ok0, "per-object components")
    for k in range(1, r.arity_bound + 1):
        checked, skipped, exhaustive, bad = sampled_check(
            A, k, samples, rng,
            lambda objs, names, k=k: rr.component_value(k, objs, names))
        add_sampled_line(rep, "arity %02d" % k, checked, skipped, exhaustive, bad)
    return rep


class HochschildCochain:
    """Cochain data on the unshifted homs through two strict functors.

    Component k maps plain k-tensors of source arrows into the target
    hom between the image objects; component 0 is per-object.  degree is
    shared with the corresponding coderivation, so component k has map
    degree equal to degree + 1 - k.
    """

    def __init__(self, source, target, degree, components, t0=None,
                 arity_bound=None, name="t"):
        self.source = source
        self.target = target
        self.degree = degree
        self.components = dict(components)
        self.t0 = dict(t0) if t0 else {}
        if arity_bound is None:
            arity_bound = max(self.components) if self.components else 0
        self.arity_bound = arity_bound
        self.name = name

    def map_degree(self, k):
        return self.degree + 1 - k

    def eval(self, k, objs, factors):
        """Apply component k to a tensor of unshifted elements."""
        B = self.source.target
        qb = B.dg.quiver
        pair = (self.source.obj_map(objs[0]), self.target.obj_map(objs[-1]))
        if k == 0:
            el = self.t0.get(objs[0])
            if el is None:
                return qb.hom(*pair).zero(self.map_degree(0))
            return el
        op = self.components.get(k)
        if op is None:
            deg = sum(f.degree for f in factors) + self.map_degree(k)
            return qb.hom(*pair).zero(deg)
        return evaluate(op, objs, factors)


def _require_dg(f, g):
    A, B = f.source, f.target
    if A.dg is None or B.dg is None:
        raise ValueError("cochain comparison needs categories built from unshifted data")
    if f.arity_top > 1 or g.arity_top > 1:
        raise ValueError("cochain comparison needs strict functors")
    return A.dg, B.dg


def dg_arrow_image(f, X, Y, el):
    """Arity-1 action on an unshifted arrow: the same matrix as shifted."""
    smod = f.source.quiver.hom(X, Y)
    op = f.component(1)
    tmod = f.target.dg.quiver.hom(f.obj_map(X), f.obj_map(Y))
    if op is None:
        return tmod.zero(el.degree)
    sval = evaluate(op, (X, Y), (smod.element(dict(el.items()), el.degree - 1),))
    return tmod.element(dict(sval.items()), el.degree)


def to_hochschild(r):
    """Conjugate a coderivation by the shift, componentwise.

    Component k picks up the sign of the weighted sum of unshifted input
    degrees, with weight i - 1 on the i-th factor; the output loses one
    shift with no extra sign.
    """
    f, g = r.source, r.target
    dga, dgb = _require_dg(f, g)
    qa, qb = dga.quiver, dgb.quiver
    comps = {}
    for k in range(1, r.arity_bound + 1):
        def rule(objs, names, k=k):
            degs = [qa.degree(objs[i], objs[i + 1], names[i]) for i in range(k)]
            par = sum(i * degs[i] for i in range(k))
            pair = (f.obj_map(objs[0]), g.obj_map(objs[-1]))
            deg_out = sum(degs) + r.degree + 1 - k
            rk = r.component(k)
            if rk is None:
                return qb.hom(*pair).zero(deg_out)
            sval = rk.on_basis(objs, names)
            out = qb.hom(*pair).element(dict(sval.items()), deg_out)
            return out.neg() if par % 2 else out

        comps[k] = MultiOp(qa, qb, k, r.degree + 1 - k, rule=rule,
                           lmap=f.obj_map, rmap=g.obj_map,
                           name="%s_t%d" % (r.name, k))
    t0 = {}
    for X, el in r.r0.items():
        mod = qb.hom(f.obj_map(X), g.obj_map(X))
        t0[X] = mod.element(dict(el.items()), el.degree + 1)
    return HochschildCochain(f, g, r.degree, comps, t0=t0,
                             arity_bound=r.arity_bound, name=r.name + "t")


def hochschild_d(t):
    """The cochain differential for composition-only data.

    Defined when both categories carry no differential on the unshifted
    arrows: functor image times the cochain, minus-signed inner
    multiplications, and the cochain times the functor image with the
    arity-dependent sign.  On arrows of degree 0 this is the classical
    three-term sum; in general degrees the whole component is scaled by
    the parity of the cochain's map degree, and the last term moves the
    final arrow past the cochain, because the differential is really
    the shift conjugate of the coderivation differential.
    """
    f, g = t.source, t.target
    dga, dgb = _require_dg(f, g)
    if dga.m1 or dgb.m1:
        raise ValueError("cochain differential needs vanishing differentials")
    qa, qb = dga.quiver, dgb.quiver
    comps = {}
    for K in range(1, t.arity_bound + 2):
        def rule(objs, names, K=K):
            k = K - 1
            pair = (f.obj_map(objs[0]), g.obj_map(objs[-1]))
            mdeg = t.map_degree(k)
            deg_out = sum(qa.degree(objs[i], objs[i + 1], names[i])
                          for i in range(K)) + t.degree + 1 - k
            basis = [qa.hom(objs[i], objs[i + 1]).basis_element(names[i])
                     for i in range(K)]
            out = qb.hom(*pair).zero(deg_out)
            lead = dg_arrow_image(f, objs[0], objs[1], basis[0])
            rest = t.eval(k, objs[1:], basis[1:])
            out = out.add(dgb.mul(f.obj_map(objs[0]), f.obj_map(objs[1]), pair[1],
                                  lead, rest))
            for a in range(k):
                prod = dga.mul(objs[a], objs[a + 1], objs[a + 2], basis[a], basis[a + 1])
                val = t.eval(k, objs[:a + 1] + objs[a + 2:],
                             basis[:a] + [prod] + basis[a + 2:])
                out = out.add(val.scale(-1 if (a + 1) % 2 else 1))
            tail = dg_arrow_image(g, objs[-2], objs[-1], basis[-1])
            head = t.eval(k, objs[:-1], basis[:-1])
            val = dgb.mul(pair[0], g.obj_map(objs[-2]), g.obj_map(objs[-1]), head, tail)
            swap = qa.degree(objs[-2], objs[-1], names[-1]) * mdeg
            sign = (-1 if (k + 1) % 2 else 1) * (-1 if swap % 2 else 1)
            out = out.add(val.scale(sign))
            return out.neg() if mdeg % 2 else out

        comps[K] = MultiOp(qa, qb, K, t.degree + 2 - K, rule=rule,
                           lmap=f.obj_map, rmap=g.obj_map,
                           name="%sd_%d" % (t.name, K))
    return HochschildCochain(f, g, t.degree + 1, comps, t0={},
                             arity_bound=t.arity_bound + 1, name=t.name + "d")


def check_hochschild_square(r):
    """The shift conjugation intertwines the two differentials, exactly.

    Compares the conjugate of the coderivation differential with the
    cochain differential of the conjugate on every basis tensor up to
    the coderivation's arity bound.
    """
    t = to_hochschild(r)
    lhs = to_hochschild(B1(r))
    rhs = hochschild_d(t)
    rep = Report("conjugation square for %s" % r.name)
    qa = r.cat_source.dg.quiver
    ok0 = all(lhs.eval(0, (X,), ()) == rhs.eval(0, (X,), ()) for X in qa.objects)
    rep.add("arity 00", ok0, "per-object components")
    for k in range(1, r.arity_bound + 1):
        bad = None
        count = 0
        for objs, names in all_basis_tensors(qa, k):
            count += 1
            basis = [qa.hom(objs[i], objs[i + 1]).basis_element(names[i])
                     for i in range(k)]
            if lhs.eval(k, objs, basis) != rhs.eval(k, objs, basis):
                bad = (objs, names)
                break
        rep.add("arity %02d" % k, bad is None,
                "%d tensors" % count if bad is None else "mismatch on names=%r" % (bad[1],))
    return rep

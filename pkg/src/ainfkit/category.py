"""Finite A-infinity categories with exact identity checks.

The structure is carried by the shifted hom modules: one operation per
arity up to a declared maximum, each of degree +1.  Defining identities
are verified by running the full sums on basis tensors through the
stage engine, so every Koszul sign comes out of evaluation rather than
separate bookkeeping.
"""

import random

from .graded import (ChainMap, Complex, GradedModule, in_image, koszul_sign,
                     shift, solve_linear)
from .quiver import (BoundError, GradedQuiver, MultiOp, QuiverMap,
                     collect_tensors, evaluate, insert, run_stages,
                     state_element, unit_stage)
from .report import Report


class AInfCategory:
    """Shifted-hom quiver with degree +1 operations of arity 1..max_arity.

    ops maps arity to a MultiOp; a missing arity is the zero operation.
    units maps objects to distinguished degree -1 cycles.  size_of and
    size_bound describe an optional truncation: size_of(X, Y, name) is
    the declared size of a basis arrow, and checks skip tensors whose
    total size exceeds size_bound.
    """

    def __init__(self, quiver, ops, max_arity, units=None, size_of=None,
                 size_bound=None, name="A"):
        self.quiver = quiver
        self.ops = {}
        for n, op in ops.items():
            assert 1 <= n <= max_arity, "operation outside declared arity range"
            assert op.arity == n and op.degree == 1
            assert op.source is quiver and op.target is quiver
            self.ops[n] = op
        self.max_arity = max_arity
        self.units = dict(units) if units else {}
        self.size_of = size_of
        self.size_bound = size_bound
        self.name = name
        self.dg = None
        b1 = self.ops.get(1)
        for X, u in self.units.items():
            assert u.degree == -1 and not u.is_zero, "unit must be a nonzero degree -1 element"
            assert u.module is quiver.hom(X, X), "unit of %r not in its endomorphism module" % (X,)
            if b1 is not None:
                assert evaluate(b1, (X, X), (u,)).is_zero, "unit of %r is not a cycle" % (X,)

    def b(self, n):
        return self.ops.get(n)

    @property
    def objects(self):
        return self.quiver.objects

    def hom(self, X, Y):
        return self.quiver.hom(X, Y)

    def tensor_size(self, objs, names):
        if self.size_of is None:
            return None
        return sum(self.size_of(objs[i], objs[i + 1], names[i])
                   for i in range(len(names)))

    def within_bound(self, objs, names, extra=0):
        if self.size_of is None or self.size_bound is None:
            return True
        return self.tensor_size(objs, names) + extra <= self.size_bound

    def unit_size(self, X):
        """Largest declared size among the basis terms of the unit at X."""
        if self.size_of is None:
            return 0
        return max(self.size_of(X, X, nm) for nm, _ in self.units[X].items())

    def __repr__(self):
        return "AInfCategory(%s, %d objects, max arity %d)" % (
            self.name, len(self.quiver.objects), self.max_arity)


def hom_complex(A, X, Y, check=True):
    """The shifted hom module at (X, Y) with its arity-1 operation."""
    mod = A.quiver.hom(X, Y)
    b1 = A.b(1)
    d = {}
    if b1 is not None:
        for nm in mod.names:
            img = b1.on_basis((X, Y), (nm,))
            if not img.is_zero:
                d[nm] = img
    return Complex(mod, d, check=check)


def b1_chain_map(A, X, Y):
    """The arity-1 operation at (X, Y) as a degree +1 matrix map."""
    mod = A.quiver.hom(X, Y)
    b1 = A.b(1)
    matrix = {}
    if b1 is not None:
        matrix = {nm: b1.on_basis((X, Y), (nm,)) for nm in mod.names}
    return ChainMap(mod, mod, 1, matrix)


def stasheff_defect(A, k, objs, names):
    """The full arity-k defining sum evaluated on one basis tensor.

    Zero exactly when the structure identities of total arity k hold on
    that tensor.  Terms whose inner or outer arity has no operation are
    zero and skipped.
    """
    q = A.quiver
    objs, names = tuple(objs), tuple(names)
    base = {(objs, names): q.ring.one}
    deg = sum(q.degree(objs[i], objs[i + 1], names[i]) for i in range(k)) + 2
    pair = (objs[0], objs[-1])
    total = q.hom(*pair).zero(deg)
    for a in range(k):
        for m in range(1, k - a + 1):
            c = k - a - m
            inner, outer = A.b(m), A.b(a + 1 + c)
            if inner is None or outer is None:
                continue
            state = run_stages([insert(inner, a, c), insert(outer, 0, 0)], base)
            total = total.add(state_element(q, state, pair, deg))
    return total


def sampled_check(A, k, samples, rng, defect_fn):
    """Run a per-tensor defect over sampled basis tensors, bound aware.

    Returns (checked, skipped, exhaustive, bad) where bad is the first
    (objs, names, defect) with a nonzero defect, or None.
    """
    tensors, exhaustive = collect_tensors(A.quiver, k, samples, rng)
    checked = skipped = 0
    bad = None
    for objs, names in tensors:
        if not A.within_bound(objs, names):
            skipped += 1
            continue
        try:
            d = defect_fn(objs, names)
        except BoundError:
            skipped += 1
            continue
        checked += 1
        if not d.is_zero:
            bad = (objs, names, d)
            break
    return checked, skipped, exhaustive, bad


def add_sampled_line(rep, label, checked, skipped, exhaustive, bad):
    if bad is not None:
        rep.add(label, False, "defect %r on names=%r over objects %r" % (
            bad[2], bad[1], bad[0]))
    else:
        mode = "all" if exhaustive else "sampled"
        rep.add(label, True, "%s, %d tensors, %d skipped" % (mode, checked, skipped))


def check_stasheff(A, arity_bound=None, samples=40, seed=0):
    """Verify the defining identities up to a total arity.

    The default bound 2*max_arity - 1 covers every identity that has a
    term built from two stored operations.  Tensors over the size bound
    and evaluations that escape it are counted as skipped, never failed.
    """
    if arity_bound is None:
        arity_bound = 2 * A.max_arity - 1
    rng = random.Random(seed)
    rep = Report("structure identities for %s" % A.name)
    for k in range(1, arity_bound + 1):
        checked, skipped, exhaustive, bad = sampled_check(
            A, k, samples, rng,
            lambda objs, names, k=k: stasheff_defect(A, k, objs, names))
        add_sampled_line(rep, "arity %02d" % k, checked, skipped, exhaustive, bad)
    return rep


class DGData:
    """Unshifted hom modules with their differential and composition."""

    def __init__(self, quiver, m1, m2):
        self.quiver = quiver
        self.m1 = {}
        for pair, mat in m1.items():
            clean = {n: el for n, el in mat.items() if not el.is_zero}
            if clean:
                self.m1[pair] = clean
        self.m2 = m2

    def d(self, X, Y, el):
        mat = self.m1.get((X, Y), {})
        out = self.quiver.hom(X, Y).zero(el.degree + 1)
        for n, c in el.items():
            if n in mat:
                out = out.add(mat[n].scale(c))
        return out

    def mul(self, X, Y, Z, x, y):
        table = self.m2.get((X, Y, Z), {})
        ring = self.quiver.ring
        out = self.quiver.hom(X, Z).zero(x.degree + y.degree)
        for n1, c1 in x.items():
            for n2, c2 in y.items():
                val = table.get((n1, n2))
                if val is not None:
                    out = out.add(val.scale(ring.mul(c1, c2)))
        return out


def dg_to_ainf(homs, m1, m2, units=None, name="A"):
    """Build the two-operation structure of a differential graded category.

    homs gives the unshifted hom modules per ordered pair, m1 the basis
    differentials (degree +1) per pair, m2 the composition tables per
    object triple on basis pairs (degree 0).  The square-zero, Leibniz,
    associativity, and unit laws are all verified first; any failure
    raises ValueError.  Composition is written left to right, so the
    Leibniz rule checked here differentiates the second factor with no
    sign and the first factor with the sign of the second.  On the shifted modules the arity-1 operation
    keeps the same matrix and the arity-2 operation picks up the sign
    of the unshifted degree of the second argument.  The unshifted data
    stays available on the result as the attribute dg.
    """
    mods = {pair: mod for pair, mod in homs.items() if mod.names}
    assert mods, "no nonzero hom modules"
    ring = next(iter(mods.values())).ring
    objects = []
    for pair in mods:
        for X in pair:
            if X not in objects:
                objects.append(X)
    if units:
        for X in units:
            if X not in objects:
                objects.append(X)
    plain = GradedQuiver(ring, objects, mods)
    dg = DGData(plain, m1, m2)

    def d_el(pair, el):
        return dg.d(pair[0], pair[1], el)

    def mul(X, Y, Z, x, y):
        return dg.mul(X, Y, Z, x, y)

    for pair, mat in m1.items():
        mod = mods[pair]
        for n, el in mat.items():
            if el.degree != mod.degrees[n] + 1 or el.module is not mod:
                raise ValueError("differential entry at %r has wrong type" % (n,))
        for n in mod.names:
            if not d_el(pair, d_el(pair, mod.basis_element(n))).is_zero:
                raise ValueError("differential does not square to zero at %r" % (n,))
    for (X, Y, Z), table in m2.items():
        for (n1, n2), val in table.items():
            want = mods[(X, Y)].degrees[n1] + mods[(Y, Z)].degrees[n2]
            if val.degree != want or val.module is not plain.hom(X, Z):
                raise ValueError("composition entry (%r, %r) has wrong type" % (n1, n2))
    for (X, Y) in mods:
        for (Y2, Z) in mods:
            if Y2 != Y:
                continue
            for n1 in mods[(X, Y)].names:
                x = mods[(X, Y)].basis_element(n1)
                for n2 in mods[(Y, Z)].names:
                    y = mods[(Y, Z)].basis_element(n2)
                    lhs = d_el((X, Z), mul(X, Y, Z, x, y))
                    rhs = mul(X, Y, Z, x, d_el((Y, Z), y))
                    if mods[(Y, Z)].degrees[n2] % 2:
                        rhs = rhs.sub(mul(X, Y, Z, d_el((X, Y), x), y))
                    else:
                        rhs = rhs.add(mul(X, Y, Z, d_el((X, Y), x), y))
                    if lhs != rhs:
                        raise ValueError("Leibniz rule fails on (%r, %r)" % (n1, n2))
                    for (Z2, W) in mods:
                        if Z2 != Z:
                            continue
                        for n3 in mods[(Z, W)].names:
                            z = mods[(Z, W)].basis_element(n3)
                            left = mul(X, Z, W, mul(X, Y, Z, x, y), z)
                            right = mul(X, Y, W, x, mul(Y, Z, W, y, z))
                            if left != right:
                                raise ValueError(
                                    "associativity fails on (%r, %r, %r)" % (n1, n2, n3))
    unit_els = {}
    if units:
        for X, u in units.items():
            if not hasattr(u, "items"):
                u = mods[(X, X)].basis_element(u)
            if u.degree != 0 or u.module is not plain.hom(X, X):
                raise ValueError("unit at %r must have degree 0" % (X,))
            if not d_el((X, X), u).is_zero:
                raise ValueError("unit at %r is not closed" % (X,))
            unit_els[X] = u
        for (X, Y) in mods:
            for n in mods[(X, Y)].names:
                x = mods[(X, Y)].basis_element(n)
                if X in unit_els and mul(X, X, Y, unit_els[X], x) != x:
                    raise ValueError("left unit law fails at %r" % (n,))
                if Y in unit_els and mul(X, Y, Y, x, unit_els[Y]) != x:
                    raise ValueError("right unit law fails at %r" % (n,))

    squiver = GradedQuiver(ring, objects, {pair: shift(mod, 1) for pair, mod in mods.items()})

    def lift(pair, el):
        return squiver.hom(*pair).element(dict(el.items()), el.degree - 1)

    t1 = {}
    for pair, mat in m1.items():
        for n, el in mat.items():
            if not el.is_zero:
                t1[(pair, (n,))] = lift(pair, el)
    t2 = {}
    for (X, Y, Z), table in m2.items():
        for (n1, n2), val in table.items():
            if val.is_zero:
                continue
            sgn = -1 if mods[(Y, Z)].degrees[n2] % 2 else 1
            t2[((X, Y, Z), (n1, n2))] = lift((X, Z), val.scale(sgn))
    ops = {
        1: MultiOp(squiver, squiver, 1, 1, table=t1, name="b1"),
        2: MultiOp(squiver, squiver, 2, 1, table=t2, name="b2"),
    }
    sunits = {X: lift((X, X), u) for X, u in unit_els.items()}
    cat = AInfCategory(squiver, ops, 2, units=sunits, name=name)
    cat.dg = dg
    return cat


def complexes_category(ring, complexes, name="cpx"):
    """The differential graded category of a finite family of complexes.

    complexes maps an object label to a pair (basis, d): basis lists
    (generator, degree) rows of the underlying graded module, and d
    sends a generator to the {generator: coefficient} column of its
    differential.  Hom modules get one generator (a, b) per pair of a
    source and a target generator, standing for the map that sends a to
    b and every other generator to zero.  The differential of such a map
    is post-composition with the target differential minus, signed by
    the parity of the map degree, pre-composition with the source one;
    binary composition substitutes matching middle generators with no
    sign.  The identity maps are strict units.  Everything is validated
    and shifted by dg_to_ainf; the complex data stays available on the
    result as the attribute complex_data.
    """
    data = {}
    for obj, (basis, diff) in complexes.items():
        gens = [g for g, _ in basis]
        degs = dict(basis)
        if len(gens) != len(degs):
            raise ValueError("duplicate generator in %r" % (obj,))
        cols = {}
        for src, col in diff.items():
            if src not in degs:
                raise ValueError("differential of unknown generator %r in %r"
                                 % (src, obj))
            clean = {}
            for tgt, c in col.items():
                if tgt not in degs or degs[tgt] != degs[src] + 1:
                    raise ValueError("differential entry %r -> %r in %r is "
                                     "not of degree one" % (src, tgt, obj))
                c = ring.normalize(c)
                if c != ring.zero:
                    clean[tgt] = c
            if clean:
                cols[src] = clean
        for src, col in cols.items():
            square = {}
            for mid, c in col.items():
                for tgt, c2 in cols.get(mid, {}).items():
                    square[tgt] = ring.add(square.get(tgt, ring.zero),
                                           ring.mul(c, c2))
            if any(v != ring.zero for v in square.values()):
                raise ValueError("differential of %r does not square to zero"
                                 % (obj,))
        data[obj] = (gens, degs, cols)

    objects = list(complexes)
    homs = {}
    for M in objects:
        for N in objects:
            rows = [((a, b), data[N][1][b] - data[M][1][a])
                    for a in data[M][0] for b in data[N][0]]
            homs[(M, N)] = GradedModule(ring, rows)

    m1 = {}
    for M in objects:
        _, mdegs, mcols = data[M]
        for N in objects:
            _, ndegs, ncols = data[N]
            mod = homs[(M, N)]
            mat = {}
            for (a, b) in mod.names:
                terms = {}
                for b2, c in ncols.get(b, {}).items():
                    terms[(a, b2)] = c
                sgn = -1 if (ndegs[b] - mdegs[a]) % 2 else 1
                for a2, col in mcols.items():
                    c = col.get(a)
                    if c is not None:
                        prev = terms.get((a2, b), ring.zero)
                        terms[(a2, b)] = ring.sub(prev, ring.mul(sgn, c))
                mat[(a, b)] = mod.element(terms, ndegs[b] - mdegs[a] + 1)
            m1[(M, N)] = mat

    m2 = {}
    for M in objects:
        for N in objects:
            for P in objects:
                table = {}
                for (a, b) in homs[(M, N)].names:
                    for (b2, c) in homs[(N, P)].names:
                        if b == b2:
                            table[((a, b), (b2, c))] = \
                                homs[(M, P)].basis_element((a, c))
                m2[(M, N, P)] = table

    units = {M: homs[(M, M)].element({(a, a): 1 for a in data[M][0]}, 0)
             for M in objects}
    cat = dg_to_ainf(homs, m1, m2, units=units, name=name)
    cat.complex_data = data
    return cat


def opposite(A):
    """Arrow-reversed structure on the same hom modules.

    The arity-k operation reads its arguments in reverse order, with the
    Koszul sign of the reversal and a further minus for even k.  Arity 1
    is unchanged and the distinguished units carry over as they are.
    """
    q = A.quiver
    homs = {(Y, X): mod for (X, Y), mod in q.homs.items()}
    opq = GradedQuiver(q.ring, q.objects, homs)
    ops = {n: _reversed_op(opq, op, n) for n, op in A.ops.items()}
    size_of = None
    if A.size_of is not None:
        orig = A.size_of
        size_of = lambda X, Y, nm: orig(Y, X, nm)
    return AInfCategory(opq, ops, A.max_arity, units=dict(A.units),
                        size_of=size_of, size_bound=A.size_bound,
                        name=A.name + ".op")


def _reversed_op(opq, op, n):
    def rule(objs, names):
        degs = [opq.degree(objs[i], objs[i + 1], names[i]) for i in range(n)]
        sign = koszul_sign(range(n - 1, -1, -1), degs)
        if n % 2 == 0:
            sign = -sign
        return op.on_basis(tuple(reversed(objs)), tuple(reversed(names))).scale(sign)

    return MultiOp(opq, opq, n, 1, rule=rule,
                   name=(op.name or "b%d" % n) + ".rev")


def unit_then_op(A, objs, names, pos, outer):
    """Insert the unit of objs[pos] at slot pos, then apply outer.

    Evaluates the composite stage on one basis tensor, Koszul signs
    included; outer None is the zero operation.
    """
    q = A.quiver
    n = len(names)
    deg = sum(q.degree(objs[i], objs[i + 1], names[i]) for i in range(n))
    if outer is None:
        return q.hom(objs[0], objs[-1]).zero(deg)
    u = A.units[objs[pos]]
    stages = [unit_stage(q, u, (objs[pos], objs[pos]), pos, n - pos),
              insert(outer, 0, 0)]
    state = run_stages(stages, {(tuple(objs), tuple(names)): q.ring.one})
    return state_element(q, state, (objs[0], objs[-1]), deg)


def check_strict_unit(A, samples=60, seed=0):
    """Strict identity laws for the distinguished units.

    On shifted homs the arity-2 laws read: unit on the right composes to
    the identity, unit on the left to minus the identity.  For every
    higher arity an insertion at either end must vanish.  Arrows whose
    endpoint lacks a unit are counted as skipped.
    """
    rng = random.Random(seed)
    rep = Report("strict units for %s" % A.name)
    q = A.quiver
    b2 = A.b(2)
    assert b2 is not None, "strict unit laws need an arity-2 operation"
    bad_r = bad_l = None
    n_r = n_l = skip2 = 0
    for (X, Y) in q.pairs():
        for nm in q.hom(X, Y).names:
            x = q.hom(X, Y).basis_element(nm)
            if Y in A.units:
                n_r += 1
                got = unit_then_op(A, (X, Y), (nm,), 1, b2)
                if got != x and bad_r is None:
                    bad_r = (nm, got)
            else:
                skip2 += 1
            if X in A.units:
                n_l += 1
                got = unit_then_op(A, (X, Y), (nm,), 0, b2)
                if got != x.neg() and bad_l is None:
                    bad_l = (nm, got)
            else:
                skip2 += 1
    rep.add("right unit law", bad_r is None,
            "%d arrows, %d skipped" % (n_r, skip2) if bad_r is None
            else "got %r on %r" % (bad_r[1], bad_r[0]))
    rep.add("left unit law", bad_l is None,
            "%d arrows, %d skipped" % (n_l, skip2) if bad_l is None
            else "got %r on %r" % (bad_l[1], bad_l[0]))
    for n in range(2, A.max_arity):
        outer = A.b(n + 1)
        label = "end insertions arity %02d" % (n + 1)
        if outer is None:
            rep.add(label, True, "vacuous")
            continue
        tensors, exhaustive = collect_tensors(q, n, samples, rng)
        checked = skipped = 0
        bad = None
        for objs, names in tensors:
            for pos in (n, 0):
                uobj = objs[pos]
                if uobj not in A.units:
                    skipped += 1
                    continue
                if not A.within_bound(objs, names, extra=A.unit_size(uobj)):
                    skipped += 1
                    continue
                try:
                    got = unit_then_op(A, objs, names, pos, outer)
                except BoundError:
                    skipped += 1
                    continue
                checked += 1
                if not got.is_zero and bad is None:
                    bad = (objs, names, pos, got)
        if bad is not None:
            rep.add(label, False, "nonzero %r at slot %d of names=%r" % (
                bad[3], bad[2], bad[1]))
        else:
            mode = "all" if exhaustive else "sampled"
            rep.add(label, True, "%s, %d insertions, %d skipped" % (mode, checked, skipped))
    return rep


def verify_unit_homotopy(A, h, h_prime):
    """Unit laws up to the supplied homotopies.

    h and h_prime are degree -1 quiver endomaps (None means zero).  For
    each basis arrow x the right law asserts that x minus unit-on-the-
    right equals the h-boundary of x, and the left law that x plus
    unit-on-the-left equals the h_prime-boundary.
    """
    rep = Report("unit homotopies for %s" % A.name)
    q = A.quiver
    b1, b2 = A.b(1), A.b(2)
    assert b2 is not None

    def d1(X, Y, el):
        if b1 is None or el.is_zero:
            return q.hom(X, Y).zero(el.degree + 1)
        return evaluate(b1, (X, Y), (el,))

    def boundary(hmap, X, Y, x):
        if hmap is None:
            return q.hom(X, Y).zero(x.degree)
        return hmap.apply(X, Y, d1(X, Y, x)).add(d1(X, Y, hmap.apply(X, Y, x)))

    bad_r = bad_l = None
    n_r = n_l = 0
    for (X, Y) in q.pairs():
        for nm in q.hom(X, Y).names:
            x = q.hom(X, Y).basis_element(nm)
            if Y in A.units:
                n_r += 1
                lhs = x.sub(unit_then_op(A, (X, Y), (nm,), 1, b2))
                if lhs != boundary(h, X, Y, x) and bad_r is None:
                    bad_r = (nm, lhs)
            if X in A.units:
                n_l += 1
                lhs = x.add(unit_then_op(A, (X, Y), (nm,), 0, b2))
                if lhs != boundary(h_prime, X, Y, x) and bad_l is None:
                    bad_l = (nm, lhs)
    rep.add("right law up to homotopy", bad_r is None,
            "%d arrows" % n_r if bad_r is None else "defect %r on %r" % (bad_r[1], bad_r[0]))
    rep.add("left law up to homotopy", bad_l is None,
            "%d arrows" % n_l if bad_l is None else "defect %r on %r" % (bad_l[1], bad_l[0]))
    return rep


def _acc(row, key, c, ring):
    v = ring.add(row.get(key, ring.zero), c)
    if v == ring.zero:
        row.pop(key, None)
    else:
        row[key] = v


def check_contractible_functor(g):
    """Null-homotope the arity-1 component of a functor, pair by pair.

    Solves g1 = H b1 + b1 H for a degree -1 map H by exact linear
    algebra over a field.  Returns (report, H); H is a QuiverMap when
    every pair has a solution and None otherwise.
    """
    B, A = g.source, g.target
    ring = A.quiver.ring
    assert ring.is_field, "homotopy solve needs field coefficients"
    rep = Report("contractible functor check")
    g1 = g.component(1)
    comps = {}
    allok = True
    for (X, Y) in B.quiver.pairs():
        smod = B.quiver.hom(X, Y)
        U, V = g.obj_map(X), g.obj_map(Y)
        tmod = A.quiver.hom(U, V)
        dBmap = b1_chain_map(B, X, Y)
        dB = {n: dBmap(smod.basis_element(n)) for n in smod.names}
        dA = b1_chain_map(A, U, V)
        unknowns = [(n, m) for n in smod.names for m in tmod.names
                    if tmod.degrees[m] == smod.degrees[n] - 1]
        rows = []
        for n, m in unknowns:
            row = {}
            for o, c in dA(tmod.basis_element(m)).items():
                _acc(row, (n, o), c, ring)
            for n2 in smod.names:
                c = dB[n2].coeff(n)
                if c != ring.zero:
                    _acc(row, (n2, m), c, ring)
            rows.append(row)
        rhs = {}
        for n in smod.names:
            img = (g1.on_basis((X, Y), (n,)) if g1 is not None
                   else tmod.zero(smod.degrees[n]))
            for o, c in img.items():
                rhs[(n, o)] = c
        sol = solve_linear(ring, rows, rhs)
        if sol is None:
            rep.add("pair %r" % ((X, Y),), False, "g1 is not a boundary for the hom differentials")
            allok = False
            continue
        mat = {}
        for (n, m), c in zip(unknowns, sol):
            if c == ring.zero:
                continue
            cur = mat.get(n, tmod.zero(smod.degrees[n] - 1))
            mat[n] = cur.add(tmod.basis_element(m, c))
        comps[(X, Y)] = mat
        rep.add("pair %r" % ((X, Y),), True, "homotopy found")
    if not allok:
        return rep, None
    return rep, QuiverMap(B.quiver, A.quiver, -1, comps, obj_map=g.obj_map)


def check_pseudounital_functor(f):
    """Units map to units up to a boundary under the arity-1 component.

    For each object X with a unit, the difference between the target
    unit at Xf and the image of the source unit must lie in the image
    of the arity-1 operation.  Field coefficients required.
    """
    S, T = f.source, f.target
    assert T.quiver.ring.is_field, "image membership needs field coefficients"
    rep = Report("pseudounital functor check")
    f1 = f.component(1)
    for X in sorted(S.units, key=repr):
        U = f.obj_map(X)
        if U not in T.units:
            rep.add("object %r" % (X,), False, "no unit at the image object")
            continue
        uX = S.units[X]
        img = (evaluate(f1, (X, X), (uX,)) if f1 is not None
               else T.quiver.hom(U, U).zero(-1))
        v = T.units[U].sub(img)
        if v.is_zero:
            rep.add("object %r" % (X,), True, "unit preserved on the nose")
            continue
        w = in_image(v, b1_chain_map(T, U, U))
        rep.add("object %r" % (X,), w is not None,
                "difference is a boundary" if w is not None
                else "difference %r is not a boundary" % (v,))
    return rep

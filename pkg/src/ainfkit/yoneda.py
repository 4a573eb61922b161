"""Represented functors into complexes and the contravariant family.

Every hom module out of a fixed base object is a complex once it
carries minus the arity-1 operation, and the higher operations of the
category assemble these complexes into a functor: a tensor of k
composable factors becomes the stored map that feeds a basis name and
the factors to the arity k+1 operation.  Reading the base object
against the arrows produces a two-index family of such maps, whose
defining equations mix the operations of the category with those of its
arrow-reversed form.  Nothing about the target category of complexes is
ever materialized; only finite hom modules and sparse maps between them
appear, so every identity here is checked by exact arithmetic.

Conventions, all forced by the stage engine: an operation inserted into
a tensor picks up the parity of the factors to its right; composition
of stored maps is written left to right and scaled by the parity of the
second map's degree; the differential of a stored map is the map
followed by the target differential, minus the source differential
followed by the map, signed by the map's own degree.
"""

import itertools
import random

from .category import opposite, unit_then_op
from .graded import ChainMap, Complex, GradedModule, in_image, koszul_sign
from .quiver import BoundError, all_basis_tensors, evaluate
from .report import Report


def _minus_b1(A, pair, el):
    """Differential of the complex at a hom pair: minus the arity-1 map."""
    op = A.b(1)
    if op is None or el.is_zero:
        return A.hom(*pair).zero(el.degree + 1)
    return evaluate(op, pair, (el,)).scale(-1)


def map_module(smod, tmod):
    """Free module spanned by elementary maps between two graded modules.

    The generator (a, b) stands for the map sending basis name a to b
    and every other name to zero; its degree is the degree difference.
    """
    rows = [((a, b), tmod.degrees[b] - smod.degrees[a])
            for a in smod.names for b in tmod.names]
    return GradedModule(smod.ring, rows)


def flatten_map(F, module):
    """The stored map F as an element of the matching map_module."""
    terms = {}
    for a, el in F.matrix.items():
        for b, c in el.items():
            terms[(a, b)] = c
    return module.element(terms, F.degree)


def map_differential(A, spair, tpair, F):
    """Differential of a stored map between two hom complexes.

    Returns the map w -> d(F w) - (-1)^{deg F} F(d w), both differentials
    being minus the arity-1 operation of A on the respective pair.
    """
    smod = A.hom(*spair)
    sign = -1 if F.degree % 2 else 1
    matrix = {}
    for w in smod.names:
        x = smod.basis_element(w)
        val = _minus_b1(A, tpair, F(x)).sub(
            F(_minus_b1(A, spair, x)).scale(sign))
        matrix[w] = val
    return ChainMap(F.source, F.target, F.degree + 1, matrix)


def map_compose(F, G):
    """Binary operation of the target on two stored maps.

    Left to right composition scaled by the parity of G's degree, the
    same sign that the DG import puts on its arity-2 operation; this is
    the composition under which the functor equations close.
    """
    out = F.compose(G)
    return out.scale(-1) if G.degree % 2 else out


def _y_value(A, zobjs, zfactors, xobjs, xfactors):
    """One component value of the two-index family, as a stored map.

    zfactors runs along zobjs; xfactors[i] lies in hom(xobjs[i+1],
    xobjs[i]), against the arrows.  Each basis name w of the source
    complex goes to the arity n+k+1 operation applied to the reversed x
    block, then w, then the z block, scaled by the Koszul sign of that
    reshuffle and by the parity of n.
    """
    n, k = len(xfactors), len(zfactors)
    smod = A.hom(xobjs[0], zobjs[0])
    tmod = A.hom(xobjs[-1], zobjs[-1])
    degree = (sum(f.degree for f in zfactors)
              + sum(f.degree for f in xfactors) + 1)
    op = A.b(n + k + 1)
    matrix = {}
    if op is not None:
        chain = tuple(reversed(xobjs)) + tuple(zobjs)
        rev = tuple(reversed(xfactors))
        zdegs = [f.degree for f in zfactors]
        xdegs = [f.degree for f in xfactors]
        perm = list(range(k + n, k, -1)) + list(range(0, k + 1))
        base = -1 if n % 2 else 1
        for w in smod.names:
            sign = base * koszul_sign(perm, [smod.degrees[w]] + zdegs + xdegs)
            val = evaluate(op, chain,
                           rev + (smod.basis_element(w),) + tuple(zfactors))
            matrix[w] = val.scale(sign)
    return ChainMap(smod, tmod, degree, matrix)


class RepresentedFunctor:
    """Hom-from-a-base-object functor landing in finite complexes.

    An object Z goes to the hom module out of the base carrying minus
    the arity-1 operation as its differential; a tensor of k composable
    factors goes to the stored map built from the arity k+1 operation.
    Components exist at every arity, the declared bound only limits how
    far the componentwise checks run.
    """

    def __init__(self, A, X, arity_bound=None):
        self.category = A
        self.base = X
        self.arity_bound = A.max_arity if arity_bound is None else arity_bound

    def module_at(self, Z):
        return self.category.hom(self.base, Z)

    def differential(self, Z, el):
        return _minus_b1(self.category, (self.base, Z), el)

    def complex_at(self, Z):
        mod = self.module_at(Z)
        d = {nm: self.differential(Z, mod.basis_element(nm))
             for nm in mod.names}
        return Complex(mod, d)

    def value(self, objs, factors):
        """The stored map of one tensor; objs lists the k+1 objects."""
        assert factors and len(objs) == len(factors) + 1
        return _y_value(self.category, tuple(objs), tuple(factors),
                        (self.base,), ())

    def __repr__(self):
        return "RepresentedFunctor(base %r, bound %d)" % (
            self.base, self.arity_bound)


def h_functor(A, X, arity_bound=None):
    """The represented functor of a base object; see RepresentedFunctor."""
    return RepresentedFunctor(A, X, arity_bound)


def _hom_chains(q, length):
    """All object chains of a length whose consecutive homs are nonzero."""
    out = []
    for c in itertools.product(q.objects, repeat=length + 1):
        if all(q.hom(c[i], c[i + 1]).names for i in range(length)):
            out.append(c)
    return out


def _random_factor(mod, rng, density=0.8):
    degs = sorted(set(mod.degrees.values()))
    for _ in range(4):
        el = mod.random_element(rng.choice(degs), rng, density)
        if not el.is_zero:
            return el
    return mod.basis_element(rng.choice(mod.names))


def _apply_inner(A, zobjs, zfactors, p, t):
    """Insert the arity-t operation at offset p into an element tuple.

    Returns (sign, objs, factors) with the engine's suffix sign, or
    None when the operation is absent or the value vanishes.
    """
    op = A.b(t)
    if op is None:
        return None
    mid = evaluate(op, tuple(zobjs[p:p + t + 1]), tuple(zfactors[p:p + t]))
    if mid.is_zero:
        return None
    sign = -1 if sum(f.degree for f in zfactors[p + t:]) % 2 else 1
    nobjs = tuple(zobjs[:p + 1]) + tuple(zobjs[p + t:])
    nfacs = tuple(zfactors[:p]) + (mid,) + tuple(zfactors[p + t:])
    return sign, nobjs, nfacs


def _hx_residual(A, h, zobjs, zfactors):
    """Difference of the two sides of the functor equation at one tensor.

    Left side: every inner insertion of an operation, fed to the next
    component.  Right side: the top component followed by the target
    differential, plus all two-block compositions.  Returns (residual,
    content) where content reports whether any single term was nonzero;
    the sum may cancel, the individual terms say the identity was real.
    """
    k = len(zfactors)
    X = h.base
    degree = sum(f.degree for f in zfactors) + 2
    smod, tmod = A.hom(X, zobjs[0]), A.hom(X, zobjs[-1])
    content = False
    lhs = ChainMap(smod, tmod, degree, {})
    for t in range(1, k + 1):
        for p in range(0, k - t + 1):
            res = _apply_inner(A, zobjs, zfactors, p, t)
            if res is None:
                continue
            sign, nobjs, nfacs = res
            term = h.value(nobjs, nfacs)
            content = content or bool(term.matrix)
            lhs = lhs.add(term.scale(sign))
    rhs = map_differential(A, (X, zobjs[0]), (X, zobjs[-1]),
                           h.value(zobjs, zfactors))
    content = content or bool(rhs.matrix)
    for i in range(1, k):
        term = map_compose(h.value(zobjs[:i + 1], zfactors[:i]),
                           h.value(zobjs[i:], zfactors[i:]))
        content = content or bool(term.matrix)
        rhs = rhs.add(term)
    return lhs.add(rhs.scale(-1)), content


def _first_entry(F):
    name = sorted(F.matrix, key=repr)[0]
    return name, F.matrix[name]


def check_hX(A, X, arity_bound=None, samples=40, seed=0):
    """Componentwise functor equation for one represented functor.

    For each arity up to the bound, draws seeded random tensors of hom
    elements and compares both sides of the defining equation as stored
    maps, exactly.  Samples that overflow a declared size bound are
    skipped and counted; the detail line reports how many comparisons
    had nonzero content.
    """
    h = h_functor(A, X, arity_bound)
    rng = random.Random(seed)
    rep = Report("represented functor at %r in %s" % (X, A.name))
    q = A.quiver
    for k in range(1, h.arity_bound + 1):
        label = "arity %d" % k
        chains = _hom_chains(q, k)
        if not chains:
            rep.add(label, True, "no composable chains")
            continue
        checked = skipped = hits = 0
        bad = None
        for _ in range(samples):
            chain = rng.choice(chains)
            zf = tuple(_random_factor(q.hom(chain[i], chain[i + 1]), rng)
                       for i in range(k))
            try:
                diff, nonzero = _hx_residual(A, h, chain, zf)
            except BoundError:
                skipped += 1
                continue
            checked += 1
            if nonzero:
                hits += 1
            if diff.matrix:
                bad = (chain, diff)
                break
        if bad is not None:
            chain, diff = bad
            nm, el = _first_entry(diff)
            rep.add(label, False,
                    "residual at %r on chain %r: %r" % (nm, chain, el))
        else:
            rep.add(label, True, "checked %d, nonzero %d, skipped %d"
                    % (checked, hits, skipped))
    return rep


def yoneda_components(A, n, k):
    """The (n, k) piece of the contravariant functor data, as a callable.

    The returned function takes (zobjs, zfactors, xobjs, xfactors),
    where zfactors runs along zobjs and each xfactors[i] lies in
    hom(xobjs[i+1], xobjs[i]), read against the arrows.  It returns the
    stored map from the complex at (xobjs[0], zobjs[0]) to the one at
    (xobjs[-1], zobjs[-1]); see the module docstring for the sign.
    """
    assert n >= 0 and k >= 0 and n + k >= 1

    def component(zobjs, zfactors, xobjs, xfactors):
        assert len(zfactors) == k and len(zobjs) == k + 1
        assert len(xfactors) == n and len(xobjs) == n + 1
        return _y_value(A, tuple(zobjs), tuple(zfactors),
                        tuple(xobjs), tuple(xfactors))

    return component


def _transform_b1_terms(A, hsrc, htgt, value, r, zobjs, zfactors):
    """Boundary of a transformation-shaped family at one z-tensor.

    hsrc and htgt are the represented functors flanking the family,
    value(zobjs, zfactors) gives its stored map at a tensor of elements,
    and r is the family's degree.  Four groups of terms: the top
    component followed by the target differential, the source functor
    composed in from the left, the family composed with the target
    functor on the right (crossing sign r against the tail), and the
    family fed every inner insertion (suffix signs, global parity of r).
    Returns (total, content), content meaning some term was nonzero.
    """
    k = len(zfactors)
    X, W = hsrc.base, htgt.base
    smod = A.hom(X, zobjs[0])
    tmod = A.hom(W, zobjs[-1])
    degree = sum(f.degree for f in zfactors) + r + 2
    total = ChainMap(smod, tmod, degree, {})
    term = map_differential(A, (X, zobjs[0]), (W, zobjs[-1]),
                            value(zobjs, zfactors))
    content = bool(term.matrix)
    total = total.add(term)
    for i in range(1, k + 1):
        F = hsrc.value(zobjs[:i + 1], zfactors[:i])
        G = value(zobjs[i:], zfactors[i:])
        term = map_compose(F, G)
        content = content or bool(term.matrix)
        total = total.add(term)
    for i in range(0, k):
        F = value(zobjs[:i + 1], zfactors[:i])
        G = htgt.value(zobjs[i:], zfactors[i:])
        term = map_compose(F, G)
        if r % 2 and sum(f.degree for f in zfactors[i:]) % 2:
            term = term.scale(-1)
        content = content or bool(term.matrix)
        total = total.add(term)
    rsgn = -1 if r % 2 else 1
    for t in range(1, k + 1):
        for p in range(0, k - t + 1):
            res = _apply_inner(A, zobjs, zfactors, p, t)
            if res is None:
                continue
            sign, nobjs, nfacs = res
            term = value(nobjs, nfacs)
            content = content or bool(term.matrix)
            total = total.add(term.scale(-sign * rsgn))
    return total, content


def _y_residual(A, Aop, hsrc, htgt, zobjs, zfactors, xobjs, xfactors):
    """Residual of the functor equation at one (n, k) pair of tensors.

    Left side: the boundary of the family with the x block held fixed,
    plus all two-block splittings of the x block.  Right side: the
    family with one reversed-operation value contracted into the x
    block.  Returns (residual, content); content means some term of
    either side was nonzero before cancellation.
    """
    n, k = len(xfactors), len(zfactors)
    r = sum(f.degree for f in xfactors)

    def value(zo, zf):
        return _y_value(A, zo, zf, xobjs, xfactors)

    lhs, content = _transform_b1_terms(A, hsrc, htgt, value, r,
                                       zobjs, zfactors)
    for p in range(1, n):
        front = sum(f.degree for f in xfactors[:p])
        for i in range(0, k + 1):
            F = _y_value(A, zobjs[:i + 1], zfactors[:i],
                         xobjs[:p + 1], xfactors[:p])
            G = _y_value(A, zobjs[i:], zfactors[i:],
                         xobjs[p:], xfactors[p:])
            term = map_compose(F, G)
            if front % 2 and sum(f.degree for f in zfactors[i:]) % 2:
                term = term.scale(-1)
            content = content or bool(term.matrix)
            lhs = lhs.add(term)
    rhs = ChainMap(lhs._smod, lhs._tmod, lhs.degree, {})
    for p in range(1, n + 1):
        op = Aop.b(p)
        if op is None:
            continue
        for a in range(0, n - p + 1):
            mid = evaluate(op, tuple(xobjs[a:a + p + 1]),
                           tuple(xfactors[a:a + p]))
            if mid.is_zero:
                continue
            sign = -1 if sum(f.degree for f in xfactors[a + p:]) % 2 else 1
            nxobjs = tuple(xobjs[:a + 1]) + tuple(xobjs[a + p:])
            nxfacs = tuple(xfactors[:a]) + (mid,) + tuple(xfactors[a + p:])
            term = _y_value(A, zobjs, zfactors, nxobjs, nxfacs)
            content = content or bool(term.matrix)
            rhs = rhs.add(term.scale(sign))
    return lhs.add(rhs.scale(-1)), content


def check_Y(A, bounds=(3, 3), samples=20, seed=0):
    """Componentwise functor equations for the contravariant family.

    bounds = (n_bound, k_bound): for every 1 <= n <= n_bound and
    0 <= k <= k_bound, seeded random tensors are drawn and the residual
    of the (n, k) equation is compared to zero exactly.  The arrow-side
    operations come from the reversed category; n = 0 is the
    represented functor's own equation, covered by check_hX.
    """
    nb, kb = bounds
    Aop = opposite(A)
    rng = random.Random(seed)
    rep = Report("contravariant family of %s" % A.name)
    q = A.quiver
    for n in range(1, nb + 1):
        xchains = [tuple(reversed(c)) for c in _hom_chains(q, n)]
        for k in range(0, kb + 1):
            label = "component (%d, %d)" % (n, k)
            zchains = _hom_chains(q, k)
            if not xchains or not zchains:
                rep.add(label, True, "no composable chains")
                continue
            checked = skipped = hits = 0
            bad = None
            for _ in range(samples):
                xc = rng.choice(xchains)
                zc = rng.choice(zchains)
                xf = tuple(_random_factor(q.hom(xc[i], xc[i - 1]), rng)
                           for i in range(1, n + 1))
                zf = tuple(_random_factor(q.hom(zc[i], zc[i + 1]), rng)
                           for i in range(k))
                hsrc = RepresentedFunctor(A, xc[0])
                htgt = RepresentedFunctor(A, xc[-1])
                try:
                    diff, nonzero = _y_residual(A, Aop, hsrc, htgt,
                                                zc, zf, xc, xf)
                except BoundError:
                    skipped += 1
                    continue
                checked += 1
                if nonzero:
                    hits += 1
                if diff.matrix:
                    bad = (xc, zc, diff)
                    break
            if bad is not None:
                xc, zc, diff = bad
                nm, el = _first_entry(diff)
                rep.add(label, False,
                        "residual at %r on chains %r / %r: %r"
                        % (nm, xc, zc, el))
            else:
                rep.add(label, True, "checked %d, nonzero %d, skipped %d"
                        % (checked, hits, skipped))
    return rep


class TruncatedTransComplex:
    """Arity-truncated complex of transformations between two hom functors.

    Components up to the bound are materialized as one free module: the
    generator (k, chain, znames, w, t) is the cochain whose component at
    that z-chain sends the named basis tensor to the elementary map
    w -> t and everything else to zero.  The boundary never consults
    components above the input's index, so its restriction to the
    window is exact and squares to zero on the nose; components above
    the bound are not stored, and the report says untested, not passed.
    """

    def __init__(self, A, X, W, arity_bound):
        self.category = A
        self.source = RepresentedFunctor(A, X)
        self.target = RepresentedFunctor(A, W)
        self.arity_bound = arity_bound
        q = A.quiver
        rows = []
        slots = []
        for k in range(arity_bound + 1):
            for chain in _hom_chains(q, k):
                smod = q.hom(X, chain[0])
                tmod = q.hom(W, chain[-1])
                if not smod.names or not tmod.names:
                    continue
                mods = [q.hom(chain[i], chain[i + 1]) for i in range(k)]
                for znames in itertools.product(*(m.names for m in mods)):
                    zdeg = sum(mods[i].degrees[znames[i]] for i in range(k))
                    slots.append((k, chain, znames, mods))
                    for w in smod.names:
                        for t in tmod.names:
                            deg = tmod.degrees[t] - smod.degrees[w] - zdeg - 1
                            rows.append(((k, chain, znames, w, t), deg))
        self.module = GradedModule(q.ring, rows)
        self._slots = slots
        self.differential = self._boundary_matrix()

    def value_of(self, el, zobjs, zfactors):
        """Stored map of a cochain element at one tensor of elements."""
        q = self.category.quiver
        k = len(zfactors)
        smod = q.hom(self.source.base, zobjs[0])
        tmod = q.hom(self.target.base, zobjs[-1])
        degree = sum(f.degree for f in zfactors) + el.degree + 1
        ring = q.ring
        terms = {}
        for key, c in el.items():
            k0, chain, znames, w, t = key
            if k0 != k or tuple(zobjs) != chain:
                continue
            coeff = c
            for f, nm in zip(zfactors, znames):
                coeff = ring.mul(coeff, f.coeff(nm))
                if coeff == ring.zero:
                    break
            if coeff == ring.zero:
                continue
            prev = terms.setdefault(w, {})
            prev[t] = ring.add(prev.get(t, ring.zero), coeff)
        matrix = {}
        for w, cols in terms.items():
            val = tmod.element(cols, smod.degrees[w] + degree)
            matrix[w] = val
        return ChainMap(smod, tmod, degree, matrix)

    def _boundary_matrix(self):
        A, q = self.category, self.category.quiver
        matrix = {}
        for key in self.module.names:
            r = self.module.degrees[key]
            single = self.module.basis_element(key)

            def value(zo, zf, _single=single):
                return self.value_of(_single, zo, zf)

            terms = {}
            for k, chain, znames, mods in self._slots:
                zf = tuple(mods[i].basis_element(znames[i]) for i in range(k))
                val, _ = _transform_b1_terms(A, self.source, self.target,
                                             value, r, chain, zf)
                for w, el in val.matrix.items():
                    for t, c in el.items():
                        out = (k, chain, znames, w, t)
                        prev = terms.get(out, q.ring.zero)
                        terms[out] = q.ring.add(prev, c)
            matrix[key] = self.module.element(terms, r + 1)
        return ChainMap(self.module, self.module, 1, matrix)

    def boundary(self, el):
        """The restricted differential applied to a cochain element."""
        return self.differential(el)

    def random(self, degree, rng, density=0.4):
        return self.module.random_element(degree, rng, density)

    def check_square(self):
        """Exact square of the restricted boundary, reported per component."""
        rep = Report("truncated transformation complex, bound %d"
                     % self.arity_bound)
        square = self.differential.compose(self.differential)
        for k in range(self.arity_bound + 1):
            bad = sorted((key for key in square.matrix if key[0] == k),
                         key=repr)
            if bad:
                key = bad[0]
                nm, el = _first_entry(
                    ChainMap(self.module, self.module, 2,
                             {key: square.matrix[key]}))
                rep.add("boundary squared at component %d" % k, False,
                        "nonzero on %r: %r" % (nm, el))
            else:
                rep.add("boundary squared at component %d" % k, True,
                        "exact on every generator")
        rep.add("components above %d" % self.arity_bound, True,
                "untested: outside the stored window")
        return rep

    def __repr__(self):
        return "TruncatedTransComplex(%d generators, bound %d)" % (
            len(self.module.names), self.arity_bound)


def unit_defect_preimage(h, Z):
    """Certify that the unit lands on the identity up to a boundary.

    Flattens the difference between the arity-1 component on the
    distinguished unit at Z and the identity of the complex there, and
    solves for a preimage under the boundary of the elementary-map
    module.  Returns (defect_map, preimage_element_or_None); exact
    solve, field coefficients required.
    """
    A = h.category
    u = A.units[Z]
    F = h.value((Z, Z), (u,))
    D = F.add(ChainMap.identity(h.module_at(Z)).scale(-1))
    mod = h.module_at(Z)
    mm = map_module(mod, mod)
    pair = (h.base, Z)
    bmatrix = {}
    for (a, b) in mm.names:
        E = ChainMap(mod, mod, mm.degrees[(a, b)],
                     {a: mod.basis_element(b)})
        bmatrix[(a, b)] = flatten_map(map_differential(A, pair, pair, E), mm)
    boundary = ChainMap(mm, mm, 1, bmatrix)
    return D, in_image(flatten_map(D, mm), boundary)


def opposite_facts(A, cap=4000):
    """Bookkeeping identities tying the arrow reversal to the operations.

    Checks that reversing twice restores every operation on basis
    tensors (up to a deterministic cap per arity), that arity 1 is
    untouched by a single reversal, and that feeding a distinguished
    unit into the reversed binary operation from the right matches
    feeding it into the original from the left with a global minus.
    """
    rep = Report("reversal facts for %s" % A.name)
    Aop = opposite(A)
    back = opposite(Aop)
    for n in sorted(A.ops):
        checked = 0
        bad = None
        for objs, names in all_basis_tensors(A.quiver, n):
            if checked >= cap:
                break
            try:
                one = A.ops[n].on_basis(objs, names)
                two = back.ops[n].on_basis(objs, names)
            except BoundError:
                continue
            checked += 1
            if one != two:
                bad = (objs, names)
                break
        rep.add("double reversal at arity %d" % n, bad is None,
                "checked %d tensors" % checked if bad is None
                else "differs on %r %r" % bad)
    op1 = A.b(1)
    if op1 is None:
        rep.add("arity 1 under one reversal", True, "no arity-1 operation")
    else:
        bad = None
        for (X, Y) in A.quiver.pairs():
            for nm in A.hom(X, Y).names:
                one = op1.on_basis((X, Y), (nm,))
                two = Aop.b(1).on_basis((Y, X), (nm,))
                if one != two:
                    bad = (X, Y, nm)
                    break
            if bad:
                break
        rep.add("arity 1 under one reversal", bad is None,
                "identical on every basis arrow" if bad is None
                else "differs on %r" % (bad,))
    b2 = A.b(2)
    if not A.units or b2 is None:
        rep.add("unit against reversal", True,
                "skipped: no units or no binary operation")
    else:
        bad = None
        for W in sorted(A.units, key=repr):
            for X in A.quiver.objects:
                mod = A.hom(W, X)
                for nm in mod.names:
                    lhs = unit_then_op(Aop, (X, W), (nm,), 1, Aop.b(2))
                    rhs = unit_then_op(A, (W, X), (nm,), 0, b2).scale(-1)
                    if lhs != rhs:
                        bad = (W, X, nm)
                        break
                if bad:
                    break
            if bad:
                break
        rep.add("unit against reversal", bad is None,
                "matches on every basis arrow" if bad is None
                else "differs on %r" % (bad,))
    return rep

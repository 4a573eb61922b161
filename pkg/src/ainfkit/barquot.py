"""Word categories over a base with a marked subcategory.

A second model of the quotient by a full subcategory keeps the arrows
of the base and adjoins longer composable words whose interior
endpoints run through the marked objects.  The differential is the bar
differential of the base, which only ever consumes interior endpoints
and so preserves the admissible words; an operation of higher arity
concatenates its arguments and applies every base operation over a
window reaching from the first word into the last, consuming all the
seams at once.

The comparison with the tree model goes both ways.  A degree zero
chain map unwinds each word into tree elements, seam by seam, using
the tree model's homotopy.  In the other direction the one-letter
embedding of the base extends over the tree model, with capped trees
routed through a contracting homotopy built from the units.  The two
are inverse on words, and the checks here certify all of it by exact
computation.
"""

from .category import AInfCategory
from .freecat import LEAF
from .functors import AInfFunctor, check_functor, strict_functor
from .graded import GradedModule
from .homquot import _embed, _root_split
from .quiver import (BoundError, GradedQuiver, MultiOp, QuiverMap, evaluate,
                     insert, run_stages)
from .report import Report


def _word_degree(gen, gobjs, gnames):
    return sum(gen.degree(gobjs[i], gobjs[i + 1], gnames[i])
               for i in range(len(gnames)))


def _embed_word(squiver, pair, el):
    terms = {(pair, (nm,)): c for nm, c in el.items()}
    return squiver.hom(*pair).element(terms, el.degree)


def bar_quotient(C, bobjs, word_bound=3, name=None):
    """Word category over C with interior endpoints in the subcategory.

    Basis names are pairs (objects, arrow names) describing a composable
    word of length 1 up to word_bound whose interior objects all lie in
    bobjs; one-letter words are the arrows of C.  The differential
    applies every operation of C to every consecutive window of a word.
    An operation of arity two or more concatenates its arguments and
    applies the windows that start inside the first word and end inside
    the last, so that every seam is consumed; it raises BoundError when
    a live window would leave a word longer than the bound.
    """
    gen = C.quiver
    ring = gen.ring
    bobjs = frozenset(bobjs)
    for X in bobjs:
        assert X in gen.objects, "subcategory object %r unknown" % (X,)
    assert word_bound >= 1

    rows = {}
    level = []
    for X, Y in gen.pairs():
        for nm in gen.hom(X, Y).names:
            level.append(((X, Y), (nm,)))
    for word in level:
        rows.setdefault((word[0][0], word[0][-1]), []).append(word)
    for _ in range(word_bound - 1):
        grown = []
        for gobjs, gnames in level:
            Z = gobjs[-1]
            if Z not in bobjs:
                continue
            for X, Y in gen.pairs():
                if X != Z:
                    continue
                for nm in gen.hom(X, Y).names:
                    grown.append((gobjs + (Y,), gnames + (nm,)))
        for word in grown:
            rows.setdefault((word[0][0], word[0][-1]), []).append(word)
        level = grown
    homs = {pair: GradedModule(ring, [(w, _word_degree(gen, *w))
                                      for w in words])
            for pair, words in rows.items()}
    squiver = GradedQuiver(ring, list(gen.objects), homs)

    def window_rule(objs, names):
        gobjs = names[0][0]
        gnames = names[0][1]
        for w in names[1:]:
            gobjs = gobjs + w[0][1:]
            gnames = gnames + w[1]
        total = len(gnames)
        k = len(names[0][1])
        last = len(names[-1][1])
        pair = (objs[0], objs[-1])
        degree = _word_degree(gen, gobjs, gnames) + 1
        base = {(gobjs, gnames): ring.one}
        terms = {}
        for q in range(k):
            for t in range(last):
                m = total - q - t
                if m < 1:
                    continue
                op = C.b(m)
                if op is None:
                    continue
                if q + 1 + t > word_bound:
                    raise BoundError("a window leaves a %d-letter word, "
                                     "bound is %d" % (q + 1 + t, word_bound))
                state = run_stages([insert(op, q, t)], base)
                for key, c in state.items():
                    terms[key] = ring.add(terms.get(key, ring.zero), c)
        return squiver.hom(*pair).element(terms, degree)

    ops = {}
    for n in range(1, max(1, C.max_arity) + 1):
        ops[n] = MultiOp(squiver, squiver, n, 1, rule=window_rule,
                         name="word_b%d" % n)

    units = {X: _embed_word(squiver, (X, X), u) for X, u in C.units.items()}
    A = AInfCategory(squiver, ops, max(1, C.max_arity), units=units or None,
                     size_of=lambda X, Y, nm: len(nm[1]),
                     size_bound=word_bound, name=name or (C.name + ".words"))
    A.base = C
    A.bobjs = bobjs
    A.word_bound = word_bound
    return A


def word_embedding(D, name=None):
    """Strict functor from the base sending an arrow to its one-letter word.

    On one-letter words the window of an operation is forced to cover
    the whole concatenation, so the embedded operations agree with the
    base ones on the nose and a single component suffices.
    """
    C = D.base
    images = {}
    for pair in C.quiver.pairs():
        mod = C.quiver.hom(*pair)
        images[pair] = {nm: _embed_word(D.quiver, pair,
                                        mod.basis_element(nm))
                        for nm in mod.names}
    return strict_functor(C, D, lambda X: X, images, name=name or "words")


class PartialContraction:
    """Degree -1 endomap defined on words with one letter of room."""

    def __init__(self, D, matrices):
        self.D = D
        self.matrices = matrices
        self.degree = -1

    def apply(self, X, Y, el):
        if (X, Y) not in self.matrices:
            raise ValueError("no contraction at (%r, %r): neither endpoint "
                             "is marked" % (X, Y))
        mat = self.matrices[(X, Y)]
        out = self.D.hom(X, Y).zero(el.degree - 1)
        for nm, c in el.items():
            if nm not in mat:
                raise BoundError("contracting %r needs %d letters, bound "
                                 "is %d" % (nm, len(nm[1]) + 1,
                                            self.D.word_bound))
            out = out.add(mat[nm].scale(c))
        return out


def unit_contraction(D):
    """Contracting homotopies on the hom complexes touching the marked set.

    For a pair whose source is marked, a word is contracted by composing
    the two-letter word of units onto its front, which grows it by one
    unit letter up to sign.  Otherwise the target is marked and the
    unit is appended as a last letter, with no sign.  The base units
    must satisfy the strict laws for these to contract; check_contraction
    certifies that.  Values are stored for words short enough that one
    extra letter stays within the bound, and apply raises BoundError
    beyond that.
    """
    C = D.base
    ring = C.quiver.ring
    assert D.word_bound >= 2, "contractions need room for two-letter words"
    b2 = D.b(2)
    doubled = {}
    for X in D.bobjs:
        if X not in C.units:
            continue
        u = C.units[X]
        doubled[X] = D.hom(X, X).element(
            {((X, X, X), (n1, n2)): ring.mul(c1, c2)
             for n1, c1 in u.items() for n2, c2 in u.items()}, -2)
    matrices = {}
    for X, Y in D.quiver.pairs():
        left = X in doubled
        right = Y in D.bobjs and Y in C.units
        if not (left or right):
            continue
        mod = D.hom(X, Y)
        mat = {}
        for nm in mod.names:
            if len(nm[1]) + 1 > D.word_bound:
                continue
            if left:
                mat[nm] = evaluate(b2, (X, X, Y),
                                   (doubled[X], mod.basis_element(nm)))
            else:
                gobjs, gnames = nm
                mat[nm] = mod.element(
                    {(gobjs + (Y,), gnames + (un,)): uc
                     for un, uc in C.units[Y].items()},
                    mod.degree(nm) - 1)
        matrices[(X, Y)] = mat
    return PartialContraction(D, matrices)


def check_contraction(D, chi):
    """The contracting identity on every stored pair, at every word.

    For each word x short enough to contract, the boundary of the
    contraction plus the contraction of the boundary must return x.
    """
    rep = Report("unit contraction for %s" % D.name)
    b1 = D.b(1)
    checked = skipped = 0
    bad = None
    for pair in sorted(chi.matrices, key=repr):
        X, Y = pair
        mod = D.hom(X, Y)
        for nm in mod.names:
            x = mod.basis_element(nm)
            try:
                cx = chi.apply(X, Y, x)
            except BoundError:
                skipped += 1
                continue
            got = evaluate(b1, (X, Y), (cx,)).add(
                chi.apply(X, Y, evaluate(b1, (X, Y), (x,))))
            checked += 1
            if got != x and bad is None:
                bad = (pair, nm, got)
    if bad is None:
        rep.add("contracting identity", True,
                "%d words, %d beyond the bound" % (checked, skipped))
    else:
        rep.add("contracting identity", False,
                "got %r on %r at %r" % (bad[2], bad[1], bad[0]))
    return rep


def comparison_map(D, Q):
    """Degree zero chain map from the word model into the tree model.

    A one-letter word becomes a trivial tree.  A longer word is unwound
    from the right: for every seam, map the tail beyond it, cap the
    result with the homotopy, and feed the head letters together with
    the capped tail to one tree operation; the sum over seams carries
    an overall minus.
    """
    C = D.base
    assert Q.base is C, "the two quotients must share a base"
    assert frozenset(Q.bobjs) == D.bobjs, "the marked subcategories differ"
    assert Q.leaf_bound >= D.word_bound, "the tree bound is too small"
    gen = C.quiver
    memo = {}

    def value(nm):
        if nm in memo:
            return memo[nm]
        gobjs, gnames = nm
        n = len(gnames)
        X, Y = gobjs[0], gobjs[-1]
        if n == 1:
            out = _embed(Q.quiver, (X, Y),
                         gen.hom(X, Y).basis_element(gnames[0]))
        else:
            out = Q.hom(X, Y).zero(_word_degree(gen, gobjs, gnames))
            for k in range(1, n):
                tail = value((gobjs[k:], gnames[k:]))
                capped = evaluate(Q.homotopy, (gobjs[k], Y), (tail,))
                heads = tuple(
                    _embed(Q.quiver, (gobjs[i], gobjs[i + 1]),
                           gen.hom(gobjs[i], gobjs[i + 1])
                           .basis_element(gnames[i]))
                    for i in range(k))
                out = out.add(evaluate(Q.b(k + 1), gobjs[:k + 1] + (Y,),
                                       heads + (capped,)))
            out = out.scale(-1)
        memo[nm] = out
        return out

    components = {}
    for pair in D.quiver.pairs():
        components[pair] = {nm: value(nm)
                            for nm in D.quiver.hom(*pair).names}
    return QuiverMap(D.quiver, Q.quiver, 0, components)


def _groupings(total):
    """Ordered tuples of positive integers with the given sum."""
    if total == 0:
        yield ()
        return
    for head in range(1, total + 1):
        for rest in _groupings(total - head):
            yield (head,) + rest


def extend_functor(f, Q, chi, extras=None, name=None):
    """Extend a functor on the base category over the tree quotient.

    f goes from Q's base into any category; chi supplies contracting
    homotopies on the touched target homs, as an object with an apply
    method taking a pair of target objects and an element.  The higher
    components of the extension may be supplied through extras, a map
    from arity to a rule on tuples of junction objects and tree names;
    by default they extend by zero, keeping f's own components on
    trivial tensors.  The arrow component is then forced: trivial trees
    go through f, a capped tree goes through the contraction, and a
    grafted tree is resolved by the functor equation for its root,
    whose grafting is invertible.
    """
    C, A = f.source, f.target
    assert Q.base is C, "the quotient does not sit over the functor's source"
    gen = C.quiver
    ring = gen.ring
    omap = f.obj_map
    f1 = f.component(1)
    assert f1 is not None, "the functor needs an arrow component"
    applied = chi.apply if hasattr(chi, "apply") else chi
    memo = {}

    def higher(m, robjs, rnames):
        if extras and m in extras:
            return extras[m](robjs, rnames)
        op = f.component(m)
        if op is not None and all(nm[0] == LEAF for nm in rnames):
            return op.on_basis(tuple(robjs),
                               tuple(nm[2][0] for nm in rnames))
        degree = sum(Q.quiver.degree(robjs[i], robjs[i + 1], rnames[i])
                     for i in range(m))
        return A.hom(omap(robjs[0]), omap(robjs[-1])).zero(degree)

    def arrow(nm):
        if nm in memo:
            return memo[nm]
        t, gobjs, gnames = nm
        X, Y = gobjs[0], gobjs[-1]
        if t == LEAF:
            out = f1.on_basis((X, Y), (gnames[0],))
        elif len(t) == 1:
            out = applied(omap(X), omap(Y), arrow((t[0], gobjs, gnames)))
        else:
            k, chain, fnames, eps = _root_split(gen, nm)
            degree = Q.quiver.degree(X, Y, nm)
            total = A.hom(omap(X), omap(Y)).zero(degree)
            for parts in _groupings(k):
                vals = []
                seam = [omap(chain[0])]
                pos = 0
                for i in parts:
                    if i == 1:
                        vals.append(arrow(fnames[pos]))
                    else:
                        vals.append(higher(i, chain[pos:pos + i + 1],
                                           fnames[pos:pos + i]))
                    pos += i
                    seam.append(omap(chain[pos]))
                op = A.b(len(parts))
                if op is None or any(v.is_zero for v in vals):
                    continue
                total = total.add(evaluate(op, tuple(seam), tuple(vals)))
            base = {(chain, fnames): ring.one}
            for a in range(k):
                for q in range(1, k - a + 1):
                    c = k - a - q
                    if a == 0 and c == 0:
                        continue
                    bq = Q.b(q)
                    if bq is None:
                        continue
                    state = run_stages([insert(bq, a, c)], base)
                    for (robjs, rnames), cc in state.items():
                        v = higher(len(rnames), robjs, rnames)
                        if not v.is_zero:
                            total = total.sub(v.scale(cc))
            out = total.scale(eps)
        memo[nm] = out
        return out

    tag = name or (f.name + ".ext")
    comps = {1: MultiOp(Q.quiver, A.quiver, 1, 0,
                        rule=lambda objs, names: arrow(names[0]),
                        lmap=omap, rmap=omap, name=tag + "1")}
    tops = set(extras or ())
    tops.update(m for m in f.components if m > 1)
    for m in sorted(tops):
        comps[m] = MultiOp(Q.quiver, A.quiver, m, 0,
                           rule=lambda objs, names, m=m: higher(
                               m, tuple(objs), tuple(names)),
                           lmap=omap, rmap=omap, name="%s%d" % (tag, m))
    return AInfFunctor(Q, A, omap, comps, name=tag)


def check_comparison(D, Q, samples=30, seed=0):
    """Certify the word and tree models as two faces of one quotient.

    Builds the comparison chain map, the unit contraction, and the
    extension of the one-letter embedding over the tree model, then
    verifies exactly: the comparison commutes with the differentials on
    every word, the contraction contracts, the extension satisfies the
    functor equation on sampled tensors, its arrow component turns the
    tree homotopy into the contraction, and following the comparison
    with that component returns every word.
    """
    rep = Report("quotient comparison for %s" % D.name)
    psi = comparison_map(D, Q)
    checked = 0
    bad = None
    for X, Y in D.quiver.pairs():
        for nm in D.hom(X, Y).names:
            x = D.hom(X, Y).basis_element(nm)
            lhs = evaluate(Q.b(1), (X, Y), (psi.apply(X, Y, x),))
            rhs = psi.apply(X, Y, evaluate(D.b(1), (X, Y), (x,)))
            checked += 1
            if lhs != rhs and bad is None:
                bad = (nm, lhs.sub(rhs))
    rep.add("comparison is a chain map", bad is None,
            "%d words" % checked if bad is None
            else "defect %r on %r" % (bad[1], bad[0]))

    chi = unit_contraction(D)
    rep.merge(check_contraction(D, chi))
    fext = extend_functor(word_embedding(D), Q, chi)
    rep.merge(check_functor(fext, samples=samples, seed=seed))
    f1 = fext.component(1)

    checked = skipped = 0
    bad = None
    for X, Y in Q.quiver.pairs():
        for nm in Q.hom(X, Y).names:
            x = Q.hom(X, Y).basis_element(nm)
            try:
                capped = evaluate(Q.homotopy, (X, Y), (x,))
            except ValueError:
                skipped += 1
                continue
            try:
                lhs = evaluate(f1, (X, Y), (capped,))
                rhs = chi.apply(X, Y, evaluate(f1, (X, Y), (x,)))
            except BoundError:
                skipped += 1
                continue
            checked += 1
            if lhs != rhs and bad is None:
                bad = (nm, lhs.sub(rhs))
    rep.add("homotopy becomes the contraction", bad is None,
            "%d trees, %d skipped" % (checked, skipped) if bad is None
            else "defect %r on %r" % (bad[1], bad[0]))

    checked = skipped = 0
    bad = None
    for X, Y in D.quiver.pairs():
        for nm in D.hom(X, Y).names:
            x = D.hom(X, Y).basis_element(nm)
            try:
                got = evaluate(f1, (X, Y), (psi.apply(X, Y, x),))
            except BoundError:
                skipped += 1
                continue
            checked += 1
            if got != x and bad is None:
                bad = (nm, got)
    rep.add("words return to themselves", bad is None,
            "%d words, %d skipped" % (checked, skipped) if bad is None
            else "got %r on %r" % (bad[1], bad[0]))
    return rep

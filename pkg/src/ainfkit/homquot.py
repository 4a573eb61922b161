"""Tree resolutions of a category relative to a full subcategory.

Basis elements are planar rooted trees that may contain unary vertices,
labeled by a composable chain of arrows.  Vertices of arity two and up
are the operations, unary vertices are contracting homotopies, and a
unary vertex is only allowed where one end of its strand lies in the
chosen subcategory.  Two flavours are built from the same data: the big
category on all such trees, and the reduced one spanned by trees whose
top vertices are all unary, where an operation on purely trivial inputs
contracts to the underlying category's operation.

The second half of the module is the calculus of formal operations
(unary homotopies, higher operations, unit insertions) acting on the
tree categories: their differential, the unit-insertion right
derivation, and the unit homotopies built from it.  All signs come from
the stage engine; a basis element is the value of its own vertex
pipeline, and a formal term carries a canonical schedule, so any other
schedule of the same term is compared through its engine sign.
"""

import itertools
import random

from .category import AInfCategory, opposite, unit_then_op
from .freecat import LEAF
from .functors import strict_functor
from .graded import GradedModule
from .quiver import (BoundError, GradedQuiver, MultiOp, QuiverMap,
                     all_basis_tensors, evaluate, insert, run_stages,
                     state_element, unit_stage)
from .report import Report

_CAP = "cap"


def leaf_count(t):
    if t == LEAF:
        return 1
    return sum(leaf_count(s) for s in t)


def unary_count(t):
    if t == LEAF:
        return 0
    return (1 if len(t) == 1 else 0) + sum(unary_count(s) for s in t)


def wide_count(t):
    if t == LEAF:
        return 0
    return (1 if len(t) > 1 else 0) + sum(wide_count(s) for s in t)


def valid_tree(t):
    """No two unary vertices may be adjacent."""
    if t == LEAF:
        return True
    if len(t) == 1 and t[0] != LEAF and len(t[0]) == 1:
        return False
    return all(valid_tree(s) for s in t)


_SHAPES = {}


def tree_shapes(n):
    """All valid trees with n leaves."""
    if n not in _SHAPES:
        wide = []
        for k in range(2, n + 1):
            for parts in _splits(n, k):
                subs = [tree_shapes(p) for p in parts]
                wide.extend(itertools.product(*subs))
        base = ([LEAF] if n == 1 else []) + wide
        out = list(base)
        out.extend((t,) for t in base)
        _SHAPES[n] = tuple(out)
    return _SHAPES[n]


def _splits(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _splits(n - first, k - 1):
            yield (first,) + rest


def unary_spans(t):
    """Leaf intervals (i, j) covered by each unary vertex, 0-based."""
    spans = []

    def walk(sub, left):
        if sub == LEAF:
            return 1
        used = 0
        for child in sub:
            used += walk(child, left + used)
        if len(sub) == 1:
            spans.append((left, left + used))
        return used

    walk(t, 0)
    return spans


def admissible(t, gobjs, bobjs):
    """Every unary vertex needs an endpoint of its strand in bobjs."""
    for i, j in unary_spans(t):
        if gobjs[i] not in bobjs and gobjs[j] not in bobjs:
            return False
    return True


def reduced_tree(t):
    """Whether every internal vertex with only leaf children is unary."""
    if t == LEAF:
        return True
    if len(t) > 1 and all(s == LEAF for s in t):
        return False
    return all(reduced_tree(s) for s in t)


def tree_stages(t):
    """Postorder (offset, arity) schedule; arity one is the homotopy."""
    stages = []

    def walk(sub, left):
        if sub == LEAF:
            return
        pos = left
        for child in sub:
            walk(child, pos)
            pos += 1
        stages.append((left, len(sub)))

    walk(t, 0)
    return stages


def path_flags(t):
    """For each postorder stage, whether its vertex sees the last leaf."""
    flags = []

    def walk(sub, on_path):
        if sub == LEAF:
            return
        for i, child in enumerate(sub):
            walk(child, on_path and i == len(sub) - 1)
        flags.append(on_path)

    walk(t, True)
    return flags


def _name_degree(gen, t, gobjs, gnames):
    flat = sum(gen.degree(gobjs[i], gobjs[i + 1], gnames[i])
               for i in range(len(gnames)))
    return flat + wide_count(t) - unary_count(t)


def _embed(squiver, pair, el):
    terms = {(LEAF, pair, (nm,)): c for nm, c in el.items()}
    return squiver.hom(*pair).element(terms, el.degree)


def _root_split(gen, label):
    """Root arity, junction chain, factor names, and the engine sign of
    the root grafting that rebuilds the name from its factors."""
    t, gobjs, gnames = label
    chain = [gobjs[0]]
    fnames = []
    pos = 0
    for sub in t:
        ln = leaf_count(sub)
        fnames.append((sub, tuple(gobjs[pos:pos + ln + 1]),
                       tuple(gnames[pos:pos + ln])))
        pos += ln
        chain.append(gobjs[pos])
    par = 0
    left = 0
    pos = 0
    for j, sub in enumerate(t):
        ln = leaf_count(sub)
        raw = sum(gen.degree(gobjs[pos + i], gobjs[pos + i + 1], gnames[pos + i])
                  for i in range(ln))
        if j:
            par += left * raw
        left += unary_count(sub) + wide_count(sub)
        pos += ln
    eps = -1 if par % 2 else 1
    return len(t), tuple(chain), tuple(fnames), eps


def _build(C, bobjs, leaf_bound, reduced, name):
    gen = C.quiver
    ring = gen.ring
    bobjs = frozenset(bobjs)
    for X in bobjs:
        assert X in gen.objects, "subcategory object %r unknown" % (X,)

    basis = {}
    for n in range(1, leaf_bound + 1):
        shapes = [t for t in tree_shapes(n) if not reduced or reduced_tree(t)]
        for gobjs, gnames in all_basis_tensors(gen, n):
            pair = (gobjs[0], gobjs[-1])
            for t in shapes:
                if not admissible(t, gobjs, bobjs):
                    continue
                basis.setdefault(pair, []).append(
                    ((t, gobjs, gnames), _name_degree(gen, t, gobjs, gnames)))
    homs = {pair: GradedModule(ring, rows) for pair, rows in basis.items()}
    squiver = GradedQuiver(ring, list(gen.objects), homs)

    ops = {}

    def graft_rule(objs, names, k):
        total = sum(len(nm[2]) for nm in names)
        if total > leaf_bound:
            raise BoundError("grafting %d leaves exceeds the bound %d"
                             % (total, leaf_bound))
        pair = (objs[0], objs[-1])
        degree = sum(squiver.degree(objs[i], objs[i + 1], names[i])
                     for i in range(k)) + 1
        if reduced and all(nm[0] == LEAF for nm in names):
            inner = C.b(k)
            if inner is None:
                return squiver.hom(*pair).zero(degree)
            val = inner.on_basis(objs, tuple(nm[2][0] for nm in names))
            return _embed(squiver, pair, val)
        tree = tuple(nm[0] for nm in names)
        gobjs = names[0][1]
        gnames = names[0][2]
        for nm in names[1:]:
            gobjs = gobjs + nm[1][1:]
            gnames = gnames + nm[2]
        par = 0
        left = 0
        for j in range(k):
            sub = names[j][0]
            raw = squiver.degree(objs[j], objs[j + 1], names[j]) \
                - wide_count(sub) + unary_count(sub)
            if j:
                par += left * raw
            left += unary_count(sub) + wide_count(sub)
        return squiver.hom(*pair).basis_element(
            (tree, gobjs, gnames), -1 if par % 2 else 1)

    def homotopy_rule(objs, names):
        label = names[0]
        t = label[0]
        X, Y = objs
        if t != LEAF and len(t) == 1:
            raise ValueError("homotopy applied to a tree already capped by one")
        if X not in bobjs and Y not in bobjs:
            raise ValueError("homotopy needs an endpoint in the subcategory "
                             "at (%r, %r)" % (X, Y))
        return squiver.hom(X, Y).basis_element(((t,), label[1], label[2]))

    hop = MultiOp(squiver, squiver, 1, -1, rule=homotopy_rule, name="homotopy")

    def b1_rule(objs, names):
        label = names[0]
        t = label[0]
        X, Y = objs
        degree = squiver.degree(X, Y, label) + 1
        if t == LEAF:
            inner = C.b(1)
            if inner is None:
                return squiver.hom(X, Y).zero(degree)
            return _embed(squiver, (X, Y),
                          inner.on_basis((X, Y), (label[2][0],)))
        if len(t) == 1:
            inner_label = (t[0], label[1], label[2])
            inner = squiver.hom(X, Y).basis_element(inner_label)
            db = ops[1].on_basis((X, Y), (inner_label,))
            return inner.sub(evaluate(hop, (X, Y), (db,)))
        k, chain, fnames, eps = _root_split(gen, label)
        base = {(chain, fnames): ring.one}
        total = squiver.hom(X, Y).zero(degree)
        for a in range(k):
            for q in range(1, k - a + 1):
                c = k - a - q
                if a == 0 and c == 0:
                    continue
                state = run_stages([insert(ops[q], a, c),
                                    insert(ops[a + 1 + c], 0, 0)], base)
                total = total.add(state_element(squiver, state, (X, Y), degree))
        return total.scale(-eps)

    ops[1] = MultiOp(squiver, squiver, 1, 1, rule=b1_rule, name="tree_b1")
    for k in range(2, leaf_bound + 1):
        ops[k] = MultiOp(squiver, squiver, k, 1,
                         rule=lambda objs, names, k=k: graft_rule(objs, names, k),
                         name="tree_b%d" % k)

    units = {X: _embed(squiver, (X, X), u) for X, u in C.units.items()}
    A = AInfCategory(squiver, ops, leaf_bound, units=units or None,
                     size_of=lambda X, Y, nm: len(nm[2]),
                     size_bound=leaf_bound, name=name)
    A.base = C
    A.bobjs = bobjs
    A.leaf_bound = leaf_bound
    A.reduced = reduced
    A.homotopy = hop
    return A


def tree_category(C, bobjs, leaf_bound=3, name=None):
    """The category of all admissible tree elements over C."""
    return _build(C, bobjs, leaf_bound, False, name or (C.name + ".trees"))


def homotopy_quotient(C, bobjs, leaf_bound=3, name=None):
    """The reduced tree category: only trees whose top vertices are all
    unary, with operations on purely trivial inputs contracting to C."""
    return _build(C, bobjs, leaf_bound, True, name or (C.name + ".hq"))


def tree_value(A, t, gobjs, gnames):
    """Evaluate a labeled tree through a tree category's operations.

    On names of the category itself this returns the basis element; on
    the reduced category a non-reduced tree contracts to its image.
    """
    q = A.quiver
    names = tuple((LEAF, (gobjs[i], gobjs[i + 1]), (gnames[i],))
                  for i in range(len(gnames)))
    degree = _name_degree(A.base.quiver, t, gobjs, gnames)
    pair = (gobjs[0], gobjs[-1])
    width = len(gnames)
    stages = []
    for off, k in tree_stages(t):
        op = A.homotopy if k == 1 else A.b(k)
        stages.append(insert(op, off, width - off - k))
        width -= k - 1
    state = run_stages(stages, {(tuple(gobjs), names): q.ring.one})
    return state_element(q, state, pair, degree)


def composite_defect(C, A, n):
    """Arity-n operation on trivial inputs minus the embedded operation
    of C; the images span what the reduced category divides out."""
    assert A.base is C and 2 <= n <= A.leaf_bound

    def rule(objs, names):
        factors = [_embed(A.quiver, (objs[i], objs[i + 1]),
                          C.quiver.hom(objs[i], objs[i + 1]).basis_element(names[i]))
                   for i in range(n)]
        out = evaluate(A.b(n), objs, factors)
        op = C.b(n)
        if op is not None:
            out = out.sub(_embed(A.quiver, (objs[0], objs[-1]),
                                 op.on_basis(objs, names)))
        return out

    return MultiOp(C.quiver, A.quiver, n, 1, rule=rule, name="defect%d" % n)


def projection_functor(E, D, name="pi"):
    """The strict functor from the full tree category onto the reduced
    one, evaluating every tree through the reduced operations."""
    assert E.base is D.base and E.leaf_bound == D.leaf_bound
    images = {}
    for pair in E.quiver.pairs():
        images[pair] = {nm: tree_value(D, *nm) for nm in E.hom(*pair).names}
    return strict_functor(E, D, lambda X: X, images, name=name)


def check_reduction(C, E, D, samples=20, seed=0):
    """The reduced category really divides by the defect span: defect
    images die under the projection and stay dead under the homotopy
    and under grafting with arbitrary basis elements alongside."""
    rng = random.Random(seed)
    rep = Report("reduction of %s" % E.name)
    p1 = projection_functor(E, D).component(1)
    gens = []
    bad = 0
    for n in range(2, E.leaf_bound + 1):
        dop = composite_defect(C, E, n)
        for objs, names in all_basis_tensors(C.quiver, n):
            v = dop.on_basis(objs, names)
            if v.is_zero:
                continue
            gens.append((objs[0], objs[-1], v))
            if not evaluate(p1, (objs[0], objs[-1]), (v,)).is_zero:
                bad += 1
    rep.add("defect images die", bad == 0, "%d images" % len(gens))

    bad = tried = 0
    for _ in range(samples):
        X, Y, v = gens[rng.randrange(len(gens))]
        vsize = max(len(nm[2]) for nm, _ in v.items())
        if rng.random() < 0.4 and (X in E.bobjs or Y in E.bobjs):
            w = evaluate(E.homotopy, (X, Y), (v,))
            tried += 1
            if not evaluate(p1, (X, Y), (w,)).is_zero:
                bad += 1
            continue
        side = [nm for U, V in E.quiver.pairs() if V == X
                for nm in E.hom(U, X).names
                if len(nm[2]) + vsize <= E.leaf_bound]
        if not side:
            continue
        nm = side[rng.randrange(len(side))]
        U = nm[1][0]
        f = E.hom(U, X).basis_element(nm)
        try:
            w = evaluate(E.b(2), (U, X, Y), (f, v))
        except BoundError:
            continue
        tried += 1
        if not evaluate(p1, (U, Y), (w,)).is_zero:
            bad += 1
    rep.add("closure stays dead", bad == 0, "%d samples" % tried)
    return rep


def _is_tree(x):
    return x == LEAF or (isinstance(x, tuple)
                         and all(_is_tree(s) for s in x))


def filtration_level(label):
    """Relative filtration position of a reduced tree, by name or shape.

    Returns (j, kind): j is the largest number of unary vertices on any
    root-to-leaf path, and the kind marks whether the root vertex is
    unary (a new stratum, N) or not (the settled part, D).
    """
    t = label if _is_tree(label) else label[0]

    def depth(sub):
        if sub == LEAF:
            return 0
        return (1 if len(sub) == 1 else 0) + max(depth(child) for child in sub)

    j = depth(t)
    if t != LEAF and len(t) == 1:
        return j, "N%d" % j
    return j, "D%d" % j


# ---------------------------------------------------------------------------
# Formal operations: trees with capped leaves, acting on tree categories.


def term_stages(tree, caps):
    """Canonical postorder schedule of a formal operation.

    Returns (offset, arity) stages where arity 0 inserts a capped leaf,
    1 is the homotopy, and higher arities are operations.  Offsets are
    positions in the evolving strand tensor, whose initial width is the
    number of uncapped leaves; a capped leaf's strand appears when the
    walk reaches it.
    """
    intervals = [(i, i) for i in range(leaf_count(tree)) if i not in caps]
    stages = []

    def locate(i):
        p = 0
        for a, b in intervals:
            if b < i:
                p += 1
        return p

    def walk(sub, first_leaf):
        if sub == LEAF:
            if first_leaf in caps:
                p = locate(first_leaf)
                stages.append((p, 0))
                intervals.insert(p, (first_leaf, first_leaf))
            return 1
        used = 0
        for child in sub:
            used += walk(child, first_leaf + used)
        p = locate(first_leaf)
        k = len(sub)
        intervals[p:p + k] = [(first_leaf, first_leaf + used - 1)]
        stages.append((p, k))
        return used

    walk(tree, 0)
    assert len(intervals) == 1
    return stages


def staging_sign(stages):
    """Engine sign of a schedule on strands of content degree zero.

    The ratio of the signs of two schedules of the same tree is their
    reordering sign, independent of the actual content degrees.
    """
    degs = []
    sign = 1
    for off, ar in stages:
        while len(degs) < off + ar:
            degs.append(0)
        if ar == 0:
            if sum(degs[off:]) % 2:
                sign = -sign
            degs.insert(off, -1)
            continue
        d = 1 if ar >= 2 else -1
        if (d * sum(degs[off + ar:])) % 2:
            sign = -sign
        degs[off:off + ar] = [sum(degs[off:off + ar]) + d]
    return sign


def stages_to_tree(stages, width):
    """Rebuild (tree, caps) from a schedule on an initial width."""
    strands = [LEAF] * width
    for off, ar in stages:
        if ar == 0:
            strands.insert(off, _CAP)
        elif ar == 1:
            strands[off] = (strands[off],)
        else:
            strands[off:off + ar] = [tuple(strands[off:off + ar])]
    assert len(strands) == 1, "schedule does not close to one strand"
    caps = []
    idx = [0]

    def strip(sub):
        if sub == _CAP:
            caps.append(idx[0])
            idx[0] += 1
            return LEAF
        if sub == LEAF:
            idx[0] += 1
            return LEAF
        return tuple(strip(child) for child in sub)

    tree = strip(strands[0])
    return tree, frozenset(caps)


class OperadTerm:
    """A formal combination of operations: trees with capped leaves.

    Basis keys are (tree, objects, caps): the tree may stack unary
    vertices freely since formal terms compose without relations, the
    objects label the strand boundaries of the full leaf set, and caps
    is the set of leaf positions fed by a unit insertion instead of an
    input.
    """

    def __init__(self, ring, data=None):
        self.ring = ring
        self.data = {}
        for key, c in (data or {}).items():
            c = ring.normalize(c)
            if c != ring.zero:
                self.data[key] = c

    @classmethod
    def basis(cls, ring, tree, gobjs, caps=(), coeff=1):
        caps = frozenset(caps)
        gobjs = tuple(gobjs)
        assert len(gobjs) == leaf_count(tree) + 1
        for i in caps:
            assert gobjs[i] == gobjs[i + 1], "capped strand must be a loop"
        return cls(ring, {(tree, gobjs, caps): coeff})

    @property
    def is_zero(self):
        return not self.data

    def add(self, other):
        out = dict(self.data)
        for key, c in other.data.items():
            v = self.ring.add(out.get(key, self.ring.zero), c)
            if v == self.ring.zero:
                out.pop(key, None)
            else:
                out[key] = v
        return OperadTerm(self.ring, out)

    def scale(self, c):
        return OperadTerm(self.ring, {k: self.ring.mul(self.ring.normalize(c), v)
                                      for k, v in self.data.items()})

    def sub(self, other):
        return self.add(other.scale(-1))

    def __eq__(self, other):
        return isinstance(other, OperadTerm) and self.data == other.data

    def __hash__(self):
        raise TypeError("formal terms are not hashable")

    def __repr__(self):
        if not self.data:
            return "OperadTerm(0)"
        bits = ["%s*%r" % (c, k) for k, c in sorted(self.data.items(), key=repr)]
        return "OperadTerm(%s)" % " + ".join(bits)


def term_degree(key):
    tree, gobjs, caps = key
    return wide_count(tree) - unary_count(tree) - len(caps)


def _collect(ring, pieces):
    """Canonicalize (coeff, stages, width, gobjs) pieces into a term."""
    out = OperadTerm(ring)
    for coeff, stages, width, gobjs in pieces:
        tree, caps = stages_to_tree(stages, width)
        sign = staging_sign(stages) * staging_sign(term_stages(tree, caps))
        out = out.add(OperadTerm(ring, {(tree, tuple(gobjs), caps):
                                        ring.mul(coeff, sign)}))
    return out


def operad_d(term):
    """The degree 1 differential of the formal operation calculus.

    A unit insertion is closed, a homotopy vertex turns into the
    identity, and an operation vertex expands into minus the sum of its
    proper two-level refinements; the whole extends as a derivation
    with the engine's suffix signs.
    """
    ring = term.ring
    pieces = []
    for (tree, gobjs, caps), coeff in term.data.items():
        stages = term_stages(tree, caps)
        width = leaf_count(tree) - len(caps)
        for m, (off, ar) in enumerate(stages):
            if ar == 0:
                continue
            sgn = -1 if (len(stages) - m - 1) % 2 else 1
            if ar == 1:
                pieces.append((ring.mul(coeff, sgn),
                               stages[:m] + stages[m + 1:], width, gobjs))
                continue
            for a in range(ar):
                for p in range(2, ar - a + 1):
                    c = ar - a - p
                    if a == 0 and c == 0:
                        continue
                    repl = [(off + a, p), (off, a + 1 + c)]
                    pieces.append((ring.mul(coeff, -sgn),
                                   stages[:m] + repl + stages[m + 1:],
                                   width, gobjs))
    return _collect(ring, pieces)


def unit_derivation(term):
    """The right derivation that feeds a fresh unit leaf to every vertex
    on the path from the root to the last leaf: an operation gains a
    capped last input, a homotopy becomes homotopy, capped operation,
    homotopy."""
    ring = term.ring
    pieces = []
    for (tree, gobjs, caps), coeff in term.data.items():
        assert not caps, "the unit derivation acts on cap-free terms"
        stages = term_stages(tree, caps)
        flags = path_flags(tree)
        width = leaf_count(tree)
        ext = gobjs + (gobjs[-1],)
        for m, (off, ar) in enumerate(stages):
            if not flags[m]:
                continue
            below = sum(1 for j in range(m + 1, len(stages)) if flags[j])
            sgn = -1 if below % 2 else 1
            if ar == 1:
                repl = [(off, 1), (off + 1, 0), (off, 2), (off, 1)]
            else:
                repl = [(off + ar, 0), (off, ar + 1)]
            pieces.append((ring.mul(coeff, sgn),
                           stages[:m] + repl + stages[m + 1:], width, ext))
    return _collect(ring, pieces)


def compose_terms(inner, outer, slot):
    """Plug one formal operation into an input slot of another, slots
    counted over uncapped leaves from zero."""
    ring = outer.ring
    pieces = []
    for (ti, gi, ci), cin in inner.data.items():
        ni = leaf_count(ti) - len(ci)
        for (to, go, co), cout in outer.data.items():
            uncapped = [i for i in range(leaf_count(to)) if i not in co]
            pos = uncapped[slot]
            assert (go[pos], go[pos + 1]) == (gi[0], gi[-1]), \
                "slot objects do not match"
            shifted = [(off + slot, ar) for off, ar in term_stages(ti, ci)]
            # the inner schedule runs first, closing its strands to one
            # at position slot; the outer schedule then applies verbatim
            stages = shifted + term_stages(to, co)
            width = (len(uncapped) - 1) + ni
            gobjs = go[:pos] + gi + go[pos + 2:]
            pieces.append((ring.mul(cin, cout), stages, width, gobjs))
    return _collect(ring, pieces)


def unit_conjugation(term):
    """Conjugation by the unit composite: the term fed into the first
    slot of a capped operation, minus the capped operation fed into the
    term's last slot."""
    ring = term.ring
    total = OperadTerm(ring)
    for key, coeff in term.data.items():
        tree, gobjs, caps = key
        assert not caps, "conjugation acts on cap-free terms"
        one = OperadTerm(ring, {key: coeff})
        lam_out = OperadTerm.basis(ring, (LEAF, LEAF),
                                   (gobjs[0], gobjs[-1], gobjs[-1]), caps=(1,))
        total = total.add(compose_terms(one, lam_out, 0))
        n = leaf_count(tree)
        lam_in = OperadTerm.basis(ring, (LEAF, LEAF),
                                  (gobjs[n - 1], gobjs[n], gobjs[n]), caps=(1,))
        total = total.sub(compose_terms(lam_in, one, n - 1))
    return total


def term_value(A, term, objs, names):
    """Act with a formal operation on a basis tensor of a tree category.

    Caps insert the embedded units of the base category.  Raises like
    the underlying operations on ineligible homotopies and bound
    escapes.  The term must be nonzero; sum values termwise otherwise.
    """
    q = A.quiver
    assert not term.is_zero, "cannot infer the output of an empty term"
    out = None
    for (tree, gobjs, caps), coeff in term.data.items():
        n = leaf_count(tree) - len(caps)
        assert n == len(names)
        cap_list = sorted(caps)
        ncap = 0
        width = n
        stages = []
        for off, ar in term_stages(tree, caps):
            if ar == 0:
                Z = gobjs[cap_list[ncap]]
                ncap += 1
                u = _embed(q, (Z, Z), A.base.units[Z])
                stages.append(unit_stage(q, u, (Z, Z), off, width - off))
                width += 1
                continue
            op = A.homotopy if ar == 1 else A.b(ar)
            stages.append(insert(op, off, width - off - ar))
            width -= ar - 1
        deg = sum(q.degree(objs[i], objs[i + 1], names[i]) for i in range(n)) \
            + term_degree((tree, gobjs, caps))
        state = run_stages(stages, {(tuple(objs), tuple(names)): q.ring.one})
        val = state_element(q, state, (objs[0], objs[-1]), deg).scale(coeff)
        out = val if out is None else out.add(val)
    return out


def random_term(C, bobjs, rng, leaf_bound=3, with_caps=False):
    """A random nontrivial admissible formal operation over C's objects."""
    objects = list(C.objects)
    for _ in range(500):
        n = rng.randrange(1, leaf_bound + 1)
        shapes = tree_shapes(n)
        tree = shapes[rng.randrange(len(shapes))]
        if tree == LEAF:
            continue
        objs = tuple(rng.choice(objects) for _ in range(n + 1))
        if not admissible(tree, objs, bobjs):
            continue
        caps = frozenset()
        if with_caps:
            caps = frozenset(i for i in range(n)
                             if objs[i] == objs[i + 1] and rng.random() < 0.3)
            if len(caps) == n:
                caps = frozenset(sorted(caps)[1:])
        return OperadTerm.basis(C.quiver.ring, tree, objs, caps)
    raise RuntimeError("no admissible term found")


def _first_key(term):
    return sorted(term.data, key=repr)[0]


def check_operad(C, bobjs, samples=40, seed=0):
    """Consistency of the formal calculus as exact symbolic identities:
    the differential squares to zero, its commutator with the unit
    derivation is conjugation by the unit composite, and the derivation
    respects composition the one-sided way."""
    rng = random.Random(seed)
    rep = Report("formal operations over %s" % C.name)

    bad = None
    for _ in range(samples):
        t = random_term(C, bobjs, rng, with_caps=True)
        if not operad_d(operad_d(t)).is_zero:
            bad = t
            break
    rep.add("differential squares to zero", bad is None,
            "%d terms" % samples if bad is None else "fails on %r" % bad)

    bad = None
    for _ in range(samples):
        t = random_term(C, bobjs, rng)
        lhs = operad_d(unit_derivation(t)).add(unit_derivation(operad_d(t)))
        if not lhs.sub(unit_conjugation(t)).is_zero:
            bad = t
            break
    rep.add("commutator is unit conjugation", bad is None,
            "%d terms" % samples if bad is None else "fails on %r" % bad)

    bad = None
    for _ in range(samples):
        f = random_term(C, bobjs, rng)
        picked = _slot_term(C, bobjs, rng, f)
        if picked is None:
            continue
        g, slot, last = picked
        lhs = unit_derivation(compose_terms(g, f, slot))
        rhs = compose_terms(g, unit_derivation(f), slot)
        if last:
            fdeg = term_degree(_first_key(f))
            extra = compose_terms(unit_derivation(g), f, slot)
            rhs = rhs.add(extra.scale(-1 if fdeg % 2 else 1))
        if not lhs.sub(rhs).is_zero:
            bad = (f, g, slot)
            break
    rep.add("right derivation law", bad is None,
            "%d pairs" % samples if bad is None else "fails on %r" % (bad,))
    return rep


def _slot_term(C, bobjs, rng, f):
    """A random term composable into a random slot of f."""
    tree, gobjs, caps = _first_key(f)
    uncapped = [i for i in range(leaf_count(tree)) if i not in caps]
    if not uncapped:
        return None
    slot = rng.randrange(len(uncapped))
    pos = uncapped[slot]
    X, Y = gobjs[pos], gobjs[pos + 1]
    objects = list(C.objects)
    for _ in range(200):
        n = rng.randrange(1, 3)
        shapes = tree_shapes(n)
        t2 = shapes[rng.randrange(len(shapes))]
        if t2 == LEAF:
            continue
        objs = tuple([X] + [rng.choice(objects) for _ in range(n - 1)] + [Y])
        if admissible(t2, objs, bobjs):
            return (OperadTerm.basis(C.quiver.ring, t2, objs),
                    slot, slot == len(uncapped) - 1)
    return None


def check_action_chain(E, samples=40, seed=0):
    """Acting with formal operations is a chain map: the differential of
    a value equals the value on the differentiated tensor, the term's
    own differential included with the engine's suffix signs."""
    rng = random.Random(seed)
    q = E.quiver
    ring = q.ring
    rep = Report("action of formal operations on %s" % E.name)
    b1 = E.b(1)
    checked = skipped = 0
    bad = None
    for _ in range(samples):
        term = random_term(E.base, E.bobjs, rng, with_caps=True)
        key = _first_key(term)
        tree, gobjs, caps = key
        uncapped = [i for i in range(leaf_count(tree)) if i not in caps]
        n = len(uncapped)
        objs = [gobjs[uncapped[0]]]
        names = []
        ok = True
        for i in uncapped:
            pair = (gobjs[i], gobjs[i + 1])
            mod = q.homs.get(pair)
            if mod is None:
                ok = False
                break
            names.append(mod.names[rng.randrange(len(mod.names))])
            objs.append(pair[1])
        if not ok:
            skipped += 1
            continue
        objs, names = tuple(objs), tuple(names)
        if sum(len(nm[2]) for nm in names) + len(caps) > E.leaf_bound:
            skipped += 1
            continue
        try:
            val = term_value(E, term, objs, names)
            lhs = evaluate(b1, (objs[0], objs[-1]), (val,))
            rhs = q.hom(objs[0], objs[-1]).zero(lhs.degree)
            dterm = operad_d(term)
            if not dterm.is_zero:
                rhs = rhs.add(term_value(E, dterm, objs, names))
            degs = [q.degree(objs[i], objs[i + 1], names[i]) for i in range(n)]
            for i in range(n):
                img = b1.on_basis((objs[i], objs[i + 1]), (names[i],))
                if img.is_zero:
                    continue
                suffix = sum(degs[i + 1:]) + term_degree(key)
                sgn = -1 if suffix % 2 else 1
                for nm2, c in img.items():
                    piece = term_value(E, term, objs,
                                       names[:i] + (nm2,) + names[i + 1:])
                    rhs = rhs.add(piece.scale(ring.mul(sgn, c)))
        except (BoundError, ValueError):
            skipped += 1
            continue
        checked += 1
        if lhs != rhs and bad is None:
            bad = (term, names, lhs.sub(rhs))
    if bad is None:
        rep.add("chain action", True,
                "%d checked, %d skipped" % (checked, skipped))
    else:
        rep.add("chain action", False,
                "defect %r for %r on %r" % (bad[2], bad[0], bad[1]))
    return rep


# ---------------------------------------------------------------------------
# Unit homotopies.


class PartialHomotopy:
    """Degree -1 endomap defined on names with one spare leaf of room."""

    def __init__(self, A, matrices):
        self.A = A
        self.matrices = matrices
        self.degree = -1

    def apply(self, X, Y, el):
        out = self.A.hom(X, Y).zero(el.degree - 1)
        mat = self.matrices.get((X, Y), {})
        for nm, c in el.items():
            if nm not in mat:
                raise BoundError("homotopy value for %r needs %d leaves, "
                                 "bound is %d" % (nm, len(nm[2]) + 1,
                                                  self.A.leaf_bound))
            out = out.add(mat[nm].scale(c))
        return out


def unit_homotopy(D):
    """The right unit homotopy of a reduced tree category.

    The value on a basis tree inserts a unit next to each vertex on the
    path from the root to the last leaf, as in the unit-insertion
    derivation, and evaluates back in the category.  Only names with a
    spare leaf under the bound have values; trivial trees go to zero.
    """
    assert D.units, "the unit homotopy needs distinguished units"
    matrices = {}
    for pair in D.quiver.pairs():
        mat = {}
        for nm in D.hom(*pair).names:
            if len(nm[2]) + 1 > D.leaf_bound:
                continue
            mat[nm] = _homotopy_value(D, *nm)
        matrices[pair] = mat
    return PartialHomotopy(D, matrices)


def _homotopy_value(D, t, gobjs, gnames):
    q = D.quiver
    pair = (gobjs[0], gobjs[-1])
    Y = gobjs[-1]
    out = q.hom(*pair).zero(_name_degree(D.base.quiver, t, gobjs, gnames) - 1)
    if t == LEAF:
        return out
    stages = tree_stages(t)
    flags = path_flags(t)
    unit = _embed(q, (Y, Y), D.base.units[Y])
    seed = tuple((LEAF, (gobjs[i], gobjs[i + 1]), (gnames[i],))
                 for i in range(len(gnames)))
    for m, (off, ar) in enumerate(stages):
        if not flags[m]:
            continue
        below = sum(1 for j in range(m + 1, len(stages)) if flags[j])
        coeff = 1 if below % 2 else -1
        if ar == 1:
            schedule = stages[:m] + [(off, 1), (off + 1, 0), (off, 2),
                                     (off, 1)] + stages[m + 1:]
        else:
            schedule = stages[:m] + [(off + ar, 0), (off, ar + 1)] \
                + stages[m + 1:]
        width = len(gnames)
        built = []
        for soff, sar in schedule:
            if sar == 0:
                built.append(unit_stage(q, unit, (Y, Y), soff, width - soff))
                width += 1
                continue
            op = D.homotopy if sar == 1 else D.b(sar)
            built.append(insert(op, soff, width - soff - sar))
            width -= sar - 1
        state = run_stages(built, {(tuple(gobjs), seed): q.ring.one})
        out = out.add(state_element(q, state, pair, out.degree).scale(coeff))
    return out


def mirror_map(D, Dm):
    """Identify the arrow-reversed reduced category with the reduced
    category of the arrow-reversed base.

    Trivial names map to trivial names; homotopies and operations are
    carried through the reversal with the engine's signs, so each basis
    name lands on a single mirrored name up to sign.  Returns the
    arrow-reversed category and the identification as a quiver map out
    of it.
    """
    opD = opposite(D)
    q, qm = D.quiver, Dm.quiver
    memo = {}

    def image(label):
        if label in memo:
            return memo[label]
        t, gobjs, gnames = label
        X, Y = gobjs[0], gobjs[-1]
        if t == LEAF:
            val = qm.hom(Y, X).basis_element((LEAF, (Y, X), gnames))
        elif len(t) == 1:
            inner = image((t[0], gobjs, gnames))
            val = evaluate(Dm.homotopy, (Y, X), (inner,))
        else:
            k, chain, fnames, _ = _root_split(D.base.quiver, label)
            rev = tuple(reversed(chain))
            factors = tuple(q.hom(fn[1][0], fn[1][-1]).basis_element(fn)
                            for fn in fnames)
            w = evaluate(opD.b(k), rev, tuple(reversed(factors)))
            c = w.coeff(label)
            assert c != q.ring.zero, "reversal lost the name %r" % (label,)
            mirrored = tuple(image(fn) for fn in reversed(fnames))
            val = evaluate(Dm.b(k), rev, mirrored).scale(q.ring.inv(c))
        memo[label] = val
        return val

    comps = {}
    for X, Y in q.pairs():
        comps[(Y, X)] = {nm: image(nm) for nm in D.hom(X, Y).names}
    return opD, QuiverMap(opD.quiver, qm, 0, comps)


def left_unit_homotopy(D, Dm=None):
    """The left unit homotopy: the right one of the arrow-reversed
    construction, transported through the mirror identification."""
    if Dm is None:
        Dm = homotopy_quotient(opposite(D.base), D.bobjs, D.leaf_bound,
                               name=D.name + ".mirror")
    _, m = mirror_map(D, Dm)
    hm = unit_homotopy(Dm)
    back = {}
    for (Y, X), mat in m.components.items():
        for nm, el in mat.items():
            (mnm, c), = el.items()
            back.setdefault((Y, X), {})[mnm] = \
                D.hom(X, Y).basis_element(nm, D.quiver.ring.inv(c))
    matrices = {}
    for (X, Y) in D.quiver.pairs():
        mat = {}
        inv = back.get((Y, X), {})
        for nm in D.hom(X, Y).names:
            if len(nm[2]) + 1 > D.leaf_bound:
                continue
            w = m.apply(Y, X, D.hom(X, Y).basis_element(nm))
            hv = hm.apply(Y, X, w)
            out = D.hom(X, Y).zero(hv.degree)
            for mnm, c in hv.items():
                out = out.add(inv[mnm].scale(c))
            mat[nm] = out
        matrices[(X, Y)] = mat
    return PartialHomotopy(D, matrices)


def check_unit_homotopies(D, h, hp, max_size=None):
    """Both unit laws up to the supplied homotopies, exactly, on every
    name small enough for all the values to stay under the leaf bound.

    Right law: x minus x with a unit composed on the right equals the
    h-boundary of x.  Left law: x plus a unit composed on the left
    equals the hp-boundary of x.
    """
    rep = Report("unit homotopies for %s" % D.name)
    q = D.quiver
    b1, b2 = D.b(1), D.b(2)
    limit = max_size if max_size is not None else D.leaf_bound - 1

    def boundary(hmap, X, Y, x):
        dx = evaluate(b1, (X, Y), (x,))
        return hmap.apply(X, Y, dx).add(
            evaluate(b1, (X, Y), (hmap.apply(X, Y, x),)))

    for label, hmap, flip in (("right law", h, False), ("left law", hp, True)):
        bad = None
        count = 0
        for (X, Y) in q.pairs():
            for nm in q.hom(X, Y).names:
                if len(nm[2]) > limit:
                    continue
                x = q.hom(X, Y).basis_element(nm)
                count += 1
                if flip:
                    lhs = x.add(unit_then_op(D, (X, Y), (nm,), 0, b2))
                else:
                    lhs = x.sub(unit_then_op(D, (X, Y), (nm,), 1, b2))
                if lhs != boundary(hmap, X, Y, x) and bad is None:
                    bad = (nm, lhs.sub(boundary(hmap, X, Y, x)))
        rep.add(label, bad is None,
                "%d names of size <= %d" % (count, limit) if bad is None
                else "defect %r on %r" % (bad[1], bad[0]))
    return rep

"""Free categories on a graded quiver: trees, relation spans, quotients.

Hom modules are spanned by planar rooted trees whose leaves carry a
composable chain of generator arrows.  Operations of arity two and up
graft trees under a new root, the differential expands one root vertex
at a time, and two-sided relation spans cut the result back down.  A
basis element is by definition the value of its own vertex pipeline on
its leaves, so all signs come out of the stage engine and none are
stored with the basis.

Everything is truncated by a leaf bound.  An operation that would need
more leaves than the bound raises BoundError rather than dropping terms.
"""

import itertools

from .category import AInfCategory
from .functors import AInfFunctor, Coderivation, strict_functor, theta_value
from .graded import GradedModule
from .quiver import (BoundError, GradedQuiver, MultiOp, QuiverMap, Stage,
                     all_basis_tensors, evaluate, insert, run_stages,
                     state_element)
from .report import Report

LEAF = ()


def corolla(k):
    """One internal vertex with k leaves directly attached."""
    assert k >= 2
    return (LEAF,) * k


def leaf_count(t):
    if t == LEAF:
        return 1
    return sum(leaf_count(s) for s in t)


def vertex_count(t):
    if t == LEAF:
        return 0
    return 1 + sum(vertex_count(s) for s in t)


_TREES = {1: (LEAF,)}


def _positive_splits(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _positive_splits(n - first, k - 1):
            yield (first,) + rest


def trees_with_leaf_count(n):
    """All planar rooted trees with n leaves, inner valence at least two."""
    if n not in _TREES:
        out = []
        for k in range(2, n + 1):
            for parts in _positive_splits(n, k):
                subs = [trees_with_leaf_count(p) for p in parts]
                out.extend(itertools.product(*subs))
        _TREES[n] = tuple(out)
    return _TREES[n]


def ordered_ops(t):
    """The vertices of a tree as (offset, arity) pairs, children first.

    Feeding these to the engine in order, each acting at its offset in
    the shrinking tensor, rebuilds the tree element from its leaves.
    """
    ops = []

    def walk(sub, left):
        if sub == LEAF:
            return
        pos = left
        for child in sub:
            walk(child, pos)
            pos += 1
        ops.append((left, len(sub)))

    walk(t, 0)
    return ops


def _name_degree(gen, tree, gobjs, gnames):
    flat = sum(gen.degree(gobjs[i], gobjs[i + 1], gnames[i])
               for i in range(len(gnames)))
    return flat + vertex_count(tree)


def _root_split(gen, label):
    """Split a tree name at the root.

    Returns the root arity, the chain of junction objects, the names of
    the subtree factors, and the sign the engine produces when the root
    grafting rebuilds the name from those factors.
    """
    t, gobjs, gnames = label
    k = len(t)
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
        left += vertex_count(sub)
        pos += ln
    eps = -1 if par % 2 else 1
    return k, tuple(chain), tuple(fnames), eps


def _embed(squiver, pair, el):
    """A generator-level element as a combination of one-leaf names."""
    terms = {(LEAF, pair, (nm,)): c for nm, c in el.items()}
    return squiver.hom(*pair).element(terms, el.degree)


def free_category(gen, d1=None, leaf_bound=3, name=None):
    """The category freely generated by a quiver, cut off by leaf count.

    gen is the generating quiver of shifted arrows, d1 an optional
    square-zero degree +1 operation on it.  Basis names are triples
    (tree, objects, arrow names); one-leaf names are the generators
    themselves and carry d1 as their differential.
    """
    assert leaf_bound >= 1
    ring = gen.ring
    if d1 is not None:
        assert d1.arity == 1 and d1.degree == 1
        assert d1.source is gen and d1.target is gen
        for X, Y in gen.pairs():
            for nm in gen.hom(X, Y).names:
                img = d1.on_basis((X, Y), (nm,))
                if not evaluate(d1, (X, Y), (img,)).is_zero:
                    raise ValueError("generator differential does not square to zero")

    basis = {}
    for n in range(1, leaf_bound + 1):
        trees = trees_with_leaf_count(n)
        for gobjs, gnames in all_basis_tensors(gen, n):
            pair = (gobjs[0], gobjs[-1])
            for t in trees:
                label = (t, gobjs, gnames)
                basis.setdefault(pair, []).append(
                    (label, _name_degree(gen, t, gobjs, gnames)))
    homs = {pair: GradedModule(ring, rows) for pair, rows in basis.items()}
    squiver = GradedQuiver(ring, list(gen.objects), homs)

    ops = {}

    def graft_rule(objs, names, k):
        total = sum(len(nm[2]) for nm in names)
        if total > leaf_bound:
            raise BoundError("grafting %d leaves exceeds the bound %d"
                             % (total, leaf_bound))
        tree = tuple(nm[0] for nm in names)
        gobjs = names[0][1]
        gnames = names[0][2]
        for nm in names[1:]:
            gobjs = gobjs + nm[1][1:]
            gnames = gnames + nm[2]
        par = 0
        left = 0
        for j in range(k):
            raw = squiver.degree(objs[j], objs[j + 1], names[j]) \
                - vertex_count(names[j][0])
            if j:
                par += left * raw
            left += vertex_count(names[j][0])
        return squiver.hom(objs[0], objs[-1]).basis_element(
            (tree, gobjs, gnames), -1 if par % 2 else 1)

    def b1_rule(objs, names):
        label = names[0]
        t = label[0]
        X, Y = objs
        if t == LEAF:
            if d1 is None:
                return squiver.hom(X, Y).zero(squiver.degree(X, Y, label) + 1)
            img = d1.on_basis((X, Y), (label[2][0],))
            return _embed(squiver, (X, Y), img)
        k, chain, fnames, eps = _root_split(gen, label)
        base = {(chain, fnames): ring.one}
        degree = squiver.degree(X, Y, label) + 1
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

    ops[1] = MultiOp(squiver, squiver, 1, 1, rule=b1_rule, name="free_b1")
    for k in range(2, leaf_bound + 1):
        ops[k] = MultiOp(squiver, squiver, k, 1,
                         rule=lambda objs, names, k=k: graft_rule(objs, names, k),
                         name="graft%d" % k)

    F = AInfCategory(squiver, ops, leaf_bound,
                     size_of=lambda X, Y, nm: len(nm[2]),
                     size_bound=leaf_bound,
                     name=name or "free")
    F.gen = gen
    F.gen_d1 = d1
    F.leaf_bound = leaf_bound
    return F


def tree_element(F, tree, gobjs, gnames, coeff=1):
    """The basis element of a free category with the given tree and leaves."""
    label = (tree, tuple(gobjs), tuple(gnames))
    return F.hom(gobjs[0], gobjs[-1]).basis_element(label, coeff)


def trivial_embedding(F):
    """Generators as one-leaf elements of the free category."""
    gen = F.gen
    comps = {}
    for X, Y in gen.pairs():
        mod = F.hom(X, Y)
        comps[(X, Y)] = {nm: mod.basis_element((LEAF, (X, Y), (nm,)))
                         for nm in gen.hom(X, Y).names}
    return QuiverMap(gen, F.quiver, 0, comps)


def tree_pipeline(A, tree, objs, names, order=None):
    """Evaluate the vertices of a tree through a category's operations.

    order defaults to the canonical children-first traversal; any other
    (offset, arity) schedule of the same tree evaluates an alternative
    bracketing.  Missing operations make the result zero.
    """
    q = A.quiver
    schedule = ordered_ops(tree) if order is None else list(order)
    degree = sum(q.degree(objs[i], objs[i + 1], names[i])
                 for i in range(len(names))) + vertex_count(tree)
    pair = (objs[0], objs[-1])
    width = len(names)
    stages = []
    for off, k in schedule:
        op = A.b(k)
        if op is None:
            return q.hom(*pair).zero(degree)
        stages.append(insert(op, off, width - off - k))
        width -= k - 1
    state = run_stages(stages, {(tuple(objs), tuple(names)): q.ring.one})
    return state_element(q, state, pair, degree)


def normal_form(D, F, X, Y, el):
    """Rewrite a free element as the matching composite of the generating
    category; the relation generators of structure_relations go to zero."""
    out = D.hom(X, Y).zero(el.degree)
    for label, c in el.items():
        t, gobjs, gnames = label
        if t == LEAF:
            out = out.add(D.hom(X, Y).basis_element(gnames[0], c))
        else:
            out = out.add(tree_pipeline(D, t, gobjs, gnames).scale(c))
    return out


def normal_form_map(D, F):
    """The whole normal form as a degree 0 quiver map."""
    comps = {}
    for X, Y in F.quiver.pairs():
        mod = F.hom(X, Y)
        comps[(X, Y)] = {nm: normal_form(D, F, X, Y, mod.basis_element(nm))
                         for nm in mod.names}
    return QuiverMap(F.quiver, D.quiver, 0, comps)


def delta_op(D, F, n):
    """Arity-n relation: the pure corolla minus the embedded operation."""
    assert F.gen is D.quiver
    assert 2 <= n <= F.leaf_bound
    emb = trivial_embedding(F)

    def rule(objs, names):
        gq = D.quiver
        factors = [emb.apply(objs[i], objs[i + 1],
                             gq.hom(objs[i], objs[i + 1]).basis_element(names[i]))
                   for i in range(n)]
        out = evaluate(F.b(n), objs, factors)
        op = D.b(n)
        if op is not None:
            pair = (objs[0], objs[-1])
            out = out.sub(_embed(F.quiver, pair, op.on_basis(objs, names)))
        return out

    return MultiOp(D.quiver, F.quiver, n, 1, rule=rule, name="delta%d" % n)


def structure_relations(D, F, name="R"):
    """Relation generators presenting a category inside its free cover,
    one for every arity and every basis tensor of generators."""
    gens = []
    for n in range(2, F.leaf_bound + 1):
        op = delta_op(D, F, n)
        for objs, names in all_basis_tensors(D.quiver, n):
            v = op.on_basis(objs, names)
            if not v.is_zero:
                gens.append((objs[0], objs[-1], v))
    return IdealSpec(F, gens, name=name)


def _col_key(label):
    return (-len(label[2]), repr(label))


def _reduce_vec(ring, rows, vec):
    """One reduction pass; complete because rows are kept fully reduced."""
    vec = dict(vec)
    for pivot, row in rows.items():
        c = vec.get(pivot)
        if c is None:
            continue
        for col, val in row.items():
            new = ring.sub(vec.get(col, ring.zero), ring.mul(c, val))
            if ring.is_zero(new):
                vec.pop(col, None)
            else:
                vec[col] = new
    return vec


def _insert_row(ring, rows, vec):
    """Add a vector to a reduced span; returns None when dependent."""
    vec = _reduce_vec(ring, rows, vec)
    if not vec:
        return None
    pivot = min(vec, key=_col_key)
    inv = ring.inv(vec[pivot])
    vec = {col: ring.mul(inv, val) for col, val in vec.items()}
    for row in rows.values():
        c = row.get(pivot)
        if c is None:
            continue
        for col, val in vec.items():
            new = ring.sub(row.get(col, ring.zero), ring.mul(c, val))
            if ring.is_zero(new):
                row.pop(col, None)
            else:
                row[col] = new
    rows[pivot] = vec
    return vec


def _bounded_chains(F, length, budget, start=None, end=None):
    """Composable chains of basis names with a total leaf allowance.

    Yields (objects, names, leaves used).  A chain of length zero is a
    single object.
    """
    if length == 0:
        if start is not None and end is not None and start != end:
            return
        for X in ([start] if start is not None else
                  ([end] if end is not None else list(F.objects))):
            yield (X,), (), 0
        return
    starts = [start] if start is not None else list(F.objects)

    def walk(objs, names, used):
        if len(names) == length:
            if end is None or objs[-1] == end:
                yield objs, names, used
            return
        slack = length - len(names) - 1
        X = objs[-1]
        for Y in F.objects:
            for nm in F.hom(X, Y).names:
                take = len(nm[2])
                if used + take + slack <= budget:
                    for row in walk(objs + (Y,), names + (nm,), used + take):
                        yield row

    for X0 in starts:
        for row in walk((X0,), (), 0):
            yield row


def _saturate(F, generators):
    """Close a list of relation generators under single operations with
    one marked slot, arbitrary basis elements elsewhere, within the leaf
    bound.  Returns reduced rows keyed by (pair, degree)."""
    ring = F.quiver.ring
    assert ring.is_field, "relation spans need field coefficients"
    rows = {}
    work = []

    def push(X, Y, degree, terms):
        bucket = rows.setdefault(((X, Y), degree), {})
        red = _insert_row(ring, bucket, terms)
        if red is not None:
            work.append((X, Y, degree, dict(red)))

    for X, Y, el in generators:
        push(X, Y, el.degree, dict(el.items()))

    while work:
        X, Y, degree, vec = work.pop()
        el = F.hom(X, Y).element(dict(vec), degree)
        lv = max(len(nm[2]) for nm in vec)
        budget = F.leaf_bound - lv
        if budget < 1:
            continue
        for k in range(2, min(F.max_arity, budget + 1) + 1):
            for slot in range(k):
                for lobjs, lnames, lu in _bounded_chains(F, slot, budget, end=X):
                    for robjs, rnames, _ in _bounded_chains(
                            F, k - 1 - slot, budget - lu, start=Y):
                        factors = [F.hom(lobjs[i], lobjs[i + 1]).basis_element(lnames[i])
                                   for i in range(slot)]
                        factors.append(el)
                        factors.extend(
                            F.hom(robjs[i], robjs[i + 1]).basis_element(rnames[i])
                            for i in range(k - 1 - slot))
                        w = evaluate(F.b(k), lobjs + robjs, factors)
                        if not w.is_zero:
                            push(lobjs[0], robjs[-1], w.degree, dict(w.items()))
    return rows


class IdealSpec:
    """A two-sided span of relations in a free category.

    Holds the generators; the full span within the leaf bound is
    saturated on first use.  reduce gives the canonical representative
    modulo the span, contains tests membership.
    """

    def __init__(self, category, generators, name="R"):
        self.category = category
        self.name = name
        self.generators = [(X, Y, el) for X, Y, el in generators if not el.is_zero]
        self._rows = None

    def rows(self):
        if self._rows is None:
            self._rows = _saturate(self.category, self.generators)
        return self._rows

    def span_elements(self):
        """The reduced span, one element per row."""
        out = []
        for (pair, degree), bucket in sorted(self.rows().items(), key=repr):
            mod = self.category.hom(*pair)
            for pivot in sorted(bucket, key=_col_key):
                out.append((pair[0], pair[1], mod.element(dict(bucket[pivot]), degree)))
        return out

    def reduce(self, X, Y, el):
        bucket = self.rows().get(((X, Y), el.degree), {})
        vec = _reduce_vec(self.category.quiver.ring, bucket, dict(el.items()))
        return self.category.hom(X, Y).element(vec, el.degree)

    def contains(self, X, Y, el):
        return self.reduce(X, Y, el).is_zero

    def __repr__(self):
        return "IdealSpec(%s, %d generators)" % (self.name, len(self.generators))


def check_ideal(R):
    """Differential closure of a relation span: the unary operation sends
    every generator back into the span."""
    rep = Report("ideal %s" % R.name)
    F = R.category
    b1 = F.b(1)
    for i, (X, Y, v) in enumerate(R.generators):
        if b1 is None:
            rep.add("generator %02d" % i, True, "no differential")
            continue
        img = evaluate(b1, (X, Y), (v,))
        ok = img.is_zero or R.contains(X, Y, img)
        rep.add("generator %02d" % i, ok, "pair (%r, %r)" % (X, Y))
    return rep


def quotient(F, R, name=None):
    """Divide a free category by a relation span.

    Basis names that lead a span row are eliminated; the others survive
    with the same labels.  Operations act on representatives and reduce.
    Returns the quotient category and the strict projection functor.
    """
    assert R.category is F
    ring = F.quiver.ring
    dead = {}
    for (pair, _), bucket in R.rows().items():
        dead.setdefault(pair, set()).update(bucket)
    homs = {}
    for pair in F.quiver.pairs():
        mod = F.hom(*pair)
        gone = dead.get(pair, ())
        keep = [(nm, mod.degrees[nm]) for nm in mod.names if nm not in gone]
        if keep:
            homs[pair] = GradedModule(ring, keep)
    equiver = GradedQuiver(ring, list(F.objects), homs)

    def project(X, Y, el):
        red = R.reduce(X, Y, el)
        return equiver.hom(X, Y).element(dict(red.items()), el.degree)

    eops = {}
    for n in F.ops:
        eops[n] = MultiOp(
            equiver, equiver, n, 1,
            rule=lambda objs, names, n=n: project(
                objs[0], objs[-1], F.b(n).on_basis(objs, names)),
            name="q_b%d" % n)
    label = name or (F.name + "/" + R.name)
    E = AInfCategory(equiver, eops, F.max_arity,
                     size_of=F.size_of, size_bound=F.size_bound, name=label)
    images = {}
    for pair in F.quiver.pairs():
        mod = F.hom(*pair)
        images[pair] = {nm: project(pair[0], pair[1], mod.basis_element(nm))
                        for nm in mod.names}
    proj = strict_functor(F, E, lambda X: X, images, name="pi")
    return E, proj


def _check_gen_chain(F, A, gen_images):
    gen = F.gen
    d1 = F.gen_d1
    b1 = A.b(1)
    for X, Y in gen.pairs():
        for nm in gen.hom(X, Y).names:
            el = gen.hom(X, Y).basis_element(nm)
            img = gen_images.apply(X, Y, el)
            left = None
            if d1 is not None:
                left = gen_images.apply(X, Y, evaluate(d1, (X, Y), (el,)))
            right = None
            if b1 is not None:
                pair = (gen_images.obj_map(X), gen_images.obj_map(Y))
                right = evaluate(b1, pair, (img,))
            lz = left is None or left.is_zero
            rz = right is None or right.is_zero
            if lz and rz:
                continue
            if lz != rz or left != right:
                raise ValueError("generator images do not commute with "
                                 "the differentials at %r" % (nm,))


def extend_functor(F, A, gen_images, higher=None, name="f"):
    """Extend a chain map on generators to a functor on the free category.

    gen_images maps the generating quiver into the target and must
    commute with the differentials; higher components of arity two and
    up may be supplied freely.  The arity-one component on tree names is
    forced by the functor equation at the root, so the result always
    satisfies check_functor.
    """
    gen = F.gen
    qa, qb = F.quiver, A.quiver
    assert gen_images.source is gen and gen_images.target is qb
    assert gen_images.degree == 0
    _check_gen_chain(F, A, gen_images)
    higher = dict(higher or {})
    omap = gen_images.obj_map
    comps = {}

    def f1_rule(objs, names):
        label = names[0]
        t, gobjs, gnames = label
        X, Y = objs
        pair = (omap(X), omap(Y))
        out_degree = qa.degree(X, Y, label)
        if t == LEAF:
            return gen_images.apply(X, Y, gen.hom(X, Y).basis_element(gnames[0]))
        k, chain, fnames, eps = _root_split(gen, label)
        base = {(chain, fnames): qa.ring.one}
        total = qb.hom(*pair).zero(out_degree)
        for blocks in _block_splits(comps, k):
            outer = A.b(len(blocks))
            if outer is None:
                continue
            state = run_stages([Stage(qa, [("op", op) for op in blocks]),
                                insert(outer, 0, 0)], base)
            total = total.add(state_element(qb, state, pair, out_degree))
        for a in range(k):
            for q in range(1, k - a + 1):
                c = k - a - q
                if a == 0 and c == 0:
                    continue
                fout = comps.get(a + 1 + c)
                if fout is None:
                    continue
                state = run_stages([insert(F.b(q), a, c),
                                    insert(fout, 0, 0)], base)
                total = total.sub(state_element(qb, state, pair, out_degree))
        return total.scale(eps)

    comps[1] = MultiOp(qa, qb, 1, 0, rule=f1_rule,
                       lmap=omap, rmap=omap, name=name + "1")
    for n, op in higher.items():
        assert n >= 2 and op.arity == n and op.degree == 0
        comps[n] = op
    return AInfFunctor(F, A, omap, comps, name=name)


def _block_splits(comps, total):
    """Tuples of stored components whose arities sum to the total."""
    if total == 0:
        yield ()
        return
    for i in range(1, total + 1):
        op = comps.get(i)
        if op is None:
            continue
        for rest in _block_splits(comps, total - i):
            yield (op,) + rest


def _strict_tail(r, k, objs, names):
    """Source operations fed into the stored higher components.  The one
    term that would contain the unknown arity-one component is left out."""
    F = r.cat_source
    qa, qb = F.quiver, r.cat_target.quiver
    base = {(tuple(objs), tuple(names)): qa.ring.one}
    degree = sum(qa.degree(objs[i], objs[i + 1], names[i])
                 for i in range(k)) + r.degree + 1
    pair = (r.source.obj_map(objs[0]), r.target.obj_map(objs[-1]))
    total = qb.hom(*pair).zero(degree)
    for a in range(k):
        for q in range(1, k - a + 1):
            c = k - a - q
            if a == 0 and c == 0:
                continue
            rout = r.component(a + 1 + c)
            if rout is None:
                continue
            state = run_stages([insert(F.b(q), a, c), insert(rout, 0, 0)], base)
            total = total.add(state_element(qb, state, pair, degree))
    return total


def _extend_over_trees(phi, psi, degree, part0, part1, higher, rhs, name):
    """Shared worker for the two coderivation extensions.

    rhs is a list of (sign, coderivation or None); on every tree root the
    arity-one value is solved from

        b_root(u1) = (-1)^deg(u) (insertion sum - sum of rhs) - tail.
    """
    F = phi.source
    assert psi.source is F
    gen = F.gen
    qa, qb = F.quiver, phi.target.quiver
    part0 = dict(part0 or {})
    part1 = {pair: dict(mat) for pair, mat in (part1 or {}).items()}
    higher = dict(higher or {})
    for (X, Y), mat in part1.items():
        want = qb.hom(phi.obj_map(X), psi.obj_map(Y))
        for gname, el in mat.items():
            assert el.module is want
            assert el.degree == gen.degree(X, Y, gname) + degree
    hole = []
    sgn = -1 if degree % 2 else 1

    def u1_rule(objs, names):
        label = names[0]
        t = label[0]
        X, Y = objs
        pair = (phi.obj_map(X), psi.obj_map(Y))
        out_degree = qa.degree(X, Y, label) + degree
        if t == LEAF:
            mat = part1.get((X, Y))
            el = mat.get(label[2][0]) if mat else None
            if el is None:
                return qb.hom(*pair).zero(out_degree)
            return el
        r = hole[0]
        k, chain, fnames, eps = _root_split(gen, label)
        acc = theta_value([r], k, chain, fnames)
        for s, beta in rhs:
            if beta is None:
                continue
            term = beta.component_value(k, chain, fnames)
            acc = acc.sub(term) if s > 0 else acc.add(term)
        acc = acc.scale(sgn).sub(_strict_tail(r, k, chain, fnames))
        return acc.scale(eps)

    comps = {1: MultiOp(qa, qb, 1, degree, rule=u1_rule,
                        lmap=phi.obj_map, rmap=psi.obj_map, name=name + "1")}
    for n, op in higher.items():
        assert n >= 2 and op.arity == n and op.degree == degree
        comps[n] = op
    bound = max([F.max_arity] + list(higher))
    r = Coderivation(phi, psi, degree, comps, r0=part0,
                     arity_bound=bound, name=name)
    hole.append(r)
    return r


def extend_transformation(phi, psi, degree, part0=None, part1=None,
                          higher=None, image_d=None, name="u"):
    """Extend transformation data over a free source category.

    part0 and part1 give the values on objects and on single generators,
    higher the components of arity two and up.  image_d, when given, is
    the coderivation the differential of the result must equal; omit it
    for a closed extension.  The arity-one component on tree names is
    solved from that condition one root at a time, so the data determine
    the whole coderivation.
    """
    if image_d is not None:
        assert image_d.source is phi and image_d.target is psi
        assert image_d.degree == degree + 1
    return _extend_over_trees(phi, psi, degree, part0, part1, higher,
                              [(1, image_d)], name)


def extend_homotopy(phi, psi, degree, target, part0=None, part1=None,
                    higher=None, image_d=None, name="h"):
    """Extend homotopy data whose differential must land on a target.

    Same data as extend_transformation plus the prescribed target: the
    result h satisfies d(h) = target - image_d componentwise on tree
    names (image_d again optional).
    """
    assert target.source is phi and target.target is psi
    assert target.degree == degree + 1
    if image_d is not None:
        assert image_d.source is phi and image_d.target is psi
        assert image_d.degree == degree + 1
    return _extend_over_trees(phi, psi, degree, part0, part1, higher,
                              [(1, target), (-1, image_d)], name)


def _mixed_slot_count(op, k, R):
    """Evaluate an arity-k component with one span element per slot in
    turn, basis names elsewhere, inside the leaf bound."""
    F = R.category
    bad = 0
    tried = 0
    for (pair, degree), bucket in R.rows().items():
        X, Y = pair
        for pivot, row in bucket.items():
            el = F.hom(X, Y).element(dict(row), degree)
            lv = max(len(nm[2]) for nm in row)
            budget = F.leaf_bound - lv
            for slot in range(k):
                for lobjs, lnames, lu in _bounded_chains(F, slot, budget, end=X):
                    for robjs, rnames, _ in _bounded_chains(
                            F, k - 1 - slot, budget - lu, start=Y):
                        factors = [F.hom(lobjs[i], lobjs[i + 1]).basis_element(lnames[i])
                                   for i in range(slot)]
                        factors.append(el)
                        factors.extend(
                            F.hom(robjs[i], robjs[i + 1]).basis_element(rnames[i])
                            for i in range(k - 1 - slot))
                        tried += 1
                        if not evaluate(op, lobjs + robjs, factors).is_zero:
                            bad += 1
    return bad, tried


def check_factorizes(f, R):
    """Whether a functor on the free category kills a relation span: the
    span under the arity-one component, and mixed tensors with one span
    slot under every higher component."""
    assert R.category is f.source
    rep = Report("%s kills %s" % (f.name, R.name))
    F = f.source
    f1 = f.component(1)
    bad = 0
    rows = R.span_elements()
    for X, Y, el in rows:
        if not evaluate(f1, (X, Y), (el,)).is_zero:
            bad += 1
    rep.add("span under arity 1", bad == 0,
            "%d of %d rows nonzero" % (bad, len(rows)))
    for k in sorted(f.components):
        if k == 1:
            continue
        bad, tried = _mixed_slot_count(f.component(k), k, R)
        rep.add("arity %02d mixed slots" % k, bad == 0,
                "%d of %d tensors nonzero" % (bad, tried))
    return rep


def check_descends(r, R):
    """Same two conditions as check_factorizes, for coderivation data."""
    assert R.category is r.cat_source
    rep = Report("%s kills %s" % (r.name, R.name))
    rows = R.span_elements()
    c1 = r.component(1)
    bad = 0
    if c1 is not None:
        for X, Y, el in rows:
            if not evaluate(c1, (X, Y), (el,)).is_zero:
                bad += 1
    rep.add("span under arity 1", bad == 0,
            "%d of %d rows nonzero" % (bad, len(rows)))
    for k in sorted(r.components):
        if k == 1:
            continue
        bad, tried = _mixed_slot_count(r.component(k), k, R)
        rep.add("arity %02d mixed slots" % k, bad == 0,
                "%d of %d tensors nonzero" % (bad, tried))
    return rep


def induce_functor(f, E, name=None):
    """Carry a functor on the free category to a quotient by evaluating
    on representatives.  Run check_factorizes first; this only re-labels."""
    A = f.target
    comps = {}
    for n in f.components:
        comps[n] = MultiOp(
            E.quiver, A.quiver, n, 0,
            rule=lambda objs, names, n=n: f.component(n).on_basis(objs, names),
            lmap=f.obj_map, rmap=f.obj_map,
            name=(name or f.name) + "_%d" % n)
    return AInfFunctor(E, A, f.obj_map, comps, name=name or f.name + "~")

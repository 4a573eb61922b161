"""Graded quivers and arity-graded multilinear operations.

All operator composites are evaluated through one engine (`apply_stage`),
which computes every Koszul sign at evaluation time from input degrees.
The convention is the right-operator middle interchange
(u tensor v)(f tensor g) = (-1)^(|v||f|) (uf) tensor (vg): an operator
block picks up the degrees of the input factors standing to its right.
"""

from .graded import GradedModule


class BoundError(Exception):
    """An evaluation escaped a declared truncation bound."""


def _ident(x):
    return x


class GradedQuiver:
    """Objects plus a graded module of arrows for every ordered pair."""

    def __init__(self, ring, objects, homs):
        self.ring = ring
        self.objects = tuple(objects)
        self.homs = {}
        for pair, mod in homs.items():
            if mod.names:
                self.homs[pair] = mod
        self._zeros = {}

    def hom(self, X, Y):
        if (X, Y) in self.homs:
            return self.homs[(X, Y)]
        key = (X, Y)
        if key not in self._zeros:
            self._zeros[key] = GradedModule(self.ring, [])
        return self._zeros[key]

    def degree(self, X, Y, name):
        return self.hom(X, Y).degrees[name]

    def pairs(self):
        return sorted(self.homs, key=repr)

    def __repr__(self):
        return "GradedQuiver(%d objects, %d nonzero homs)" % (
            len(self.objects), len(self.homs))


class QuiverMap:
    """Degree-homogeneous linear map of quivers, one component per pair."""

    def __init__(self, source, target, degree, components, obj_map=None):
        self.source = source
        self.target = target
        self.degree = degree
        self.obj_map = obj_map or _ident
        self.components = {}
        for pair, mat in components.items():
            clean = {n: el for n, el in mat.items() if not el.is_zero}
            if clean:
                self.components[pair] = clean

    def apply(self, X, Y, el):
        out = self.target.hom(self.obj_map(X), self.obj_map(Y)).zero(el.degree + self.degree)
        mat = self.components.get((X, Y), {})
        for name, c in el.items():
            if name in mat:
                out = out.add(mat[name].scale(c))
        return out

    def as_multiop(self, name=None):
        qm = self

        def rule(objs, names):
            X, Y = objs
            return qm.apply(X, Y, qm.source.hom(X, Y).basis_element(names[0]))

        f = self.obj_map
        return MultiOp(self.source, self.target, 1, self.degree, rule=rule,
                       lmap=f, rmap=f, name=name)

    def is_chain(self, d_source, d_target):
        """Check f d = (-1)^deg(f) d f against per-pair differentials.

        d_source/d_target: callables (X, Y, element) -> element.
        """
        sign = -1 if self.degree % 2 else 1
        f = self.obj_map
        for X, Y in self.source.pairs():
            for n in self.source.hom(X, Y).names:
                x = self.source.hom(X, Y).basis_element(n)
                lhs = d_target(f(X), f(Y), self.apply(X, Y, x))
                rhs = self.apply(X, Y, d_source(X, Y, x)).scale(sign)
                if lhs != rhs:
                    return False
        return True


class MultiOp:
    """Arity-n operation on a quiver, stored as a sparse table on basis tensors.

    A rule may be supplied; computed entries are memoized into the table.
    lmap/rmap send the outer input objects to the output pair (identity for
    structure maps, the object map for functor components).
    """

    def __init__(self, source, target, arity, degree, table=None, rule=None,
                 lmap=None, rmap=None, name=None):
        assert arity >= 1
        self.source = source
        self.target = target
        self.arity = arity
        self.degree = degree
        self.table = dict(table) if table else {}
        self.rule = rule
        self.lmap = lmap or _ident
        self.rmap = rmap or _ident
        self.name = name

    def pair_map(self, objs):
        return (self.lmap(objs[0]), self.rmap(objs[-1]))

    def out_module(self, objs):
        U, V = self.pair_map(objs)
        return self.target.hom(U, V)

    def on_basis(self, objs, names):
        objs, names = tuple(objs), tuple(names)
        assert len(names) == self.arity and len(objs) == self.arity + 1
        key = (objs, names)
        if key in self.table:
            return self.table[key]
        if self.rule is None:
            deg = sum(self.source.degree(objs[i], objs[i + 1], names[i])
                      for i in range(self.arity)) + self.degree
            return self.out_module(objs).zero(deg)
        out = self.rule(objs, names)
        self.table[key] = out
        return out

    def __repr__(self):
        label = self.name or "op"
        return "MultiOp(%s, arity %d, degree %d)" % (label, self.arity, self.degree)


def combine_ops(weighted, name=None):
    """Pointwise linear combination of same-shape operations."""
    ops = [op for op, _ in weighted]
    first = ops[0]
    for op in ops:
        assert (op.arity, op.degree) == (first.arity, first.degree)

    def rule(objs, names):
        out = None
        for op, c in weighted:
            term = op.on_basis(objs, names).scale(c)
            out = term if out is None else out.add(term)
        return out

    return MultiOp(first.source, first.target, first.arity, first.degree,
                   rule=rule, lmap=first.lmap, rmap=first.rmap, name=name)


class Stage:
    """One tensor layer: identity slots, operations, and 0-ary insertions.

    blocks: sequence of ('id', k), ('op', MultiOp), ('el', Element, (U, V)).
    """

    def __init__(self, source, blocks):
        self.source = source
        self.blocks = tuple(blocks)
        arity_in = 0
        arity_out = 0
        degree = 0
        target = None
        for blk in self.blocks:
            if blk[0] == "id":
                arity_in += blk[1]
                arity_out += blk[1]
            elif blk[0] == "op":
                op = blk[1]
                arity_in += op.arity
                arity_out += 1
                degree += op.degree
                assert target is None or target is op.target
                target = op.target
            else:
                _, el, _pair = blk
                arity_out += 1
                degree += el.degree
        self.arity_in = arity_in
        self.arity_out = arity_out
        self.degree = degree
        self.target = target if target is not None else source


def insert(op, a, c):
    """The stage 1^a tensor op tensor 1^c (op: MultiOp or Stage)."""
    assert a >= 0 and c >= 0
    if isinstance(op, Stage):
        blocks = []
        if a:
            blocks.append(("id", a))
        blocks.extend(op.blocks)
        if c:
            blocks.append(("id", c))
        return Stage(op.source, blocks)
    blocks = []
    if a:
        blocks.append(("id", a))
    blocks.append(("op", op))
    if c:
        blocks.append(("id", c))
    return Stage(op.source, blocks)


def unit_stage(source, el, pair, a, c):
    """The stage 1^a tensor x tensor 1^c for a fixed element x at `pair`."""
    blocks = []
    if a:
        blocks.append(("id", a))
    blocks.append(("el", el, pair))
    if c:
        blocks.append(("id", c))
    return Stage(source, blocks)


def apply_stage(stage, state):
    """Push a state {(objs, names): coeff} through one stage.

    Every operator block contributes the Koszul sign
    (-1)^(deg(block) * sum of degrees of the factors to its right).
    """
    quiver = stage.source
    ring = quiver.ring
    out = {}
    for (objs, names), coeff in state.items():
        assert len(names) == stage.arity_in, "stage arity mismatch"
        degs = [quiver.degree(objs[i], objs[i + 1], names[i]) for i in range(len(names))]
        # carve the input into per-block segments
        segments = []
        pos = 0
        for blk in stage.blocks:
            k = blk[1] if blk[0] == "id" else (blk[1].arity if blk[0] == "op" else 0)
            segments.append((pos, pos + k))
            pos += k
        # options per block: list of (objs_piece, names_piece, coeff)
        per_block = []
        sign = 1
        dead = False
        for blk, (s, e) in zip(stage.blocks, segments):
            if blk[0] == "id":
                per_block.append([(tuple(objs[s:e + 1]), tuple(names[s:e]), ring.one)])
                continue
            if blk[0] == "op":
                op = blk[1]
                if op.degree % 2 and sum(degs[e:]) % 2:
                    sign = -sign
                el = op.on_basis(objs[s:e + 1], names[s:e])
                pair = op.pair_map(objs[s:e + 1])
            else:
                _, el, pair = blk
                if el.degree % 2 and sum(degs[e:]) % 2:
                    sign = -sign
            if el.is_zero:
                dead = True
                break
            per_block.append([((pair[0], pair[1]), (n,), c) for n, c in el.items()])
        if dead:
            continue
        # cartesian product across blocks, checking object continuity
        partial = [((), (), ring.mul(coeff, ring.normalize(sign)))]
        for options in per_block:
            nxt = []
            for pobjs, pnames, pc in partial:
                for oobjs, onames, oc in options:
                    if pobjs and oobjs:
                        assert pobjs[-1] == oobjs[0], "object chain mismatch"
                        newobjs = pobjs + oobjs[1:]
                    else:
                        newobjs = pobjs or oobjs
                    nxt.append((newobjs, pnames + onames, ring.mul(pc, oc)))
            partial = nxt
        for newobjs, newnames, c in partial:
            if c == ring.zero:
                continue
            key = (newobjs, newnames)
            v = ring.add(out.get(key, ring.zero), c)
            if v == ring.zero:
                out.pop(key, None)
            else:
                out[key] = v
    return out


def run_stages(stages, state):
    for st in stages:
        state = apply_stage(st, state)
    return state


def compose_multi(stages, name=None):
    """The composite operation of a chain of stages (final arity one)."""
    stages = list(stages)
    assert stages
    for prev, nxt in zip(stages, stages[1:]):
        assert prev.arity_out == nxt.arity_in, "stage arities do not chain"
    assert stages[-1].arity_out == 1
    source = stages[0].source
    target = stages[-1].target
    degree = sum(st.degree for st in stages)
    arity = stages[0].arity_in

    # endpoint object maps: fold the outermost block maps over the stages
    def chain2(g, h):
        return lambda x: h(g(x))

    lmap, rmap = _ident, _ident
    for st in stages:
        first, last = st.blocks[0], st.blocks[-1]
        if first[0] == "op":
            lmap = chain2(lmap, first[1].lmap)
        elif first[0] == "el":
            lmap = (lambda U: lambda x: U)(first[2][0])
        if last[0] == "op":
            rmap = chain2(rmap, last[1].rmap)
        elif last[0] == "el":
            rmap = (lambda V: lambda x: V)(last[2][1])

    def rule(objs, names):
        state = run_stages(stages, {(tuple(objs), tuple(names)): source.ring.one})
        deg = sum(source.degree(objs[i], objs[i + 1], names[i])
                  for i in range(len(names))) + degree
        U, V = lmap(objs[0]), rmap(objs[-1])
        out = target.hom(U, V).zero(deg)
        for (oobjs, onames), c in state.items():
            assert oobjs == (U, V), "endpoint mismatch in composite"
            out = out.add(target.hom(U, V).basis_element(onames[0], c))
        return out

    return MultiOp(source, target, arity, degree, rule=rule,
                   lmap=lmap, rmap=rmap, name=name)


def state_element(quiver, state, pair, degree):
    """Assemble a one-factor state into an Element of hom(pair)."""
    out = quiver.hom(*pair).zero(degree)
    for (objs, names), c in state.items():
        assert objs == pair, "state landed outside the expected hom"
        out = out.add(quiver.hom(*pair).basis_element(names[0], c))
    return out


def expand_tensor(quiver, objs, factors):
    """Multilinear expansion of a tensor of Elements into basis-tensor terms."""
    ring = quiver.ring
    terms = [((), ring.one)]
    for f in factors:
        nxt = []
        for names, c in terms:
            for n, fc in f.items():
                nxt.append((names + (n,), ring.mul(c, fc)))
        terms = nxt
    return {(tuple(objs), names): c for names, c in terms}


def evaluate(op, objs, factors):
    """Apply a MultiOp to a tensor of homogeneous Elements (multilinear)."""
    objs = tuple(objs)
    assert len(factors) == op.arity and len(objs) == op.arity + 1
    for i, f in enumerate(factors):
        assert f.module is quiver_hom_module(op.source, objs[i], objs[i + 1]) or f.is_zero, \
            "factor %d not in the expected hom" % i
    deg = sum(f.degree for f in factors) + op.degree
    out = op.out_module(objs).zero(deg)
    for (o, names), c in expand_tensor(op.source, objs, factors).items():
        out = out.add(op.on_basis(o, names).scale(c))
    return out


def quiver_hom_module(quiver, X, Y):
    return quiver.hom(X, Y)


def all_basis_tensors(quiver, length, objs_filter=None):
    """Iterate (objs, names) over all composable basis tensors of a length."""

    def walk(chain, names):
        if len(names) == length:
            yield tuple(chain), tuple(names)
            return
        X = chain[-1]
        for Y in quiver.objects:
            mod = quiver.hom(X, Y)
            if not mod.names:
                continue
            for n in mod.names:
                yield from walk(chain + [Y], names + [n])

    for X in quiver.objects:
        if objs_filter and not objs_filter(X):
            continue
        yield from walk([X], [])


def random_basis_tensor(quiver, length, rng, tries=50):
    """A random composable basis tensor, or None if none found."""
    for _ in range(tries):
        chain = [rng.choice(quiver.objects)]
        names = []
        ok = True
        for _ in range(length):
            X = chain[-1]
            nexts = [Y for Y in quiver.objects if quiver.hom(X, Y).names]
            if not nexts:
                ok = False
                break
            Y = rng.choice(nexts)
            chain.append(Y)
            names.append(rng.choice(quiver.hom(X, Y).names))
        if ok:
            return tuple(chain), tuple(names)
    return None


def collect_tensors(quiver, length, samples, rng):
    """All basis tensors of a length when few, else a seeded random sample.

    Returns (tensors, exhaustive) where exhaustive says whether the list
    covers every composable basis tensor of that length.
    """
    found = []
    for t in all_basis_tensors(quiver, length):
        found.append(t)
        if len(found) > samples:
            break
    if len(found) <= samples:
        return found, True
    picks = []
    for _ in range(samples):
        t = random_basis_tensor(quiver, length, rng)
        if t is not None:
            picks.append(t)
    return picks, False

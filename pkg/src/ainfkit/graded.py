"""Exact graded linear algebra: scalars, graded modules, chain maps."""

from fractions import Fraction


def is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Ring:
    """Exact coefficients: 'QQ' rationals, 'Fp' prime field, 'ZZ' integers."""

    def __init__(self, kind, p=None):
        assert kind in ("QQ", "Fp", "ZZ"), kind
        if kind == "Fp":
            assert p is not None and is_prime(p), p
        self.kind = kind
        self.p = p if kind == "Fp" else None

    def normalize(self, x):
        if self.kind == "QQ":
            return Fraction(x)
        if self.kind == "Fp":
            if isinstance(x, Fraction):
                assert x.denominator % self.p != 0
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            assert x.denominator == 1, x
            return int(x)
        return int(x)

    @property
    def zero(self):
        return self.normalize(0)

    @property
    def one(self):
        return self.normalize(1)

    def add(self, x, y):
        return self.normalize(x + y)

    def sub(self, x, y):
        return self.normalize(x - y)

    def mul(self, x, y):
        return self.normalize(x * y)

    def neg(self, x):
        return self.normalize(-x)

    def is_zero(self, x):
        return self.normalize(x) == self.zero

    def inv(self, x):
        x = self.normalize(x)
        assert x != self.zero, "division by zero"
        if self.kind == "QQ":
            return 1 / x
        if self.kind == "Fp":
            return pow(x, -1, self.p)
        assert x in (1, -1), "non-unit integer"
        return x

    @property
    def is_field(self):
        return self.kind in ("QQ", "Fp")

    def parse(self, s):
        """Read a scalar from a string or int, rationals as 'num/den'."""
        if isinstance(s, str) and "/" in s:
            num, den = s.split("/")
            val = Fraction(int(num), int(den))
        else:
            val = Fraction(int(s) if isinstance(s, str) else s)
        return self.normalize(val)

    def fmt(self, x):
        x = self.normalize(x)
        if self.kind == "QQ" and x.denominator != 1:
            return "%d/%d" % (x.numerator, x.denominator)
        return str(int(x))

    def random(self, rng, nonzero=False):
        while True:
            if self.kind == "Fp":
                x = rng.randrange(self.p)
            elif self.kind == "QQ":
                x = Fraction(rng.randint(-4, 4), rng.choice([1, 1, 1, 2, 3]))
            else:
                x = rng.randint(-4, 4)
            x = self.normalize(x)
            if not nonzero or x != self.zero:
                return x

    def __eq__(self, other):
        return isinstance(other, Ring) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        if self.kind == "Fp":
            return "Ring(Fp, p=%d)" % self.p
        return "Ring(%s)" % self.kind


class GradedModule:
    """Free graded module with a finite named basis."""

    def __init__(self, ring, basis):
        self.ring = ring
        self.degrees = {}
        self.names = []
        for name, deg in basis:
            assert name not in self.degrees, "duplicate basis name %r" % (name,)
            self.degrees[name] = deg
            self.names.append(name)
        self.names = tuple(self.names)

    def degree(self, name):
        return self.degrees[name]

    def ensure(self, name, degree):
        """Confirm a basis name carries the given degree.

        On a fixed module a missing name is an error; the growing
        variant registers it instead.
        """
        have = self.degrees.get(name)
        assert have is not None, "unknown basis name %r" % (name,)
        assert have == degree, "degree clash at %r" % (name,)
        return name

    def basis_of_degree(self, d):
        return [n for n in self.names if self.degrees[n] == d]

    def zero(self, degree=0):
        return Element(self, {}, degree)

    def basis_element(self, name, coeff=1):
        return Element(self, {name: self.ring.normalize(coeff)}, self.degrees[name])

    def element(self, terms, degree=None):
        """Build an element from {name: coeff}; degree inferred when omitted."""
        clean = {}
        for name, c in terms.items():
            c = self.ring.normalize(c)
            if c == self.ring.zero:
                continue
            assert name in self.degrees, "unknown basis name %r" % (name,)
            if degree is None:
                degree = self.degrees[name]
            assert self.degrees[name] == degree, "inhomogeneous element"
            clean[name] = c
        return Element(self, clean, 0 if degree is None else degree)

    def random_element(self, degree, rng, density=0.7):
        names = self.basis_of_degree(degree)
        terms = {}
        for n in names:
            if rng.random() < density:
                terms[n] = self.ring.random(rng)
        return self.element(terms, degree)

    def __repr__(self):
        return "GradedModule(%d basis elements)" % len(self.names)


class GrowingModule(GradedModule):
    """Graded module whose basis is registered on demand.

    Starts from a seed basis (usually empty) and admits new names
    through ensure.  Everything else behaves like the fixed module, so
    elements built before a growth step stay valid afterwards.
    """

    def __init__(self, ring, basis=()):
        super().__init__(ring, basis)
        self.names = list(self.names)

    def ensure(self, name, degree):
        have = self.degrees.get(name)
        if have is None:
            self.degrees[name] = degree
            self.names.append(name)
        else:
            assert have == degree, "degree clash at %r" % (name,)
        return name

    def __repr__(self):
        return "GrowingModule(%d basis elements so far)" % len(self.names)


class Element:
    """Homogeneous element: finite map basis name -> scalar, plus a degree."""

    __slots__ = ("module", "terms", "degree")

    def __init__(self, module, terms, degree):
        self.module = module
        self.terms = terms
        self.degree = degree

    @property
    def is_zero(self):
        return not self.terms

    def coeff(self, name):
        return self.terms.get(name, self.module.ring.zero)

    def add(self, other):
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        assert self.module is other.module and self.degree == other.degree
        ring = self.module.ring
        terms = dict(self.terms)
        for name, c in other.terms.items():
            v = ring.add(terms.get(name, ring.zero), c)
            if v == ring.zero:
                terms.pop(name, None)
            else:
                terms[name] = v
        return Element(self.module, terms, self.degree)

    def scale(self, c):
        ring = self.module.ring
        c = ring.normalize(c)
        if c == ring.zero:
            return Element(self.module, {}, self.degree)
        return Element(
            self.module, {n: ring.mul(v, c) for n, v in self.terms.items()}, self.degree
        )

    def neg(self):
        return self.scale(-1)

    def sub(self, other):
        return self.add(other.neg())

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return True
        return (
            self.module is other.module
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.module), self.degree, tuple(sorted(self.terms.items(), key=repr))))

    def items(self):
        return self.terms.items()

    def __repr__(self):
        if self.is_zero:
            return "0[deg %d]" % self.degree
        ring = self.module.ring
        bits = []
        for name in sorted(self.terms, key=repr):
            bits.append("%s*%r" % (ring.fmt(self.terms[name]), name))
        return " + ".join(bits)


def shift(module, n):
    """Shifted module: same names, every degree decreased by n (shift(M,1)=M[1])."""
    return GradedModule(module.ring, [(name, module.degrees[name] - n) for name in module.names])


def koszul_sign(perm, degrees):
    """Sign by which the permutation acts on homogeneous factors.

    perm lists, for each output slot, the index of the input factor placed
    there.  The sign is the product of (-1)^(d_i*d_j) over inverted pairs.
    """
    perm = list(perm)
    assert sorted(perm) == list(range(len(degrees))), "not a permutation"
    parity = 0
    for j in range(len(perm)):
        for i in range(j):
            if perm[i] > perm[j]:
                parity += degrees[perm[i]] * degrees[perm[j]]
    return -1 if parity % 2 else 1


class Complex:
    """Graded module with a degree +1 differential given on the basis."""

    def __init__(self, module, d, check=True):
        self.module = module
        self.d = {}
        for name, el in d.items():
            if el.is_zero:
                continue
            assert el.degree == module.degrees[name] + 1, "differential degree"
            self.d[name] = el
        if check:
            for name in module.names:
                dd = self.apply_d(self.apply_d(module.basis_element(name)))
                assert dd.is_zero, "d^2 != 0 at %r" % (name,)

    @property
    def ring(self):
        return self.module.ring

    def apply_d(self, el):
        out = self.module.zero(el.degree + 1)
        for name, c in el.items():
            if name in self.d:
                out = out.add(self.d[name].scale(c))
        return out

    def __repr__(self):
        return "Complex(%d basis elements)" % len(self.module.names)


def _underlying(obj):
    return obj.module if isinstance(obj, Complex) else obj


class ChainMap:
    """Graded map between complexes, stored as a sparse matrix on the basis."""

    def __init__(self, source, target, degree, matrix):
        self.source = source
        self.target = target
        self.degree = degree
        smod, tmod = _underlying(source), _underlying(target)
        self.matrix = {}
        for name, el in matrix.items():
            if el.is_zero:
                continue
            assert el.degree == smod.degrees[name] + degree, "map degree at %r" % (name,)
            self.matrix[name] = el
        self._smod, self._tmod = smod, tmod

    def __call__(self, el):
        out = self._tmod.zero(el.degree + self.degree)
        for name, c in el.items():
            if name in self.matrix:
                out = out.add(self.matrix[name].scale(c))
        return out

    def is_chain(self):
        """Whether f d_target = (-1)^deg(f) d_source f holds on the basis."""
        assert isinstance(self.source, Complex) and isinstance(self.target, Complex)
        sign = -1 if self.degree % 2 else 1
        for name in self._smod.names:
            x = self._smod.basis_element(name)
            lhs = self.target.apply_d(self(x))
            rhs = self(self.source.apply_d(x)).scale(sign)
            if lhs != rhs:
                return False
        return True

    def compose(self, other):
        """self then other (right-operator order)."""
        assert _underlying(self.target) is _underlying(other.source)
        matrix = {n: other(el) for n, el in self.matrix.items()}
        return ChainMap(self.source, other.target, self.degree + other.degree, matrix)

    def add(self, other):
        assert self.degree == other.degree
        matrix = {}
        for n in set(self.matrix) | set(other.matrix):
            x = self._smod.basis_element(n)
            matrix[n] = self(x).add(other(x))
        return ChainMap(self.source, self.target, self.degree, matrix)

    def scale(self, c):
        return ChainMap(
            self.source, self.target, self.degree,
            {n: el.scale(c) for n, el in self.matrix.items()},
        )

    @staticmethod
    def identity(source):
        mod = _underlying(source)
        return ChainMap(source, source, 0, {n: mod.basis_element(n) for n in mod.names})

    def __repr__(self):
        return "ChainMap(degree %d, %d entries)" % (self.degree, len(self.matrix))


def solve_linear(ring, rows, rhs):
    """Find coefficients c with sum c_i row_i = rhs over a field, else None.

    rows are {column: scalar} maps; rhs likewise.
    """
    assert ring.is_field, "linear solve needs a field"
    cols = set(rhs)
    for r in rows:
        cols.update(r)
    cols = sorted(cols, key=repr)
    colpos = {c: i for i, c in enumerate(cols)}
    # augmented system A^T c = rhs, one dense row per column
    m, n = len(cols), len(rows)
    aug = [[ring.zero] * (n + 1) for _ in range(m)]
    for j, row in enumerate(rows):
        for col, v in row.items():
            aug[colpos[col]][j] = ring.normalize(v)
    for col, v in rhs.items():
        aug[colpos[col]][n] = ring.normalize(v)
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if aug[i][c] != ring.zero:
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = ring.inv(aug[r][c])
        aug[r] = [ring.mul(v, inv) for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != ring.zero:
                f = aug[i][c]
                aug[i] = [ring.sub(aug[i][k], ring.mul(f, aug[r][k])) for k in range(n + 1)]
        pivots.append((r, c))
        r += 1
    for i in range(r, m):
        if aug[i][n] != ring.zero:
            return None
    sol = [ring.zero] * n
    for row_i, c in pivots:
        sol[c] = aug[row_i][n]
    return sol


def in_image(v, f):
    """Preimage of v under the chain map f, or None; exact solve over a field."""
    smod = f._smod
    ring = smod.ring
    assert ring.is_field, "image membership needs a field"
    deg = v.degree - f.degree
    names = smod.basis_of_degree(deg)
    rows = [dict(f(smod.basis_element(n)).items()) for n in names]
    sol = solve_linear(ring, rows, dict(v.items()))
    if sol is None:
        return None
    return smod.element({n: c for n, c in zip(names, sol)}, deg)


def cone(alpha):
    """Mapping cone of a degree-0 chain map: target + shifted source.

    Basis names are tagged 't:' (target copy) and 's:' (source copy, degree
    dropped by one).  The source copy of m maps to (alpha(m), -d(m)).
    """
    assert alpha.degree == 0
    src, tgt = alpha.source, alpha.target
    assert isinstance(src, Complex) and isinstance(tgt, Complex)
    assert alpha.is_chain(), "cone input must be a chain map"
    ring = tgt.ring
    basis = [("t:%s" % n, tgt.module.degrees[n]) for n in tgt.module.names]
    basis += [("s:%s" % n, src.module.degrees[n] - 1) for n in src.module.names]
    mod = GradedModule(ring, basis)

    def embed(el, tag):
        return mod.element(
            {"%s:%s" % (tag, n): c for n, c in el.items()},
            el.degree - (1 if tag == "s" else 0),
        )

    d = {}
    for n in tgt.module.names:
        d["t:%s" % n] = embed(tgt.apply_d(tgt.module.basis_element(n)), "t")
    for n in src.module.names:
        x = src.module.basis_element(n)
        d["s:%s" % n] = embed(alpha(x), "t").add(embed(src.apply_d(x), "s").neg())
    return Complex(mod, d)


def is_contracting_homotopy(cx, h):
    """Whether h (degree -1 matrix map on cx) satisfies hd + dh = 1."""
    for name in cx.module.names:
        x = cx.module.basis_element(name)
        lhs = cx.apply_d(h(x)).add(h(cx.apply_d(x)))
        if lhs != x:
            return False
    return True


def split_semisplit(alpha, beta, phi, H):
    """Chain splitting of a semisplit short exact sequence with contractible kernel.

    alpha: C -> A, beta: A -> B chain maps; phi: A -> C degree-0 splitting with
    alpha phi = 1; H: contracting homotopy of C.  Returns (nu, gamma) with
    nu beta = 1, nu a chain map, and 1_A - beta nu = gamma d + d gamma where
    gamma = phi H alpha.
    """
    C, A, B = alpha.source, alpha.target, beta.target
    ring = _underlying(C).ring
    assert ring.is_field, "splitting construction needs a field"
    assert alpha.is_chain() and beta.is_chain()
    cmod, amod, bmod = _underlying(C), _underlying(A), _underlying(B)
    for n in cmod.names:
        x = cmod.basis_element(n)
        assert phi(alpha(x)) == x, "phi does not split alpha"
        assert beta(alpha(x)).is_zero, "alpha beta != 0"
    assert is_contracting_homotopy(C, H), "H is not a contracting homotopy"

    # psi = (phi H)d = phi H d + d phi H : A -> C, a chain map with alpha psi = 1
    psi_matrix = {}
    for n in amod.names:
        x = amod.basis_element(n)
        psi_matrix[n] = C.apply_d(H(phi(x))).add(H(phi(A.apply_d(x))))
    psi = ChainMap(A, C, 0, psi_matrix)

    # nu: the unique section of beta that psi kills.  Build a degree-0 section
    # sigma through ker(phi), then correct: nu = sigma (1 - psi alpha).
    sigma_matrix = {}
    for n in bmod.names:
        v = bmod.basis_element(n)
        deg = v.degree
        names = [m for m in amod.names if amod.degrees[m] == deg]
        rows = []
        for m in names:
            x = amod.basis_element(m)
            x = x.sub(alpha(phi(x)))  # project into ker(phi)
            rows.append(dict(beta(x).items()))
        sol = solve_linear(ring, rows, dict(v.items()))
        assert sol is not None, "beta is not split surjective"
        acc = amod.zero(deg)
        for m, c in zip(names, sol):
            x = amod.basis_element(m)
            acc = acc.add(x.sub(alpha(phi(x))).scale(c))
        sigma_matrix[n] = acc
    nu_matrix = {}
    for n in bmod.names:
        x = sigma_matrix[n]
        nu_matrix[n] = x.sub(alpha(psi(x)))
    nu = ChainMap(B, A, 0, nu_matrix)

    gamma_matrix = {n: alpha(H(phi(amod.basis_element(n)))) for n in amod.names}
    gamma = ChainMap(A, A, -1, gamma_matrix)

    for n in bmod.names:
        x = bmod.basis_element(n)
        assert beta(nu(x)) == x, "nu beta != 1"
    assert nu.is_chain(), "nu is not a chain map"
    for n in amod.names:
        x = amod.basis_element(n)
        lhs = x.sub(nu(beta(x)))
        rhs = A.apply_d(gamma(x)).add(gamma(A.apply_d(x)))
        assert lhs == rhs, "homotopy identity fails"
    return nu, gamma

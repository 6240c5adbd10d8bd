"""Vector-valued forms F^b_{a1..ap}(t) gamma^a1 ... gamma^ap d_b in coordinates.

Terms are keyed by (gamma word, t-exponents, output index b).  The output
index may live on a different space than the gamma and t variables (the
holomorphy defect of a map V -> W is such a mixed-frame form), which is what
``out_dim`` records.

Endomorphisms J = J_a^b(t) gamma^a d_b are converted to square matrices of
series with ``M[b-1][a-1] = J_a^b``, so that composition of endomorphisms is
the ordinary matrix product.
"""

from fractions import Fraction
from itertools import permutations
from math import factorial

from .formal_series import (
    Series, invert_matrix_series, mat_const, mat_sub,
    matmul, normalize_gamma, partial, substitute,
)


class VectorForm:
    __slots__ = ("dim", "out_dim", "order", "terms")

    def __init__(self, dim, order, terms=None, out_dim=None):
        self.dim = dim
        self.out_dim = dim if out_dim is None else out_dim
        self.order = order
        self.terms = {}
        for (gam, exps, b), c in (terms or {}).items():
            gam, exps = tuple(gam), tuple(exps)
            if list(gam) != sorted(set(gam)) or any(not 1 <= g <= dim for g in gam):
                raise ValueError(f"bad gamma word {gam}")
            if len(exps) != dim or not 1 <= b <= self.out_dim:
                raise ValueError(f"bad monomial {exps} or output index {b}")
            c = Fraction(c)
            if c and sum(exps) <= order:
                self.terms[(gam, exps, b)] = c

    def __repr__(self):
        return f"VectorForm(dim={self.dim}->{self.out_dim}, order={self.order}, {len(self.terms)} terms)"

    def __eq__(self, other):
        if not isinstance(other, VectorForm):
            return NotImplemented
        return (self.dim, self.out_dim, self.order, self.terms) == (
            other.dim, other.out_dim, other.order, other.terms)

    def __hash__(self):
        return hash((self.dim, self.out_dim, self.order, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def arities(self):
        return {len(g) for g, _, _ in self.terms}

    def arity(self):
        """The homogeneous arity; raises on mixed arities.  Zero forms have arity None."""
        ar = self.arities()
        if len(ar) > 1:
            raise ValueError(f"form has inhomogeneous arity {sorted(ar)}")
        return next(iter(ar), None)

    def truncate(self, order):
        return VectorForm(self.dim, min(order, self.order), self.terms, self.out_dim)

    def _like(self, terms, order):
        return VectorForm(self.dim, order, terms, self.out_dim)

    def __add__(self, other):
        if (self.dim, self.out_dim) != (other.dim, other.out_dim):
            raise ValueError("dimension mismatch")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return self._like(terms, min(self.order, other.order))

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._like({k: c * v for k, v in self.terms.items()}, self.order)

    def component(self, gamma, b):
        """The coefficient series of gamma^word d_b (gamma-free)."""
        gamma = tuple(gamma)
        return Series(self.dim, self.order,
                      {(e, ()): c for (g, e, bb), c in self.terms.items() if g == gamma and bb == b})

    def coeff(self, gamma, exps, b):
        return self.terms.get((tuple(gamma), tuple(exps), b), Fraction(0))

    @classmethod
    def from_components(cls, dim, order, components, out_dim=None):
        """Build from {(gamma word, b): Series}; words need not be sorted."""
        terms = {}
        for (gam, b), s in components.items():
            sign, word = normalize_gamma(gam)
            if not sign:
                continue
            for (e, g), c in s.terms.items():
                if g:
                    raise ValueError("component series must be gamma-free")
                key = (word, e, b)
                terms[key] = terms.get(key, 0) + sign * c
            order = min(order, s.order)
        return cls(dim, order, terms, out_dim)

    @classmethod
    def from_matrix(cls, matrix, dim, order=None, out_dim=None):
        """Arity-1 form with gamma^a d_b coefficient matrix[b-1][a-1]."""
        if order is None:
            order = min((x.order for row in matrix for x in row), default=0)
        comps = {((a + 1,), b + 1): x for b, row in enumerate(matrix) for a, x in enumerate(row)}
        out_dim = len(matrix) if out_dim is None else out_dim
        return cls.from_components(dim, order, comps, out_dim)

    def to_matrix(self):
        if self.arity() not in (1, None):
            raise ValueError("matrix form needs arity 1")
        return [[self.component((a,), b) for a in range(1, self.dim + 1)]
                for b in range(1, self.out_dim + 1)]

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for (gam, exps, b), c in sorted(self.terms.items()):
            mono = [f"t{i + 1}^{e}" if e > 1 else f"t{i + 1}" for i, e in enumerate(exps) if e]
            mono += [f"g{g}" for g in gam]
            parts.append(f"{c}*" + "*".join(mono + [f"d{b}"]))
        return " + ".join(parts)


class Endomorphism(VectorForm):
    """Arity-1 vector form J = J_a^b(t) gamma^a d_b on a single space."""

    __slots__ = ()

    def __init__(self, dim, order, terms=None):
        super().__init__(dim, order, terms)
        if any(len(g) != 1 for g, _, _ in self.terms):
            raise ValueError("an endomorphism has arity exactly 1")

    @classmethod
    def of(cls, form):
        if form.dim != form.out_dim:
            raise ValueError("not a square form")
        return cls(form.dim, form.order, form.terms)

    def _like(self, terms, order):
        return Endomorphism(self.dim, order, terms)

    def truncate(self, order):
        return Endomorphism(self.dim, min(order, self.order), self.terms)

    @classmethod
    def from_matrix(cls, matrix, dim=None, order=None, out_dim=None):
        dim = len(matrix) if dim is None else dim
        return cls.of(VectorForm.from_matrix(matrix, dim, order))

    @classmethod
    def constant(cls, matrix, order=0):
        n = len(matrix)
        return cls.from_matrix(mat_const(matrix, n, order), n, order)

    @classmethod
    def identity(cls, dim, order=0):
        return cls.constant([[int(i == j) for j in range(dim)] for i in range(dim)], order)

    @classmethod
    def standard(cls, dim, order=0):
        """Block rotation: J^(2i-1)_(2i) = -1, J^(2i)_(2i-1) = 1."""
        if dim % 2:
            raise ValueError("the standard structure needs even dimension")
        return cls.constant(standard_matrix(dim), order)


def standard_matrix(dim):
    mat = [[0] * dim for _ in range(dim)]
    for i in range(0, dim, 2):
        mat[i][i + 1] = -1
        mat[i + 1][i] = 1
    return mat


def compose_endos(j1, j2):
    """j1 after j2: (J J')^b_a' = J_a^b J'^a_a'."""
    if j1.dim != j2.dim:
        raise ValueError("dimension mismatch")
    return Endomorphism.from_matrix(matmul(j1.to_matrix(), j2.to_matrix()), j1.dim,
                                    min(j1.order, j2.order))


def is_almost_complex(j):
    """(J^2 + Id == 0, defect J^2 + Id)."""
    defect = compose_endos(j, j) + Endomorphism.identity(j.dim, j.order)
    return defect.is_zero(), defect


# Froehlicher-Nijenhuis bracket, general coordinate formula


def _antisymmetric_tensor(form, p):
    """{(a1..ap): {b: Series}} with F^b_{a1..ap} = sgn * c / p! on distinct tuples."""
    by_word = {}
    for (gam, exps, b), c in form.terms.items():
        by_word.setdefault(gam, {}).setdefault(b, {})[(exps, ())] = c
    scale = Fraction(1, factorial(p))
    tensor = {}
    for word, comps in by_word.items():
        for perm in permutations(range(p)):
            tup = tuple(word[i] for i in perm)
            sign, _ = normalize_gamma(tup)
            tensor[tup] = {b: Series(form.dim, form.order, t).scale(sign * scale)
                           for b, t in comps.items()}
    return tensor


def fn_bracket(f, g):
    """[F, G] from the four-term coordinate formula, gamma words normalized."""
    if f.dim != g.dim or f.dim != f.out_dim or g.dim != g.out_dim:
        raise ValueError("bracket needs forms on one common space")
    p, q = f.arity(), g.arity()
    m = f.dim
    order = min(f.order, g.order) - 1
    if p is None or q is None:
        return VectorForm(m, order)
    ft, gt = _antisymmetric_tensor(f, p), _antisymmetric_tensor(g, q)
    dft = {a: {b: {c: partial(s, c) for c in range(1, m + 1)} for b, s in comps.items()}
           for a, comps in ft.items()}
    dgt = {a: {b: {c: partial(s, c) for c in range(1, m + 1)} for b, s in comps.items()}
           for a, comps in gt.items()}
    empty = {}
    acc = {}

    def add(word, d, s):
        key = (word, d)
        acc[key] = s if key not in acc else acc[key] + s

    # words whose own coefficient vanishes still receive the last two terms
    for A in permutations(range(1, m + 1), p):
        fa = ft.get(A, empty)
        for B in permutations(range(1, m + 1), q):
            gb = gt.get(B, empty)
            if set(A) & set(B):
                continue
            word = A + B
            # F^b_A d_b G^d_B
            for b, fs in fa.items():
                for d, dg in dgt.get(B, empty).items():
                    add(word, d, fs * dg[b])
            # - G^b_B d_b F^d_A
            for b, gs in gb.items():
                for d, df in dft.get(A, empty).items():
                    add(word, d, -(gs * df[b]))
            # - p F^d_{b A[1:]} d_{A[0]} G^b_B
            if p:
                for b in range(1, m + 1):
                    fcomp = ft.get((b,) + A[1:], empty)
                    dgb = dgt.get(B, empty)
                    for d, fs in fcomp.items():
                        if b in dgb:
                            add(word, d, (fs * dgb[b][A[0]]).scale(-p))
            # + q G^d_{b B[1:]} d_{B[0]} F^b_A
            if q:
                for b in range(1, m + 1):
                    gcomp = gt.get((b,) + B[1:], empty)
                    dfa = dft.get(A, empty)
                    for d, gs in gcomp.items():
                        if b in dfa:
                            add(word, d, (gs * dfa[b][B[0]]).scale(q))
    return VectorForm.from_components(m, order, acc)


def nijenhuis_torsion(j):
    """[J, J] from the specialized endomorphism formula, on the matrix form."""
    m = j.dim
    mat = j.to_matrix()
    dmat = [[[partial(x, c) for x in row] for row in mat] for c in range(1, m + 1)]
    order = j.order - 1
    comps = {}
    for a1 in range(m):
        for a2 in range(m):
            if a1 == a2:
                continue
            for d in range(m):
                s = Series.zero(m, order)
                for b in range(m):
                    s = (s + mat[b][a1] * dmat[b][d][a2] - mat[b][a2] * dmat[b][d][a1]
                         - mat[d][b] * dmat[a1][b][a2] + mat[d][b] * dmat[a2][b][a1])
                comps[((a1 + 1, a2 + 1), d + 1)] = s
    return VectorForm.from_components(m, order, comps)


# maps between formal manifolds


def _substitute_matrix(matrix, phi):
    return [[substitute(x, phi) for x in row] for row in matrix]


def pushforward(j, phi):
    """(d phi)^-1 . J(phi) . d phi, certified to order min(N_J, N_phi - 1)."""
    if phi.source_dim != phi.target_dim or phi.target_dim != j.dim:
        raise ValueError("pushforward needs a diffeomorphism of the structure's space")
    d = phi.jacobian()
    d_inv = invert_matrix_series(d)
    j_phi = _substitute_matrix(j.to_matrix(), phi)
    order = min(j.order, phi.order - 1)
    return Endomorphism.from_matrix(matmul(matmul(d_inv, j_phi), d), j.dim, order)


def holomorphy_defect(f, j, j_target):
    """d_b F^d J_a^b - J'^d_b(F) d_a F^b as a form with gamma on the source and
    d on the target."""
    if f.source_dim != j.dim or f.target_dim != j_target.dim:
        raise ValueError("dimension mismatch between map and structures")
    d = f.jacobian()
    lhs = matmul(d, j.to_matrix())
    rhs = matmul(_substitute_matrix(j_target.to_matrix(), f), d)
    order = min(f.order - 1, j.order, j_target.order)
    return VectorForm.from_matrix(mat_sub(lhs, rhs), f.source_dim, order, f.target_dim)


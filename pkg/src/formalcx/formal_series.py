"""Truncated power series in commuting t^a and anticommuting gamma^a.

A monomial is a pair (t-exponent tuple of length m, strictly increasing
gamma word).  Coefficients are Fractions; zero coefficients are never stored.
Every series carries its truncation order N, the largest t-degree kept.
"""

from fractions import Fraction
from itertools import product


def merge_gamma(left, right):
    """Sign and merged word of gamma^left * gamma^right, or (0, None)."""
    if set(left) & set(right):
        return 0, None
    swaps = sum(1 for i in left for j in right if i > j)
    return (-1 if swaps % 2 else 1), tuple(sorted(left + right))


def normalize_gamma(word):
    """Sort an arbitrary gamma word, returning (sign, sorted word) or (0, None)."""
    word = tuple(word)
    if len(set(word)) != len(word):
        return 0, None
    swaps = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
    return (-1 if swaps % 2 else 1), tuple(sorted(word))


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Series:
    __slots__ = ("dim", "order", "terms")

    def __init__(self, dim, order, terms=None):
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        self.dim = dim
        self.order = order
        self.terms = {}
        for (exps, gam), c in (terms or {}).items():
            exps, gam = tuple(exps), tuple(gam)
            if len(exps) != dim:
                raise ValueError(f"exponent tuple {exps} does not match dimension {dim}")
            if any(g < 1 or g > dim for g in gam) or list(gam) != sorted(set(gam)):
                raise ValueError(f"gamma word {gam} is not strictly increasing in 1..{dim}")
            c = Fraction(c)
            if c and sum(exps) <= order:
                self.terms[(exps, gam)] = c

    # constructors

    @classmethod
    def zero(cls, dim, order):
        return cls(dim, order)

    @classmethod
    def const(cls, c, dim, order):
        return cls(dim, order, {((0,) * dim, ()): c})

    @classmethod
    def t(cls, i, dim, order, power=1):
        exps = [0] * dim
        exps[i - 1] = power
        return cls(dim, order, {(tuple(exps), ()): 1})

    @classmethod
    def gamma(cls, i, dim, order):
        return cls(dim, order, {((0,) * dim, (i,)): 1})

    @classmethod
    def monomial(cls, exps, gamma=(), coeff=1, order=None):
        exps = tuple(exps)
        sign, word = normalize_gamma(gamma)
        order = sum(exps) if order is None else order
        if not sign:
            return cls(len(exps), order)
        return cls(len(exps), order, {(exps, word): sign * Fraction(coeff)})

    # basic protocol

    def _raw(self, terms, order):
        out = Series.__new__(Series)
        out.dim, out.order = self.dim, order
        out.terms = {k: v for k, v in terms.items() if v and sum(k[0]) <= order}
        return out

    def _check(self, other):
        if not isinstance(other, Series):
            raise TypeError(f"expected Series, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __repr__(self):
        return f"Series(dim={self.dim}, order={self.order}, {self.render()})"

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for (exps, gam), c in sorted(self.terms.items()):
            mono = [f"t{i + 1}^{e}" if e > 1 else f"t{i + 1}" for i, e in enumerate(exps) if e]
            mono += [f"g{g}" for g in gam]
            parts.append(f"{c}" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.dim, self.order, self.terms) == (other.dim, other.order, other.terms)

    def __hash__(self):
        return hash((self.dim, self.order, frozenset(self.terms.items())))

    def equal_mod(self, other, order):
        """Equality of all coefficients of t-degree <= order."""
        return self.truncate(order).terms == other.truncate(order).terms

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, exps, gamma=()):
        return self.terms.get((tuple(exps), tuple(gamma)), Fraction(0))

    def constant_term(self):
        return self.coeff((0,) * self.dim)

    def is_gamma_free(self):
        return all(not g for _, g in self.terms)

    def gamma_degrees(self):
        return {len(g) for _, g in self.terms}

    def truncate(self, order):
        return self._raw(self.terms, min(order, self.order))

    def with_order(self, order):
        if order > self.order:
            raise ValueError("cannot raise the truncation order of a series")
        return self.truncate(order)

    # linear structure

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.const(other, self.dim, self.order)
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return self._raw(terms, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return self._raw({k: -v for k, v in self.terms.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        return self._raw({k: c * v for k, v in self.terms.items()}, self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def partial(self, i):
        return partial(self, i)


def mul(a, b):
    """Graded product; gamma words merge with the Koszul sign."""
    a._check(b)
    order = min(a.order, b.order)
    terms = {}
    for (ea, ga), ca in a.terms.items():
        da = sum(ea)
        for (eb, gb), cb in b.terms.items():
            if da + sum(eb) > order:
                continue
            sign, word = merge_gamma(ga, gb)
            if not sign:
                continue
            key = (_add_exps(ea, eb), word)
            terms[key] = terms.get(key, 0) + sign * ca * cb
    return a._raw(terms, order)


def partial(a, i):
    """Formal derivative in t^i.  The result is certified one order lower."""
    if not 1 <= i <= a.dim:
        raise ValueError(f"direction {i} outside 1..{a.dim}")
    terms = {}
    for (exps, gam), c in a.terms.items():
        e = exps[i - 1]
        if e:
            new = exps[:i - 1] + (e - 1,) + exps[i:]
            terms[(new, gam)] = terms.get((new, gam), 0) + e * c
    return a._raw(terms, a.order - 1)


class FormalMap:
    """A map t -> (F^1(t), ..., F^n(t)) with no constant term."""

    __slots__ = ("source_dim", "target_dim", "order", "components")

    def __init__(self, source_dim, order, components):
        components = tuple(c.truncate(order) for c in components)
        for c in components:
            if c.dim != source_dim:
                raise ValueError("component dimension does not match source dimension")
            if not c.is_gamma_free():
                raise ValueError("formal map components must be gamma-free")
            if c.constant_term():
                raise ValueError("formal map components must vanish at t = 0")
            if c.order < order:
                raise ValueError("component truncated below the map's order")
        self.source_dim = source_dim
        self.target_dim = len(components)
        self.order = order
        self.components = components

    def __repr__(self):
        comps = "; ".join(c.render() for c in self.components)
        return f"FormalMap({self.source_dim}->{self.target_dim}, order={self.order}: {comps})"

    def __eq__(self, other):
        if not isinstance(other, FormalMap):
            return NotImplemented
        return (self.source_dim, self.order, self.components) == (
            other.source_dim, other.order, other.components)

    def __hash__(self):
        return hash((self.source_dim, self.order, self.components))

    @classmethod
    def identity(cls, dim, order):
        return cls(dim, order, [Series.t(i, dim, order) for i in range(1, dim + 1)])

    @classmethod
    def linear(cls, matrix, order):
        """Linear map t -> A t, with matrix[b][a] the coefficient of t^a in F^b."""
        rows = [list(r) for r in matrix]
        dim = len(rows[0]) if rows else 0
        comps = []
        for row in rows:
            s = Series.zero(dim, order)
            for a, c in enumerate(row, 1):
                if c:
                    s = s + Series.t(a, dim, order).scale(c)
            comps.append(s)
        return cls(dim, order, comps)

    def linear_part(self):
        return [[c.coeff(tuple(int(k == a) for k in range(self.source_dim)))
                 for a in range(self.source_dim)] for c in self.components]

    def jacobian(self):
        """Matrix D with D[b][a] = d_a F^b, certified to order N-1."""
        return [[partial(c, a) for a in range(1, self.source_dim + 1)] for c in self.components]

    def truncate(self, order):
        return FormalMap(self.source_dim, min(order, self.order),
                         [c.truncate(order) for c in self.components])

    def after(self, inner):
        """self o inner."""
        return compose(self, inner)


def _powers(series, top, order):
    out = [Series.const(1, series.dim, order)]
    for _ in range(top):
        out.append(mul(out[-1], series))
    return out


def substitute(a, f, coefficient_only=False):
    """Replace t^b in ``a`` by f^b(t).  Gamma letters are kept untouched only
    when ``coefficient_only`` is set."""
    if a.dim != f.target_dim:
        raise ValueError(f"series has {a.dim} variables but map has {f.target_dim} components")
    if not a.is_gamma_free() and not coefficient_only:
        raise ValueError("series contains gamma variables; pass coefficient_only=True")
    if not a.is_gamma_free() and f.source_dim < max(g for _, w in a.terms for g in w):
        raise ValueError("gamma letters do not fit the source dimension")
    order = min(a.order, f.order)
    m = f.source_dim
    top = [0] * a.dim
    for exps, _ in a.terms:
        top = [max(x, y) for x, y in zip(top, exps)]
    powers = [_powers(c.truncate(order), top[b], order) for b, c in enumerate(f.components)]
    total = Series.zero(m, order)
    for (exps, gam), c in a.terms.items():
        if sum(exps) > order:
            continue
        term = Series.monomial((0,) * m, gam, c, order)
        for b, e in enumerate(exps):
            if e:
                term = mul(term, powers[b][e])
        total = total + term
    return total


def compose(outer, inner):
    if outer.source_dim != inner.target_dim:
        raise ValueError("maps are not composable")
    order = min(outer.order, inner.order)
    return FormalMap(inner.source_dim, order,
                     [substitute(c, inner).truncate(order) for c in outer.components])


# matrices over the rationals and over series


def frac_matrix_inverse(matrix):
    """Gauss-Jordan inverse over Fractions."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def frac_matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def mat_identity(n, dim, order):
    return [[Series.const(int(i == j), dim, order) for j in range(n)] for i in range(n)]


def mat_const(matrix, dim, order):
    return [[Series.const(x, dim, order) for x in row] for row in matrix]


def matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                if not a[i][k].terms or not b[k][j].terms:
                    term = Series.zero(a[i][k].dim, min(a[i][k].order, b[k][j].order))
                else:
                    term = mul(a[i][k], b[k][j])
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_order(m):
    return min(x.order for row in m for x in row)


def invert_matrix_series(m):
    """Inverse of a square matrix of gamma-free series with invertible constant
    term, via M = M0 (I - R) and (I - R)^-1 = I + R + R^2 + ..."""
    n = len(m)
    if n == 0:
        return []
    dim, order = m[0][0].dim, mat_order(m)
    m0 = [[x.constant_term() for x in row] for row in m]
    m0_inv = mat_const(frac_matrix_inverse(m0), dim, order)
    r = mat_sub(mat_identity(n, dim, order), matmul(m0_inv, m))
    total = mat_identity(n, dim, order)
    power = total
    for _ in range(order):
        power = matmul(power, r)
        total = mat_add(total, power)
    return matmul(total, m0_inv)


def invert_diffeo(f):
    """Compositional inverse, order by order: g <- g - A^-1 (f(g) - t)."""
    if f.source_dim != f.target_dim:
        raise ValueError("only maps between equal dimensions can be inverted")
    m, order = f.source_dim, f.order
    a_inv = frac_matrix_inverse(f.linear_part())
    g = FormalMap.linear(a_inv, order)
    ident = FormalMap.identity(m, order)
    for _ in range(order):
        err = [x - y for x, y in zip(compose(f, g).components, ident.components)]
        if all(e.is_zero() for e in err):
            break
        corr = [sum((e.scale(a_inv[b][c]) for c, e in enumerate(err)), Series.zero(m, order))
                for b in range(m)]
        g = FormalMap(m, order, [x - y for x, y in zip(g.components, corr)])
    return g


def all_exponents(dim, max_degree):
    """Exponent tuples of total degree <= max_degree, graded then lexicographic."""
    out = []
    for deg in range(max_degree + 1):
        out.extend(e for e in product(range(deg + 1), repeat=dim) if sum(e) == deg)
    return out

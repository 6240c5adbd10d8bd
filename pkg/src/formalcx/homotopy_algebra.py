"""Structure equations of Cx-infinity algebras and their infinity-morphisms on a
degree-0 space, evaluated on symmetric coefficient tensors.

A structure is a family of maps j_{n+1}: V^(sym n) (x) V -> V with coefficients
j^b_{alpha;a}: alpha is the sorted multiset of the n symmetric inputs, a the
distinguished last input and b the output.  A morphism is a family
f_n: V^(sym n) -> W with coefficients f^b_alpha, n >= 1.

The shuffle sums run over the positions of the inputs, so a multiset such as
{1,1} contributes two labelled inputs that both carry the basis index 1.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb, prod

from .combinatorics import block_shuffles, multiset_counts

DIRECT_BELOW = 4


def _msort(xs):
    return tuple(sorted(xs))


@dataclass
class StructureCoefficients:
    dim: int
    max_weight: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (alpha, a, b), c in self.entries.items():
            alpha = _msort(alpha)
            if len(alpha) > self.max_weight:
                raise ValueError(f"entry {alpha} exceeds max weight {self.max_weight}")
            if any(not 1 <= x <= self.dim for x in alpha + (a, b)):
                raise ValueError(f"index out of range in {(alpha, a, b)}")
            c = Fraction(c)
            if c:
                clean[(alpha, a, b)] = clean.get((alpha, a, b), 0) + c
        self.entries = {k: v for k, v in clean.items() if v}

    def get(self, alpha, a, b):
        return self.entries.get((_msort(alpha), a, b), Fraction(0))

    def column(self, alpha, a):
        """{b: j^b_{alpha;a}} (nonzero entries only)."""
        alpha = _msort(alpha)
        out = {}
        for b in range(1, self.dim + 1):
            c = self.entries.get((alpha, a, b))
            if c:
                out[b] = c
        return out

    def relabel(self, perm):
        """Conjugate by the basis permutation e_i -> e_perm[i-1]."""
        p = lambda i: perm[i - 1]
        return StructureCoefficients(self.dim, self.max_weight, {
            (tuple(p(x) for x in alpha), p(a), p(b)): c
            for (alpha, a, b), c in self.entries.items()})

    @classmethod
    def constant(cls, matrix, max_weight=0):
        """Only j_1, with j^b_a = matrix[b-1][a-1]."""
        n = len(matrix)
        return cls(n, max_weight, {((), a + 1, b + 1): matrix[b][a]
                                   for b in range(n) for a in range(n) if matrix[b][a]})


@dataclass
class MorphismCoefficients:
    source_dim: int
    target_dim: int
    max_weight: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (alpha, b), c in self.entries.items():
            alpha = _msort(alpha)
            if not alpha:
                raise ValueError("morphisms have no constant term")
            if len(alpha) > self.max_weight:
                raise ValueError(f"entry {alpha} exceeds max weight {self.max_weight}")
            if any(not 1 <= x <= self.source_dim for x in alpha) or not 1 <= b <= self.target_dim:
                raise ValueError(f"index out of range in {(alpha, b)}")
            c = Fraction(c)
            if c:
                clean[(alpha, b)] = clean.get((alpha, b), 0) + c
        self.entries = {k: v for k, v in clean.items() if v}

    def get(self, alpha, b):
        return self.entries.get((_msort(alpha), b), Fraction(0))

    def vector(self, alpha):
        alpha = _msort(alpha)
        out = {}
        for b in range(1, self.target_dim + 1):
            c = self.entries.get((alpha, b))
            if c:
                out[b] = c
        return out

    def relabel(self, src_perm, tgt_perm):
        return MorphismCoefficients(self.source_dim, self.target_dim, self.max_weight, {
            (tuple(src_perm[x - 1] for x in alpha), tgt_perm[b - 1]): c
            for (alpha, b), c in self.entries.items()})

    @classmethod
    def linear(cls, matrix, max_weight=1):
        """f_1 with f^b_{a} = matrix[b-1][a-1]."""
        rows, cols = len(matrix), len(matrix[0]) if matrix else 0
        return cls(cols, rows, max_weight, {((a + 1,), b + 1): matrix[b][a]
                                            for b in range(rows) for a in range(cols)
                                            if matrix[b][a]})


@dataclass
class EquationReport:
    equation: str
    certified_weight: int
    defects: list = field(default_factory=list)  # (weight, indices, defect)
    evaluated: int = 0

    @property
    def ok(self):
        return not self.defects

    def as_dict(self):
        return {
            "equation": self.equation,
            "certified_weight": self.certified_weight,
            "evaluated": self.evaluated,
            "ok": self.ok,
            "defects": [{"weight": w, "indices": idx, "defect": d} for w, idx, d in self.defects],
        }


def multisets(dim, size):
    return list(combinations_with_replacement(range(1, dim + 1), size))


def sub_multisets(alpha):
    """(K, L, count) with K + L = alpha and count = number of position subsets giving K."""
    mult = Counter(alpha)
    keys = sorted(mult)
    for ks in product(*[range(mult[x] + 1) for x in keys]):
        inner = tuple(x for x, k in zip(keys, ks) for _ in range(k))
        outer = tuple(x for x, k in zip(keys, ks) for _ in range(mult[x] - k))
        yield inner, outer, prod(comb(mult[x], k) for x, k in zip(keys, ks))


def _apply_last(j, sym, vec):
    """j_{|sym|+1}(e_sym...; vec) as a dict."""
    out = {}
    for c, v in vec.items():
        for b, x in j.column(sym, c).items():
            out[b] = out.get(b, 0) + v * x
    return out


# (eq1) / (eq2): j1^2 = -Id and the higher square equations


def _square_direct(j, alpha, a_last):
    n = len(alpha) + 1
    labels = {i + 1: x for i, x in enumerate(alpha)}
    total = {}
    for p in range(1, n + 1):
        q = n + 1 - p
        for sigma in block_shuffles((p - 1, q)):
            im = sigma.images
            if im[-1] != n:
                continue
            outer = [labels[i] for i in im[:p - 1]]
            inner = [labels[i] for i in im[p - 1:-1]]
            inner_val = {c: x for c, x in j.column(inner, a_last).items()}
            for b, v in _apply_last(j, outer, inner_val).items():
                total[b] = total.get(b, 0) + v
    return total


def _square_aggregated(j, alpha, a_last):
    total = {}
    for inner, outer, count in sub_multisets(alpha):
        for b, v in _apply_last(j, outer, j.column(inner, a_last)).items():
            total[b] = total.get(b, 0) + count * v
    return total


def square_value(j, alpha, a_last, method="auto"):
    """Left side of (eq1)/(eq2) on (e_alpha..., e_a) as {b: value}, without the +Id."""
    if method == "auto":
        method = "direct" if len(alpha) < DIRECT_BELOW else "aggregated"
    fn = _square_direct if method == "direct" else _square_aggregated
    return fn(j, tuple(alpha), a_last)


def check_square(j, method="auto"):
    rep = EquationReport("square", j.max_weight)
    for r in range(j.max_weight + 1):
        for alpha in multisets(j.dim, r):
            for a in range(1, j.dim + 1):
                val = square_value(j, alpha, a, method)
                for b in range(1, j.dim + 1):
                    rep.evaluated += 1
                    d = Fraction(val.get(b, 0)) + (1 if r == 0 and a == b else 0)
                    if d:
                        rep.defects.append((r, {"inputs": list(alpha), "arg": a, "out": b}, d))
    return rep


# (eq3): integrability


def _integrability_direct(j, alpha, x, y, signs=(1, 1)):
    """Both double sums of (eq3); inputs are alpha, then x = a_{n-1}, y = a_n."""
    r = len(alpha)
    labels = {i + 1: v for i, v in enumerate(alpha)}
    total = {}

    def acc(vec, s):
        for d, v in vec.items():
            total[d] = total.get(d, 0) + s * v

    n = r + 2
    # first sum: j_p(..., j_q(..., a_sigma(n)), a_sigma(p-1))
    for p in range(2, n + 1):
        q = n + 1 - p
        for sigma in block_shuffles((p - 2, q - 1)):
            im = sigma.images
            outer = [labels[i] for i in im[:p - 2]]
            inner = [labels[i] for i in im[p - 2:]]
            for out_dist, in_dist, s in ((x, y, 1), (y, x, -1)):
                inner_val = j.column(inner, in_dist)
                vec = {}
                for c, v in inner_val.items():
                    for d, w in j.column(outer + [c], out_dist).items():
                        vec[d] = vec.get(d, 0) + v * w
                acc(vec, s * signs[0])
    # second sum: j_p(..., j_q(..., a_sigma(n-1), a_sigma(n)))
    for p in range(1, n):
        q = n + 1 - p
        for sigma in block_shuffles((p - 1, q - 2)):
            im = sigma.images
            outer = [labels[i] for i in im[:p - 1]]
            inner = [labels[i] for i in im[p - 1:]]
            for sym_dist, last, s in ((x, y, 1), (y, x, -1)):
                inner_val = j.column(inner + [sym_dist], last)
                acc(_apply_last(j, outer, inner_val), s * signs[1])
    return total


def _integrability_aggregated(j, alpha, x, y, signs=(1, 1)):
    total = {}

    def acc(vec, s):
        for d, v in vec.items():
            total[d] = total.get(d, 0) + s * v

    for inner, outer, count in sub_multisets(alpha):
        for out_dist, in_dist, s in ((x, y, 1), (y, x, -1)):
            vec = {}
            for c, v in j.column(inner, in_dist).items():
                for d, w in j.column(outer + (c,), out_dist).items():
                    vec[d] = vec.get(d, 0) + v * w
            acc(vec, count * s * signs[0])
            acc(_apply_last(j, outer, j.column(inner + (x if s == 1 else y,), in_dist)),
                count * s * signs[1])
    return total


def integrability_value(j, alpha, x, y, method="auto", signs=(1, 1)):
    if method == "auto":
        method = "direct" if len(alpha) + 1 < DIRECT_BELOW else "aggregated"
    fn = _integrability_direct if method == "direct" else _integrability_aggregated
    return fn(j, tuple(alpha), x, y, signs)


def check_integrability(j, method="auto", signs=(1, 1)):
    """(eq3) on every multiset of weight <= N-1 and every pair x < y of
    distinguished inputs (the equation is antisymmetric in them).

    ``signs`` scales the two double sums; it exists for mutation controls."""
    rep = EquationReport("integrability", j.max_weight - 1)
    for r in range(j.max_weight):
        for alpha in multisets(j.dim, r):
            for x in range(1, j.dim + 1):
                for y in range(x + 1, j.dim + 1):
                    val = integrability_value(j, alpha, x, y, method, signs)
                    for d in range(1, j.dim + 1):
                        rep.evaluated += 1
                        v = Fraction(val.get(d, 0))
                        if v:
                            rep.defects.append(
                                (r, {"inputs": list(alpha), "a": x, "a'": y, "out": d}, v))
    return rep


def is_cx_infinity(j):
    return check_square(j).ok and check_integrability(j).ok


# infinity-morphisms


def morphism_lhs(f, j_src, alpha, a):
    """sum f_p(j_q(v_sigma(1..q)), v_sigma(q+1..n)) with v_n = e_a inside j_q."""
    n = len(alpha) + 1
    labels = {i + 1: v for i, v in enumerate(alpha)}
    total = {}
    for q in range(1, n + 1):
        p = n + 1 - q
        for sigma in block_shuffles((q - 1, p - 1)):
            im = sigma.images
            inner = [labels[i] for i in im[:q - 1]]
            outer = [labels[i] for i in im[q - 1:]]
            for c, v in j_src.column(inner, a).items():
                for d, w in f.vector(outer + [c]).items():
                    total[d] = total.get(d, 0) + v * w
    return total


def _size_multisets(total):
    """Sorted tuples of positive integers summing to total (total = 0 gives ())."""
    def rec(rest, largest):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, largest), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail
    return [tuple(sorted(m)) for m in rec(total, total)]


def morphism_rhs(f, j_tgt, alpha, a, normalization="partition"):
    """sum j'_p(f_q1(...), ..., f_q(p-1)(...); f_qp(..., v_n)) over set partitions.

    ``partition`` counts every set partition of the symmetric inputs once, i.e.
    weight 1/prod(m_s!) over ordered shuffles, m_s the multiplicities among
    q_1..q_(p-1).  ``multiplicity`` uses N^{q_p}_q / N_q over the full size multiset."""
    n = len(alpha) + 1
    labels = {i + 1: v for i, v in enumerate(alpha)}
    total = {}
    for qp in range(1, n + 1):
        for sizes in _size_multisets(n - qp):
            if normalization == "partition":
                weight = Fraction(1, multiset_counts(sizes)[0])
            else:
                full = sizes + (qp,)
                weight = Fraction(Counter(full)[qp], multiset_counts(full)[1])
            for sigma in block_shuffles(sizes + (qp - 1,)):
                im = sigma.images
                cuts = [sum(sizes[:i]) for i in range(len(sizes) + 1)]
                blocks = [[labels[x] for x in im[cuts[i]:cuts[i + 1]]] for i in range(len(sizes))]
                last = [labels[x] for x in im[cuts[-1]:]]
                ws = [f.vector(b) for b in blocks]
                u = f.vector(last + [a])
                if not u or any(not w for w in ws):
                    continue
                for cs in product(*[sorted(w.items()) for w in ws]):
                    coeff = weight * prod(v for _, v in cs)
                    sym = [c for c, _ in cs]
                    for b, ub in u.items():
                        for d, x in j_tgt.column(sym, b).items():
                            total[d] = total.get(d, 0) + coeff * ub * x
    return total


def check_infinity_morphism(f, j_src, j_tgt, normalization="partition"):
    if f.source_dim != j_src.dim or f.target_dim != j_tgt.dim:
        raise ValueError("dimension mismatch between morphism and structures")
    cert = min(f.max_weight - 1, j_src.max_weight, j_tgt.max_weight)
    rep = EquationReport("infinity_morphism", cert)
    for r in range(cert + 1):
        for alpha in multisets(f.source_dim, r):
            for a in range(1, f.source_dim + 1):
                lhs = morphism_lhs(f, j_src, alpha, a)
                rhs = morphism_rhs(f, j_tgt, alpha, a, normalization)
                for d in range(1, f.target_dim + 1):
                    rep.evaluated += 1
                    v = Fraction(lhs.get(d, 0) - rhs.get(d, 0))
                    if v:
                        rep.defects.append((r, {"inputs": list(alpha), "arg": a, "out": d}, v))
    return rep


def _set_partitions_of(items):
    from .combinatorics import set_partitions
    return set_partitions(items)


def compose_morphisms(f, g, via_geometry=True):
    """g after f, for f: V -> W and g: W -> U."""
    if f.target_dim != g.source_dim:
        raise ValueError("morphisms are not composable")
    order = min(f.max_weight, g.max_weight)
    if via_geometry:
        from .correspondence import from_formal_map, to_formal_map
        from .formal_series import compose
        return from_formal_map(compose(to_formal_map(g).truncate(order),
                                       to_formal_map(f).truncate(order)))
    # coefficient level: sum over set partitions of the input positions
    entries = {}
    for r in range(1, order + 1):
        for alpha in multisets(f.source_dim, r):
            vals = {}
            for part in _set_partitions_of(range(r)):
                ws = [f.vector([alpha[i] for i in blk]) for blk in part]
                if any(not w for w in ws):
                    continue
                for cs in product(*[sorted(w.items()) for w in ws]):
                    coeff = prod(v for _, v in cs)
                    for d, x in g.vector([c for c, _ in cs]).items():
                        vals[d] = vals.get(d, 0) + coeff * x
            for d, v in vals.items():
                entries[(alpha, d)] = v
    return MorphismCoefficients(f.source_dim, g.target_dim, order, entries)

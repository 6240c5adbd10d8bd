"""Dictionary between coefficient tensors and formal geometric data, and the
harness that checks both sides agree.

A structure j corresponds to J = sum j^b_{alpha;a} / alpha! t^alpha gamma^a d_b
and a morphism f to F^b = sum f^b_alpha / alpha! t^alpha, where alpha! is the
product of the factorials of the multiplicities in alpha.
"""

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import multiset_factorial
from .formal_series import (
    FormalMap, Series, all_exponents, frac_matrix_inverse,
    mat_const, mat_identity, mat_sub, matmul,
)
from .homotopy_algebra import (
    MorphismCoefficients, StructureCoefficients,
    check_infinity_morphism, check_integrability, check_square, multisets,
)
from .vector_forms import (
    Endomorphism, holomorphy_defect, is_almost_complex, nijenhuis_torsion,
    pushforward, standard_matrix,
)


@dataclass(frozen=True)
class DictionaryConfig:
    dim: int
    order: int
    target_dim: int = None

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")


def exps_of(alpha, dim):
    c = Counter(alpha)
    return tuple(c.get(i, 0) for i in range(1, dim + 1))


def multiset_of(exps):
    return tuple(i for i, e in enumerate(exps, 1) for _ in range(e))


def to_geometric(j):
    terms = {}
    for (alpha, a, b), c in j.entries.items():
        terms[((a,), exps_of(alpha, j.dim), b)] = c / multiset_factorial(alpha)
    return Endomorphism(j.dim, j.max_weight, terms)


def from_geometric(endo):
    if endo.dim != endo.out_dim:
        raise ValueError("not an endomorphism")
    entries = {}
    for (gam, exps, b), c in endo.terms.items():
        if len(gam) != 1:
            raise ValueError("an endomorphism has arity exactly 1")
        alpha = multiset_of(exps)
        entries[(alpha, gam[0], b)] = c * multiset_factorial(alpha)
    return StructureCoefficients(endo.dim, endo.order, entries)


def to_formal_map(f):
    comps = [{} for _ in range(f.target_dim)]
    for (alpha, b), c in f.entries.items():
        comps[b - 1][(exps_of(alpha, f.source_dim), ())] = c / multiset_factorial(alpha)
    return FormalMap(f.source_dim, f.max_weight,
                     [Series(f.source_dim, f.max_weight, t) for t in comps])


def from_formal_map(fmap):
    entries = {}
    for b, comp in enumerate(fmap.components, 1):
        for (exps, gam), c in comp.terms.items():
            alpha = multiset_of(exps)
            entries[(alpha, b)] = c * multiset_factorial(alpha)
    return MorphismCoefficients(fmap.source_dim, fmap.target_dim, fmap.order, entries)


# geometric side


def geometric_structure_ok(endo):
    """(J^2 = -Id, torsion = 0), each modulo its certified order."""
    ac, _ = is_almost_complex(endo)
    return ac, nijenhuis_torsion(endo).is_zero()


def algebraic_structure_ok(j, signs=(1, 1)):
    return check_square(j).ok, check_integrability(j, signs=signs).ok


# instance generators


def _rand_frac(rng, pool):
    return Fraction(rng.choice(pool))


def random_diffeo(dim, order, rng, pool=(-1, 0, 1), density=0.5):
    """Identity linear part plus sparse nonlinear terms up to ``order``."""
    comps = []
    monos = [e for e in all_exponents(dim, order) if sum(e) >= 2]
    for b in range(1, dim + 1):
        terms = {tuple(int(k == b - 1) for k in range(dim)): 1}
        for e in monos:
            if rng.random() < density:
                c = _rand_frac(rng, pool)
                if c:
                    terms[e] = c
        comps.append(Series(dim, order, {(e, ()): c for e, c in terms.items()}))
    return FormalMap(dim, order, comps)


def standard_endo(dim, order):
    return Endomorphism.constant(standard_matrix(dim), order)


def pushforward_structure(dim, order, rng=None, phi=None):
    """A passing structure of weight ``order`` together with its diffeomorphism."""
    rng = rng or random.Random(0)
    phi = phi or random_diffeo(dim, order + 1, rng)
    j = pushforward(standard_endo(dim, order), phi)
    return from_geometric(j), phi


def conjugated_structure(dim, order, rng, pool=(-1, 0, 1)):
    """J = A J0 A^-1 with A = I + N(t), N strictly lower triangular and vanishing
    at 0.  Almost complex by construction; usually not integrable."""
    m = [[Series.const(int(i == k), dim, order) for k in range(dim)] for i in range(dim)]
    monos = [e for e in all_exponents(dim, order) if sum(e) >= 1]
    for i in range(dim):
        for k in range(i):
            for e in monos:
                if rng.random() < 0.3:
                    m[i][k] = m[i][k] + Series.monomial(e, (), _rand_frac(rng, pool), order)
    # (I + N)^-1 = sum (-N)^k, finite since N is nilpotent
    ident = mat_identity(dim, dim, order)
    neg_n = mat_sub(ident, m)
    inv, power = ident, ident
    for _ in range(dim):
        power = matmul(power, neg_n)
        inv = [[inv[i][k] + power[i][k] for k in range(dim)] for i in range(dim)]
    j0 = mat_const(standard_matrix(dim), dim, order)
    return from_geometric(Endomorphism.from_matrix(matmul(matmul(m, j0), inv), dim, order))


def perturb_structure(j, rng, min_weight=1, delta=1):
    keys = [(alpha, a, b)
            for r in range(min_weight, j.max_weight + 1)
            for alpha in multisets(j.dim, r)
            for a in range(1, j.dim + 1) for b in range(1, j.dim + 1)]
    key = rng.choice(keys)
    entries = dict(j.entries)
    entries[key] = entries.get(key, 0) + delta
    return StructureCoefficients(j.dim, j.max_weight, entries)


def random_structure(dim, max_weight, rng, pool=(-1, 0, 1), max_nonzero=4, j1=None):
    entries = {}
    if j1 is not None:
        for b in range(dim):
            for a in range(dim):
                if j1[b][a]:
                    entries[((), a + 1, b + 1)] = j1[b][a]
    keys = [(alpha, a, b)
            for r in range(1 if j1 is not None else 0, max_weight + 1)
            for alpha in multisets(dim, r)
            for a in range(1, dim + 1) for b in range(1, dim + 1)]
    for key in rng.sample(keys, min(max_nonzero, len(keys))):
        entries[key] = entries.get(key, 0) + _rand_frac(rng, pool)
    return StructureCoefficients(dim, max_weight, entries)


def rotation_matrices(pool=(-1, 0, 1)):
    """All 2x2 matrices over the pool squaring to -Id."""
    out = []
    for a in pool:
        for b in pool:
            for c in pool:
                for d in pool:
                    if (a * a + b * c, a * b + b * d, c * a + d * c, c * b + d * d) == (-1, 0, 0, -1):
                        out.append([[a, b], [c, d]])
    return out


def exhaustive_structures(pool=(-1, 0, 1)):
    """dim 2, weight <= 1, j1 squaring to -Id, weight-1 entries ranging over the pool."""
    keys = [((x,), a, b) for x in (1, 2) for a in (1, 2) for b in (1, 2)]
    for j1 in rotation_matrices(pool):
        base = {((), a + 1, b + 1): j1[b][a] for a in range(2) for b in range(2) if j1[b][a]}

        def rec(i, acc):
            if i == len(keys):
                yield StructureCoefficients(2, 1, acc)
                return
            for v in pool:
                nxt = dict(acc)
                if v:
                    nxt[keys[i]] = v
                yield from rec(i + 1, nxt)
        yield from rec(0, base)


def seeded_structures(count, seed, dim=4, max_weight=2):
    """A deterministic mix of passing and failing instances."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        kind = i % 4
        if kind == 0:
            out.append(("pushforward", pushforward_structure(dim, max_weight, rng)[0]))
        elif kind == 1:
            out.append(("perturbed", perturb_structure(
                pushforward_structure(dim, max_weight, rng)[0], rng)))
        elif kind == 2:
            out.append(("conjugated", conjugated_structure(dim, max_weight, rng)))
        else:
            out.append(("random", random_structure(dim, max_weight, rng,
                                                   j1=standard_matrix(dim))))
    return out


# the harness


@dataclass
class OracleReport:
    name: str
    checked: int = 0
    passing: int = 0
    divergences: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.divergences

    def as_dict(self):
        return {"name": self.name, "checked": self.checked, "passing": self.passing,
                "ok": self.ok, "divergences": self.divergences}


def compare_structure(j, signs=(1, 1)):
    """(algebraic pair, geometric pair) of pass flags for one instance."""
    return algebraic_structure_ok(j, signs), geometric_structure_ok(to_geometric(j))


def oracle_equivalence_structures(instances, signs=(1, 1), name="structures"):
    """Both sides must agree equation by equation: square vs J^2 = -Id and,
    whenever that holds, integrability vs vanishing torsion."""
    rep = OracleReport(name)
    for label, j in instances:
        (sq, integ), (ac, tors) = compare_structure(j, signs)
        rep.checked += 1
        agree = sq == ac and (not sq or integ == tors)
        if agree and sq and integ:
            rep.passing += 1
        if not agree:
            rep.divergences.append({"instance": label, "algebraic": [sq, integ],
                                    "geometric": [ac, tors]})
    return rep


def morphism_sides(f, j_src, j_tgt, normalization="partition"):
    alg = check_infinity_morphism(f, j_src, j_tgt, normalization).ok
    geo = holomorphy_defect(to_formal_map(f), to_geometric(j_src), to_geometric(j_tgt)).is_zero()
    return alg, geo


def oracle_equivalence_morphisms(triples, normalization="partition", name="morphisms"):
    rep = OracleReport(name)
    for label, (f, js, jt) in triples:
        alg, geo = morphism_sides(f, js, jt, normalization)
        rep.checked += 1
        rep.passing += alg and geo
        if alg != geo:
            rep.divergences.append({"instance": label, "algebraic": alg, "geometric": geo})
    return rep


def identity_morphism(dim, order):
    return MorphismCoefficients(dim, dim, order, {((a,), a): 1 for a in range(1, dim + 1)})


def pushforward_triple(dim, order, rng, flat_target=False):
    """(psi, psi^* J, J): holomorphic by construction.  J is itself a pushforward
    of the standard structure unless ``flat_target`` is set."""
    if flat_target:
        j_tgt = standard_endo(dim, order)
    else:
        j_tgt = pushforward(standard_endo(dim, order), random_diffeo(dim, order + 1, rng))
    psi = random_diffeo(dim, order + 1, rng)
    return from_formal_map(psi), from_geometric(pushforward(j_tgt, psi)), from_geometric(j_tgt)


def commuting_linear_triple(dim, rng, order=1):
    """g J0 g^-1 as target, so g is holomorphic from J0."""
    while True:
        g = [[Fraction(rng.choice((-1, 0, 1, 2))) for _ in range(dim)] for _ in range(dim)]
        try:
            g_inv = frac_matrix_inverse(g)
        except (ValueError, ZeroDivisionError):
            continue
        break
    j0 = standard_matrix(dim)
    gj = [[sum(g[b][c] * j0[c][a] for c in range(dim)) for a in range(dim)] for b in range(dim)]
    jt = [[sum(gj[b][c] * g_inv[c][a] for c in range(dim)) for a in range(dim)] for b in range(dim)]
    f = MorphismCoefficients.linear(g, max_weight=order + 1)
    return (f, StructureCoefficients.constant(j0, order), StructureCoefficients.constant(jt, order))


def perturb_morphism(f, rng, delta=1):
    r = rng.randint(1, f.max_weight)
    alpha = rng.choice(multisets(f.source_dim, r))
    b = rng.randint(1, f.target_dim)
    entries = dict(f.entries)
    entries[(alpha, b)] = entries.get((alpha, b), 0) + delta
    return MorphismCoefficients(f.source_dim, f.target_dim, f.max_weight, entries)


def seeded_triples(count, seed, dim=2, order=2):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        f, js, jt = pushforward_triple(dim, order, rng)
        which = i % 3
        if which == 0:
            f = perturb_morphism(f, rng)
        elif which == 1:
            js = perturb_structure(js, rng, min_weight=0)
        else:
            jt = perturb_structure(jt, rng, min_weight=0)
        out.append((f"perturbed-{i}", (f, js, jt)))
    return out


def standard_triples(seed=0, dim=2, order=2):
    rng = random.Random(seed)
    j0 = from_geometric(standard_endo(dim, order))
    return [
        ("identity", (identity_morphism(dim, order + 1), j0, j0)),
        ("commuting-linear", commuting_linear_triple(dim, rng, order)),
        ("pushforward", pushforward_triple(dim, order, rng)),
    ]

"""Symbolic calculus for the cooperads Lie1^, As1^, qCbar^ and qCx^ = Lie1^ o qCbar^.

Trees
-----
Every element of an iterated composite of Lie1^ and qCbar^ is stored as a
*layered tree* on the leaves 1..n.  Reading from the root upwards, each layer
is either

* an ``L`` layer: a set partition refining the previous one (the Lie
  vertices, each grouping the blocks above it; the Lie generators have degree
  0 and trivial symmetric action), or
* a ``C`` layer: one decoration k >= 0 per block of the current partition
  (a copy of i_k on every strand, of degree k).

The partition below the first layer is {1..n}; the top partition is made of
singletons.  A qCx^ generator j_{k1..kn} = (l_n; i_k1, ..., i_kn) is the tree
``L(singletons) C(k)``, and a two-level composite of qCx^ is
``L(Q) C(l') L(singletons) C(k'')``.

Signs
-----
The decorations are graded tensor factors.  A tree's coefficient refers to
the *canonical* factor order: layer by layer from the root, and inside one
layer by the path of block minima from the root (so the decorations above a
vertex stay contiguous, grouped as in (j_{l'}; j_{K1}, ..., j_{Kp})).  Every
operation produces its factors in some natural order and the result is
brought to canonical order with the Koszul sign.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .combinatorics import (
    alpha, block_shuffles, compositions, epsilon_split, koszul_sign, multiset_counts,
    profiles, set_partitions, sgn_restricted, splittings, unshuffles,
)


def _canon_partition(blocks):
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


@dataclass(frozen=True, order=True)
class Tree:
    n: int
    layers: tuple  # ("L", blocks) or ("C", blocks, decorations)

    def partition(self, i):
        """Partition in force after layer i (i = -1 is the root partition)."""
        if i < 0:
            return (tuple(range(1, self.n + 1)),)
        return self.layers[i][1]

    def decorations(self, i):
        kind, blocks, *rest = self.layers[i]
        return dict(zip(blocks, rest[0])) if kind == "C" else {}

    def kinds(self):
        return "".join(layer[0] for layer in self.layers)

    def degree(self):
        return sum(sum(layer[2]) for layer in self.layers if layer[0] == "C")

    def slots(self):
        """C-decorations in canonical order, as (layer, block, degree)."""
        out = []
        for i, layer in enumerate(self.layers):
            if layer[0] == "C":
                out.extend((i, b, k) for b, k in zip(layer[1], layer[2]))
        keys = self._path_keys()
        return sorted(out, key=lambda s: keys[(s[0], s[1])])

    def _path_keys(self):
        owner = []
        for i in range(len(self.layers)):
            blocks = self.partition(i)
            owner.append({x: b[0] for b in blocks for x in b})
        keys = {}
        for i, layer in enumerate(self.layers):
            for b in layer[1]:
                keys[(i, b)] = (i,) + tuple(owner[j][b[0]] for j in range(i + 1))
        return keys

    def render(self):
        if self.kinds() == "LC" and all(len(b) == 1 for b in self.layers[0][1]):
            return f"L{self.n}[{','.join(map(str, self.layers[1][2]))}]"
        if self.kinds() == "LCLC" and all(len(b) == 1 for b in self.layers[2][1]):
            root = self.layers[0][1]
            inner = self.decorations(3)
            branches = [f"L{len(b)}[{','.join(str(inner[(x,)]) for x in b)}]" for b in root]
            perm = [x for b in root for x in b]
            return (f"L{len(root)}[{','.join(map(str, self.layers[1][2]))}]"
                    f" ( {' , '.join(branches)} ) [{','.join(map(str, perm))}]")
        parts = []
        for layer in self.layers:
            blocks = "".join("{" + ",".join(map(str, b)) + "}" for b in layer[1])
            if layer[0] == "L":
                parts.append(f"L{blocks}")
            else:
                parts.append(f"C[{','.join(map(str, layer[2]))}]{blocks}")
        return " | ".join(parts)


def make_tree(n, layers, produced):
    """Canonical tree and Koszul sign for factors listed in ``produced`` order.

    ``layers`` is a list of ("L", blocks) or ("C", {block: decoration});
    ``produced`` lists every C slot as (layer index, block).
    """
    canon = []
    for layer in layers:
        if layer[0] == "L":
            canon.append(("L", _canon_partition(layer[1])))
        else:
            blocks = _canon_partition(layer[1].keys())
            decs = {tuple(sorted(b)): k for b, k in layer[1].items()}
            canon.append(("C", blocks, tuple(decs[b] for b in blocks)))
    tree = Tree(n, tuple(canon))
    keys = tree._path_keys()
    produced = [(i, tuple(sorted(b))) for i, b in produced]
    degrees = [tree.decorations(i)[b] for i, b in produced]
    order = sorted(range(len(produced)), key=lambda j: keys[produced[j]])
    return tree, koszul_sign(degrees, order)


def _as_layers(tree):
    out = []
    for layer in tree.layers:
        out.append(("L", layer[1]) if layer[0] == "L" else ("C", dict(zip(layer[1], layer[2]))))
    return out


class CooperadSum:
    """Formal linear combination of trees (or other hashable, ordered keys)."""

    def __init__(self, terms=None):
        self.terms = {}
        for k, c in (terms or {}).items():
            self.add(k, c)

    def add(self, key, coeff):
        c = self.terms.get(key, 0) + Fraction(coeff)
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def extend(self, other, scale=1):
        for k, c in other.terms.items():
            self.add(k, c * scale)
        return self

    def __eq__(self, other):
        if not isinstance(other, CooperadSum):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __sub__(self, other):
        return CooperadSum(self.terms).extend(other, -1)

    def coefficient(self, key):
        return self.terms.get(key, Fraction(0))

    def __repr__(self):
        return f"CooperadSum({len(self.terms)} terms)"

    def render(self):
        lines = []
        for key, c in self:
            text = key.render() if hasattr(key, "render") else render_key(key)
            sign = "+" if c > 0 else "-"
            lines.append(f"{sign}{abs(c)} {text}")
        return "\n".join(lines)


def render_key(key):
    if isinstance(key, tuple) and len(key) == 2 and isinstance(key[0], Tree):
        tree, marked = key
        return f"{tree.render()} @{{{','.join(map(str, marked))}}}"
    return str(key)


# generators

def generator(profile):
    """The qCx^ generator j_{k1..kn} = (l_n; i_k1, ..., i_kn)."""
    profile = tuple(profile)
    if not profile or any(k < 0 for k in profile):
        raise ValueError(f"invalid profile {profile}")
    n = len(profile)
    singles = tuple((i,) for i in range(1, n + 1))
    return Tree(n, (("L", singles), ("C", singles, profile)))


def lie_generator(n):
    if n < 1:
        raise ValueError("arity must be at least 1")
    return Tree(n, (("L", tuple((i,) for i in range(1, n + 1))),))


def ibar(k):
    if k < 0:
        raise ValueError("degree must be non-negative")
    return Tree(1, (("C", ((1,),), (k,)),))


def profile_of(tree):
    if tree.kinds() != "LC" or any(len(b) != 1 for b in tree.layers[0][1]):
        raise ValueError("not a qCx generator")
    return tree.layers[1][2]


def curvature_theta(profile):
    return Fraction(int(tuple(profile) == (2,)))


# elementary layer operations; each maps a tree to a CooperadSum


def _regroup(tree, groups):
    """Move the listed slot groups to the front (in the given order), keeping
    all other slots after them in canonical order.  Returns the Koszul sign
    and the remaining slots."""
    slots = tree.slots()
    index = {(i, b): pos for pos, (i, b, _) in enumerate(slots)}
    front = [index[s] for g in groups for s in g]
    taken = set(front)
    rest = [pos for pos in range(len(slots)) if pos not in taken]
    sign = koszul_sign([s[2] for s in slots], front + rest)
    return sign, [slots[pos][:2] for pos in rest]


def _shift(slots, at, by):
    return [(i + by if i >= at else i, b) for i, b in slots]


def _vertices(tree, i):
    """Vertices of layer i: parent block -> its input blocks in order."""
    parent = tree.partition(i - 1)
    own = tree.partition(i)
    return [(v, [b for b in own if set(b) <= set(v)]) for v in parent]


def apply_delta_c(tree, i):
    """Decompose every strand decoration of the C layer i: i_k -> sum (i_k'; i_k'')."""
    kind, blocks, decs = tree.layers[i]
    assert kind == "C"
    base = _as_layers(tree)
    rest_sign, rest = _regroup(tree, [])
    out = CooperadSum()
    for split in product(*[range(k + 1) for k in decs]):
        low = {b: a for b, a in zip(blocks, split)}
        high = {b: k - a for b, k, a in zip(blocks, decs, split)}
        layers = base[:i] + [("C", low), ("C", high)] + base[i + 1:]
        produced = []
        for j, b in rest:
            if j == i:
                produced += [(i, b), (i + 1, b)]
            else:
                produced.append((j + 1 if j > i else j, b))
        t, s = make_tree(tree.n, layers, produced)
        out.add(t, s * rest_sign)
    return out


def apply_delta_l(tree, i):
    """Decompose every Lie vertex of the L layer i over all set partitions of its inputs."""
    assert tree.layers[i][0] == "L"
    base = _as_layers(tree)
    choices = []
    for _, inputs in _vertices(tree, i):
        choices.append([[sum((list(inputs[j]) for j in grp), []) for grp in part]
                        for part in set_partitions(range(len(inputs)))])
    produced = _shift([s[:2] for s in tree.slots()], i + 1, 1)
    out = CooperadSum()
    for pick in product(*choices):
        q = [b for grouping in pick for b in grouping]
        layers = base[:i] + [("L", q), ("L", tree.layers[i][1])] + base[i + 1:]
        t, s = make_tree(tree.n, layers, produced)
        out.add(t, s)
    return out


def apply_lambda(tree, i, coefficient=alpha):
    """Lambda^c on the pair (L layer i, C layer i+1): (l_r; i_k1..i_kr) -> alpha(k) (i_sum; l_r)."""
    assert tree.layers[i][0] == "L" and tree.layers[i + 1][0] == "C"
    decs = tree.decorations(i + 1)
    verts = _vertices(tree, i)
    groups = [[(i + 1, b) for b in inputs] for _, inputs in verts]
    sign, rest = _regroup(tree, groups)
    coeff = sign
    low = {}
    for v, inputs in verts:
        ks = [decs[b] for b in inputs]
        coeff *= coefficient(ks)
        low[v] = sum(ks)
    if not coeff:
        return CooperadSum()
    base = _as_layers(tree)
    layers = base[:i] + [("C", low), ("L", tree.layers[i][1])] + base[i + 2:]
    produced = [(i, v) for v, _ in verts] + rest
    t, s = make_tree(tree.n, layers, produced)
    return CooperadSum({t: coeff * s})


def apply_counit_l(tree, i):
    """epsilon on every Lie vertex of layer i: nonzero only if none of them branches."""
    if tree.partition(i) != tree.partition(i - 1):
        return CooperadSum()
    base = _as_layers(tree)
    t, s = make_tree(tree.n, base[:i] + base[i + 1:], _shift([x[:2] for x in tree.slots()], i, -1))
    return CooperadSum({t: s})


def apply_counit_c(tree, i):
    """epsilon on every strand of C layer i: nonzero only if all decorations vanish."""
    if any(tree.layers[i][2]):
        return CooperadSum()
    base = _as_layers(tree)
    slots = [x[:2] for x in tree.slots() if x[0] != i]
    t, s = make_tree(tree.n, base[:i] + base[i + 1:], _shift(slots, i, -1))
    return CooperadSum({t: s})


def on_sum(op, total, *args, **kwargs):
    out = CooperadSum()
    for t, c in total.terms.items():
        out.extend(op(t, *args, **kwargs), c)
    return out


# qCx^ decomposition maps


def _vertex_decompositions(ks, eps=epsilon_split, normalization="factorial"):
    """Closed-form full decomposition of one qCx vertex with input decorations ks.

    Yields (blocks of input positions, l', k'' in sigma order, coefficient) where
    blocks are listed in the enumeration order and each block is increasing.
    """
    n = len(ks)
    for sizes in _multisets_of_sizes(n):
        fact, big_n = multiset_counts(sizes)
        weight = Fraction(1, fact if normalization == "factorial" else big_n)
        for sigma in block_shuffles(sizes):
            im = sigma.images
            cuts = [sum(sizes[:j]) for j in range(len(sizes) + 1)]
            blocks = [im[cuts[j]:cuts[j + 1]] for j in range(len(sizes))]
            ordered = [ks[x - 1] for x in im]
            base = sgn_restricted(sigma, ks)
            for k1, k2 in splittings(ordered):
                coeff = base * eps(k1, k2)
                for j in range(len(sizes)):
                    coeff *= alpha(k1[cuts[j]:cuts[j + 1]])
                if coeff:
                    lp = [sum(k1[cuts[j]:cuts[j + 1]]) for j in range(len(sizes))]
                    yield blocks, lp, k2, coeff * weight


def _multisets_of_sizes(n):
    seen = set()
    for comp in compositions(n):
        key = tuple(sorted(comp))
        if key not in seen:
            seen.add(key)
            yield key


def apply_delta_qcx(tree, i, eps=epsilon_split, normalization="factorial"):
    """Closed-form decomposition of every qCx vertex on layers (i, i+1)."""
    assert tree.layers[i][0] == "L" and tree.layers[i + 1][0] == "C"
    decs = tree.decorations(i + 1)
    verts = _vertices(tree, i)
    groups = [[(i + 1, b) for b in inputs] for _, inputs in verts]
    sign, rest = _regroup(tree, groups)
    base = _as_layers(tree)
    per_vertex = []
    for _, inputs in verts:
        options = []
        for blocks, lp, k2, coeff in _vertex_decompositions([decs[b] for b in inputs], eps,
                                                            normalization):
            qblocks = [tuple(x for pos in blk for x in inputs[pos - 1]) for blk in blocks]
            inner = [inputs[pos - 1] for blk in blocks for pos in blk]
            options.append((qblocks, lp, inner, k2, coeff))
        per_vertex.append(options)
    out = CooperadSum()
    for pick in product(*per_vertex):
        q, low, high, produced, coeff = [], {}, {}, [], Fraction(sign)
        for qblocks, lp, inner, k2, c in pick:
            coeff *= c
            q += qblocks
            low.update(zip(qblocks, lp))
            high.update(zip(inner, k2))
            produced += [(i + 1, b) for b in qblocks] + [(i + 3, b) for b in inner]
        layers = (base[:i] + [("L", q), ("C", low), ("L", tree.layers[i][1]), ("C", high)]
                  + base[i + 2:])
        produced += _shift(rest, i + 2, 2)
        t, s = make_tree(tree.n, layers, produced)
        out.add(t, coeff * s)
    return out


def apply_delta_qcx_composed(tree, i):
    """The same map as (Id o Lambda o Id)(Delta_Lie o Delta_qCbar)."""
    step = apply_delta_c(tree, i + 1)
    step = on_sum(apply_delta_l, step, i)
    return on_sum(apply_lambda, step, i + 1)


def apply_counit_qcx(tree, i):
    return on_sum(apply_counit_c, apply_counit_l(tree, i), i)


def delta_full_qcx(profile, eps=epsilon_split, normalization="factorial"):
    return apply_delta_qcx(generator(profile), 0, eps, normalization)


def lambda_c(profile):
    """Lambda^c(l_n; i_k1..i_kn) as a sum in qCbar^ o Lie1^."""
    return apply_lambda(generator(profile), 0)


def _is_identity_branch(tree, block):
    return len(block) == 1 and tree.decorations(3)[block] == 0


def project_infinitesimal(total):
    """Keep two-level terms with at most one non-identity branch, marking it.

    When every branch is an identity the term contributes once per leaf.
    """
    out = CooperadSum()
    for t, c in total.terms.items():
        root = t.layers[0][1]
        nontrivial = [b for b in root if not _is_identity_branch(t, b)]
        if len(nontrivial) == 1:
            out.add((t, nontrivial[0]), c)
        elif not nontrivial:
            for b in root:
                out.add((t, b), c)
    return out


def delta1_qcx(profile, eps=epsilon_split):
    """Infinitesimal decomposition from the closed formula with sigma in Sh_{q,p-1}.

    Keys are (two-level tree, marked block)."""
    ks = tuple(profile)
    n = len(ks)
    out = CooperadSum()
    for q in range(1, n + 1):
        for sigma in block_shuffles((q, n - q)):
            im = sigma.images
            inner = im[:q]
            ordered = [ks[x - 1] for x in im]
            base = sgn_restricted(sigma, ks)
            for k1, k2 in splittings(ordered[:q]):
                full1 = tuple(k1) + tuple(ordered[q:])
                full2 = tuple(k2) + (0,) * (n - q)
                coeff = base * eps(full1, full2) * alpha(k1)
                if not coeff:
                    continue
                s_block = tuple(sorted(inner))
                rootblocks = [s_block] + [(x,) for x in im[q:]]
                low = {s_block: sum(k1)}
                low.update({(x,): ks[x - 1] for x in im[q:]})
                high = {(x,): 0 for x in range(1, n + 1)}
                high.update({(x,): k for x, k in zip(inner, k2)})
                singles = [(x,) for x in range(1, n + 1)]
                layers = [("L", rootblocks), ("C", low), ("L", singles), ("C", high)]
                # factor order of (j_{l', k_sigma(q+1)..} o_1 j_{k''_sigma(1..q)})^(sigma^-1)
                produced = [(1, b) for b in rootblocks] + [(3, (x,)) for x in inner]
                produced += [(3, (x,)) for x in im[q:]]
                t, s = make_tree(n, layers, produced)
                out.add((t, s_block), coeff * s)
    return out


# Lie1^ and qCbar^ on their own


def delta1_lie(n):
    """Sum over (q, p-1)-unshuffles; the inner leaves of a term are the images
    of 1..q under the corresponding shuffle."""
    out = CooperadSum()
    for q in range(1, n + 1):
        for sigma in unshuffles(q, n - q):
            shuffle = sigma.inverse().images
            inner = tuple(sorted(shuffle[:q]))
            rootblocks = [inner] + [(x,) for x in shuffle[q:]]
            t, _ = make_tree(n, [("L", rootblocks), ("L", [(x,) for x in range(1, n + 1)])], [])
            out.add((t, inner), 1)
    return out


def delta_full_lie(n, normalization="factorial"):
    """Sum over multisets of block sizes and shuffles, weighted by 1/q! per
    repeated size (multiplicity: 1/N_q = 1/prod(multiplicities))."""
    out = CooperadSum()
    singles = [(x,) for x in range(1, n + 1)]
    for sizes in _multisets_of_sizes(n):
        fact, big_n = multiset_counts(sizes)
        weight = Fraction(1, fact if normalization == "factorial" else big_n)
        for sigma in block_shuffles(sizes):
            im = sigma.images
            cuts = [sum(sizes[:j]) for j in range(len(sizes) + 1)]
            blocks = [im[cuts[j]:cuts[j + 1]] for j in range(len(sizes))]
            t, _ = make_tree(n, [("L", blocks), ("L", singles)], [])
            out.add(t, weight)
    return out


def delta_qcbar(k):
    return apply_delta_c(ibar(k), 0)


# As1^: planar, degree 0, no signs


@dataclass(frozen=True, order=True)
class PlanarTerm:
    root: int
    branches: tuple = field(default_factory=tuple)

    def render(self):
        inner = ", ".join("Id" if b == 0 else f"M{b}" for b in self.branches)
        return f"M{self.root}({inner})"


def delta1_as(n):
    """sum over l + q + r = n of (mu_{l+r+1}; Id^l, mu_q, Id^r).  Identity branches
    are written as 0 so that (mu_n; Id, ..., Id) with different marked slots stay apart."""
    out = CooperadSum()
    for q in range(1, n + 1):
        for left in range(n - q + 1):
            right = n - q - left
            out.add(PlanarTerm(left + right + 1, (0,) * left + (q,) + (0,) * right), 1)
    return out


def delta_full_as(n):
    out = CooperadSum()
    for comp in compositions(n):
        out.add(PlanarTerm(len(comp), comp), 1)
    return out


def verify_as_axioms(max_arity):
    """Counit and coassociativity of the planar full decomposition."""
    failures = []
    for n in range(1, max_arity + 1):
        full = delta_full_as(n)
        if full.coefficient(PlanarTerm(1, (n,))) != 1 or full.coefficient(PlanarTerm(n, (1,) * n)) != 1:
            failures.append(f"counit fails for M{n}")
        left, right = Counter(), Counter()
        for term, c in full:
            for comp, c2 in delta_full_as(term.root):
                # ((mu; mu_c), mu_branches): group the branches along comp
                groups, pos = [], 0
                for size in comp.branches:
                    groups.append(term.branches[pos:pos + size])
                    pos += size
                left[(comp.branches, tuple(groups))] += c * c2
            for pick in product(*[list(delta_full_as(b)) for b in term.branches]):
                tops = tuple(p[0].root for p in pick)
                groups = tuple(p[0].branches for p in pick)
                coeff = c
                for p in pick:
                    coeff *= p[1]
                right[(tops, groups)] += coeff
        if +left != +right:
            failures.append(f"coassociativity fails for M{n}")
    return failures


# verification harnesses


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def fail(self, message):
        self.failures.append(message)

    def as_dict(self):
        return {"name": self.name, "ok": self.ok, "checked": self.checked,
                "failures": list(self.failures)}


def all_profiles(max_arity, max_k):
    for n in range(1, max_arity + 1):
        yield from profiles(n, max_k)


def _qcbar_as_qcx(k):
    # (j_k; j_k'') with both vertices of arity one
    out = CooperadSum()
    for t, c in delta_qcbar(k):
        low, high = t.layers[0][2][0], t.layers[1][2][0]
        tree, _ = make_tree(1, [("L", [(1,)]), ("C", {(1,): low}), ("L", [(1,)]),
                                ("C", {(1,): high})], [])
        out.add(tree, c)
    return out


def _lie_as_qcx(n):
    out = CooperadSum()
    for t, c in delta_full_lie(n):
        singles = [(x,) for x in range(1, n + 1)]
        q = t.layers[0][1]
        tree, _ = make_tree(n, [("L", q), ("C", {b: 0 for b in q}), ("L", singles),
                                ("C", {b: 0 for b in singles})], [])
        out.add(tree, c)
    return out


def verify_cooperad_axioms(max_arity=4, max_k=3, eps=epsilon_split):
    """Counit, coassociativity and the internal consistency checks of the
    qCx^ decomposition on every generator within bounds."""
    rep = Report("cooperad")
    for ks in all_profiles(max_arity, max_k):
        g = generator(ks)
        unit = CooperadSum({g: 1})
        full = apply_delta_qcx(g, 0, eps)
        rep.checked += 1
        if apply_delta_qcx_composed(g, 0) != full:
            rep.fail(f"closed formula differs from (Id o Lambda o Id)(Delta o Delta) on {g.render()}")
        if on_sum(apply_counit_qcx, full, 0) != unit:
            rep.fail(f"left counit fails on {g.render()}")
        if on_sum(apply_counit_qcx, full, 2) != unit:
            rep.fail(f"right counit fails on {g.render()}")
        outer = on_sum(apply_delta_qcx, full, 0, eps)
        inner = on_sum(apply_delta_qcx, full, 2, eps)
        if outer != inner:
            rep.fail(f"coassociativity fails on {g.render()}")
        if delta1_qcx(ks, eps) != project_infinitesimal(full):
            rep.fail(f"infinitesimal decomposition is not the projection on {g.render()}")
        if len(ks) == 1 and full != _qcbar_as_qcx(ks[0]):
            rep.fail(f"arity-one restriction differs from qCbar on {g.render()}")
        if not any(ks) and full != _lie_as_qcx(len(ks)):
            rep.fail(f"zero-profile restriction differs from Lie on {g.render()}")
        if rep.failures:
            break
    return rep


def verify_distributive_diagrams(max_arity=3, max_k=2, coefficient=alpha):
    """Diagrams (I), (II), (i), (ii) on every (l_n; i_k1..i_kn) within bounds.

    ``coefficient`` replaces the signed shuffle count (mutation controls)."""
    rep = Report("distributive")
    for ks in all_profiles(max_arity, max_k):
        g = generator(ks)
        lam = apply_lambda(g, 0, coefficient)
        rep.checked += 1
        # (I): (Id o Delta_D) Lambda = (Lambda o Id)(Id o Lambda)(Delta_D o Id)
        lhs = on_sum(apply_delta_l, lam, 1)
        rhs = on_sum(apply_lambda, on_sum(apply_lambda, apply_delta_l(g, 0), 1, coefficient), 0,
                     coefficient)
        if lhs != rhs:
            rep.fail(f"diagram (I) fails on {g.render()}")
        # (II): (Delta_C o Id) Lambda = (Id o Lambda)(Lambda o Id)(Id o Delta_C)
        lhs = on_sum(apply_delta_c, lam, 0)
        rhs = on_sum(apply_lambda, on_sum(apply_lambda, apply_delta_c(g, 1), 0, coefficient), 1,
                     coefficient)
        if lhs != rhs:
            rep.fail(f"diagram (II) fails on {g.render()}")
        # (i): epsilon_D o Id = (Id o epsilon_D) Lambda
        if apply_counit_l(g, 0) != on_sum(apply_counit_l, lam, 1):
            rep.fail(f"diagram (i) fails on {g.render()}")
        # (ii): Id o epsilon_C = (epsilon_C o Id) Lambda
        if apply_counit_c(g, 1) != on_sum(apply_counit_c, lam, 0):
            rep.fail(f"diagram (ii) fails on {g.render()}")
    return rep


def alpha_identity_defect(ks):
    """Left minus right side of the identity behind the Lambda^c formula:
    sum over k' + k'' = k with |k'| fixed of eps * alpha(k') * alpha(k'') = alpha(k)."""
    ks = tuple(ks)
    out = {}
    for k1, k2 in splittings(ks):
        out[sum(k1)] = out.get(sum(k1), 0) + epsilon_split(k1, k2) * alpha(k1) * alpha(k2)
    return {tot: v - alpha(ks) for tot, v in out.items() if v != alpha(ks)}


__all__ = [
    "Tree", "CooperadSum", "PlanarTerm", "Report", "generator", "lie_generator", "ibar",
    "profile_of", "curvature_theta", "make_tree", "apply_delta_c", "apply_delta_l",
    "apply_lambda", "apply_counit_l", "apply_counit_c", "apply_counit_qcx", "apply_delta_qcx",
    "apply_delta_qcx_composed", "delta_full_qcx", "delta1_qcx", "lambda_c", "delta1_lie",
    "delta_full_lie", "delta_qcbar", "delta1_as", "delta_full_as", "verify_as_axioms",
    "verify_cooperad_axioms", "verify_distributive_diagrams", "project_infinitesimal",
    "alpha_identity_defect", "on_sum", "all_profiles",
]

"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or ``python3 tests/test_acceptance.py``.
"""

import json
import random
import subprocess
import sys
import time
from itertools import permutations
from pathlib import Path

import pytest

from formalcx.combinatorics import alpha, profiles
from formalcx.cooperad import (
    CooperadSum, apply_counit_qcx, apply_delta_qcx, delta1_as, delta1_lie, delta_full_as,
    generator, on_sum, verify_cooperad_axioms, verify_distributive_diagrams,
)
from formalcx.correspondence import (
    exhaustive_structures, from_formal_map, from_geometric, morphism_sides,
    oracle_equivalence_morphisms, oracle_equivalence_structures, random_diffeo,
    random_structure, seeded_structures, seeded_triples, standard_endo, standard_triples,
    to_formal_map, to_geometric,
)
from formalcx.formal_series import FormalMap, Series, all_exponents
from formalcx.homotopy_algebra import (
    StructureCoefficients, check_integrability, check_square, multisets,
)
from formalcx.vector_forms import (
    Endomorphism, fn_bracket, is_almost_complex, nijenhuis_torsion, pushforward,
)

FIX = Path(__file__).parent / "fixtures"
RESULTS = []


def record(number, title, ok, detail, started):
    line = (f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} "
            f"({detail}; {time.perf_counter() - started:.1f}s)")
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_oracle_equivalence_objects():
    t0 = time.perf_counter()
    exhaustive = [(f"exhaustive-{i}", j) for i, j in enumerate(exhaustive_structures())]
    seeded = seeded_structures(100, seed=2024, dim=4, max_weight=2)
    rep_a = oracle_equivalence_structures(exhaustive)
    rep_b = oracle_equivalence_structures(seeded)
    ok = rep_a.ok and rep_b.ok and len(exhaustive) == 13122 and rep_b.checked >= 100
    record(1, "oracle equivalence on structures", ok,
           f"{rep_a.checked} exhaustive ({rep_a.passing} pass), {rep_b.checked} seeded dim-4 "
           f"({rep_b.passing} pass), {len(rep_a.divergences) + len(rep_b.divergences)} divergences",
           t0)


def test_02_oracle_equivalence_morphisms():
    t0 = time.perf_counter()
    named = standard_triples(seed=3)
    both_pass = all(morphism_sides(*triple) == (True, True) for _, triple in named)
    rep = oracle_equivalence_morphisms(seeded_triples(100, seed=2024))
    ok = both_pass and rep.ok and rep.checked >= 100
    record(2, "oracle equivalence on morphisms", ok,
           f"identity/linear/pushforward pass both sides: {both_pass}; "
           f"{rep.checked} perturbed triples, {len(rep.divergences)} divergences", t0)


def _lin(i, d):
    return tuple(int(k == i) for k in range(d))


def test_03_pushforward_regression():
    t0 = time.perf_counter()
    phi = FormalMap(2, 4, [Series(2, 4, {(_lin(0, 2), ()): 1, ((0, 2), ()): 1}),
                           Series(2, 4, {(_lin(1, 2), ()): 1})])
    j_geo = pushforward(standard_endo(2, 3), phi)
    j = from_geometric(j_geo)
    two_d = (j.max_weight == 3 and check_square(j).ok and check_integrability(j).ok
             and is_almost_complex(j_geo)[0] and nijenhuis_torsion(j_geo).is_zero())
    phi4 = FormalMap(4, 4, [
        Series(4, 4, {(_lin(0, 4), ()): 1, ((0, 2, 0, 0), ()): 1}),
        Series(4, 4, {(_lin(1, 4), ()): 1}),
        Series(4, 4, {(_lin(2, 4), ()): 1, ((0, 0, 0, 2), ()): 1}),
        Series(4, 4, {(_lin(3, 4), ()): 1})])
    j4 = from_geometric(pushforward(standard_endo(4, 3), phi4))
    base_ok = check_square(j4).ok and check_integrability(j4).ok
    survivors, tried = 0, 0
    for r in range(1, 4):
        for alpha_ in multisets(4, r):
            for a in range(1, 5):
                for b in range(1, 5):
                    entries = dict(j4.entries)
                    entries[(alpha_, a, b)] = entries.get((alpha_, a, b), 0) + 1
                    tried += 1
                    survivors += check_integrability(StructureCoefficients(4, 3, entries)).ok
    ok = two_d and base_ok and survivors == 0
    record(3, "pushforward regression", ok,
           f"dim-2 order-3 passes: {two_d}; dim-4 analogue passes: {base_ok}; "
           f"{tried} single +1 perturbations, {survivors} still integrable", t0)


def test_04_cooperad_axioms():
    t0 = time.perf_counter()
    rep = verify_cooperad_axioms(max_arity=3, max_k=2)
    counit = all(
        on_sum(apply_counit_qcx, apply_delta_qcx(generator(ks), 0), i)
        == CooperadSum({generator(ks): 1})
        for n in (1, 2, 3) for ks in profiles(n, 2) for i in (0, 2))
    ok = rep.ok and counit
    record(4, "cooperad axioms (coassociativity, counit)", ok,
           f"{rep.checked} generators, {len(rep.failures)} failures", t0)


def test_05_distributive_law():
    t0 = time.perf_counter()
    rep = verify_distributive_diagrams(max_arity=3, max_k=2)
    record(5, "distributive-law diagrams (I), (II), (i), (ii)", rep.ok,
           f"{rep.checked} generators, {len(rep.failures)} failures", t0)


def _brute_alpha(ks):
    n = sum(ks)
    cuts = [sum(ks[:i]) for i in range(len(ks) + 1)]
    total = 0
    for im in permutations(range(n)):
        if all(list(im[cuts[i]:cuts[i + 1]]) == sorted(im[cuts[i]:cuts[i + 1]])
               for i in range(len(ks))):
            inv = sum(1 for x in range(n) for y in range(x + 1, n) if im[x] > im[y])
            total += -1 if inv % 2 else 1
    return total


def test_06_lambda_coefficients():
    t0 = time.perf_counter()
    checked = mismatches = 0
    for n in range(1, 5):
        for ks in profiles(n, 4):
            checked += 1
            mismatches += alpha(ks) != _brute_alpha(ks)
    zeros = all(alpha((0,) * n) == 1 for n in range(1, 6))
    ok = mismatches == 0 and zeros
    record(6, "signed shuffle coefficients", ok,
           f"{checked} profiles, {mismatches} mismatches, zero profiles give 1: {zeros}", t0)


def test_07_decomposition_counts():
    t0 = time.perf_counter()
    lie = [len(delta1_lie(n)) for n in (2, 3)]
    as1 = [len(delta1_as(n)) for n in (2, 3)]
    # independent enumeration: nonempty leaf subsets, consecutive windows, cut patterns
    brute_lie = [2 ** n - 1 for n in (2, 3)]
    brute_as = [sum(1 for i in range(n) for _ in range(i, n)) for n in (2, 3)]
    full = [len(delta_full_as(n)) for n in range(1, 7)]
    brute_full = [sum(1 for mask in range(2 ** (n - 1))) for n in range(1, 7)]
    ok = (lie == brute_lie == [3, 7] and as1 == brute_as == [3, 6]
          and full == brute_full == [2 ** (n - 1) for n in range(1, 7)])
    record(7, "infinitesimal and full decomposition counts", ok,
           f"Lie {lie}, As {as1}, full As {full}", t0)


def _random_endo(dim, order, rng):
    monos = all_exponents(dim, order)
    terms = {}
    for _ in range(2 * dim):
        terms[((rng.randint(1, dim),), rng.choice(monos), rng.randint(1, dim))] = \
            rng.choice([-2, -1, 1, 2])
    return Endomorphism(dim, order, terms)


def test_08_torsion_double_implementation():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    mismatches = nonzero = 0
    for i in range(120):
        j = _random_endo((2, 4)[i % 2], i % 4, rng)
        a, b = fn_bracket(j, j), nijenhuis_torsion(j)
        mismatches += a != b
        nonzero += not b.is_zero()
    ok = mismatches == 0
    record(8, "torsion: general bracket vs specialized formula", ok,
           f"120 endomorphisms ({nonzero} with nonzero torsion), {mismatches} mismatches", t0)


def _fixture_objects():
    from formalcx.cli import load
    return [load(str(p)) for p in sorted(FIX.glob("*.json"))]


def test_09_dictionary_roundtrips():
    t0 = time.perf_counter()
    failures = 0
    objects = _fixture_objects()
    for obj in objects:
        if isinstance(obj, StructureCoefficients):
            failures += from_geometric(to_geometric(obj)).entries != obj.entries
        elif isinstance(obj, Endomorphism):
            failures += to_geometric(from_geometric(obj)) != obj
        elif isinstance(obj, FormalMap):
            failures += to_formal_map(from_formal_map(obj)) != obj
        else:
            failures += from_formal_map(to_formal_map(obj)).entries != obj.entries
    rng = random.Random(2024)
    for i in range(100):
        j = random_structure(2 + i % 3, i % 4, rng, max_nonzero=8)
        failures += from_geometric(to_geometric(j)).entries != j.entries
        f = from_formal_map(random_diffeo(2 + i % 2, 1 + i % 3, rng))
        failures += from_formal_map(to_formal_map(f)).entries != f.entries
    record(9, "dictionary roundtrips", failures == 0,
           f"{len(objects)} fixtures + 100 seeded pairs, {failures} failures", t0)


CLI_CORPUS = [
    (["check-structure", "standard2.json"], 0),
    (["check-structure", "standard4.json"], 0),
    (["check-structure", "pushforward2.json"], 0),
    (["check-structure", "identity2.json"], 1),
    (["check-structure", "perturbed4d.json"], 1),
    (["check-morphism", "id_map2.json", "standard2_w2.json", "standard2_w2.json"], 0),
    (["check-morphism", "linear_map.json", "linear_source.json", "linear_target.json"], 0),
    (["check-morphism", "pf_map.json", "pf_source.json", "pf_target.json"], 0),
    (["check-morphism", "pf_map_broken.json", "pf_source.json", "pf_target.json"], 1),
    (["expand-cooperad", "--kind", "lie1", "--arity", "2", "--infinitesimal"], 0),
    (["expand-cooperad", "--kind", "lie1", "--arity", "50"], 2),
    (["verify", "--suite", "distributive", "--max-arity", "2", "--max-k", "2"], 0),
    (["verify", "--suite", "distributive", "--max-arity", "2", "--max-k", "2", "--mutate"], 1),
    (["verify", "--suite", "cooperad", "--max-arity", "99"], 2),
    (["check-structure", "no-such-file.json"], 2),
]


def test_10_cli_contract():
    t0 = time.perf_counter()
    wrong, unstable = [], []
    for argv, code in CLI_CORPUS:
        runs = [subprocess.run([sys.executable, "-m", "formalcx", *argv], cwd=FIX,
                               capture_output=True) for _ in range(2)]
        if runs[0].returncode != code or runs[1].returncode != code:
            wrong.append(" ".join(argv))
        if runs[0].stdout != runs[1].stdout:
            unstable.append(" ".join(argv))
        if code != 2:
            json.loads(runs[0].stdout)
    ok = not wrong and not unstable
    record(10, "CLI exit codes and byte-stable reports", ok,
           f"{len(CLI_CORPUS)} invocations x2, wrong codes {wrong}, unstable {unstable}", t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

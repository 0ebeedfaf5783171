"""The ten acceptance criteria, each at its stated tolerance and time budget.

Each test records a ``criterion N: PASS|FAIL`` line that is printed in the
pytest terminal summary (and directly when run as a script).
"""

import itertools
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from galg import codes, linalg
from galg.algebra import AlgebraElement, elements, induced_map, invert, is_unit, random_unit_of_weight, random_weight_w
from galg.errors import NotInvertibleError
from galg.groups import GroupHom, check_hom, cyclic_group, dihedral_group, parse_group_spec, product_group
from galg.matrep import KroneckerDecomposition, abelian_decompose, decomposition_to_matrix, representation_matrix
from galg.mdpc import derive_params, dfr_trial, random_error
from galg.selftest import D4_MATRIX, TANNER_EXPONENTS, Z2xZ4_MATRIX

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = {}

LAW_GROUPS = ["cyclic:15", "product:cyclic:2,cyclic:4", "dihedral:4", "product:cyclic:2,cyclic:3,cyclic:4"]


def report(k, ok, detail=""):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line


def symbolic_golden(group, golden, p=101):
    """Evaluate the printed matrix at a_k = k over a field large enough that entries stay distinct."""
    f = AlgebraElement(group, p, list(range(1, group.order + 1)))
    return representation_matrix(f), linalg.FieldMatrix(np.asarray(golden), p)


def test_criterion_1_printed_matrices():
    start = time.perf_counter()
    M1, golden1 = symbolic_golden(product_group(cyclic_group(2), cyclic_group(4)), Z2xZ4_MATRIX)
    M2, golden2 = symbolic_golden(dihedral_group(4), D4_MATRIX)
    elapsed = time.perf_counter() - start
    report(1, M1 == golden1 and M2 == golden2 and elapsed < 1, f"{elapsed:.3f}s")


def test_criterion_2_printed_decomposition():
    start = time.perf_counter()
    G = product_group(cyclic_group(2), cyclic_group(4))
    p = 101
    a = list(range(1, 9))
    f = AlgebraElement(G, p, a)
    d = abelian_decompose(f)
    # (a_i, a_{4+i})-circulant tensor P_{4,i} for i = 1..4
    expected = {(i,): (a[i - 1], a[i + 3]) for i in range(1, 5)}
    ok = d.factors == (2, 4) and dict(d.blocks) == expected
    ok &= decomposition_to_matrix(d) == linalg.FieldMatrix(np.asarray(Z2xZ4_MATRIX), p)
    elapsed = time.perf_counter() - start
    report(2, ok and elapsed < 1, f"{elapsed:.3f}s")


def test_criterion_3_homomorphism_laws():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    failures = 0
    for spec, p in itertools.product(LAW_GROUPS, (2, 3)):
        G = parse_group_spec(spec)
        n = G.order
        one = AlgebraElement.one(G, p)
        failures += representation_matrix(one) != linalg.identity(n, p)
        for _ in range(1000):
            f = AlgebraElement(G, p, rng.integers(0, p, n))
            g = AlgebraElement(G, p, rng.integers(0, p, n))
            Mf, Mg = representation_matrix(f), representation_matrix(g)
            failures += representation_matrix(f + g) != Mf + Mg
            failures += representation_matrix(f * g) != Mf @ Mg
            # faithfulness: M(f) = 0 only for f = 0, and column 0 of M(f) is f itself
            failures += Mf.is_zero() != f.is_zero()
            failures += not np.array_equal(Mf.data[:, 0], f.coeffs)
    elapsed = time.perf_counter() - start
    report(3, failures == 0 and elapsed < 30, f"failures={failures}, {elapsed:.1f}s")


def test_criterion_4_weight_preservation():
    rng = np.random.default_rng(4)
    failures = 0
    for spec, p in itertools.product(LAW_GROUPS, (2, 3)):
        G = parse_group_spec(spec)
        for _ in range(1000):
            f = AlgebraElement(G, p, rng.integers(0, p, G.order))
            nz = representation_matrix(f).data != 0
            w = f.weight
            failures += not (np.all(nz.sum(axis=0) == w) and np.all(nz.sum(axis=1) == w))
    report(4, failures == 0, f"failures={failures}")


def test_criterion_5_invertibility_exhaustive():
    start = time.perf_counter()
    groups = [cyclic_group(n) for n in range(2, 9)]
    groups += [product_group(cyclic_group(2), cyclic_group(4)), dihedral_group(4)]
    failures = checked = 0
    for G in groups:
        n = G.order
        for f in elements(G, 2):
            checked += 1
            full_rank = linalg.rank(representation_matrix(f)) == n
            unit = is_unit(f)
            failures += unit != full_rank
            if unit:
                failures += f.weight % 2 == 0
                inv = invert(f)
                failures += not ((f * inv).is_one() and (inv * f).is_one())
            else:
                try:
                    invert(f)
                    failures += 1
                except NotInvertibleError as exc:
                    h = exc.witness
                    failures += h is None or h.is_zero() or not (f * h).is_zero()
    elapsed = time.perf_counter() - start
    report(5, failures == 0 and elapsed < 120, f"{checked} elements, failures={failures}, {elapsed:.1f}s")


def test_criterion_6_induced_maps_preserve_units():
    C4, C2 = cyclic_group(4), cyclic_group(2)
    quotient = GroupHom(C4, C2, [k % 2 for k in range(4)])
    inclusion = GroupHom(C2, C4, [0, 2])
    failures = 0
    for psi in (quotient, inclusion):
        failures += not check_hom(psi)
        for f in elements(psi.domain, 2):
            img_unit = is_unit(induced_map(psi, f))
            if is_unit(f):
                failures += not img_unit
            elif psi.is_injective:
                failures += img_unit
    report(6, failures == 0 and inclusion.is_injective and not quotient.is_injective, f"failures={failures}")


def test_criterion_7_tanner_code():
    start = time.perf_counter()
    H = codes.tanner_classic(31, 2, 5)
    b = H.block_size
    shifts = [
        [int(np.flatnonzero(H.block(s, i)[:, 0])[0]) for i in range(5)] for s in range(3)
    ]
    rank = codes.gf2_rank(H)
    ok = shifts == TANNER_EXPONENTS and (H.rows, H.cols) == (93, 155) and b == 31
    ok &= rank == 91 and H.cols - rank == 64
    elapsed = time.perf_counter() - start
    report(7, ok and elapsed < 5, f"rank={rank}, dim={H.cols - rank}, {elapsed:.2f}s")


@pytest.mark.slow
def test_criterion_8_cryptosystem_round_trip():
    start = time.perf_counter()
    params = derive_params("cyclic:1013", threshold_rule="max", max_iters=100)
    assert (params.w, params.t) == (23, 45)
    results = [dfr_trial(params, seed) for seed in range(200)]
    successes = sum(r.success for r in results)
    # a failure must be reported as such, never an exception or a wrong pair (dfr_trial flags those)
    reasons = {r.reason for r in results if not r.success}
    explicit = all(r.success or (r.reason == "decode-failure" and r.e1 is None) for r in results)
    elapsed = time.perf_counter() - start
    ok = successes >= 180 and explicit and elapsed < 300
    report(8, ok, f"{successes}/200 decoded, failure reasons={sorted(reasons)}, {elapsed:.1f}s")


def test_criterion_9_syndrome_identity():
    rng = np.random.default_rng(9)
    failures = 0
    specs = ["cyclic:1013", "cyclic:101", "dihedral:50", "product:cyclic:4,cyclic:25"]
    for k in range(500):
        G = parse_group_spec(specs[k % len(specs)])
        params = derive_params(G.spec)
        h1 = random_unit_of_weight(G, 2, params.w, rng)
        h2 = random_unit_of_weight(G, 2, params.w, rng)
        e1, e2 = random_error(params, rng)
        H = codes.mdpc_parity([h1, h2])
        lhs = codes.syndrome(H, np.concatenate([e1.coeffs, e2.coeffs]))
        failures += not np.array_equal(lhs, (h1 * e1 + h2 * e2).coeffs)
    report(9, failures == 0, f"failures={failures}")


def test_criterion_10_serialization_and_determinism():
    rng = np.random.default_rng(10)
    failures = 0
    for _ in range(100):
        rows, cols = int(rng.integers(1, 30)), int(rng.integers(1, 30))
        dense = rng.integers(0, 2, (rows, cols))
        H = codes.ParityCheck.from_dense(dense)
        failures += codes.alist_import(codes.alist_export(H)) != H
    specs = LAW_GROUPS + ["cyclic:1013"]
    for k in range(100):
        G = parse_group_spec(specs[k % len(specs)])
        p = [2, 3, 5, 65521][k % 4]
        f = random_weight_w(G, p, int(rng.integers(0, G.order + 1)), rng)
        failures += AlgebraElement.from_dict(json.loads(json.dumps(f.to_dict()))) != f
        if G.cyclic_factors is not None:
            d = abelian_decompose(f)
            failures += KroneckerDecomposition.from_dict(json.loads(json.dumps(d.to_dict()))) != d
    argv = [sys.executable, "-m", "galg", "selftest", "--seed", "7"]
    runs = [subprocess.run(argv, capture_output=True, text=True, check=False) for _ in range(2)]
    deterministic = runs[0].stdout == runs[1].stdout and runs[0].returncode == 0 and runs[0].stdout
    report(10, failures == 0 and bool(deterministic), f"failures={failures}, cli-deterministic={bool(deterministic)}")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass

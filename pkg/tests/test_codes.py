import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galg import codes
from galg.algebra import AlgebraElement, random_unit_of_weight
from galg.codes import ParityCheck, alist_export, alist_import, bitflip_decode, mdpc_parity, syndrome, tanner_parity
from galg.errors import DimensionError, InvalidParameterError, NotAUnitError, ParseError, UnsupportedFieldError
from galg.groups import cyclic_group, dihedral_group
from galg.matrep import representation_matrix
from galg.selftest import TANNER_EXPONENTS

C7 = cyclic_group(7)


def test_mdpc_parity_shape_and_weights():
    h1 = AlgebraElement.from_support(C7, 2, [0, 1, 2])
    h2 = AlgebraElement.from_support(C7, 2, [0, 2, 4])
    H = mdpc_parity([h1, h2])
    assert (H.rows, H.cols) == (7, 14)
    assert set(H.col_weights.tolist()) == {3}
    assert set(H.row_weights.tolist()) == {6}
    dense = H.to_dense()
    assert np.array_equal(dense[:, :7], representation_matrix(h1).data)
    assert np.array_equal(dense[:, 7:], representation_matrix(h2).data)


def test_mdpc_parity_rejects_odd_characteristic():
    with pytest.raises(UnsupportedFieldError):
        mdpc_parity([AlgebraElement.one(C7, 3)])


def test_tanner_parity_blocks():
    G = cyclic_group(31)
    a = AlgebraElement.basis(G, 2, 2)
    b = AlgebraElement.basis(G, 2, 5)
    H = tanner_parity(a, b)
    # x^2 has order 31 in F_2[C_31]; every block is a power of x
    assert H.block_size == 31 and H.rows == 31 * 31
    x = AlgebraElement.basis(G, 2, 1)
    H2 = tanner_parity(x, AlgebraElement.one(G), include_zero_exponent=False)
    assert (H2.rows, H2.cols) == (31, 30 * 31)
    assert np.array_equal(H2.block(0, 0), representation_matrix(x).data)


def test_tanner_parity_requires_units_and_nonempty():
    G = cyclic_group(3)
    with pytest.raises(NotAUnitError):
        tanner_parity(AlgebraElement.from_support(G, 2, [0, 1, 2]), AlgebraElement.one(G))
    with pytest.raises(InvalidParameterError):
        tanner_parity(AlgebraElement.one(G), AlgebraElement.one(G), include_zero_exponent=False)


def test_tanner_exponents_table():
    assert codes.tanner_exponents(31, 2, 5) == TANNER_EXPONENTS
    ref = [[pow(2, i, 31) * pow(5, s, 31) % 31 for i in range(5)] for s in range(3)]
    assert ref == TANNER_EXPONENTS
    assert codes.multiplicative_order(2, 31) == 5 and codes.multiplicative_order(5, 31) == 3


def test_tanner_classic_dimensions_and_rank():
    H = codes.tanner_classic(31, 2, 5)
    assert (H.rows, H.cols) == (93, 155)
    assert set(H.col_weights.tolist()) == {3} and set(H.row_weights.tolist()) == {5}
    assert codes.gf2_rank(H) == 91 and codes.code_dimension(H) == 64


def test_tanner_classic_trivial_orders():
    H = codes.tanner_classic(3, 1, 1)
    assert (H.rows, H.cols) == (3, 3)
    # single exponent 1*1 = 1: the block is M(x)
    assert np.array_equal(H.to_dense(), np.roll(np.eye(3, dtype=np.int64), 1, axis=0))
    with pytest.raises(InvalidParameterError):
        codes.tanner_exponents(9, 2, 5)


def test_syndrome_basics():
    H = ParityCheck.from_dense([[1, 1, 0], [0, 1, 1]])
    assert syndrome(H, [0, 0, 0]).tolist() == [0, 0]
    assert syndrome(H, [0, 1, 0]).tolist() == [1, 1]
    assert syndrome(H, [1, 1, 1]).tolist() == [0, 0]
    with pytest.raises(DimensionError):
        syndrome(H, [1, 0])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=6 * 9, max_size=6 * 9), st.lists(st.integers(0, 1), min_size=9, max_size=9))
def test_syndrome_matches_dense_product(entries, e):
    dense = np.array(entries).reshape(6, 9)
    H = ParityCheck.from_dense(dense)
    assert np.array_equal(syndrome(H, e), dense @ np.array(e) % 2)


def test_decoder_zero_syndrome():
    H = mdpc_parity([AlgebraElement.from_support(C7, 2, [0, 1, 2])] * 2)
    res = bitflip_decode(H, np.zeros(7))
    assert res.success and res.iterations == 0 and not res.error_vector.any()


def test_decoder_single_column_one_iteration():
    rng = np.random.default_rng(3)
    G = cyclic_group(101)
    h1, h2 = (random_unit_of_weight(G, 2, 9, rng) for _ in range(2))
    H = mdpc_parity([h1, h2])
    for rule in codes.THRESHOLD_RULES:
        e = np.zeros(202, dtype=np.int64)
        e[57] = 1
        res = bitflip_decode(H, syndrome(H, e), threshold_rule=rule)
        assert res.success and res.iterations == 1 and np.array_equal(res.error_vector, e)
        assert res.syndrome_weight_trace[0] == 9 and res.syndrome_weight_trace[-1] == 0


def test_decoder_recovers_light_errors():
    rng = np.random.default_rng(4)
    G = cyclic_group(211)
    h1, h2 = (random_unit_of_weight(G, 2, 11, rng) for _ in range(2))
    H = mdpc_parity([h1, h2])
    for _ in range(20):
        e = np.zeros(422, dtype=np.int64)
        e[rng.choice(422, 5, replace=False)] = 1
        res = bitflip_decode(H, syndrome(H, e))
        assert res.success and np.array_equal(res.error_vector, e)


def test_decoder_reports_failure_on_iteration_cap():
    H = ParityCheck.from_dense([[1, 1]])
    res = bitflip_decode(H, [1], max_iters=3)
    assert not res.success and res.iterations == 3
    with pytest.raises(InvalidParameterError):
        bitflip_decode(H, [1], threshold_rule="median")
    with pytest.raises(DimensionError):
        bitflip_decode(H, [1, 0])


def test_alist_identity_matrix():
    H = ParityCheck.from_dense(np.eye(2, dtype=np.int64))
    assert alist_export(H) == "2 2\n1 1\n1 1\n1 1\n1\n2\n1\n2\n"


def test_alist_round_trip_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        dense = rng.integers(0, 2, (rng.integers(1, 8), rng.integers(1, 8)))
        dense[0, 0] = 1
        H = ParityCheck.from_dense(dense)
        assert alist_import(alist_export(H)) == H


def test_alist_errors_carry_line_numbers():
    text = alist_export(mdpc_parity([AlgebraElement.from_support(C7, 2, [0, 1, 2])]))
    lines = text.splitlines()
    with pytest.raises(ParseError) as info:
        alist_import("\n".join(lines[:6]))
    assert info.value.line == 7
    bad = lines.copy()
    bad[5] = "1 2 x"
    with pytest.raises(ParseError) as info:
        alist_import("\n".join(bad))
    assert info.value.line == 6


def test_block_meta_records_generators():
    D4 = dihedral_group(4)
    h = AlgebraElement.from_terms(D4, 2, {"1": 1, "y": 1, "x": 1})
    H = mdpc_parity([h])
    assert H.block_meta[(0, 0)] == repr(h)

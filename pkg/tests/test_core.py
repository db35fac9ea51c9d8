import random

import numpy as np
import pytest

from oaparity.core import (
    LatinSquare,
    OAError,
    OrthogonalArray,
    OrthogonalityError,
    Transform,
    apply_transform,
    cyclic_square,
    field_table,
    mols_to_oa,
    oa_to_mols,
    parity_batch,
    permutation_parity,
    rows_agree_in_one_column,
)

from conftest import swap_count_parity, zn_linear_oa, zn_linear_square


def test_parity_identity():
    assert permutation_parity(range(5)) == 0


def test_parity_transposition():
    for n in (2, 3, 6, 11):
        perm = list(range(n))
        perm[0], perm[1] = perm[1], perm[0]
        assert permutation_parity(perm) == 1


def test_parity_three_cycle():
    assert permutation_parity([1, 2, 0, 3, 4]) == 0


def test_parity_is_homomorphism():
    rng = random.Random(101)
    for _ in range(300):
        n = rng.randrange(2, 12)
        p = list(range(n))
        q = list(range(n))
        rng.shuffle(p)
        rng.shuffle(q)
        comp = [p[q[i]] for i in range(n)]
        assert permutation_parity(comp) == permutation_parity(p) ^ permutation_parity(q)


def test_parity_implementations_agree():
    rng = random.Random(77)
    perms = []
    for _ in range(200):
        p = list(range(9))
        rng.shuffle(p)
        perms.append(p)
    batched = parity_batch(np.array(perms))
    for p, b in zip(perms, batched):
        assert permutation_parity(p) == int(b) == swap_count_parity(p)


# ---------------------------------------------------------------------------
# Latin squares


def test_latin_square_rejects_bad_row():
    with pytest.raises(OAError):
        LatinSquare([[0, 0], [1, 1]])


def test_latin_square_rejects_bad_column():
    with pytest.raises(OAError):
        LatinSquare([[0, 1], [0, 1]])


def test_cyclic_square_valid():
    for n in range(2, 9):
        sq = cyclic_square(n)
        assert sq.n == n


def test_symbol_permutation():
    sq = cyclic_square(3)
    # symbol 0 sits at (0,0), (1,2), (2,1)
    assert list(sq.symbol_permutation(0)) == [0, 2, 1]


# ---------------------------------------------------------------------------
# MOLS <-> OA


def test_oa32_forced_rows():
    a = mols_to_oa([cyclic_square(2)])
    assert a.rows.tolist() == [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_mols_to_oa_order3_pair():
    l1 = zn_linear_square(3, 1)
    l2 = zn_linear_square(3, 2)
    # oracle: direct superposition sees all 9 ordered pairs
    seen = {(int(l1.cells[r, c]), int(l2.cells[r, c])) for r in range(3) for c in range(3)}
    assert len(seen) == 9
    a = mols_to_oa([l1, l2])
    assert (a.k, a.n) == (4, 3)


def test_mols_to_oa_rejects_duplicates():
    sq = cyclic_square(3)
    with pytest.raises(OrthogonalityError) as err:
        mols_to_oa([sq, sq])
    assert err.value.repeated == (0, 0)


def test_set_input_is_sorted():
    l1 = zn_linear_square(3, 1)
    l2 = zn_linear_square(3, 2)
    assert mols_to_oa({l2, l1}) == mols_to_oa([l1, l2])


def test_oa_to_mols_roundtrip():
    a = mols_to_oa([cyclic_square(2)])
    assert oa_to_mols(a) == [cyclic_square(2)]
    pair = [zn_linear_square(3, 1), zn_linear_square(3, 2)]
    assert oa_to_mols(mols_to_oa(pair)) == pair
    b = zn_linear_oa(7)
    squares = oa_to_mols(b)
    assert len(squares) == 6
    assert mols_to_oa(squares) == b


def test_oa_validation_catches_repeats():
    rows = mols_to_oa([cyclic_square(2)]).rows.copy()
    rows[3, 2] = 1  # now columns (1,3) repeat (1,1)
    with pytest.raises(OrthogonalityError) as err:
        OrthogonalArray(rows)
    assert err.value.pair is not None


def test_oa_rejects_k2_and_wide():
    grid = [[r, c] for r in range(3) for c in range(3)]
    with pytest.raises(OAError):
        OrthogonalArray(grid)
    wide = [[r, c, (r + c) % 2, (r + c) % 2] for r in range(2) for c in range(2)]
    with pytest.raises(OAError):
        OrthogonalArray(wide)


def test_rows_agree_in_one_column():
    assert rows_agree_in_one_column(mols_to_oa([cyclic_square(2)]))
    assert rows_agree_in_one_column(zn_linear_oa(5))
    # k < n+1 arrays do not have the property
    assert not rows_agree_in_one_column(zn_linear_oa(5, k=3))


# ---------------------------------------------------------------------------
# finite fields


def test_gf2_tables():
    f = field_table(2)
    assert f.add.tolist() == [[0, 1], [1, 0]]
    assert f.mul.tolist() == [[0, 0], [0, 1]]


def test_gf9_characteristic():
    f = field_table(9)
    for x in range(9):
        assert f.add[f.add[x, x], x] == 0


def test_field_rejects_non_prime_power():
    with pytest.raises(OAError):
        field_table(6)
    with pytest.raises(OAError):
        field_table(12)


def test_field_rejects_large_order():
    with pytest.raises(OAError):
        field_table(64)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32])
def test_all_supported_fields_verify(q):
    f = field_table(q)
    assert f.q == q
    nonzero = list(range(1, q))
    for a in nonzero:
        assert sorted(int(f.mul[a, b]) for b in nonzero) == nonzero


# ---------------------------------------------------------------------------
# transforms


def test_identity_transforms():
    a = zn_linear_oa(5)
    n2 = a.n * a.n
    for t in (
        Transform(kind="rows", perm=tuple(range(n2))),
        Transform(kind="columns", perm=tuple(range(1, a.k + 1))),
        Transform(kind="symbols", perm=tuple(range(a.n)), column=3),
    ):
        res = apply_transform(a, t)
        assert res.oa == a
        assert res.sort_parity == 0


def test_column_swap_is_transpose():
    sq = zn_linear_square(5, 2)
    a = mols_to_oa([sq])
    swapped = apply_transform(a, Transform(kind="columns", perm=(2, 1, 3))).oa
    transposed = mols_to_oa([LatinSquare(sq.cells.T)])
    assert swapped == transposed


def test_symbol_transposition_keeps_orthogonality():
    a = zn_linear_oa(7, k=3)
    perm = list(range(7))
    perm[0], perm[1] = perm[1], perm[0]
    res = apply_transform(a, Transform(kind="symbols", perm=tuple(perm), column=3))
    assert res.oa.k == 3
    assert res.sort_parity == 0


def test_row_transform_reports_parity():
    a = zn_linear_oa(3)
    perm = list(range(9))
    perm[0], perm[1] = perm[1], perm[0]
    res = apply_transform(a, Transform(kind="rows", perm=tuple(perm)))
    assert res.oa == a
    assert res.sort_parity == 1


def test_transform_validation():
    with pytest.raises(OAError):
        Transform(kind="sideways", perm=(0, 1))
    with pytest.raises(OAError):
        Transform(kind="symbols", perm=(0, 1))
    with pytest.raises(OAError):
        Transform(kind="rows", perm=(0, 0))

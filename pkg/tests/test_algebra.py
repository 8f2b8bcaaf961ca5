import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from moufang_lab.algebra import (
    Ideal,
    StructureAlgebra,
    all_ideals,
    associator,
    check_alternative,
    check_moufang_algebra,
    direct_sum,
    dual_extension,
    enumerate_units,
    group_algebra,
    ideal_generated,
    ideal_sum,
    index_table,
    inverse,
    is_quasiregular,
    multiply,
    nil_unitization,
    quotient_algebra,
    smiley_set,
    sum_proper_ideals,
    unit_indices,
    whole_ideal,
    zero_ideal,
)
from moufang_lab.errors import ResourceError, StructureError, UnsupportedError
from moufang_lab.octonion import ZornElement, cd_algebra, zorn_algebra, zorn_multiply
from moufang_lab.reports import VerificationReport
from moufang_lab.scalars import PrimeField, Rationals

F2, F3 = PrimeField(2), PrimeField(3)


def brute_units(A):
    """Units by searching all pairs for x*y = y*x = 1 (independent of the linear solver)."""
    T = index_table(A)
    one = A.index_of(A.unit)
    return [x for x in range(A.size) if ((T[x] == one) & (T[:, x] == one)).any()]


def perturbed_zorn():
    A = zorn_algebra(F2)
    table = [[list(A.constants[i][j]) for j in range(8)] for i in range(8)]
    table[1][2] = [1, 0, 0, 0, 0, 0, 0, 0]
    return StructureAlgebra(F2, 8, table, A.unit)


# ---------------------------------------------------------------------------
# construction


def test_unit_is_checked_and_index_named():
    table = [[[1, 0], [0, 0]], [[0, 1], [0, 1]]]
    with pytest.raises(StructureError, match="basis index 1"):
        StructureAlgebra(F2, 2, table, [1, 0])


def test_shape_checked():
    with pytest.raises(StructureError):
        StructureAlgebra(F2, 2, [[[1, 0]]], [1, 0])
    with pytest.raises(StructureError):
        StructureAlgebra(F2, 0, [], [])


def test_element_length_checked(zorn2):
    with pytest.raises(StructureError):
        zorn2.element([1, 0])


def test_algebra_mismatch(zorn2, gf3c3):
    with pytest.raises(StructureError):
        multiply(zorn2, gf3c3.one(), gf3c3.one())


# ---------------------------------------------------------------------------
# products


def test_unit_is_neutral(zorn2):
    rng = random.Random(0)
    for _ in range(20):
        x = zorn2.element(zorn2.random_raw(rng))
        assert multiply(zorn2, zorn2.one(), x) == x == multiply(zorn2, x, zorn2.one())


def test_group_algebra_c2_table():
    A = group_algebra(F2, 2)
    one, g = A.basis(0), A.basis(1)
    assert g * g == one
    assert one * g == g == g * one
    x = one + g
    assert (x * x).is_zero()


def test_constants_match_direct_zorn_formula(zorn3):
    rng = random.Random(1)
    for _ in range(200):
        x, y = zorn3.random_raw(rng), zorn3.random_raw(rng)
        direct = zorn_multiply(ZornElement.from_coords(F3, x), ZornElement.from_coords(F3, y)).coords()
        assert zorn3.mul_raw(x, y) == direct


def test_associator_zero_in_group_algebra(gf3c3):
    for x, y, z in itertools.product(list(gf3c3.coords_iter())[:9], repeat=3):
        assert associator(gf3c3, gf3c3.element(x), gf3c3.element(y), gf3c3.element(z)).is_zero()


def test_associator_alternative_laws_exhaustive(zorn2):
    # direct expansion of (x,x,y) and (y,x,x) over all pairs
    T = index_table(zorn2)
    X = np.arange(zorn2.size)[:, None]
    Y = np.arange(zorn2.size)[None, :]
    assert (T[T[X, X], Y] == T[X, T[X, Y]]).all()
    assert (T[T[Y, X], X] == T[Y, T[X, X]]).all()


def test_zorn_is_not_associative(zorn2):
    e = [zorn2.basis(i) for i in range(8)]
    witness = next(
        (x, y, z) for x, y, z in itertools.product(e, repeat=3) if not associator(zorn2, x, y, z).is_zero()
    )
    assert witness


# ---------------------------------------------------------------------------
# identity checks


def test_check_alternative_zorn(zorn2):
    rep = check_alternative(zorn2)
    assert rep.verdict and rep.checked == 65536


def test_check_alternative_octonions_sampled():
    rep = check_alternative(cd_algebra(Rationals()), "sampled", samples=200, seed=42)
    assert rep.verdict and rep.mode == "sampled"


def test_check_alternative_perturbed_gives_witness():
    A = perturbed_zorn()
    rep = check_alternative(A)
    assert not rep.verdict
    x, y = A.element(rep.witness["x"]), A.element(rep.witness["y"])
    law = rep.witness["law"]
    bad = associator(A, x, x, y) if law == "left" else associator(A, y, x, x)
    assert not bad.is_zero()


def test_check_alternative_exhaustive_over_q_unsupported():
    with pytest.raises(UnsupportedError):
        check_alternative(cd_algebra(Rationals()), "exhaustive")


def test_check_alternative_bound():
    with pytest.raises(ResourceError):
        check_alternative(zorn_algebra(F3), "exhaustive", bound=1000)


def test_check_moufang_algebra_associative_passes(gf3c3):
    assert check_moufang_algebra(gf3c3).verdict


def test_check_moufang_algebra_perturbed_fails():
    A = perturbed_zorn()
    rep = check_moufang_algebra(A)
    assert not rep.verdict
    x, y, z = (A.element(rep.witness[k]) for k in "xyz")
    assert (x * y) * (z * x) != (x * (y * z)) * x


def test_check_moufang_algebra_triple_bound(zorn2):
    with pytest.raises(ResourceError):
        check_moufang_algebra(zorn2, triple_bound=10**6)


def test_modes_validated(zorn2):
    with pytest.raises(ValueError):
        check_alternative(zorn2, "fast")


# ---------------------------------------------------------------------------
# inverses and units


def test_inverse_examples(gf3c3):
    assert inverse(gf3c3, gf3c3.one()) == gf3c3.one()
    assert inverse(gf3c3, gf3c3.zero()) is None
    g = gf3c3.basis(1)
    assert inverse(gf3c3, g) == gf3c3.basis(2)


@pytest.mark.parametrize(
    "builder,count",
    [
        (lambda: group_algebra(F2, 2), 2),
        (lambda: zorn_algebra(F2), 120),
        (lambda: group_algebra(F3, 3), 18),
        (lambda: nil_unitization(F3, 2), 18),
        (lambda: direct_sum(group_algebra(F3, 1), group_algebra(F3, 2)), 8),
    ],
)
def test_unit_counts_against_pair_search(builder, count):
    A = builder()
    idx = unit_indices(A)
    assert len(idx) == count
    assert list(idx) == brute_units(A)


def test_enumerate_units_lexicographic(gf3c3):
    units = enumerate_units(gf3c3)
    keys = [gf3c3.index_of(u.coords) for u in units]
    assert keys == sorted(keys)
    assert [u.coords for u in enumerate_units(group_algebra(F2, 2))] == [(0, 1), (1, 0)]


def test_units_closed_and_inverse_involutive(zorn2):
    units = enumerate_units(zorn2)
    keys = {u.coords for u in units}
    for u in units:
        v = inverse(zorn2, u)
        assert v.coords in keys and inverse(zorn2, v) == u
        assert u * v == zorn2.one() == v * u
    rng = random.Random(2)
    for _ in range(500):
        a, b = rng.choice(units), rng.choice(units)
        assert (a * b).coords in keys


def test_generic_unit_path_matches_engine(gf3c3):
    from moufang_lab.algebra import _inverse_raw

    generic = [i for i, x in enumerate(gf3c3.coords_iter()) if _inverse_raw(gf3c3, x) is not None]
    assert generic == list(unit_indices(gf3c3))


def test_unit_bound():
    with pytest.raises(ResourceError):
        unit_indices(zorn_algebra(F3), bound=100)


def test_nilpotent_is_not_a_unit_but_one_plus_nilpotent_is():
    A = nil_unitization(F2, 2, lambda i, j: {2: 1} if (i, j) == (1, 1) else {})
    n1 = A.basis(1)
    assert inverse(A, n1) is None
    assert inverse(A, A.one() + n1) is not None


# ---------------------------------------------------------------------------
# ideals


def test_ideal_generated_examples(gf3c3):
    assert ideal_generated(gf3c3, [gf3c3.zero()]).rank == 0
    assert ideal_generated(gf3c3, [gf3c3.one()]).rank == 3
    aug = ideal_generated(gf3c3, [gf3c3.one() - gf3c3.basis(1)])
    assert aug.rank == 2
    # augmentation ideal: coordinate sum zero
    assert all(sum(v) % 3 == 0 for v in aug.elements())


def test_ideal_rejects_non_ideal(gf3c3):
    with pytest.raises(StructureError):
        Ideal.from_rows(gf3c3, [(1, 0, 0)])


def test_ideal_sum_examples(zorn2):
    A = direct_sum(zorn2, group_algebra(F2, 1))
    I1 = ideal_generated(A, [A.basis(0)])
    I2 = ideal_generated(A, [A.basis(8)])
    assert (I1.rank, I2.rank) == (8, 1)
    assert ideal_sum(I1, I2).rank == 9
    assert ideal_sum(I1, zero_ideal(A)).basis == I1.basis
    assert ideal_sum(I1, I1).basis == I1.basis


@pytest.fixture(scope="module")
def dual_ideals():
    return all_ideals(dual_extension(group_algebra(F3, 3)))


def test_all_ideals_dual(dual_ideals):
    assert len(dual_ideals) == 16
    assert all(I.verify_closure() for I in dual_ideals)


def test_all_ideals_against_subspace_enumeration(gf3c3):
    # every subspace of GF(3)^3 (via its reduced basis) tested for two-sided closure
    from moufang_lab import linalg
    from moufang_lab.algebra import _closure_failure

    subspaces = set()
    vecs = list(gf3c3.coords_iter())
    for k in range(4):
        for rows in itertools.combinations(vecs, k):
            b, p = linalg.rref(rows, F3)
            subspaces.add((tuple(b), tuple(p)))
    closed = {b for b, p in subspaces if _closure_failure(gf3c3, b, p) is None}
    assert {I.basis for I in all_ideals(gf3c3)} == closed


@settings(max_examples=60)
@given(st.data())
def test_ideal_sum_properties(dual_ideals, data):
    I, J, K = (data.draw(st.sampled_from(dual_ideals)) for _ in range(3))
    s = ideal_sum(I, J)
    assert s.basis == ideal_sum(J, I).basis
    assert ideal_sum(s, K).basis == ideal_sum(I, ideal_sum(J, K)).basis
    assert s.rank >= max(I.rank, J.rank)
    assert s.verify_closure()


def test_sum_proper_ideals_examples(zorn2, gf3c3):
    assert sum_proper_ideals(zorn2).rank == 0
    S = sum_proper_ideals(gf3c3)
    assert S.basis == ideal_generated(gf3c3, [gf3c3.one() - gf3c3.basis(1)]).basis
    Z = direct_sum(zorn2, group_algebra(F2, 1))
    assert sum_proper_ideals(Z).rank == 9


def test_sum_proper_ideals_matches_all_ideals(dual_ideals):
    A = dual_ideals[0].algebra
    proper = [I for I in dual_ideals if I.proper]
    total = zero_ideal(A)
    for I in proper:
        total = ideal_sum(total, I)
    assert sum_proper_ideals(A).basis == total.basis


def test_sum_proper_ideals_bound(zorn3):
    with pytest.raises(ResourceError):
        sum_proper_ideals(zorn3, bound=100)


# ---------------------------------------------------------------------------
# quotients


def test_quotient_by_zero_is_same_table(gf3c3):
    Q = quotient_algebra(gf3c3, zero_ideal(gf3c3)).algebra
    assert Q.constants == gf3c3.constants and Q.unit == gf3c3.unit


def test_quotient_by_augmentation(gf3c3):
    quo = quotient_algebra(gf3c3, sum_proper_ideals(gf3c3))
    assert quo.algebra.dim == 1
    assert quo.algebra.mul_raw((2,), (2,)) == (1,)
    assert quo.project(gf3c3.basis(1)) == quo.algebra.one()


def test_quotient_of_sum(zorn2):
    A = direct_sum(zorn2, group_algebra(F2, 1))
    quo = quotient_algebra(A, ideal_generated(A, [A.basis(8)]))
    assert quo.algebra.dim == 8
    assert check_alternative(quo.algebra).verdict


def test_quotient_projection_is_multiplicative(dual_ideals):
    A = dual_ideals[0].algebra
    rng = random.Random(3)
    for I in dual_ideals:
        if not I.proper:
            continue
        quo = quotient_algebra(A, I)
        for _ in range(30):
            x, y = A.random_raw(rng), A.random_raw(rng)
            assert quo.project_raw(A.mul_raw(x, y)) == quo.algebra.mul_raw(quo.project_raw(x), quo.project_raw(y))


def test_quotient_improper_rejected(gf3c3):
    with pytest.raises(StructureError):
        quotient_algebra(gf3c3, whole_ideal(gf3c3))


# ---------------------------------------------------------------------------
# quasiregular elements


def test_quasiregular_examples():
    A = group_algebra(F2, 2)
    assert is_quasiregular(A, A.zero())
    assert not is_quasiregular(A, A.one())


def test_quasiregular_iff_one_minus_is_unit(gf3c3):
    units = {u.coords for u in enumerate_units(gf3c3)}
    for c in gf3c3.coords_iter():
        x = gf3c3.element(c)
        assert is_quasiregular(gf3c3, x) == ((gf3c3.one() - x).coords in units)


def test_smiley_zorn(zorn2):
    sm = smiley_set(zorn2)
    assert sm.size == 120
    assert not sm.is_subspace and not sm.is_ideal


@pytest.mark.parametrize("m", [1, 2, 3])
def test_smiley_nil_unitization_is_nil_part(m):
    A = nil_unitization(F2, m)
    sm = smiley_set(A)
    nil = {c for c in A.coords_iter() if A.ring.is_zero(c[0])}
    assert {x.coords for x in sm.elements} == nil
    assert sm.is_ideal


def test_smiley_contains_nilpotents():
    # n1^2 = n2, n2^2 = 0: every element with zero scalar part is nilpotent
    A = nil_unitization(F3, 2, lambda i, j: {2: 1} if (i, j) == (1, 1) else {})
    sm = {x.coords for x in smiley_set(A).elements}
    assert all(c in sm for c in A.coords_iter() if c[0] == 0)


# ---------------------------------------------------------------------------
# builders


def test_direct_sum_unit(zorn2):
    B = group_algebra(F2, 2)
    A = direct_sum(zorn2, B)
    assert A.unit == zorn2.unit + B.unit
    assert check_alternative(A).verdict


def test_direct_sum_ring_mismatch(zorn2, gf3c3):
    with pytest.raises(StructureError):
        direct_sum(zorn2, gf3c3)


def test_dual_extension_zorn(zorn2):
    D = dual_extension(zorn2)
    assert D.dim == 16
    assert check_alternative(D, "sampled", samples=300, seed=42).verdict
    eps = D.basis(8)  # eps * e_0
    assert (eps * eps).is_zero()


# ---------------------------------------------------------------------------
# reports


reports = st.builds(
    VerificationReport,
    name=st.just("r"),
    verdict=st.booleans(),
    checked=st.integers(0, 100),
    witness=st.one_of(st.none(), st.integers(0, 9)),
    ms=st.floats(0, 10),
)


@given(reports, reports, reports)
def test_report_merge_associative(a, b, c):
    left, right = a.merge(b).merge(c), a.merge(b.merge(c))
    assert (left.verdict, left.checked, left.witness) == (right.verdict, right.checked, right.witness)
    assert abs(left.ms - right.ms) < 1e-9


def test_partitioned_sweep_merges_to_full(zorn2):
    # the alternative law over index ranges, merged, equals one full sweep
    T = index_table(zorn2)
    parts = []
    for lo in range(0, 256, 64):
        X = np.arange(lo, lo + 64)[:, None]
        Y = np.arange(256)[None, :]
        ok = bool((T[T[X, X], Y] == T[X, T[X, Y]]).all())
        parts.append(VerificationReport("alt", ok, checked=64 * 256))
    merged = parts[0]
    for p in parts[1:]:
        merged = merged.merge(p)
    full = check_alternative(zorn2)
    assert merged.verdict == full.verdict and merged.checked == full.checked


def test_engine_and_table_alternative_paths_agree(zorn2):
    from moufang_lab.algebra import _alternative_engine, _alternative_table

    rng = random.Random(9)
    tried = 0
    while tried < 25:
        table = [[list(zorn2.constants[i][j]) for j in range(8)] for i in range(8)]
        i, j, k = rng.randrange(1, 8), rng.randrange(1, 8), rng.randrange(8)
        table[i][j][k] ^= 1
        try:
            B = StructureAlgebra(F2, 8, table, zorn2.unit)
        except StructureError:
            continue
        tried += 1
        fast, slow = _alternative_engine(B), _alternative_table(B, index_table(B))
        assert fast.verdict == slow.verdict
        if not fast.verdict:
            x, y = B.element(fast.witness["x"]), B.element(fast.witness["y"])
            bad = associator(B, x, x, y) if fast.witness["law"] == "left" else associator(B, y, x, x)
            assert not bad.is_zero()

import random

import pytest

from glattice.cohomology import (
    Cyclic,
    Explicit,
    Generated,
    GLattice,
    GroupMismatch,
    GroupTooLarge,
    NotSubgroup,
    ValidationError,
    direct_sum,
    h1,
    h1_cocycle,
    h1_cyclic,
    invariants_h0,
    matrix_order,
    mulclose,
    obstruction_scan,
    permutation_module,
    restrict_subgroup,
    validate_and_close,
)
from glattice.intlinalg import FinAbGroup, IntMatrix, hermite_form

SWAP = IntMatrix([[0, 1], [1, 0]])
MINUS_I2 = IntMatrix([[-1, 0], [0, -1]])


def sign_lattice(n=1):
    return GLattice(n, Cyclic(IntMatrix.diagonal([-1] * n)))


def random_unimodular(rng, n):
    m = IntMatrix.identity(n).tolists()
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        op = rng.randrange(3)
        if op == 0:
            q = rng.randint(-2, 2)
            for k in range(n):
                m[i][k] += q * m[j][k]
        elif op == 1:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-x for x in m[i]]
    return IntMatrix(m)


def random_finite_order_action(rng, rank, max_order):
    """Random unimodular conjugate of a signed permutation of finite order."""
    perm = list(range(rank))
    rng.shuffle(perm)
    signs = [rng.choice([1, -1]) for _ in range(rank)]
    base = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        base[perm[i]][i] = signs[i]
    g = IntMatrix(base)
    if matrix_order(g, 10_000) > max_order:
        g = IntMatrix.diagonal([rng.choice([1, -1]) for _ in range(rank)])
    p = random_unimodular(rng, rank)
    h, pinv = hermite_form(p)
    assert h == IntMatrix.identity(rank)
    return p @ g @ pinv


# --- validation and closure ----------------------------------------------------


def test_close_cyclic_sign():
    elems = validate_and_close(Cyclic(IntMatrix([[-1]])))
    assert elems == [IntMatrix([[1]]), IntMatrix([[-1]])]


def test_close_generated_dihedral_like():
    # hand closure: {I, -I, swap, -swap}
    elems = validate_and_close(Generated([SWAP, MINUS_I2], closure_bound=10))
    assert len(elems) == 4
    assert set(elems) == {IntMatrix.identity(2), MINUS_I2, SWAP, MINUS_I2 @ SWAP}


def test_close_rejects_infinite_order():
    with pytest.raises(GroupTooLarge, match="exceed"):
        validate_and_close(Cyclic(IntMatrix([[1, 1], [0, 1]])), order_bound=50)


def test_close_rejects_non_unimodular():
    with pytest.raises(ValidationError, match="unimodular"):
        validate_and_close(Cyclic(IntMatrix([[2]])))


def test_close_rejects_form_violation():
    form = IntMatrix.diagonal([1, -1])
    with pytest.raises(ValidationError, match="form"):
        validate_and_close(Cyclic(SWAP), form=form)


def test_explicit_closure_checks():
    with pytest.raises(ValidationError, match="identity"):
        validate_and_close(Explicit([MINUS_I2]))
    with pytest.raises(ValidationError, match="closed"):
        validate_and_close(Explicit([IntMatrix.identity(2), SWAP, MINUS_I2]))
    elems = validate_and_close(Explicit([IntMatrix.identity(2), MINUS_I2]))
    assert len(elems) == 2


# --- H^0 -----------------------------------------------------------------------


def test_h0_trivial_action():
    m = GLattice(3, Cyclic(IntMatrix.identity(3)))
    assert invariants_h0(m) == IntMatrix.identity(3)


def test_h0_sign_action():
    assert invariants_h0(sign_lattice(2)).rows == 0


def test_h0_swap():
    m = GLattice(2, Cyclic(SWAP))
    assert invariants_h0(m) == IntMatrix([[1, 1]])


# --- cyclic H^1 ------------------------------------------------------------------


def test_h1_cyclic_sign_on_z():
    res = h1_cyclic(sign_lattice(1))
    assert res.h1 == FinAbGroup((2,))
    assert res.h0_rank == 0
    assert res.method == "cyclic"


def test_h1_cyclic_swap_trivial():
    res = h1_cyclic(GLattice(2, Cyclic(SWAP)))
    assert res.h1.is_trivial


def test_h1_cyclic_rejects_other_specs():
    with pytest.raises(ValidationError):
        h1_cyclic(GLattice(2, Explicit([IntMatrix.identity(2), MINUS_I2])))


def test_h1_cyclic_witness():
    res = h1_cyclic(sign_lattice(1), witness=True)
    assert res.witness is not None
    assert res.witness.numerator_basis == IntMatrix([[1]])
    assert res.witness.denominator_gens == IntMatrix([[2]])


# --- cocycle H^1 ---------------------------------------------------------------


def test_h1_cocycle_trivial_action():
    m = GLattice(3, Explicit([IntMatrix.identity(3)]))
    assert h1_cocycle(m).h1.is_trivial


def test_h1_cocycle_regular_c3():
    # regular permutation module of the cyclic group of order 3
    m = permutation_module([[1, 2, 0]], kind="cyclic")
    res = h1_cocycle(m)
    assert res.h1.is_trivial
    assert res.group_order == 3


def test_h1_cocycle_matches_cyclic():
    rng = random.Random(23)
    for _ in range(20):
        rank = rng.randint(1, 5)
        g = random_finite_order_action(rng, rank, 8)
        m = GLattice(rank, Cyclic(g))
        assert h1_cocycle(m).h1 == h1_cyclic(m).h1


def test_h1_cocycle_klein_four_sign_action():
    # V4 acting by diag(-1,1) and diag(1,-1); inflation-restriction on each
    # rank-1 summand gives H^1 = Z/2 each, so (Z/2)^2 in total.
    a = IntMatrix.diagonal([-1, 1])
    b = IntMatrix.diagonal([1, -1])
    m = GLattice(2, Generated([a, b], closure_bound=10))
    res = h1_cocycle(m)
    assert res.group_order == 4
    assert res.h1 == FinAbGroup((2, 2))


def test_h1_cocycle_refuses_oversize():
    m = GLattice(2, Cyclic(SWAP))
    with pytest.raises(GroupTooLarge):
        h1_cocycle(m, order_cap=1)
    with pytest.raises(GroupTooLarge):
        h1_cocycle(m, rank_cap=1)


# --- dispatch -------------------------------------------------------------------


def test_h1_dispatch_identity_only():
    res = h1(GLattice(2, Explicit([IntMatrix.identity(2)])))
    assert res.h1.is_trivial
    assert res.method == "cocycle"


def test_h1_dispatch_check_mode():
    res = h1(sign_lattice(2), check=True)
    assert res.h1 == FinAbGroup((2, 2))
    assert res.method == "cyclic"


# --- permutation modules ---------------------------------------------------------


def test_permutation_module_swap():
    m = permutation_module([[1, 0]], kind="cyclic")
    assert m.group.generator == SWAP


def test_permutation_module_regular_c4():
    m = permutation_module([[1, 2, 3, 0]], kind="cyclic")
    assert m.rank == 4
    assert matrix_order(m.group.generator) == 4
    assert h1(m).h1.is_trivial


def test_permutation_module_identity():
    m = permutation_module([[0, 1, 2]], kind="cyclic")
    assert m.group.generator == IntMatrix.identity(3)


def test_permutation_module_rejects_garbage():
    with pytest.raises(ValueError, match="inconsistent permutations"):
        permutation_module([[0, 0]], kind="cyclic")
    with pytest.raises(ValueError, match="inconsistent permutations"):
        permutation_module([[1, 0], [0, 1]], kind="cyclic")


# --- direct sums -----------------------------------------------------------------


def test_direct_sum_with_rank_zero():
    m = sign_lattice(1)
    zero = GLattice(0, Cyclic(IntMatrix([], cols=0)))
    assert direct_sum(m, zero) is m
    assert direct_sum(zero, m) is m


def test_direct_sum_additivity_example():
    m = direct_sum(sign_lattice(1), sign_lattice(1))
    assert h1(m).h1 == FinAbGroup((2, 2))


def test_direct_sum_mismatch():
    with pytest.raises(GroupMismatch):
        direct_sum(sign_lattice(1), GLattice(2, Explicit([IntMatrix.identity(2), MINUS_I2])))


def test_direct_sum_geiser_with_regular_summand():
    # adding a free permutation summand must not change H^1
    from glattice.picard import geiser_involution

    geiser = geiser_involution()
    regular_c2 = permutation_module([[1, 0]], kind="cyclic")
    total = direct_sum(geiser, regular_c2)
    assert total.rank == 10
    assert h1(total).h1 == FinAbGroup((2,) * 6)


def test_direct_sum_explicit_table_check():
    c2a = GLattice(1, Explicit([IntMatrix([[1]]), IntMatrix([[-1]])]))
    c2b = GLattice(2, Explicit([IntMatrix.identity(2), MINUS_I2]))
    s = direct_sum(c2a, c2b)
    assert s.rank == 3
    assert h1(s).h1 == FinAbGroup((2, 2, 2))
    # mismatched table: pair identity with -I
    bad = GLattice(2, Explicit([MINUS_I2, IntMatrix.identity(2)]))
    with pytest.raises(GroupMismatch, match="tables"):
        direct_sum(c2a, bad)


def test_direct_sum_generated_iso_check():
    a = GLattice(1, Generated([IntMatrix([[-1]])]))
    b = GLattice(2, Generated([SWAP]))
    s = direct_sum(a, b)
    assert s.rank == 3
    # pairing an order-2 with an order-3 generator is not an isomorphism
    c3 = permutation_module([[1, 2, 0]], kind="generated")
    with pytest.raises(GroupMismatch, match="isomorphism"):
        direct_sum(a, c3)


# --- restriction ----------------------------------------------------------------


def test_restrict_to_identity():
    m = GLattice(2, Explicit([IntMatrix.identity(2), MINUS_I2]))
    sub = restrict_subgroup(m, [IntMatrix.identity(2)])
    assert h1(sub).h1.is_trivial


def test_restrict_single_element_takes_cyclic_closure():
    full = GLattice(2, Explicit([IntMatrix.identity(2), MINUS_I2, SWAP, MINUS_I2 @ SWAP]))
    sub = restrict_subgroup(full, MINUS_I2)
    assert isinstance(sub.group, Cyclic)
    assert h1(sub).h1 == FinAbGroup((2, 2))


def test_restrict_full_group_unchanged():
    full = GLattice(2, Explicit([IntMatrix.identity(2), MINUS_I2]))
    sub = restrict_subgroup(full, list(full.group.elements))
    assert h1(sub).h1 == h1(full).h1
    assert set(sub.group.elements) == set(full.group.elements)


def test_restrict_rejects_non_subgroups():
    full = GLattice(2, Explicit([IntMatrix.identity(2), MINUS_I2, SWAP, MINUS_I2 @ SWAP]))
    with pytest.raises(NotSubgroup, match="closed"):
        restrict_subgroup(full, [IntMatrix.identity(2), SWAP, MINUS_I2])
    with pytest.raises(NotSubgroup, match="belong"):
        restrict_subgroup(full, IntMatrix([[0, -1], [1, 0]]))


# --- obstruction scan -------------------------------------------------------------


def test_scan_trivial_action():
    report = obstruction_scan(GLattice(2, Cyclic(IntMatrix.identity(2))))
    assert not report.obstructed
    assert report.verdict == "no obstruction found"


def test_scan_permutation_module():
    report = obstruction_scan(permutation_module([[1, 2, 3, 0]], kind="cyclic"))
    assert not report.obstructed


def test_scan_sign_action_obstructed():
    report = obstruction_scan(sign_lattice(2))
    assert report.obstructed
    assert any("(Z/2)^2" in w for w in report.witnesses)
    indices = [e.generator_index for e in report.subgroups]
    assert indices == sorted(indices)


def test_scan_geiser_obstructed():
    from glattice.picard import geiser_involution

    report = obstruction_scan(geiser_involution())
    assert report.obstructed
    assert report.verdict == "stable linearization obstructed"
    assert any("(Z/2)^6" in w for w in report.witnesses)


# --- properties -------------------------------------------------------------------


def test_shapiro_random_permutation_modules():
    rng = random.Random(101)
    for _ in range(40):
        k = rng.randint(1, 8)
        order = rng.randint(1, 12)
        perm = random_permutation_of_order_dividing(rng, k, order)
        m = permutation_module([perm], kind="cyclic")
        assert h1(m).h1.is_trivial


def random_permutation_of_order_dividing(rng, k, n):
    """Permutation of {0..k-1} whose order divides n, with random orbit sizes."""
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    items = list(range(k))
    rng.shuffle(items)
    perm = [0] * k
    while items:
        size = rng.choice([d for d in divisors if d <= len(items)])
        cycle, items = items[:size], items[size:]
        for i, x in enumerate(cycle):
            perm[x] = cycle[(i + 1) % size]
    return perm


def test_stability_under_permutation_summands():
    rng = random.Random(55)
    for _ in range(20):
        rank = rng.randint(1, 4)
        g = random_finite_order_action(rng, rank, 6)
        n = matrix_order(g)
        m = GLattice(rank, Cyclic(g))
        perm = random_permutation_of_order_dividing(rng, rng.randint(1, 5), n)
        pm = permutation_module([perm], kind="cyclic")
        assert h1(direct_sum(m, pm)).h1 == h1(m).h1


def test_h1_basis_invariance():
    rng = random.Random(77)
    for _ in range(15):
        rank = rng.randint(1, 5)
        g = random_finite_order_action(rng, rank, 8)
        m = GLattice(rank, Cyclic(g))
        base = h1(m)
        p = random_unimodular(rng, rank)
        h, pinv = hermite_form(p)
        conj = GLattice(rank, Cyclic(p @ g @ pinv))
        res = h1(conj)
        assert res.h1 == base.h1 and res.h0_rank == base.h0_rank


def test_h1_additivity():
    rng = random.Random(91)
    for _ in range(15):
        r1, r2 = rng.randint(1, 3), rng.randint(1, 3)
        g1 = random_finite_order_action(rng, r1, 4)
        g2 = random_finite_order_action(rng, r2, 4)
        # same abstract group: use a common power so orders match up
        m1 = GLattice(r1, Cyclic(g1))
        m2 = GLattice(r2, Cyclic(g2))
        s = direct_sum(m1, m2)
        assert h1(s).h1 == h1(m1).h1.direct_sum(h1(m2).h1)

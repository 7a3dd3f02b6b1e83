import itertools
import random
from math import gcd

import pytest

from congsub.abelianize import (
    AbelianInvariants,
    PerfectGroupError,
    free_rank_formula,
    full_abelianization,
    hall_abelianization,
    image_abelianization,
    infinite_abelianization_verdict,
    predicted_invariants,
    satoh_crosscheck,
    sl_level_structure,
    smith_invariants,
)
from congsub.fingroups import (
    abelian,
    alternating,
    cyclic,
    dihedral,
    parse_group_spec,
    quaternion,
    symmetric,
)


def test_invariants_validation():
    with pytest.raises(ValueError):
        AbelianInvariants((1,), 0)
    with pytest.raises(ValueError):
        AbelianInvariants((4, 2), 0)  # not a divisibility chain
    with pytest.raises(ValueError):
        AbelianInvariants((), -1)


def test_invariants_str():
    assert str(AbelianInvariants((), 0)) == "trivial"
    assert str(AbelianInvariants((2, 4), 1)) == "Z/2 x Z/4 x Z^1"
    assert str(AbelianInvariants((), 3)) == "Z^3"
    assert AbelianInvariants((2,), 1).to_dict() == {"torsion": [2], "free_rank": 1}


def test_smith_diagonal_cases():
    assert smith_invariants([[2, 0], [0, 0]], 2) == AbelianInvariants((2,), 1)
    assert smith_invariants([], 3) == AbelianInvariants((), 3)
    assert smith_invariants([[4, 0], [0, 2]], 2) == AbelianInvariants((2, 4), 0)
    assert smith_invariants([[1, 0], [0, 1]], 2) == AbelianInvariants((), 0)


def test_smith_rejects_ragged_rows():
    with pytest.raises(ValueError):
        smith_invariants([[1, 2, 3]], 2)


def divisors(n):
    return [e for e in range(1, n + 1) if n % e == 0]


def det3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def determinant(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return det3(m)


def cokernel_order_statistics(rows, n, d):
    """Brute force: enumerate (Z/d)^n modulo the row span.

    Returns (order of the cokernel, {e: number of elements killed by e})
    for each divisor e of d.  Valid whenever d * Z^n lies in the row
    lattice, e.g. d = |det| for a full-rank square matrix.
    """
    span = {tuple(0 for _ in range(n))}
    frontier = list(span)
    gens = [tuple(v % d for v in row) for row in rows]
    while frontier:
        x = frontier.pop()
        for gvec in gens:
            y = tuple((xi + gi) % d for xi, gi in zip(x, gvec))
            if y not in span:
                span.add(y)
                frontier.append(y)
    total = d**n
    order = total // len(span)
    stats = {}
    for e in divisors(d):
        killed = sum(
            1
            for x in itertools.product(range(d), repeat=n)
            if tuple(e * xi % d for xi in x) in span
        )
        stats[e] = killed // len(span)
    return order, stats


def test_smith_against_brute_force_oracle():
    rng = random.Random(2026)
    checked = 0
    while checked < 200:
        n = rng.randint(1, 3)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        d = abs(determinant(rows))
        if d == 0 or d > 10_000 or d**n > 25_000:
            continue
        inv = smith_invariants(rows, n)
        assert inv.free_rank == 0
        prod = 1
        for t in inv.torsion:
            prod *= t
        order, stats = cokernel_order_statistics(rows, n, d)
        assert prod == order == d
        for e, count in stats.items():
            expected = 1
            for t in inv.torsion:
                expected *= gcd(e, t)
            assert count == expected, (rows, e)
        checked += 1


def test_smith_invariant_under_unimodular_scrambling():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.randint(1, 5)
        diag = [rng.choice([0, 0, 1, 2, 3, 4, 6, 12]) for _ in range(n)]
        rows = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
        want = smith_invariants(rows, n)
        for _ in range(rng.randint(5, 30)):
            if n < 2:
                break
            i, j = rng.sample(range(n), 2)
            c = rng.randint(-3, 3)
            if rng.random() < 0.5:
                for k in range(n):
                    rows[i][k] += c * rows[j][k]
            else:
                for k in range(n):
                    rows[k][i] += c * rows[k][j]
        assert smith_invariants(rows, n) == want


def test_free_rank_formula():
    assert free_rank_formula(4, 1) == 2
    assert free_rank_formula(4, 4) == 5
    assert free_rank_formula(6, 1) == 3
    assert free_rank_formula(5, 5) == 11


def test_predicted_special_cases():
    assert predicted_invariants(2, 1) == AbelianInvariants((2, 4), 1)
    assert predicted_invariants(3, 1) == AbelianInvariants((3, 3), 1)
    assert predicted_invariants(2, 2) == AbelianInvariants((2, 2, 2), 2)
    assert predicted_invariants(4, 1) == AbelianInvariants((4,), 2)
    assert predicted_invariants(4, 2) == AbelianInvariants((2, 4), 3)
    with pytest.raises(ValueError):
        predicted_invariants(1, 1)


def test_hall_requires_torsion_free_parameters():
    for m, n in [(2, 1), (2, 2), (3, 1)]:
        with pytest.raises(ValueError):
            hall_abelianization(m, n)


def test_hall_matches_prediction():
    for m in range(3, 8):
        for n in divisors(m):
            if (m, n) == (3, 1):
                continue
            assert hall_abelianization(m, n) == predicted_invariants(m, n), (m, n)


def abelian_types(max_order):
    for m in range(2, max_order + 1):
        for n in divisors(m):
            if m * n <= max_order:
                yield m, n


def test_full_matches_prediction_for_abelian_targets():
    for m, n in abelian_types(16):
        g = cyclic(m) if n == 1 else abelian(m, n)
        assert full_abelianization(g) == predicted_invariants(m, n), (m, n)


def test_full_dihedral_values():
    for r in (3, 4, 5, 6):
        inv = full_abelianization(dihedral(r))
        assert inv == AbelianInvariants((2,), 2 if r % 2 else 3), r


def test_image_abelianization_level_two():
    inv = image_abelianization(cyclic(2))
    assert inv == AbelianInvariants((2,), 1)


def test_verdicts_non_perfect_groups():
    specs = [
        "cyclic:2", "cyclic:3", "cyclic:4", "abelian:2,2", "cyclic:6",
        "sym:3", "dihedral:4", "dihedral:5", "quaternion", "alt:4",
        "dihedral:6", "abelian:4,2", "sym:4", "dihedral:12",
        "perm:(1 2 3 4 5 6 7 8),(2 8)(3 7)(4 6)",  # D8, order 16
        "abelian:4,4", "cyclic:24",
    ]
    for spec in specs:
        g = parse_group_spec(spec)
        assert g.order <= 24
        v = infinite_abelianization_verdict(g)
        assert v.certified and v.free_rank >= 1, spec


def test_verdict_rejects_perfect():
    with pytest.raises(PerfectGroupError):
        infinite_abelianization_verdict(alternating(5))


def test_sl_level_two_structure():
    s = sl_level_structure(2, 2)
    assert s.contains_minus_identity
    assert not s.is_free
    assert s.structure == "free x central Z/2"
    assert s.free_rank == 2
    assert s.abelianization == AbelianInvariants((2,), 2)


def test_sl_level_without_center():
    s = sl_level_structure(4, 4)
    assert s.is_free and s.structure == "free" and s.free_rank == 5
    assert s.abelianization == AbelianInvariants((), 5)


def test_sl_level_rejects_torsion():
    with pytest.raises(ValueError):
        sl_level_structure(2, 1)


def test_satoh():
    for m in (3, 4, 5):
        assert satoh_crosscheck(m)
    with pytest.raises(ValueError):
        satoh_crosscheck(2)

import math
from fractions import Fraction

import pytest

import untwist

# V-sequences


def test_v_sequence():
    v = untwist.VSequence([2, 1, 0, 0, 0])
    assert v.values == (2, 1, 0)
    assert v.nu_plus == 2
    assert v[0] == 2
    assert v[10] == 0
    assert not v.is_zero
    assert untwist.VSequence.zero().is_zero
    assert repr(v) == "<VSequence (2, 1, 0)>"


def test_v_sequence_with_invalid_values():
    with pytest.raises(untwist.DomainError) as exc_info:
        untwist.VSequence([2, 0])
    assert str(exc_info.value) == (
        "V_0 = 2 and V_1 = 0 violate V_k >= V_k+1 >= V_k - 1."
    )

    with pytest.raises(untwist.DomainError) as exc_info:
        untwist.VSequence([1])
    assert str(exc_info.value) == "A V-sequence must end in zero."

    with pytest.raises(untwist.DomainError):
        untwist.VSequence([0, 1, 0])

    with pytest.raises(untwist.DomainError):
        untwist.VSequence([0])[-1]


# Torus knots


def test_torus_alexander():
    assert untwist.torus_alexander(2, 3) == [-1, 1]
    assert untwist.torus_alexander(2, 5) == [1, -1, 1]
    assert untwist.torus_alexander(3, 4) == [1, 0, -1, 1]


def test_torsion_v():
    assert untwist.torsion_v(2, 3).values == (1, 0)
    assert untwist.torsion_v(2, 7).values == (2, 1, 1, 0)
    assert untwist.torsion_v(3, 4).values == (1, 1, 1, 0)
    assert untwist.torsion_v(3, 8).values == (3, 2, 2, 2, 1, 1, 1, 0)


def test_torsion_v_matches_semigroup_gaps():
    # For T(7, 8), V_k counts the gaps of the semigroup <7, 8> that are >= 21 + k.
    semigroup = {7 * a + 8 * b for a in range(10) for b in range(10)}
    gaps = [n for n in range(42) if n not in semigroup]
    v = untwist.torsion_v(7, 8)
    for k in range(25):
        assert v[k] == len([n for n in gaps if n >= 21 + k])


def test_torsion_v_of_t_3_17():
    expected = (6, 5, 5, 5, 4, 4, 4, 3, 3, 3, 2, 2, 2, 1, 1, 1, 0)
    assert untwist.torsion_v(3, 17).values == expected
    v = untwist.torsion_v(7, 8)
    assert (v[0], v[7], v[14], v[21]) == (6, 3, 1, 0)


def test_torsion_v_of_two_strand_torus_knots():
    for k in range(1, 31):
        v = untwist.torsion_v(2, 2 * k + 1)
        for i in range(k + 3):
            if i >= k:
                expected = 0
            elif k % 2 == 0:
                expected = k // 2 - i // 2
            else:
                expected = (k + 1) // 2 - (i + 1) // 2
            assert v[i] == expected, (k, i)


def test_torsion_v_is_a_v_sequence():
    for p in range(2, 15):
        for q in range(p + 1, 200 // p + 1):
            if math.gcd(p, q) != 1:
                continue
            values = untwist.torsion_v(p, q).values
            genus = (p - 1) * (q - 1) // 2
            assert all(value >= 0 for value in values)
            assert all(0 <= a - b <= 1 for a, b in zip(values, values[1:]))
            assert len(values) <= genus + 1 and values[-1] == 0


def test_torus_knot():
    knot = untwist.torus_knot(3, 2)
    assert knot.name == "T(2,3)"
    assert knot.signature == -2
    assert knot.genus == 1
    assert knot.determinant == 3
    assert knot.arf == 1
    assert knot.tau == 1
    assert knot.two_bridge == (3, 1)
    assert knot.alternating
    assert knot.v_seq == untwist.VSequence([1, 0])
    assert knot.v_seq_mirror == untwist.VSequence.zero()
    assert knot.torus == untwist.TorusData(2, 3)


def test_torus_knot_invariants():
    knot = untwist.torus_knot(3, 4)
    assert knot.genus == 3
    assert knot.determinant == 3
    assert knot.signature == -6
    assert knot.two_bridge is None
    assert not knot.alternating
    assert untwist.torus_knot(3, 5).determinant == 1


def test_torus_knot_with_invalid_parameters():
    with pytest.raises(untwist.DomainError) as exc_info:
        untwist.torus_knot(2, 4)
    assert str(exc_info.value) == "T(2,4) is not a knot: gcd(2, 4) != 1."

    with pytest.raises(untwist.DomainError):
        untwist.torus_knot(1, 5)


# Classical invariants


@pytest.mark.parametrize(
    "determinant, arf", [(1, 0), (3, 1), (5, 1), (7, 0), (9, 0), (21, 1), (23, 0)]
)
def test_arf_from_determinant(determinant, arf):
    assert untwist.arf_from_determinant(determinant) == arf


@pytest.mark.parametrize(
    "p, q, signature", [(3, 1, -2), (5, 2, 0), (7, 3, -2), (5, 1, -4), (9, 7, 0)]
)
def test_two_bridge_signature(p, q, signature):
    assert untwist.two_bridge_signature(p, q) == signature


# Records


def test_record_validation():
    with pytest.raises(untwist.ConsistencyError) as exc_info:
        untwist.KnotRecord(name="K", signature=3, arf=0, genus=2).validate()
    assert str(exc_info.value) == "Knot 'K': signature 3 is odd."

    with pytest.raises(untwist.ConsistencyError) as exc_info:
        untwist.KnotRecord(
            name="K", signature=0, arf=1, genus=1, determinant=7
        ).validate()
    assert str(exc_info.value) == (
        "Knot 'K': Arf invariant 1 is inconsistent with determinant 7 "
        "(arf = 0 iff det = ±1 mod 8)."
    )

    with pytest.raises(untwist.ConsistencyError) as exc_info:
        untwist.KnotRecord(name="K", signature=-4, arf=0, genus=1).validate()
    assert "|signature| <= 2 * genus" in str(exc_info.value)

    with pytest.raises(untwist.ConsistencyError) as exc_info:
        untwist.KnotRecord(
            name="K",
            signature=-2,
            arf=0,
            genus=1,
            determinant=7,
            two_bridge=(7, 4),
        ).validate()
    assert str(exc_info.value) == (
        "Knot 'K': two-bridge (7, 4) has signature 2, but got -2."
    )


def test_known_and_obstructed_index_clash():
    knot = untwist.KnotRecord(
        name="K",
        signature=0,
        arf=0,
        genus=1,
        known_indices=[untwist.TwistIndex(0, "+")],
        external_obstructions={untwist.TwistIndex(0, "+"): "elsewhere"},
    )
    with pytest.raises(untwist.ConsistencyError) as exc_info:
        knot.validate()
    assert str(exc_info.value) == (
        "Knot 'K': index 0+ is both known and externally obstructed."
    )


def test_mirror():
    knot = untwist.torus_knot(2, 3).replace(
        known_indices=[untwist.TwistIndex(3, "-")],
        signature_samples={Fraction(1, 3): -2},
    )
    image = untwist.mirror(knot)
    assert image.name == "-T(2,3)"
    assert image.signature == 2
    assert image.tau == -1
    assert image.v_seq == untwist.VSequence.zero()
    assert image.v_seq_mirror == untwist.VSequence([1, 0])
    assert image.two_bridge == (3, 2)
    assert image.signature_samples == {Fraction(1, 3): 2}
    assert image.known_indices == {untwist.TwistIndex(3, "+")}
    assert image.torus == untwist.TorusData(2, 3, mirrored=True)
    assert untwist.mirror(image) == knot


def test_connected_sum():
    trefoil = untwist.torus_knot(2, 3)
    knot = untwist.connected_sum(trefoil, trefoil, untwist.mirror(trefoil))
    assert knot.name == "T(2,3) # T(2,3) # -T(2,3)"
    assert knot.is_sum
    assert len(knot.summands) == 3
    assert knot.signature == -2
    assert knot.arf == 1
    assert knot.genus == 3
    assert knot.determinant == 27
    assert knot.tau == 1
    assert knot.v_seq is None
    assert knot.genus4 is None


def test_connected_sum_keeps_v_of_the_only_nontrivial_summand():
    unknot = untwist.KnotRecord(name="U", signature=0, arf=0, genus=0, determinant=1)
    trefoil = untwist.torus_knot(2, 3)
    knot = untwist.connected_sum(unknot, trefoil)
    assert knot.v_seq == trefoil.v_seq
    assert knot.v_seq_mirror == trefoil.v_seq_mirror


def test_connected_sum_adds_upsilon():
    left = untwist.torus_knot(2, 25)
    right = untwist.mirror(untwist.torus_knot(3, 8))
    knot = untwist.connected_sum(left, right)
    assert knot.upsilon == untwist.upsilon_of(left) + untwist.upsilon_of(right)
    assert knot.upsilon(1) == -7
    assert untwist.mirror(knot).upsilon == -knot.upsilon
    assert knot.genus4 is None
    assert knot.branched_ranks == {}

    bare = untwist.KnotRecord(name="K", signature=0, arf=0, genus=1)
    assert untwist.connected_sum(left, bare).upsilon is None


def test_connected_sum_is_commutative_and_associative():
    a, b, c = (
        untwist.torus_knot(2, 3),
        untwist.mirror(untwist.torus_knot(2, 5)),
        untwist.torus_knot(3, 4),
    )

    def fields(knot):
        return (
            knot.signature,
            knot.arf,
            knot.genus,
            knot.determinant,
            knot.tau,
            knot.upsilon,
            sorted(knot.signature_samples.items()),
        )

    assert fields(untwist.connected_sum(a, b)) == fields(untwist.connected_sum(b, a))
    assert fields(untwist.connected_sum(untwist.connected_sum(a, b), c)) == fields(
        untwist.connected_sum(a, untwist.connected_sum(b, c))
    )


def test_connected_sum_of_nothing():
    with pytest.raises(untwist.DomainError):
        untwist.connected_sum()

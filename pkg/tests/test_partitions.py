from hypothesis import given, settings
from hypothesis import strategies as st

from ktasep.partitions import (
    Partition,
    SkewShape,
    conjugate,
    contains,
    corners,
    is_horizontal_strip,
    is_vertical_strip,
    partitions_in_box,
    push_closure,
)

parts_strategy = st.lists(st.integers(0, 8), max_size=8).map(
    lambda xs: Partition(sorted(xs, reverse=True))
)


def test_conjugate_examples():
    assert conjugate(Partition([3, 3, 1])) == Partition([3, 2, 2])
    assert conjugate(Partition([])) == Partition([])
    # column counts of the drawn diagram
    assert conjugate(Partition([4, 3])) == Partition([2, 2, 2, 1])


@settings(max_examples=60)
@given(parts_strategy)
def test_conjugate_involution(p):
    assert conjugate(conjugate(p)) == p


def test_contains():
    assert contains(Partition([2, 1]), Partition([1, 1]))
    assert not contains(Partition([2, 1]), Partition([1, 1, 1]))
    assert contains(Partition([3, 3, 1]), Partition([3, 2]))


def test_corners():
    assert corners(Partition([1, 1])) == [(2, 1)]
    assert corners(Partition([3, 3, 1])) == [(2, 3), (3, 1)]
    assert corners(Partition([])) == []


def test_strips():
    assert is_vertical_strip(SkewShape(Partition([2, 2]), Partition([1, 1])))
    assert not is_vertical_strip(SkewShape(Partition([3, 1]), Partition([1])))
    # (2,1)/() has two cells in row 1 and two in column 1, so it is
    # neither kind of strip (see decisions ledger); a single box is both
    s = SkewShape(Partition([2, 1]), Partition([]))
    assert not is_vertical_strip(s) and not is_horizontal_strip(s)
    single = SkewShape(Partition([1]), Partition([]))
    assert is_vertical_strip(single) and is_horizontal_strip(single)


@settings(max_examples=60)
@given(parts_strategy, parts_strategy)
def test_strip_conjugate_duality(a, b):
    big = Partition([x + y for x, y in zip(a.padded(8), b.padded(8))])
    if not big.contains(a):
        return
    s = SkewShape(big, a)
    assert is_vertical_strip(s) == is_horizontal_strip(s.conjugate())


def test_push_closure_examples():
    assert push_closure(Partition([4, 1, 1, 1]), 4) == (Partition([4, 2, 2, 2]), [2, 3])
    assert push_closure(Partition([2, 1]), 1) == (Partition([3, 1]), [])
    assert push_closure(Partition([1, 1, 1]), 3) == (Partition([2, 2, 2]), [1, 2])


@settings(max_examples=60)
@given(parts_strategy, st.integers(1, 8))
def test_push_closure_minimal(p, j):
    nu, pushed = push_closure(p, j)
    # contains p + e_j
    assert nu.part(j) == p.part(j) + 1
    assert nu.contains(p)
    # minimality: removing any pushed box breaks the partition condition
    for r in pushed:
        parts = list(nu.padded(max(len(nu.parts), j)))
        parts[r - 1] -= 1
        try:
            q = Partition(parts)
        except ValueError:
            continue
        assert not q.contains(Partition(p.padded(j)[: j])) or q.part(j) < p.part(j) + 1 or any(
            parts[i] < parts[i + 1] for i in range(len(parts) - 1)
        )


def test_serialization():
    p = Partition([3, 3, 1])
    assert p.to_json() == [3, 3, 1]
    assert Partition.from_json([3, 3, 1]) == p


def test_box_enumeration():
    box = partitions_in_box(3, 3)
    assert len(box) == 20
    assert Partition([]) in box and Partition([3, 3, 3]) in box


def test_invalid_partition():
    import pytest

    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, -1])

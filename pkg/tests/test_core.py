from itertools import combinations, product

import pytest

from monge_domp.core import (
    DualSolution,
    TpInstance,
    balanced_check,
    check_money,
    format_money,
    is_monge,
    parse_money,
)


def monge_by_quadruples(c):
    rows, cols = range(len(c)), range(len(c[0]))
    return all(
        c[i][j] + c[k][l] <= c[i][l] + c[k][j]
        for i, k in combinations(rows, 2)
        for j, l in combinations(cols, 2)
    )


@pytest.mark.parametrize(
    "matrix, expected",
    [
        ([[1, 2], [2, 3]], True),
        ([[1, 2], [2, 4]], False),
        ([[5, 1, 9]], True),
        ([[5], [1], [9]], True),
    ],
)
def test_is_monge_examples(matrix, expected):
    assert is_monge(matrix) is expected


def test_adjacent_check_matches_quadruple_definition_exhaustively():
    checked = 0
    for p, q in product(range(1, 4), repeat=2):
        for entries in product(range(3), repeat=p * q):
            c = [list(entries[i * q:(i + 1) * q]) for i in range(p)]
            assert is_monge(c) == monge_by_quadruples(c), c
            checked += 1
    assert checked == sum(3 ** (p * q) for p, q in product(range(1, 4), repeat=2))


@pytest.mark.parametrize(
    "s, d, expected",
    [((3, 2), (2, 3), True), ((1,), (2,), False), ((0, 0), (0,), True)],
)
def test_balanced_check(s, d, expected):
    cost = [[0] * len(d) for _ in s]
    assert balanced_check(TpInstance(s, d, cost)) is expected


def test_instance_validation():
    with pytest.raises(ValueError):
        TpInstance([1], [1, 0], [[1]])
    with pytest.raises(ValueError):
        TpInstance([-1], [-1], [[1]])
    with pytest.raises(ValueError):
        TpInstance([1, 1], [2], [[1], [1, 2]])
    with pytest.raises(OverflowError):
        TpInstance([1], [1], [[2 ** 63]])


def test_money_is_range_checked():
    assert check_money(2 ** 63 - 1) == 2 ** 63 - 1
    with pytest.raises(OverflowError):
        check_money(-(2 ** 63) - 1)
    with pytest.raises(OverflowError):
        DualSolution([2 ** 64], [0])


@pytest.mark.parametrize("scaled, text", [(1000, "10.00"), (-1400, "-14.00"), (5, "0.05"), (-5, "-0.05"), (0, "0.00")])
def test_money_formatting_round_trips(scaled, text):
    assert format_money(scaled) == text
    assert parse_money(text) == scaled


def test_parse_money_rejects_sub_cent_values():
    assert parse_money("0.01") == 1
    with pytest.raises(ValueError):
        parse_money("0.001")
    with pytest.raises(ValueError):
        parse_money("abc")


def test_dual_shift_keeps_objective_on_balanced_data():
    inst = TpInstance([3, 2], [2, 3], [[1, 2], [2, 3]])
    dual = DualSolution([0, 1], [1, 2])
    assert dual.shifted(7).objective(inst) == dual.objective(inst) == 10

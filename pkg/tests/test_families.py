import pytest

from hamming_shift import decompose_blocks, hamming_weight
from hamming_shift.errors import ParseError
from hamming_shift.families import blocks, make_alpha, parse_family, parse_grid, periodic, random_alpha, sparse


def test_sparse():
    assert sparse(1, 16).value == 1
    assert hamming_weight(sparse(4, 32)) == 4


def test_blocks():
    a = blocks(16, 16)
    assert str(a) == "10" * 8
    d = decompose_blocks(blocks(5, 23))
    assert d.m == 5 and set(d.lengths) <= {4, 5}


def test_periodic_and_random():
    assert str(periodic(4, 10)) == "1100110011"
    assert random_alpha(3, 50) == random_alpha(3, 50)
    assert not random_alpha(3, 2).is_all_ones


def test_parse_family():
    assert parse_family("sparse:1-4") == ("sparse", ["1", "2", "3", "4"])
    assert parse_family("blocks:n") == ("blocks", ["n"])
    assert make_alpha("blocks", "n", 12).value == blocks(12, 12).value
    with pytest.raises(ParseError):
        parse_family("spiral:2")


def test_parse_grid():
    assert parse_grid("16,32,64") == [16, 32, 64]
    assert parse_grid("16:64:16") == [16, 32, 48, 64]
    assert parse_grid("") == []

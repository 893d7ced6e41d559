import pytest

from audit import (ELLIPTIC_SURFACE, MATCH, MISMATCH, NOT_COMPARABLE, QUADRATIC_FAMILY, TORSION_ONE,
                   TOY_SEVENTEEN, run_audit)


@pytest.fixture(scope="module")
def entries():
    return {entry['claim_id']: entry for entry in run_audit()['entries']}


def test_entries_sorted_by_claim_id(entries):
    ids = list(entries)
    assert ids == sorted(ids)
    assert len(ids) == 9


def test_torsion_claims(entries):
    order = entries['torsion-order-x3+1']
    assert (order['computed'], order['claimed'], order['status']) == (6, 8, MISMATCH)
    assert entries['torsion-structure-x3+17']['computed'] == []
    assert entries['torsion-structure-x3+17']['status'] == MISMATCH
    assert entries['l-torsion-x3+1']['computed'] == {'2': 1, '3': 1}
    assert entries['l-torsion-x3+1']['status'] == MISMATCH


def test_discriminant_claims(entries):
    assert entries['delta-x3+1']['status'] == MATCH
    assert entries['delta-x3+17']['computed'] == 7803
    assert entries['delta-x3+17']['status'] == MISMATCH
    assert entries['nagell-lutz-y2-x3+17']['computed'] == [1, 9, 289, 2601]
    assert entries['nagell-lutz-y2-x3+17']['status'] == MATCH


def test_descent_claims(entries):
    selmer = entries['selmer-subgroup-x3+17']
    assert (selmer['computed'], selmer['claimed'], selmer['status']) == (4, 9, MISMATCH)
    orders = entries['cubic-class-orders-17']
    assert orders['status'] == NOT_COMPARABLE
    assert len(orders['computed']['orders']) == 2


def test_quadratic_family_claim(entries):
    claim = entries['two-four-torsion-1-m3']
    assert [row['m'] for row in claim['computed']] == list(range(2, 11))
    assert claim['status'] == MISMATCH


def test_entries_carry_source_locations(entries):
    assert entries['selmer-subgroup-x3+17']['location'] == TOY_SEVENTEEN
    assert entries['delta-x3+1']['location'] == TORSION_ONE
    assert entries['l-torsion-x3+1']['location'] == ELLIPTIC_SURFACE
    assert entries['two-four-torsion-1-m3']['location'] == QUADRATIC_FAMILY
    assert all(entry['location'] and entry['quote'] for entry in entries.values())

import pytest

from errors import InvalidInputError
from quad_class import QuadField, class_group
from family_scan import (STATUS_OK, STATUS_SKIPPED, FamilyScanEngine, quadratic_torsion_claim,
                         scan_cubic, scan_quadratic, summarize_ranks)


def test_quadratic_scan_two_ranks():
    report = scan_quadratic(1, 2, 2, 5)
    assert [row.m for row in report.rows] == [2, 3, 4, 5]
    assert [row.d for row in report.rows] == [-7, -26, -7, -31]
    assert [row.h for row in report.rows] == [1, 6, 1, 3]
    assert [row.l_rank for row in report.rows] == [0, 1, 0, 0]
    assert report.rows[2].raw == -63
    assert report.summary['histogram'] == {'0': 3, '1': 1}
    assert report.summary['verdict'] == 'not constant'
    assert report.summary['counterexamples'] == [3]
    assert report.summary['min'] == 0 and report.summary['max'] == 1


def test_quadratic_scan_three_rank_with_specialization():
    report = scan_quadratic(1, 3, 3, 3)
    row, = report.rows
    assert row.d == -26
    assert row.l_rank == 1
    assert (row.specialization.u, row.specialization.w, row.specialization.order) == (1, 3, 3)
    assert row.to_dict()['specialization']['order'] == 3


def test_quadratic_scan_excludes_nonnegative_values():
    report = scan_quadratic(9, 2, 1, 3)
    assert report.summary['excluded'] == [1, 2]
    assert [row.m for row in report.rows] == [3]
    assert report.rows[0].d == -2


def test_quadratic_scan_rejects_bad_parameters():
    with pytest.raises(InvalidInputError) as excinfo:
        scan_quadratic(1, 4, 2, 5)
    assert excinfo.value.code == "not-prime"
    with pytest.raises(InvalidInputError) as excinfo:
        scan_quadratic(1, 2, 5, 2)
    assert excinfo.value.code == "bad-range"


def test_rows_over_budget_are_skipped(fresh_config):
    fresh_config.update_config_value('quad_discriminant_limit', 50)
    report = scan_quadratic(1, 2, 2, 5)
    statuses = [row.status for row in report.rows]
    assert statuses == [STATUS_OK, STATUS_SKIPPED, STATUS_OK, STATUS_OK]
    assert report.summary['skipped'] == [3]
    assert all(row.reason for row in report.rows if row.status == STATUS_SKIPPED)


def test_engine_reuses_class_groups():
    engine = FamilyScanEngine()
    engine.scan_quadratic(1, 2, 2, 4)
    assert sorted(engine.quad_groups) == [-26, -7]


def test_cubic_scan():
    report = scan_cubic(2, 5)
    assert [row.n for row in report.rows] == [2, 3, 4, 5]
    assert [row.status for row in report.rows] == [STATUS_OK, STATUS_OK, STATUS_SKIPPED, STATUS_OK]
    assert report.rows[2].reason == "not squarefree"
    assert [row.h for row in report.rows if row.status == STATUS_OK] == [1, 1, 1]
    assert report.summary['verdict'] == 'constant'
    assert report.summary['skipped'] == [4]


def test_cubic_scan_rejects_empty_range():
    with pytest.raises(InvalidInputError):
        scan_cubic(5, 2)


def test_summarize_ranks_vacuous_without_rows():
    summary = summarize_ranks([], 'm')
    assert summary['verdict'] == 'vacuous'
    assert summary['histogram'] == {}
    assert summary['row_count'] == 0


def test_two_four_torsion_claim_per_row():
    report = scan_quadratic(1, 2, 2, 5)
    claims = quadratic_torsion_claim(report)
    assert [claim['m'] for claim in claims] == [2, 3, 4, 5]
    assert not any(claim['holds'] for claim in claims)


def test_scan_rows_match_direct_class_groups():
    report = scan_quadratic(1, 2, 2, 30)
    for row in report.rows:
        group = class_group(QuadField(row.d))
        assert (row.h, row.divisors, row.l_rank) == (group.h, group.structure.elementary_divisors,
                                                    group.l_rank(2))
    assert report.to_dict() == scan_quadratic(1, 2, 2, 30).to_dict()

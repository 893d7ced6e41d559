import io
import json
from fractions import Fraction

import openpyxl
import pytest

from family_scan import scan_cubic, scan_quadratic
from report_processor import CUBIC_COLUMNS, QUADRATIC_COLUMNS, ReportProcessor, skipped_reasons
from utils import create_summary_sheet, format_rational, render_json, to_wire


EXPECTED_CSV = (
    "m,raw,d,discriminant,status,h,divisors,l_rank,specialization_u,specialization_w,specialization_order\n"
    "2,-7,-7,-7,ok,1,,0,n/a,n/a,n/a\n"
    "3,-26,-26,-104,ok,6,6,1,n/a,n/a,n/a\n"
    "4,-63,-7,-7,ok,1,,0,n/a,n/a,n/a\n"
    "5,-124,-31,-31,ok,3,3,0,n/a,n/a,n/a\n"
)


def test_format_rational():
    assert format_rational(-3) == "-3"
    assert format_rational(Fraction(1, 4)) == "1/4"
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(None) is None


def test_render_json_wire_format():
    text = render_json({'b': 1, 'a': Fraction(-1, 4), 'c': True, 'd': 0.5, 'e': None, 'f': [2, "x"]})
    assert text.endswith("\n")
    assert json.loads(text) == {'a': "-1/4", 'b': "1", 'c': True, 'd': "0.500000", 'e': None, 'f': ["2", "x"]}
    assert text.index('"a"') < text.index('"b"')


def test_to_wire_rejects_unknown_types():
    with pytest.raises(TypeError):
        to_wire(object())


def test_quadratic_csv():
    report = scan_quadratic(1, 2, 2, 5)
    assert ReportProcessor().to_csv(report) == EXPECTED_CSV


def test_cubic_dataframe_columns():
    df = ReportProcessor().create_dataframe(scan_cubic(2, 4))
    assert list(df.columns) == CUBIC_COLUMNS
    assert list(df['status']) == ['ok', 'ok', 'skipped']
    assert df.loc[2, 'h'] == 'n/a'


def test_empty_report_keeps_header():
    report = scan_quadratic(1000, 2, 1, 5)
    assert report.rows == ()
    csv = ReportProcessor().to_csv(report)
    assert csv == ",".join(QUADRATIC_COLUMNS) + "\n"


def test_xlsx_has_rows_and_summary_sheets():
    report = scan_quadratic(1, 2, 2, 5)
    payload = ReportProcessor().to_xlsx(report)
    book = openpyxl.load_workbook(io.BytesIO(payload))
    assert book.sheetnames == ['Quadratic', 'Summary']
    header = [cell.value for cell in book['Quadratic'][1]]
    assert header == QUADRATIC_COLUMNS
    assert book['Quadratic'].max_row == 5


def test_summary_sheet_and_statistics():
    report = scan_cubic(2, 5)
    sheet = create_summary_sheet(report.parameters, report.summary)
    values = dict(zip(sheet['Metric'], sheet['Value']))
    assert values['from'] == "2"
    assert values['verdict'] == "constant"
    assert values['skipped'] == "4"

    stats = ReportProcessor().get_summary_statistics(report)
    assert stats['statuses'] == {'ok': 3, 'skipped': 1}
    assert skipped_reasons(report) == ["not squarefree"]

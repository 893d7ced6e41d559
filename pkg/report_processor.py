"""Family scan reports as pandas DataFrames, rendered to CSV or XLSX."""
import logging
from typing import Dict, List

import pandas as pd

from family_scan import FamilyReport
from utils import create_summary_sheet, export_to_excel, format_rational


logger = logging.getLogger(__name__)

QUADRATIC_COLUMNS = ['m', 'raw', 'd', 'discriminant', 'status', 'h', 'divisors', 'l_rank',
                     'specialization_u', 'specialization_w', 'specialization_order']
CUBIC_COLUMNS = ['n', 'status', 'discriminant', 'h', 'divisors', 'three_rank']

MISSING = "n/a"


def _cell(value) -> str:
    return MISSING if value is None else format_rational(value)


def _divisors(divisors) -> str:
    return ";".join(str(d) for d in divisors) if divisors else ""


class ReportProcessor:
    """Turns FamilyReports into tables with a fixed column order."""

    def create_dataframe(self, report: FamilyReport) -> pd.DataFrame:
        if report.kind == 'quadratic':
            records = [self._quadratic_record(row) for row in report.rows]
            columns = QUADRATIC_COLUMNS
        else:
            records = [self._cubic_record(row) for row in report.rows]
            columns = CUBIC_COLUMNS
        return pd.DataFrame(records, columns=columns, dtype=str)

    def _quadratic_record(self, row) -> Dict[str, str]:
        special = row.specialization
        return {
            'm': _cell(row.m),
            'raw': _cell(row.raw),
            'd': _cell(row.d),
            'discriminant': _cell(row.discriminant),
            'status': row.status,
            'h': _cell(row.h),
            'divisors': _divisors(row.divisors),
            'l_rank': _cell(row.l_rank),
            'specialization_u': _cell(special.u) if special else MISSING,
            'specialization_w': _cell(special.w) if special else MISSING,
            'specialization_order': _cell(special.order) if special else MISSING,
        }

    def _cubic_record(self, row) -> Dict[str, str]:
        return {
            'n': _cell(row.n),
            'status': row.status,
            'discriminant': _cell(row.discriminant),
            'h': _cell(row.h),
            'divisors': _divisors(row.divisors),
            'three_rank': _cell(row.three_rank),
        }

    def to_csv(self, report: FamilyReport) -> str:
        """Comma-separated rows with a header; no field ever needs quoting."""
        return self.create_dataframe(report).to_csv(index=False, lineterminator="\n")

    def to_xlsx(self, report: FamilyReport) -> bytes:
        df = self.create_dataframe(report)
        summary = create_summary_sheet(report.parameters, report.summary)
        return export_to_excel(df, summary, sheet_name=report.kind.capitalize()).getvalue()

    def get_summary_statistics(self, report: FamilyReport) -> Dict:
        """Counts by status and the rank histogram, for logging."""
        statuses: Dict[str, int] = {}
        for row in report.rows:
            statuses[row.status] = statuses.get(row.status, 0) + 1
        return {'statuses': statuses, 'histogram': report.summary.get('histogram', {})}


def skipped_reasons(report: FamilyReport) -> List[str]:
    """Reasons attached to skipped rows, in row order."""
    return [row.reason for row in report.rows if row.status != 'ok']

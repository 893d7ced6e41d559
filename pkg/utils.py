import io
import json
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd


def format_rational(value: Optional[Any]) -> Optional[str]:
    """Format an integer or rational as a decimal string ("-3", "1/4")."""
    if value is None:
        return None
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(int(value))


def format_float(value: float, decimal_places: int = 6) -> str:
    """Format a float with a fixed number of decimals."""
    return f"{value:.{decimal_places}f}"


def to_wire(value: Any) -> Any:
    """Convert a report document into JSON-ready values with numbers as strings."""
    if value is None:
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer, Fraction)):
        return format_rational(value)
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, str):
        return value
    if hasattr(value, 'to_dict') and not isinstance(value, pd.DataFrame):
        return to_wire(value.to_dict())
    if isinstance(value, dict):
        return {str(key): to_wire(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_wire(item) for item in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_json(document: Any, indent: int = 2) -> str:
    """Deterministic JSON text: sorted keys, fixed indent, trailing newline."""
    return json.dumps(to_wire(document), sort_keys=True, indent=indent) + "\n"


def export_to_excel(df: pd.DataFrame, summary: Optional[pd.DataFrame] = None,
                    sheet_name: str = "Rows") -> io.BytesIO:
    """Export a report DataFrame (plus an optional Summary sheet) to Excel in memory."""
    buffer = io.BytesIO()

    with pd.ExcelWriter(buffer, engine='openpyxl') as writer:
        df.to_excel(writer, sheet_name=sheet_name, index=False)

        if summary is not None and not summary.empty:
            summary.to_excel(writer, sheet_name="Summary", index=False)

        # Auto-adjust column widths
        for worksheet in writer.book.worksheets:
            for column in worksheet.columns:
                max_length = max((len(str(cell.value)) for cell in column if cell.value is not None), default=0)
                worksheet.column_dimensions[column[0].column_letter].width = min(max_length + 2, 50)

    buffer.seek(0)
    return buffer


def create_summary_sheet(parameters: Dict[str, Any], summary: Dict[str, Any]) -> pd.DataFrame:
    """Flatten scan parameters and summary into a two-column Metric/Value sheet."""
    rows: List[Dict[str, str]] = []
    for key in sorted(parameters):
        rows.append({'Metric': key, 'Value': format_rational(parameters[key])})
    for key in sorted(summary):
        value = summary[key]
        if isinstance(value, dict):
            text = ";".join(f"{k}:{v}" for k, v in sorted(value.items()))
        elif isinstance(value, (list, tuple)):
            text = ";".join(str(item) for item in value)
        elif value is None:
            text = "n/a"
        else:
            text = str(value)
        rows.append({'Metric': key, 'Value': text})
    return pd.DataFrame(rows, columns=['Metric', 'Value'])

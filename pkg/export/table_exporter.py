"""Convergence tables and verification reports as CSV, JSON and Excel"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd
from mpmath import mp, mpf
from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, NamedStyle, PatternFill, Side
from openpyxl.utils import get_column_letter
from openpyxl.utils.dataframe import dataframe_to_rows

from config.settings import get_settings
from core.continued_fraction import Convergent
from core.models import EvalReport, EvalSummary, OutputRecord, VerificationSummary

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["level", "p", "q", "value", "abs_diff"]
DIFF_DIGITS = 10


def truncate_decimal(value: Fraction, places: int) -> str:
    """Decimal digits cut (not rounded) after `places`, computed exactly"""
    sign = "-" if value < 0 else ""
    scaled = abs(value.numerator) * 10 ** places // value.denominator
    whole, fraction = divmod(scaled, 10 ** places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{fraction:0{places}d}"


def lowest_terms(convergent: Convergent) -> tuple:
    """(p, q) as coprime integers with q >= 0; q = 0 keeps only the sign of p"""
    if convergent.q == 0:
        return (1 if convergent.p > 0 else -1), 0
    value = convergent.p / convergent.q
    return value.numerator, value.denominator


class TableExporter:
    """Renders evaluation reports as convergence tables"""

    def __init__(self, precision: Optional[int] = None, euler_style: bool = False, places: int = 4):
        """
        Args:
            precision: Significant digits of rounded values (settings default)
            euler_style: Truncate values to `places` decimals instead of rounding
            places: Decimals kept by truncated rendering
        """
        self.settings = get_settings()
        self.precision = precision or self.settings.precision.digits
        self.euler_style = euler_style
        self.places = places
        self._setup_styles()

    def _setup_styles(self):
        """Workbook styles"""
        self.header_style = NamedStyle(name="header_style")
        self.header_style.font = Font(bold=True, color="FFFFFF", size=12)
        self.header_style.fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
        self.header_style.alignment = Alignment(horizontal="center", vertical="center")
        self.header_style.border = Border(
            left=Side(style='thin'), right=Side(style='thin'),
            top=Side(style='thin'), bottom=Side(style='thin')
        )

    def _render(self, convergent: Convergent) -> str:
        if not convergent.defined:
            return "undef"
        if self.euler_style:
            return truncate_decimal(convergent.value, self.places)
        with mp.workdps(self.precision):
            return mp.nstr(convergent.to_mpf(), self.precision)

    def build_records(self, report: EvalReport) -> List[OutputRecord]:
        """One record per level; abs_diff is empty until two defined values exist"""
        records = []
        previous: Optional[mpf] = None
        with mp.workdps(self.precision + self.settings.precision.guard_digits):
            for convergent in report.convergents:
                p, q = lowest_terms(convergent)
                abs_diff = ""
                value = convergent.to_mpf()
                if value is not None:
                    if previous is not None:
                        abs_diff = mp.nstr(abs(value - previous), DIFF_DIGITS)
                    previous = value
                records.append(OutputRecord(
                    level=convergent.level,
                    p=str(p),
                    q=str(q),
                    value=self._render(convergent),
                    abs_diff=abs_diff
                ))
        return records

    def build_summary(self, report: EvalReport, target: Optional[mpf] = None) -> EvalSummary:
        """Closing line: termination, value and, when known, the oracle error"""
        value = target_text = error_text = None
        with mp.workdps(self.precision):
            if report.final_value is not None:
                value = mp.nstr(report.final_value, self.precision)
            if target is not None:
                target_text = mp.nstr(target, self.precision)
                if report.final_value is not None:
                    error_text = mp.nstr(abs(report.final_value - target), 5)
        return EvalSummary(
            label=report.label,
            termination=report.termination,
            depth_used=report.depth_used,
            value=value,
            target=target_text,
            abs_error=error_text,
            bracketing=report.bracketing
        )

    def to_dataframe(self, records: List[OutputRecord]) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in records], columns=TABLE_COLUMNS)

    def render_csv(self, records: List[OutputRecord], summary: EvalSummary) -> str:
        """CSV table followed by a '#' summary line"""
        table = self.to_dataframe(records).to_csv(index=False, lineterminator="\n")
        fields = summary.model_dump(mode="json")
        line = "# " + " ".join(f"{k}={'' if v is None else v}" for k, v in fields.items())
        return table + line + "\n"

    def render_json(self, records: List[OutputRecord], summary: EvalSummary) -> str:
        payload = {
            "records": [r.model_dump() for r in records],
            "summary": summary.model_dump(mode="json"),
        }
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

    def write_xlsx(self, records: List[OutputRecord], summary: EvalSummary, output_path: Path) -> Path:
        """Workbook with a 'Convergents' and a 'Summary' sheet"""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        workbook = Workbook()
        workbook.add_named_style(self.header_style)
        sheet = workbook.active
        sheet.title = "Convergents"
        self._write_frame(sheet, self.to_dataframe(records))

        summary_sheet = workbook.create_sheet("Summary")
        summary_frame = pd.DataFrame(
            [(k, "" if v is None else str(v)) for k, v in summary.model_dump(mode="json").items()],
            columns=["field", "value"]
        )
        self._write_frame(summary_sheet, summary_frame)

        workbook.save(output_path)
        logger.info(f"Wrote convergence table to {output_path}")
        return output_path

    def write_verification_report(self, summary: VerificationSummary, output_path: Path) -> Path:
        """JSON report, or a workbook when the suffix is .xlsx"""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        rows = summary.to_rows()

        if output_path.suffix.lower() == ".xlsx":
            workbook = Workbook()
            workbook.add_named_style(self.header_style)
            sheet = workbook.active
            sheet.title = "Verification"
            self._write_frame(sheet, pd.DataFrame(rows))
            workbook.save(output_path)
        else:
            payload: Dict[str, Any] = {
                "precision": summary.precision,
                "total": summary.total,
                "passed": summary.passed,
                "results": rows,
            }
            output_path.write_text(json.dumps(payload, indent=2, ensure_ascii=False), encoding="utf-8")

        logger.info(f"Wrote verification report to {output_path}")
        return output_path

    def _write_frame(self, sheet, frame: pd.DataFrame):
        for row in dataframe_to_rows(frame, index=False, header=True):
            sheet.append(row)
        for cell in sheet[1]:
            cell.style = "header_style"
        for index, column in enumerate(frame.columns, start=1):
            width = max([len(str(column))] + [len(str(v)) for v in frame[column].head(200)])
            sheet.column_dimensions[get_column_letter(index)].width = min(width + 2, 60)

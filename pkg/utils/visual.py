"""Terminal rendering for fractions, catalog entries and verification runs"""
from typing import List, Optional

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from core.continued_fraction import GeneralizedCF
from core.models import VerificationSummary
from core.recipes import InvarianceCheck

console = Console()


class FractionVisuals:
    """Rich tables and panels for the CLI"""

    def __init__(self, console_: Optional[Console] = None):
        self.console = console_ or console

    def create_elements_table(self, cf: GeneralizedCF, depth: int, title: Optional[str] = None) -> Table:
        """b0 followed by (a_k, b_k) for k <= depth"""
        table = Table(title=title or cf.label, show_header=True, header_style="bold magenta")
        table.add_column("k", style="cyan", justify="right")
        table.add_column("a_k", style="green", justify="right")
        table.add_column("b_k", style="yellow", justify="right")

        table.add_row("0", "", str(cf.b0))
        for k, (a, b) in enumerate(cf.elements(depth), start=1):
            table.add_row(str(k), str(a), str(b))
        return table

    def create_verification_table(self, summary: VerificationSummary) -> Table:
        table = Table(title="Verification", show_header=True, header_style="bold magenta")
        table.add_column("Entry", style="cyan", no_wrap=True)
        table.add_column("Family", justify="center")
        table.add_column("Result", justify="center")
        table.add_column("Termination")
        table.add_column("Depth", justify="right")
        table.add_column("Error", justify="right")
        table.add_column("Tolerance", justify="right")
        table.add_column("Digits/level", justify="right")

        for result in summary.results:
            if result.skipped:
                status = "[yellow]SKIP[/yellow]"
            elif result.passed:
                status = "[green]PASS[/green]"
            else:
                status = "[red]FAIL[/red]"
            table.add_row(
                result.name,
                result.family_id.value,
                status,
                result.termination.value,
                str(result.depth_used),
                "" if result.error is None else f"{result.error:.3e}",
                f"{result.tolerance:.0e}",
                "" if result.rate_digits_per_level is None else f"{result.rate_digits_per_level:.3f}",
            )
        return table

    def create_summary_panel(self, summary: VerificationSummary) -> Panel:
        failed = summary.failed
        skipped = sum(1 for r in summary.results if r.skipped)
        lines = [
            f"[bold]Entries:[/bold] {summary.total}",
            f"[bold]Passed:[/bold] {summary.passed}",
            f"[bold]Skipped:[/bold] {skipped}",
            f"[bold]Precision:[/bold] {summary.precision} digits",
        ]
        if failed:
            lines.append("")
            lines.append("[bold red]Failures:[/bold red]")
            lines.extend(f"  {r.name}: {r.message}" for r in failed)
        return Panel(
            "\n".join(lines),
            title="Summary",
            title_align="left",
            border_style="green" if not failed else "red",
            padding=(1, 2)
        )

    def show_verification(self, summary: VerificationSummary):
        self.console.print(self.create_verification_table(summary))
        self.console.print(self.create_summary_panel(summary))

    def show_transform(
        self,
        before: GeneralizedCF,
        after: GeneralizedCF,
        directives: List[str],
        depth: int,
        check: InvarianceCheck
    ):
        """Elements before and after a recipe plus the value-invariance result"""
        self.console.print(self.create_elements_table(before, depth, title=f"before: {before.label}"))
        self.console.print(self.create_elements_table(after, depth, title=f"after: {'; '.join(directives) or '(none)'}"))
        if check.ok:
            self.console.print(f"[green]value invariance: ok ({check.checked} levels checked)[/green]")
        else:
            self.console.print(
                f"[red]value invariance: FAILED at levels {check.mismatched} "
                f"({check.checked} levels checked)[/red]"
            )


visual = FractionVisuals()

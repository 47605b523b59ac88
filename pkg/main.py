"""Main entry point for the Euler continued-fraction workbench

Lists the identity catalog, evaluates fractions into convergence tables,
verifies identities against independent oracles and applies transform recipes.
"""
import argparse
import asyncio
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from rich.console import Console
from rich.panel import Panel

# Add project root to path
sys.path.append(str(Path(__file__).parent))

from analysis.oracle import DivergentTargetError, NonRealTargetError, QuadratureError, entry_target, target_value
from analysis.verifier import DEFAULT_FAMILY_TOLERANCE, select_entries, verify_entries, verify_family
from config.catalog import catalog, get_entries_by_family, get_entry
from config.settings import get_settings
from core.continued_fraction import GeneralizedCF, eval_to_tolerance
from core.families import build_family
from core.models import FamilyId, Termination, VerificationSummary
from core.recipes import apply_recipe, check_value_invariance, parse_directives
from core.recurrence import RecurrenceError, cf_from_recurrence, load_scheme_file, parse_rational
from core.verification_manager import VerificationManager
from export.table_exporter import TableExporter
from utils.visual import visual

logger = logging.getLogger(__name__)
console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DIVERGENCE = 3

TargetFn = Optional[Callable[[], object]]


def configure_logging() -> None:
    """Root logging on stderr (stdout carries the tables), plus an optional file"""
    settings = get_settings()
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.runtime.log_file:
        handlers.append(logging.FileHandler(settings.runtime.log_file))
    logging.basicConfig(
        level=getattr(logging, settings.runtime.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )


def parse_family_id(text: str) -> FamilyId:
    name = text[len("family_"):] if text.startswith("family_") else text
    if name not in FamilyId.__members__:
        raise ValueError(f"Unknown family {text!r}; expected one of {', '.join(FamilyId.__members__)}")
    return FamilyId(name)


def parse_params(text: Optional[str]) -> Dict[str, object]:
    """'α=1,β=1/2' (or ASCII names) -> {'α': Fraction(1), 'β': Fraction(1, 2)}"""
    params = {}
    if not text:
        return params
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ValueError(f"Parameters look like 'name=value', got {item!r}")
        try:
            params[name.strip()] = parse_rational(value.strip())
        except RecurrenceError as e:
            raise ValueError(f"Bad value for parameter {name.strip()!r}: {e}") from e
    return params


class Workbench:
    """Command implementations; each returns a process exit code"""

    def __init__(self):
        self.settings = get_settings()

    def _precision(self, args) -> int:
        precision = getattr(args, "precision", None) or self.settings.precision.digits
        if precision < 1:
            raise ValueError("Precision must be positive")
        return precision

    def _resolve_source(self, args, precision: int) -> Tuple[GeneralizedCF, TargetFn, Optional[int]]:
        """Fraction, target thunk and default depth for a name, scheme file or family"""
        if getattr(args, "scheme", None):
            scheme = load_scheme_file(args.scheme)
            return cf_from_recurrence(scheme), None, None

        if getattr(args, "family", None):
            spec = build_family(parse_family_id(args.family), parse_params(args.params))
            return spec.cf, (lambda: target_value(spec, precision)), None

        if not getattr(args, "name", None):
            raise ValueError("Give a catalog name, --scheme FILE or --family ID --params ...")
        entry = get_entry(args.name)
        cf, _ = entry.build()
        return cf, (lambda: entry_target(entry, precision)), entry.depth

    def cmd_list(self, args) -> int:
        entries = get_entries_by_family(parse_family_id(args.family)) if args.family else list(catalog())

        if args.json:
            payload = []
            for entry in entries:
                spec = entry.spec
                payload.append({
                    "name": entry.name,
                    "family_id": spec.family_id.value,
                    "params": {k: str(v) for k, v in spec.params.items()},
                    "target_kind": spec.target.kind.value,
                    "description": entry.description,
                    "recipe": entry.directives,
                    "depth": entry.depth,
                    "tolerance": entry.tolerance,
                })
            sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
            return EXIT_OK

        for entry in entries:
            spec = entry.spec
            sys.stdout.write(
                f"{entry.name}  {spec.family_id.value}  {spec.display_params()}  {spec.target.kind.value}\n"
            )
        return EXIT_OK

    def cmd_eval(self, args) -> int:
        precision = self._precision(args)
        cf, target_fn, default_depth = self._resolve_source(args, precision)
        depth = args.depth or default_depth or self.settings.evaluation.max_depth
        tol = args.tol or self.settings.evaluation.default_tol

        report = eval_to_tolerance(cf, tol=tol, max_depth=depth, precision=precision)

        target = None
        if target_fn is not None and report.termination != Termination.DIVERGENCE_DETECTED:
            try:
                target = target_fn()
            except (DivergentTargetError, NonRealTargetError, QuadratureError) as e:
                logger.warning(f"No oracle target: {e}")

        exporter = TableExporter(precision=precision, euler_style=args.euler_style, places=args.places)
        records = exporter.build_records(report)
        summary = exporter.build_summary(report, target)

        output_format = (args.format or self.settings.output.default_format).lower()
        if output_format == "xlsx":
            output = Path(args.output) if args.output else self._default_output(report.label, "xlsx")
            path = exporter.write_xlsx(records, summary, output)
            console.print(f"Convergence table saved to: {path}")
        else:
            text = exporter.render_json(records, summary) if output_format == "json" \
                else exporter.render_csv(records, summary)
            if args.output:
                Path(args.output).parent.mkdir(parents=True, exist_ok=True)
                Path(args.output).write_text(text, encoding="utf-8")
                logger.info(f"Convergence table saved to {args.output}")
            else:
                sys.stdout.write(text)

        if report.termination == Termination.DIVERGENCE_DETECTED:
            err_console.print(f"[red]{report.label}: divergence detected at level {report.depth_used}[/red]")
            return EXIT_DIVERGENCE
        return EXIT_OK

    def cmd_verify(self, args) -> int:
        precision = self._precision(args)

        if args.params:
            family = args.family or args.selector
            if not family:
                raise ValueError("--params needs a family (positional family_ID or --family)")
            spec = build_family(parse_family_id(family), parse_params(args.params))
            result = verify_family(spec, tolerance=args.tol or DEFAULT_FAMILY_TOLERANCE,
                                   depth=args.depth, precision=precision)
            summary = VerificationSummary(results=[result], precision=precision)
        else:
            entries = select_entries(args.family or args.selector or "all")
            workers = args.workers or self.settings.runtime.workers
            if workers > 1 and len(entries) > 1:
                manager = VerificationManager(workers=workers, precision=precision)
                summary = asyncio.run(manager.run([e.name for e in entries], args.depth))
            else:
                summary = verify_entries(entries, precision, args.depth)

        visual.show_verification(summary)
        if args.report:
            path = TableExporter(precision=precision).write_verification_report(summary, Path(args.report))
            console.print(f"Verification report saved to: {path}")

        if summary.failed:
            return EXIT_FAILED
        if summary.results and all(r.diverged for r in summary.results):
            return EXIT_DIVERGENCE
        return EXIT_OK

    def cmd_transform(self, args) -> int:
        precision = self._precision(args)
        cf, _, _ = self._resolve_source(args, precision)
        steps = parse_directives([part for text in args.ops for part in text.split(";") if part.strip()])

        transformed, value_map = apply_recipe(cf, steps)
        shift = sum(step.level_shift for step in steps)
        check = check_value_invariance(cf, transformed, value_map, shift, args.depth)

        visual.show_transform(cf, transformed, [s.directive for s in steps], args.depth, check)
        return EXIT_OK if check.ok else EXIT_FAILED

    def cmd_catalog_show(self, args) -> int:
        entry = get_entry(args.name)
        spec = entry.spec
        cf, _ = entry.build()
        lines = [
            f"[bold]Family:[/bold] {spec.label}",
            f"[bold]Target:[/bold] {spec.target.kind.value}  {spec.target.formula}",
            f"[bold]Recipe:[/bold] {'; '.join(entry.directives) or '(none)'}",
            f"[bold]Schedule:[/bold] depth {entry.depth}, tolerance {entry.tolerance:.0e}, "
            f"expect {entry.expected.value}",
        ]
        if entry.notes:
            lines.append(f"[bold]Notes:[/bold] {entry.notes}")
        console.print(Panel("\n".join(lines), title=entry.name, subtitle=entry.description,
                            title_align="left", border_style="blue", padding=(1, 2)))
        console.print(visual.create_elements_table(cf, args.depth))
        return EXIT_OK

    def _default_output(self, label: str, suffix: str) -> Path:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        safe = "".join(c if c.isalnum() or c in "_-" else "_" for c in label)
        return self.settings.output.output_dir / f"{safe}_{timestamp}.{suffix}"


def _add_source_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("name", nargs="?", help="Catalog entry name")
    parser.add_argument("--scheme", help="Scheme file (JSON affine templates)")
    parser.add_argument("--family", help="Family id, e.g. IV or family_IV")
    parser.add_argument("--params", help="Family parameters, e.g. 'α=1,β=1' or 'alpha=1,beta=1'")
    parser.add_argument("--precision", type=int, help="Decimal digits (default CF_PRECISION)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Euler continued-fraction workbench")
    subparsers = parser.add_subparsers(dest="command", required=True)

    list_parser = subparsers.add_parser("list", help="List catalog entries")
    list_parser.add_argument("--family", help="Only entries of this family")
    list_parser.add_argument("--json", action="store_true", help="Machine-readable output")

    eval_parser = subparsers.add_parser("eval", help="Evaluate convergents into a table")
    _add_source_arguments(eval_parser)
    eval_parser.add_argument("--depth", type=int, help="Maximum level")
    eval_parser.add_argument("--tol", type=float, help="Consecutive-difference tolerance")
    eval_parser.add_argument("--format", choices=["csv", "json", "xlsx"], help="Table format")
    eval_parser.add_argument("--output", help="Write the table to a file")
    eval_parser.add_argument("--euler-style", action="store_true", help="Truncate decimals instead of rounding")
    eval_parser.add_argument("--places", type=int, default=4, help="Decimals kept by --euler-style")

    verify_parser = subparsers.add_parser("verify", help="Check identities against oracles")
    verify_parser.add_argument("selector", nargs="?", help="Entry name, family id (family_IV) or 'all'")
    verify_parser.add_argument("--family", help="Family id")
    verify_parser.add_argument("--params", help="Parameters of an ad-hoc family member")
    verify_parser.add_argument("--tol", type=float, help="Tolerance for an ad-hoc family member")
    verify_parser.add_argument("--depth", type=int, help="Depth override")
    verify_parser.add_argument("--precision", type=int, help="Decimal digits (default CF_PRECISION)")
    verify_parser.add_argument("--report", help="Write a JSON or .xlsx report")
    verify_parser.add_argument("--workers", type=int, help="Worker processes (default CF_WORKERS)")

    transform_parser = subparsers.add_parser("transform", help="Apply transform directives")
    _add_source_arguments(transform_parser)
    transform_parser.add_argument(
        "--ops", nargs="*", default=[],
        help="Directives: scale:k->expr adjoin:b0,a1 drop altsign cleardenom[:N] rescale:d shift:t"
    )
    transform_parser.add_argument("--depth", type=int, default=6, help="Levels shown and checked")

    show_parser = subparsers.add_parser("catalog-show", help="Show an entry's displayed elements")
    show_parser.add_argument("name", help="Catalog entry name")
    show_parser.add_argument("--depth", type=int, default=8, help="Levels shown")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)

    try:
        # a bad CF_* value fails here with a pydantic ValidationError (a ValueError)
        configure_logging()
        workbench = Workbench()
        commands = {
            "list": workbench.cmd_list,
            "eval": workbench.cmd_eval,
            "verify": workbench.cmd_verify,
            "transform": workbench.cmd_transform,
            "catalog-show": workbench.cmd_catalog_show,
        }
        return commands[args.command](args)
    except RecurrenceError as e:
        err_console.print(f"Scheme error: {e}", style="red", markup=False)
    except OSError as e:
        err_console.print(f"I/O error: {e}", style="red", markup=False)
    except ValueError as e:
        err_console.print(f"Error: {e}", style="red", markup=False)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

import io
from pathlib import Path

from rich.console import Console
from rich.rule import Rule
from rich.table import Table

from nonspecific.errors import NonspecificError
from nonspecific.utilities.helpers import DataEncoder

from .pipeline import Report

FORMATS = ("human", "structured")
CONSOLE_WIDTH = 120


class UnknownFormatError(NonspecificError):
    """
    Raised when a report is requested in a format that does not exist.
    """

    def __init__(self, fmt: str) -> None:
        super().__init__(f"Unknown report format {fmt!r}, expected one of {', '.join(FORMATS)}")


def _fixed(value: float) -> str:
    return f"{value:.4f}"


def _bpa(masses: dict[str, float] | None) -> str:
    if masses is None:
        return "-"
    return ", ".join(f"m({focal}) = {_fixed(mass)}" for focal, mass in masses.items())


def _partition_section(console: Console, report: Report) -> None:
    partition = report.partition
    if partition is None:
        return
    console.print(Rule("Partition"))
    for index, subset in enumerate(partition.subsets, start=1):
        console.print(f"χ{index} = {{{', '.join(subset)}}}")
    console.print(f"c_0 = {_fixed(partition.c0)}")
    for index, conflict in enumerate(partition.subset_conflicts, start=1):
        console.print(f"c_{index} = {_fixed(conflict)}")
    console.print(f"Mcf = {_fixed(partition.mcf)}")
    console.print(f"Pls(AdP) = {_fixed(partition.pls_adp)}")
    console.print(f"search = {partition.method}, {len(partition.trace) - 1} moves")
    verdicts = ", ".join(f"{count}: {verdict.value}" for count, verdict in partition.explored_counts.items())
    console.print(f"counts = {verdicts}")


def _specification_section(console: Console, report: Report) -> None:
    if report.specifications is None:
        return
    console.print(Rule("Specification"))
    table = Table("evidence", "subset", "m(∉)", "Bel", "Pls", "α", "m%%", box=None)
    for record in report.specifications:
        for index in sorted(record.pls):
            table.add_row(
                record.evidence_id,
                f"χ{index}" + (" *" if index == record.own_subset else ""),
                _fixed(record.not_in[index]) if index in record.not_in else "-",
                _fixed(record.bel.get(index, 0.0)),
                _fixed(record.pls[index]),
                _fixed(record.credibility[index]) if index in record.credibility else "-",
                _bpa(record.discounted_per_subset.get(index)),
            )
    console.print(table)
    for record in report.specifications:
        console.print(f"k({record.evidence_id}) = {_fixed(record.falsity_k)}")
        console.print(f"m%({record.evidence_id}): {_bpa(record.discounted_for_falsity)}")
        if record.in_own is not None:
            console.print(f"m({record.evidence_id} ∈ χ{record.own_subset}) = {_fixed(record.in_own)}")


def _posterior_section(console: Console, report: Report) -> None:
    if report.existence is None or report.count_bpa is None or report.posterior is None:
        return
    console.print(Rule("Posterior"))
    for existence in report.existence:
        index = existence.index
        console.print(
            f"m(χ{index} exists) = {_fixed(existence.mass_exists)}, m(Θ) = {_fixed(existence.mass_theta)}, "
            f"α_{index} = {_fixed(existence.emptiness_alpha)}",
        )
        console.print(f"event of χ{index}: {_bpa(existence.combined_action)}")
    for conjunction, mass in (report.combination or {}).items():
        console.print(f"m%({conjunction}) = {_fixed(mass)}")
    for count, mass in report.count_bpa.at_least.items():
        console.print(f"m(|χ| ≥ {count}) = {_fixed(mass)}")
    console.print(f"m(Θ) = {_fixed(report.count_bpa.theta)}")
    console.print(f"k = {_fixed(report.posterior.conflict_k)}")
    for count, mass in report.posterior.masses.items():
        console.print(f"m*(E_{count}) = {_fixed(mass)}")


def render_human(report: Report) -> str:
    """Plain-text rendering with every number at four decimals."""
    console = Console(
        file=io.StringIO(),
        record=True,
        width=CONSOLE_WIDTH,
        color_system=None,
        highlight=False,
        markup=False,
        emoji=False,
    )
    console.print(f"Scenario {report.scenario} (seed {report.rng_seed})")
    _partition_section(console, report)
    _specification_section(console, report)
    _posterior_section(console, report)
    if report.diagnostics:
        console.print(Rule("Warnings"))
        for note in report.diagnostics:
            console.print(f"- {note}")
    return console.export_text()


def render_report(r: Report, fmt: str = "human") -> str:
    """
    Render a report.

    Parameters:
        r (Report): The report.
        fmt (str): "human" for a readable summary, "structured" for the full-precision JSON document.

    Returns:
        str: The rendered text.

    Raises:
        UnknownFormatError: If `fmt` is not a known format.
    """
    if fmt == "human":
        return render_human(r)
    if fmt == "structured":
        return DataEncoder.encode_document(r)
    raise UnknownFormatError(fmt)


def load_report(source: str | Path) -> Report:
    """
    Read a structured report back, from a file path or the JSON text itself.

    Raises:
        DataValidationError: If the document does not match the report schema.
    """
    if isinstance(source, Path):
        return DataEncoder.decode_document(source.read_text(encoding="utf-8"), Report, str(source))
    return DataEncoder.decode_document(source, Report)

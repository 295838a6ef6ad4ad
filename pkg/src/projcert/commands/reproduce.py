"""reproduce / fixtures: run regression fixtures or list them."""

from ..fixtures import FIXTURES, reproduce, reproduce_all
from ..sampling import SampleConfig
from . import CommandResult


def run_reproduce(name: str | None, cfg: SampleConfig) -> CommandResult:
    """Run one fixture, or all of them when name is None; exit 0 iff all match."""
    reports = reproduce_all(cfg) if name is None else [reproduce(name, cfg)]
    matched = all(report.match for report in reports)
    document = {
        "task": "reproduce",
        "config": cfg.to_dict(),
        "match": matched,
        "fixtures": [report.to_dict() for report in reports],
    }
    return CommandResult(document, 0 if matched else 1)


def run_list_fixtures() -> CommandResult:
    document = {
        "fixtures": [
            {"name": f.name, "description": f.description, "cases": [c.label for c in f.cases]}
            for f in FIXTURES.values()
        ]
    }
    return CommandResult(document, 0)

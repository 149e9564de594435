from .pipeline import STAGES, PipelineError, Report, Stage, run_pipeline
from .render import FORMATS, UnknownFormatError, load_report, render_report
from .scenario import Scenario, ScenarioDocument, ScenarioError, bundled_scenarios, load_scenario, parse_scenario

__all__ = [
    "FORMATS",
    "STAGES",
    "PipelineError",
    "Report",
    "Scenario",
    "ScenarioDocument",
    "ScenarioError",
    "Stage",
    "UnknownFormatError",
    "bundled_scenarios",
    "load_report",
    "load_scenario",
    "parse_scenario",
    "render_report",
    "run_pipeline",
]

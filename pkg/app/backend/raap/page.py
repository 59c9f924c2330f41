from pathlib import Path
from typing import Mapping, Optional, Union

from jinja2 import Environment, PackageLoader, select_autoescape

from .reports import OperatorReport, UserReport

_environment = Environment(
    loader=PackageLoader("raap", "templates"),
    autoescape=select_autoescape(["html", "j2"]),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def render_report_page(
    user: UserReport,
    operator: OperatorReport,
    figures: Optional[Mapping[str, str]] = None,
    max_problem_points: int = 20,
) -> str:
    """
    Renders the static audit page.

    Args:
        user: The user view
        operator: The operator view
        figures: Caption to inline SVG markup
        max_problem_points: Rows of each agent's problem-point table
    """
    template = _environment.get_template("report.html.j2")
    return template.render(
        user=user, operator=operator, figures=dict(figures or {}), max_problem_points=max_problem_points
    )


def save_report_page(path: Union[str, Path], html: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(html, encoding="utf-8", newline="\n")
    return path

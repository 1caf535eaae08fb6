"""SummaryRenderer: Jinja2 templates for the human-readable stderr summary.

Each subcommand has a template named after it (``triples.jinja2``, ...);
the JSON report is the only context.  Failures use ``error.jinja2``.
"""

from __future__ import annotations

from pathlib import Path

import jinja2


class SummaryRenderer:
    """Render a command report as a short plain-text summary.

    Args:
        template_dir: optional override for the template directory.
            Defaults to ``templates/`` sibling of this module.
    """

    def __init__(self, template_dir: Path | None = None) -> None:
        if template_dir is None:
            template_dir = Path(__file__).parent / "templates"
        self._env = jinja2.Environment(
            loader=jinja2.FileSystemLoader(str(template_dir)),
            trim_blocks=True,
            lstrip_blocks=True,
            undefined=jinja2.StrictUndefined,
        )
        self._env.filters["rate"] = lambda v: f"{v:,.1f}" if v is not None else "n/a"

    def render(self, command: str, report: dict) -> str:
        name = command.replace("-", "_") + ".jinja2"
        return self._env.get_template(name).render(report=report).rstrip() + "\n"

    def render_error(self, command: str, report: dict) -> str:
        return self._env.get_template("error.jinja2").render(command=command, report=report).rstrip() + "\n"

"""Exact apartment geometry for masures.

Kac-Moody root data and Tits cone tests (`kmcore`), affine walls and
enclosures (`apartment`), folded piecewise-linear paths and their growth
laws (`heckepath`), two concrete building models that exercise the
apartment-intersection theorem (`models`), and JSON plumbing for the CLI
(`serialize`).
"""

__version__ = "0.1.0"

from . import apartment, heckepath, kmcore, models, serialize  # noqa: F401

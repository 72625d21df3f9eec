"""Exact classification toolkit for AF-actions of pointed fusion categories.

The pipeline: finite abelian group -> Q-systems and simple bimodules with an
exact fusion product -> enriched Bratteli diagrams -> K0 identifications and
multipliers (the pointed invariant) -> equivalence verdicts with witnesses.
"""

__version__ = "0.1.0"

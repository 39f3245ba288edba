"""Rank-two recurrence sets of polynomial triples: oracles, closed-form engines
and a semilinear-set kernel."""

__version__ = "0.1.0"

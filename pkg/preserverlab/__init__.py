"""Linear preservers of rank-k projections: construction, verification and recovery."""

__version__ = "1.0.0"

"""Newton-boundary invariants and critical-curve tests for mixed functions f*conj(g)."""

__version__ = "0.1.0"

ZETA_CONVENTION = "corner-positive-edge-negative"

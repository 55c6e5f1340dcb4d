"""Seed derivation helpers.

All randomness in a run flows from one 64-bit master seed.  Child seeds for
grid cells and campaign conditions come from a splitmix64 finalizer so that
independent runs never share a stream.
"""

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 finalization step (maps uint64 -> uint64)."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def child_seed(seed: int, index: int) -> int:
    """Deterministic per-index child of a master seed."""
    return splitmix64((seed + (index + 1) * _GOLDEN) & MASK64)

"""Counter-based deterministic random streams (splitmix-style hashing).

Every stochastic routine in the package draws through these primitives so
that results are reproducible and order-free: the draw for trial ``i`` in
context ``c`` depends only on ``(master_seed, i, c)``, never on evaluation
order.  The compiled and pure-python Monte-Carlo kernels implement exactly
the same integer pipeline; see ``qalab.kernels``.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# 2**-53: maps the top 53 bits of a draw to a double in [0, 1).
UNIT_SCALE = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """splitmix64 finalizer: bijective avalanche mix of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Per-trial (or per-substream) seed for trial ``index`` under ``master``."""
    return mix64((master + (index + 1) * GOLDEN) & MASK64)


def context_draw(seed: int, ctx_key: int) -> int:
    """64-bit draw for one (physical-state seed, context key) pair."""
    return mix64(((seed ^ ctx_key) + GOLDEN) & MASK64)


def unit_double(word: int) -> float:
    """Map a 64-bit word to a double in [0, 1)."""
    return (word >> 11) * UNIT_SCALE

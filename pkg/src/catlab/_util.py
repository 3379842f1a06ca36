import math

# Relative slack used when rounding real copy counts / ranks up to integers,
# so that values such as 2**10.000000000000002 still ceil to 1024.
CEIL_RTOL = 1e-9


def ceil_tol(x: float, rtol: float = CEIL_RTOL) -> int:
    """Ceiling that snaps values within ``rtol`` (relative) of an integer onto it."""
    if not math.isfinite(x):
        raise OverflowError(f"cannot take the ceiling of {x}")
    r = round(x)
    if abs(x - r) <= rtol * max(1.0, abs(x)):
        return int(r)
    return int(math.ceil(x))

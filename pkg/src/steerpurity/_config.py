"""Global numerical tolerances."""

# Hermiticity / trace / PSD checks and the strict-inequality decision.
TOLERANCE = 1e-9
# Exact arithmetic identities (trace preservation, basis orthonormality).
IDENTITY_TOLERANCE = 1e-12


def get_tolerance() -> float:
    return TOLERANCE


def set_tolerance(value: float) -> None:
    """Change the validation/decision tolerance used by every module."""
    global TOLERANCE
    if not value > 0:
        raise ValueError(f"tolerance must be positive, got {value!r}")
    TOLERANCE = float(value)

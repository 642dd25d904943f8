"""Exception types and small input-validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


class DomainError(ValueError):
    """Raised when an input violates a physical or numerical precondition."""


class ConfigError(ValueError):
    """Raised when a scenario configuration file is invalid."""


def require_positive(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


def require_nonnegative(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0.0:
        raise DomainError(f"{name} must be a nonnegative finite number, got {value!r}")
    return value


def require_state_params(alpha: float, beta: float) -> tuple[float, float]:
    """Validate the two-site initial-state parameters.

    The density matrix alpha |R><R| + (1-alpha) |L><L| + beta (|L><R| + h.c.)
    is a physical state iff 0 <= alpha <= 1, beta >= 0 (phase absorbed into the
    mode definition), and (alpha - 1/2)^2 + beta^2 <= 1/4.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"state requires 0 <= alpha <= 1, got alpha={alpha!r}")
    if beta < 0.0 or not np.isfinite(beta):
        raise DomainError(f"state requires beta >= 0, got beta={beta!r}")
    lhs = (alpha - 0.5) ** 2 + beta**2
    if lhs > 0.25 + 1e-12:
        raise DomainError(
            f"state constraint violated: (alpha-1/2)^2 + beta^2 = {lhs:.6g} > 1/4"
        )
    return alpha, beta


def require_finite_field(name: str, values: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{name} contains non-finite values")
    return values

"""Exception types shared across the package."""


class InfeasibleScheme(ValueError):
    """Censoring design violates a feasibility constraint."""


class DimensionMismatch(ValueError):
    """Sample length does not match the censoring design."""


class NonPositiveParams(ValueError):
    """Exponential means must be strictly positive."""


class InvalidScale(ValueError):
    """Hypoexponential component scales must be strictly positive."""


class OracleTooLarge(ValueError):
    """Brute-force enumeration requested for an infeasibly large design."""


class DegenerateConditioning(ArithmeticError):
    """The event {1 <= m_k <= k-1} has (numerically) zero probability."""


class InsufficientSurvivors(RuntimeError):
    """A withdrawal requested more units than remain on test."""


class MleDoesNotExist(ValueError):
    """Both estimators exist only when the failure counts of both
    populations are nonzero, i.e. 1 <= m_k <= k-1."""

    def __init__(self, m_k: int, k: int):
        self.m_k = m_k
        self.k = k
        super().__init__(
            f"MLE does not exist: m_k={m_k} with k={k} "
            f"(need 1 <= m_k <= k-1)"
        )

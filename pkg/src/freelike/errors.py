"""Shared exception types."""


class BudgetExceeded(RuntimeError):
    """A configured enumeration/vertex/tuple budget was exceeded."""


class UnverifiedPresentationError(ValueError):
    """Operation requires a presentation with verified C'(lambda), lambda <= 1/6."""


class CPrimeViolation(ValueError):
    """Raised when verification finds a C'(lambda) violation."""

    def __init__(self, r, r_prime, lcp, lam):
        self.r = r
        self.r_prime = r_prime
        self.lcp = lcp
        self.lam = lam
        super().__init__(
            f"C'({lam}) violated: |lcp({r}, {r_prime})| = {lcp} "
            f">= {lam} * {min(len(r), len(r_prime))}"
        )


class NonBracketingError(ValueError):
    """Threshold target lies outside the crossing probabilities at p=0 and p=1."""

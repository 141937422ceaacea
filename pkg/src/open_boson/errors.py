"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class TruncationError(DomainError):
    """The Fock basis is too small for the requested occupation."""

    def __init__(self, message: str, required_dim: int):
        super().__init__(f"{message} (required dim >= {required_dim})")
        self.required_dim = required_dim


class StabilityError(DomainError):
    """A time step violates the integrator's stability/accuracy guard."""

    def __init__(self, message: str, proposed_dt: float):
        super().__init__(f"{message}; try dt <= {proposed_dt:.6g}")
        self.proposed_dt = proposed_dt


class ConvergenceError(RuntimeError):
    """An iterative procedure stopped before meeting its tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual

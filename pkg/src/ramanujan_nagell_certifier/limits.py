"""Work budgets shared by every budgeted computation."""

from pydantic import BaseModel, ConfigDict, Field

from ramanujan_nagell_certifier import constants


class Limits(BaseModel):
    """Upper bounds on the work a single call may do.

    Attributes:
        trial_division_limit: Largest trial divisor tried before Pollard rho.
        rho_iterations: Iterations per Pollard rho attempt.
        rho_attempts: Number of rho attempts (distinct constants) per composite.
        max_cf_period: Longest continued-fraction period expanded for Pell.
        max_form_candidates: Largest (a, b) grid searched for reduced forms.
        max_fundamental_scan: Largest Y1 range scanned for fundamental solutions.
        max_sandwich_threshold: Largest Y0 below which the sandwich scan runs.
        density_prime_cutoff: Prime bound for the density partial product.
        threads: Worker threads for sweeps and fixture suites.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    trial_division_limit: int = Field(default=constants.TRIAL_DIVISION_LIMIT, ge=2)
    rho_iterations: int = Field(default=constants.RHO_ITERATIONS, ge=1)
    rho_attempts: int = Field(default=constants.RHO_ATTEMPTS, ge=0)
    max_cf_period: int = Field(default=constants.MAX_CF_PERIOD, ge=1)
    max_form_candidates: int = Field(default=constants.MAX_FORM_CANDIDATES, ge=1)
    max_fundamental_scan: int = Field(default=constants.MAX_FUNDAMENTAL_SCAN, ge=1)
    max_sandwich_threshold: int = Field(
        default=constants.MAX_SANDWICH_THRESHOLD,
        ge=1,
    )
    density_prime_cutoff: int = Field(default=constants.DENSITY_PRIME_CUTOFF, ge=2)
    threads: int = Field(default=1, ge=1)


DEFAULT_LIMITS = Limits()

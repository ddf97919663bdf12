"""Exception types shared across the package."""


class SingularMu(Exception):
    """Adiabatic parameter passed below the configured floor; the Rabi
    frequency diverges there and no protocol quantity is defined."""


class StepSizeUnderflow(Exception):
    """Adaptive integrator could not meet its tolerances (typically
    stiffness as mu approaches zero)."""


class NotNormalized(Exception):
    """Spinor norm deviates from 1 beyond tolerance."""


class DegenerateHamiltonian(Exception):
    """Two-level Hamiltonian has no spectral gap; ground state undefined."""


class NotEigenstate(Exception):
    """Initial vector is not an energy eigenstate (nonzero coherence
    components) where one is required."""


class ComplexResidue(Exception):
    """An analytically real reconstruction came back with imaginary parts
    above tolerance; signals an internal phase/conjugation bug."""


class GridMismatch(Exception):
    """Two trajectories do not share the same time grid."""


class ZeroInitialEnergy(Exception):
    """Initial energy expectation is (numerically) zero; the normalized
    energy trace is undefined."""


class DegenerateInput(Exception):
    """Input data insufficient or degenerate for the requested fit."""

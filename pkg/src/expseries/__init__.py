"""Certified analyticity machinery for exponential sums, applied to
approximate controllability and moment-method control of the 1D heat
equation.

The package splits into two layers:

* series machinery: :mod:`expseries.series` (exponential sums with certified
  tail bounds), :mod:`expseries.taylor` (re-expansion with explicit remainder
  certificates), :mod:`expseries.uniqueness` (vanishing tests and coefficient
  peeling), :mod:`expseries.exact` (exact rational-plus-irrational endpoint
  arithmetic);

* heat application: :mod:`expseries.heat` (spectrum, actuator overlaps,
  controllability verdicts), :mod:`expseries.control` (moment-method
  synthesis), :mod:`expseries.simulate` (independent modal simulator).

A command-line interface is available as ``expseries`` (see
:mod:`expseries.cli`).
"""

from .exact import ExactReal
from .series import DirichletSeries, SeriesValue, TailModel
from .taylor import RemainderCertificate, TaylorExpansion
from .uniqueness import PeelResult, SampledSignal, SeparationWarning
from .heat import Actuator, ControllabilityReport
from .control import (
    BlockedModeError,
    ConditioningError,
    ConditioningWarning,
    ControlFunction,
    MomentProblem,
    SpectralState,
)
from .simulate import Trajectory

__version__ = "0.1.0"

__all__ = [
    "Actuator",
    "BlockedModeError",
    "ConditioningError",
    "ConditioningWarning",
    "ControlFunction",
    "ControllabilityReport",
    "DirichletSeries",
    "ExactReal",
    "MomentProblem",
    "PeelResult",
    "RemainderCertificate",
    "SampledSignal",
    "SeparationWarning",
    "SeriesValue",
    "SpectralState",
    "TailModel",
    "TaylorExpansion",
    "Trajectory",
    "__version__",
]

"""Pseudo-hermitian many-body Hamiltonians built by isospectral deformation.

Submodules: :mod:`~pseudoherm.linop` (dense operator algebra),
:mod:`~pseudoherm.metric` (metrics and dressing),
:mod:`~pseudoherm.spin_chain`, :mod:`~pseudoherm.calogero`,
:mod:`~pseudoherm.evolution`, :mod:`~pseudoherm.config` /
:mod:`~pseudoherm.report` / :mod:`~pseudoherm.cli` (validation runs).
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CapacityError,
    ConfigError,
    DefinitenessError,
    NumericError,
    SingularityError,
    UsageError,
    WorkbenchError,
)
from .linop import Spectrum  # noqa: E402
from .metric import Metric  # noqa: E402

__all__ = [
    "CapacityError",
    "ConfigError",
    "DefinitenessError",
    "Metric",
    "NumericError",
    "SingularityError",
    "Spectrum",
    "UsageError",
    "WorkbenchError",
    "__version__",
]

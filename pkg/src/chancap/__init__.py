"""Time-dependent capacities of exactly solvable qubit channels.

The package is organised bottom-up:

``qmath``
    small dense linear algebra / entropy toolkit for 2x2 and 4x4
    Hermitian matrices (states, Kraus maps, partial trace, purification).
``dynamics``
    the scalar decoherence functions that drive the channels: the
    dephasing exponent for Ohmic-family reservoirs and the complex
    excited-state amplitude for amplitude damping, including a Volterra
    memory-kernel solver for structured reservoirs.
``channels``
    fixed-time snapshots of the dephasing and amplitude damping maps,
    their Kraus and complementary forms, and the degradability test.
``capacities``
    quantum capacity Q and entanglement-assisted capacity C_ea for the
    snapshots, plus entropy-route cross checks and time curves.
``measures``
    non-Markovianity quantifiers built from the positive variation of
    capacity curves, a rate-sign divisibility witness, and a lower
    bound on the mutual-information measure.
``cli``
    configuration-driven command line front end (CSV + figure output).
"""

from chancap.grids import TimeGrid
from chancap.errors import ChancapError, ConfigError, NumericalError, StepSizeError

__all__ = [
    "TimeGrid",
    "ChancapError",
    "ConfigError",
    "NumericalError",
    "StepSizeError",
    "__version__",
]

__version__ = "0.1.0"

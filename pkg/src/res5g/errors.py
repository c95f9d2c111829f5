"""Exception types raised by the simulator.

Everything derives from ValueError (bad input) or RuntimeError (bad state)
so callers that do not care about the distinction can catch broadly.
"""


class InvalidGeometryError(ValueError):
    """Site geometry makes an altitude correction ill-defined (e.g. the
    reference level sits below the surface roughness length)."""


class InconsistentWeatherError(ValueError):
    """Weather inputs are physically inconsistent, e.g. the saturation
    vapor pressure exceeds the total air pressure."""


class CoherenceLoadError(ValueError):
    """A cell load requests more pilot samples than one coherence block
    can hold."""


class DegenerateDenominatorError(ValueError):
    """A module cell-temperature configuration makes the shared
    denominator of the temperature correction non-positive."""


class DemandUnservableError(ValueError):
    """No modulation/coding table row can carry the requested bit rate
    within the cell's usable bandwidth."""


class ScenarioParseError(ValueError):
    """The scenario document could not be parsed at all."""


class ScenarioValidationError(ValueError):
    """A parsed scenario violates a constraint; the message names the
    offending field."""


class WeatherTraceError(ValueError):
    """A weather table is malformed: missing steps, non-monotone step
    indices, or out-of-range values."""


class PlacementExhaustedError(RuntimeError):
    """Rejection sampling could not place users outside the building
    footprints within the attempt budget."""

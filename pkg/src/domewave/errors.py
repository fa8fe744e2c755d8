"""Exception types shared across the package."""


class DomewaveError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(DomewaveError, ValueError):
    """A parameter or configuration field violates its documented range.

    ``field`` carries a dotted path (e.g. ``geometry.thickness_T``) when the
    error originates from a configuration file.
    """

    def __init__(self, message, field=""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ParseError(DomewaveError):
    """Configuration file is not syntactically valid JSON."""

    def __init__(self, message, line=0, column=0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


# --- dome mechanics ---

class NegativeRadicand(DomewaveError):
    """Drive pushes the dome-height radical negative (model invalid there)."""


class OutOfDome(DomewaveError):
    """Radial coordinate outside the dome aperture."""


# --- resonance ---

class NoRootInBracket(DomewaveError):
    """Characteristic equation has no sign change in the scanned range."""


# --- acoustic field ---

class PitchTooSmall(DomewaveError):
    """Requested grid pitch would overlap neighbouring domes."""


class SingularDistance(DomewaveError):
    """Observation point coincides with a source location."""


class ZeroPressure(DomewaveError):
    """SPL of a zero-magnitude pressure is undefined."""


class TargetUnreachable(DomewaveError):
    """Calibration target lies outside the bisection bracket."""


# --- communication link ---

class PayloadTooLarge(DomewaveError):
    """Payload exceeds the 16-bit length field (65535 bytes)."""


class CrcMismatch(DomewaveError):
    """Frame checksum failed; ``payload`` holds the damaged bytes."""

    def __init__(self, message, payload=b""):
        self.payload = payload
        super().__init__(message)


class PreambleNotFound(DomewaveError):
    """Synchronisation word not detected in the received stream."""


class WaveformTooShort(DomewaveError):
    """Waveform shorter than one analysis window."""


class LengthMismatch(DomewaveError):
    """Bit sequences being compared have different lengths."""

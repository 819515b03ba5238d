"""
Custom exception classes for better error handling.
"""
from typing import Iterable


class LabBaseException(Exception):
    """Base exception for all lab errors"""
    pass


class ConfigurationError(LabBaseException):
    """Settings or experiment spec could not be used"""
    pass


class UnknownNameError(ConfigurationError):
    """A function or algorithm name is not registered"""

    def __init__(self, kind: str, name: str, valid: Iterable[str]):
        self.kind = kind
        self.name = name
        self.valid = sorted(valid)
        super().__init__(
            f"Unknown {kind} '{name}'. Valid values: {', '.join(self.valid)}"
        )


class DimensionError(LabBaseException):
    """Point does not match the problem dimension"""
    pass


class SwarmSizeError(LabBaseException):
    """Operation needs more particles than the swarm has"""
    pass


class NeighborCountError(SwarmSizeError):
    """Requested neighbor count is not below the swarm size"""
    pass


class DegenerateDistanceError(LabBaseException):
    """Scoring was asked for two coincident points"""
    pass


class CatalogError(LabBaseException):
    """Optima catalog missing, stale or unreadable"""
    pass


class OutputDirectoryError(LabBaseException):
    """Experiment artifacts could not be written"""
    pass


class DenominatorError(ConfigurationError):
    """Peak-ratio denominator is smaller than the counts it must bound"""
    pass

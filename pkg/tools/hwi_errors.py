#!/usr/bin/env python3
"""Exception types shared by the hwi_* tools."""

from typing import Any, Dict, Optional


class HwiError(Exception):
    """Base class for every error raised by the hwi_* modules."""


class DimensionError(HwiError):
    """Shape mismatch between operands, or a dimension the operation does not support."""


class DegreeError(HwiError):
    """Bidegree precondition violated (contraction of degree 0, 2q > n, ...)."""


class CurvatureError(HwiError):
    """Double form rejected as a curvature tensor."""

    def __init__(self, message: str, defect: Optional[Any] = None):
        super().__init__(message)
        self.defect = defect


class InvariantMismatchError(HwiError):
    """Two independent routes to the same invariant disagree."""

    def __init__(self, message: str, values: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.values = values or {}


class ModelError(HwiError):
    """Invalid generator parameters."""


class FrameError(HwiError):
    """Vectors or planes that should be orthonormal are not."""


class NeckError(HwiError):
    """Neck parameters outside the range the formulas are stated for."""


class TensorFileError(HwiError):
    """Malformed tensor JSON file or generator spec string."""


class ConfigError(HwiError):
    """Unreadable or ill-typed settings file or environment value."""

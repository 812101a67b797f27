"""Dynamics of transcendental entire functions: escaping sets, logarithmic
area of criterion sets, Poincaré functions and Weierstraß σ."""
from .errors import (ConfigError, ConvergenceError, DomainError, EntireDynError, PoleError,
                     PreconditionError, ResidualError, RootFindingError)
from .extreal import ExtReal
from .functions import (ExpSum, FunctionSpec, Overflow, Poincare, PolySin, Sigma,
                        format_function, max_modulus, parse_function)
from .polynomial import PolynomialSpec

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConvergenceError", "DomainError", "EntireDynError", "PoleError",
    "PreconditionError", "ResidualError", "RootFindingError", "ExtReal", "ExpSum",
    "FunctionSpec", "Overflow", "Poincare", "PolySin", "Sigma", "PolynomialSpec",
    "format_function", "max_modulus", "parse_function",
]

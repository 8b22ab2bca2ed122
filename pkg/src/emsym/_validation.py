"""Argument checks shared by the estimators and the command line."""

from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .fields.spec import FieldSpec
from .liealg import EquivGenerator, SymGenerator


def check_positive(name: str, value, allow_zero: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    v = float(value)
    if not np.isfinite(v) or v < 0 or (v == 0 and not allow_zero):
        raise ValueError(f"{name} must be {'non-negative' if allow_zero else 'positive'}, got {value!r}")
    return v


def check_int(name: str, value, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_choice(name: str, value, choices: Sequence) -> Any:
    if value not in choices:
        raise ValueError(f"{name} must be one of {list(choices)}, got {value!r}")
    return value


def check_fields(X) -> list[FieldSpec]:
    """A FieldSpec or a sequence of them, as a list."""
    if isinstance(X, FieldSpec):
        return [X]
    try:
        items = list(X)
    except TypeError:
        raise TypeError("expected a FieldSpec or a sequence of FieldSpecs") from None
    if not items:
        raise ValueError("no fields given")
    for i, f in enumerate(items):
        if not isinstance(f, FieldSpec):
            raise TypeError(f"item {i} is {type(f).__name__}, not FieldSpec")
    return items


def _as_generator(item) -> EquivGenerator:
    if isinstance(item, EquivGenerator):
        return item
    if isinstance(item, SymGenerator):
        return EquivGenerator(tuple(item.c) + (0,))
    if isinstance(item, (dict, str)):
        return EquivGenerator.from_json(item)
    arr = list(item)
    if len(arr) == 8:
        arr = arr + [0]
    if len(arr) != 9:
        raise ValueError(f"a generator needs 8 or 9 coefficients, got {len(arr)}")
    return EquivGenerator(tuple(v if isinstance(v, (int, Fraction)) else float(v) for v in arr))


def check_generators(X) -> list[EquivGenerator]:
    """Generators from objects, JSON, or rows of an (n, 8|9) array."""
    if isinstance(X, (EquivGenerator, SymGenerator, dict, str)):
        return [_as_generator(X)]
    if isinstance(X, np.ndarray):
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] not in (8, 9):
            raise ValueError(f"generator array must have shape (n, 8) or (n, 9), got {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("generator coefficients must be finite")
    items = [_as_generator(x) for x in X]
    if not items:
        raise ValueError("no generators given")
    return items


def check_bases(X) -> list[np.ndarray]:
    """Row bases (k, 8) of detected spans."""
    if isinstance(X, np.ndarray) and X.ndim == 2:
        X = [X]
    out = []
    for i, b in enumerate(X):
        b = np.atleast_2d(np.asarray(b, dtype=float))
        if b.size and b.shape[1] != 8:
            raise ValueError(f"basis {i} must have 8 columns, got {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValueError(f"basis {i} has non-finite entries")
        out.append(b.reshape(-1, 8))
    return out

"""Derived lattice data shared by the immersion and quotient machinery.

The torus factor of the construction is R^m modulo twice the dual lattice;
this module caches the exact lattice bases per exponent matrix and exposes
float-valued period boxes, reductions and the exact sign vectors of the
coset action.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .lattice import (
    ExponentMatrix,
    GammaGroup,
    LatticeBasis,
    dual_basis,
    gamma_representatives,
    lattice_basis_from_generators,
    pairing_parity,
)


@lru_cache(maxsize=None)
def lattice_data(exponents: ExponentMatrix) -> tuple[LatticeBasis, LatticeBasis, GammaGroup]:
    """(basis of L, basis of L*, coset group L*/2L*) for the row lattice."""
    basis = lattice_basis_from_generators(exponents)
    dual = dual_basis(basis)
    return basis, dual, gamma_representatives(dual)


def gamma_group(exponents: ExponentMatrix) -> GammaGroup:
    return lattice_data(exponents)[2]


def torus_box(exponents: ExponentMatrix) -> np.ndarray:
    """Rows spanning the torus period box: twice the dual basis, as floats."""
    _, dual, _ = lattice_data(exponents)
    return 2.0 * dual.as_float_array()


def torus_coordinates(exponents: ExponentMatrix, y: Sequence[float]) -> np.ndarray:
    """Coordinates of y in the period box basis (integer iff y is a period).

    With B the primal basis rows, the coordinate of y along the i-th box
    vector is (y, b_i)/2, so membership in 2L* is an exact half-integer
    statement evaluated here in floats.
    """
    basis, _, _ = lattice_data(exponents)
    B = basis.as_float_array()
    return 0.5 * (B @ np.asarray(y, dtype=float))


def torus_distance(exponents: ExponentMatrix, dy: Sequence[float]) -> float:
    """Euclidean distance from dy to the nearest torus period."""
    c = torus_coordinates(exponents, dy)
    frac = c - np.round(c)
    return float(np.linalg.norm(frac @ torus_box(exponents)))


def torus_reduce(exponents: ExponentMatrix, y: Sequence[float]) -> np.ndarray:
    """Representative of y inside the fundamental period box [0,1)^m."""
    c = torus_coordinates(exponents, y)
    return (c - np.floor(c)) @ torus_box(exponents)


def gamma_signs(exponents: ExponentMatrix, gamma: Sequence) -> np.ndarray:
    """The exact sign vector (+-1)^n of a coset representative.

    Component i is cos(pi * (e_i, gamma)) evaluated through integer parity,
    never through floating cosine.
    """
    return np.array(
        [1 - 2 * pairing_parity(gamma, row) for row in exponents.rows],
        dtype=float,
    )


def gamma_float(gamma: Sequence) -> np.ndarray:
    return np.array([float(g) for g in gamma])

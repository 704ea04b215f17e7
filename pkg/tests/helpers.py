"""Shared builders for the measure/operator catalog used across tests."""

from __future__ import annotations

import numpy as np

from momentspectra import (
    HankelMomentOperator,
    TerracedOperator,
    WeightSequence,
    moments,
    parse_measure,
)

CATALOG_MEASURES = {
    "lebesgue": "lebesgue",
    "power-0.5": "power(0.5)",
    "power-2": "power(2)",
    "delta0-plus-half-lebesgue": "dirac(0)+0.5*lebesgue",
}


def measure_moments(text: str, n_terms: int):
    return moments(parse_measure(text), n_terms)


def terraced_from_measure(text: str, dim: int) -> TerracedOperator:
    ms = measure_moments(text, dim)
    return TerracedOperator(WeightSequence.from_moments(ms), dim)


def hankel_from_measure(text: str, dim: int) -> HankelMomentOperator:
    ms = measure_moments(text, 2 * dim - 1)
    return HankelMomentOperator.from_moments(ms, dim)


def rhp_catalog_matrices(dim: int) -> dict[str, np.ndarray]:
    """Dense matrices whose numerical range should sit in the closed right
    half-plane: terraced operators of the measure catalog plus the Hilbert
    matrix and a rank-one Hankel example."""
    matrices = {
        name: terraced_from_measure(text, dim).dense()
        for name, text in CATALOG_MEASURES.items()
    }
    matrices["hilbert"] = hankel_from_measure("lebesgue", dim).dense()
    matrices["hankel-dirac-0.5"] = hankel_from_measure("dirac(0.5)", dim).dense()
    return matrices


def random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)

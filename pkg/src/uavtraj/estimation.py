"""Estimation error as a function of how many sensors were heard."""

from __future__ import annotations

from .model import EstimationParams


class NoDataCollectedError(ValueError):
    """MSE is unbounded when no sensor reading reached the UAV."""


def quantization_step(params: EstimationParams) -> float:
    return 2.0 * params.W / (2 ** int(params.S) - 1)


def quantization_noise(params: EstimationParams) -> float:
    """Variance of the uniform quantizer's error, step**2 / 12."""
    return quantization_step(params) ** 2 / 12.0


def mse(params: EstimationParams, K: int) -> float:
    """Mean square error of the fused estimate from ``K`` equal-quality sensors.

    Every sensor contributes variance ``sigma2 + W**2 / (3 (2**S - 1)**2)``
    and the linear fusion averages them, so the error falls as 1/K.
    """
    if K < 1:
        raise NoDataCollectedError("no data collected: MSE is unbounded for K = 0")
    return (params.sigma2 + quantization_noise(params)) / K

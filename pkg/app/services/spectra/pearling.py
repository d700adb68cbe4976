import numpy as np

from app.models.spectra import PearlingPrediction
from app.utils.exceptions import ParameterError


def laplace_beltrami_rate(geometry: str, size: float) -> float:
    """c with beta_k = -(c k)^2: 1/R on a circle, 2 pi / l along a flat periodic direction."""
    if size <= 0:
        raise ParameterError(f"geometry size must be positive, got {size}")
    if geometry == "circle":
        return 1.0 / size
    if geometry == "flat":
        return 2.0 * np.pi / size
    raise ParameterError(f"unknown geometry {geometry!r}; expected 'circle' or 'flat'")


def pearling_predictor(lambdas, epsilon: float, geometry: str, size: float, tol: float = 1.0) -> list[PearlingPrediction]:
    """
    For each eigenvalue lambda >= 0: k* solving lambda + eps^2 beta_k = 0 and
    the integer modes with |lambda + eps^2 beta_k| <= tol sqrt(eps).
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    rate = laplace_beltrami_rate(geometry, size)
    out = []
    for lam in np.atleast_1d(np.asarray(lambdas, dtype=float)):
        if lam < 0:
            raise ParameterError(f"only nonnegative eigenvalues can pearl, got {lam}")
        k_star = float(np.sqrt(lam) / (epsilon * rate))
        window = tol * np.sqrt(epsilon)
        k_max = int(np.ceil(np.sqrt(lam + window) / (epsilon * rate))) + 1
        ks = np.arange(0, k_max + 1)
        mismatch = np.abs(lam - (epsilon * rate * ks) ** 2)
        out.append(PearlingPrediction(eigenvalue=float(lam), k_star=k_star, modes=ks[mismatch <= window].tolist()))
    return out

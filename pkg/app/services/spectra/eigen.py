import logging
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from app.core.config import settings
from app.models.spectra import EigenResult
from app.services.spectra.linearization import Linearization
from app.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)


def _gershgorin_upper(matrix) -> float:
    diag = matrix.diagonal()
    off = np.asarray(abs(matrix).sum(axis=1)).ravel() - np.abs(diag)
    return float(np.max(diag + off))


def _dense_top(op: Linearization, k: int):
    m = op.size
    values, vectors = scipy.linalg.eigh(op.matrix.toarray(), subset_by_index=[m - k, m - 1])
    return values, vectors


def eigen_top(op: Linearization, k: int, dense_cutoff: Optional[int] = None) -> EigenResult:
    """
    k largest eigenpairs of a symmetric grid operator.

    Dense LAPACK up to `dense_cutoff` unknowns, shift-invert Lanczos above it
    with the shift at a Gershgorin upper bound; falls back to dense when the
    iterative path fails.
    """
    cutoff = settings.MFCH_DENSE_EIG_CUTOFF if dense_cutoff is None else dense_cutoff
    m = op.size
    if not 1 <= k < m:
        raise ParameterError(f"k must lie in [1, {m - 1}], got {k}")

    method = "dense"
    if m <= cutoff:
        values, vectors = _dense_top(op, k)
    else:
        shift = _gershgorin_upper(op.matrix) + 1.0
        try:
            values, vectors = eigsh(op.matrix, k=k, sigma=shift, which="LM", tol=1e-12)
            method = "shift-invert"
        except (ArpackNoConvergence, ArpackError) as exc:
            logger.warning("shift-invert eigensolve failed (%s); falling back to dense", exc)
            values, vectors = _dense_top(op, k)
            method = "dense-fallback"

    order = np.argsort(values)[::-1]
    values = np.real(values[order])
    vectors = np.real(vectors[:, order])
    # fix the sign convention: largest-magnitude entry positive
    idx = np.argmax(np.abs(vectors), axis=0)
    vectors = vectors * np.sign(vectors[idx, np.arange(vectors.shape[1])])[None, :]
    logger.debug("eigen_top: %d unknowns, method %s, top %.6g", m, method, values[0])
    return EigenResult(values=values, vectors=vectors, method=method)

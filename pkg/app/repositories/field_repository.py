import logging
from pathlib import Path
from typing import Union

import numpy as np

from app.models.interface import FieldState
from app.schemas.model_schema import ModelParams
from app.utils.exceptions import InvalidStateError

logger = logging.getLogger(__name__)

MAGIC = b"MFCH"
VERSION = 1


class FieldRepository:
    """
    Raw binary fields: magic "MFCH", u32 version, u32 N, u32 ndim, u32 dims[ndim],
    f64 lengths[ndim], then N row-major little-endian f64 components.
    PGM snapshots hold one 8-bit grayscale image per component.
    """

    # -------------------------------------------------
    # BINARY FIELD
    # -------------------------------------------------
    def write(self, path: Union[str, Path], state: FieldState) -> Path:
        path = Path(path)
        dims = np.asarray(state.shape, dtype="<u4")
        header = np.asarray([VERSION, state.N, dims.size], dtype="<u4")
        with path.open("wb") as fh:
            fh.write(MAGIC)
            fh.write(header.tobytes())
            fh.write(dims.tobytes())
            fh.write(np.asarray(state.lengths, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(state.u, dtype="<f8").tobytes())
        return path

    def read(self, path: Union[str, Path], params: ModelParams, time: float = 0.0) -> FieldState:
        blob = Path(path).read_bytes()
        if blob[:4] != MAGIC:
            raise InvalidStateError(f"{path}: not an MFCH field file")
        version, N, ndim = np.frombuffer(blob, dtype="<u4", count=3, offset=4)
        if version != VERSION:
            raise InvalidStateError(f"{path}: unsupported field version {version}")
        offset = 16
        dims = tuple(int(d) for d in np.frombuffer(blob, dtype="<u4", count=ndim, offset=offset))
        offset += 4 * int(ndim)
        lengths = tuple(float(L) for L in np.frombuffer(blob, dtype="<f8", count=ndim, offset=offset))
        offset += 8 * int(ndim)
        count = int(N) * int(np.prod(dims))
        if len(blob) - offset != 8 * count:
            raise InvalidStateError(f"{path}: payload holds {len(blob) - offset} bytes, expected {8 * count}")
        u = np.frombuffer(blob, dtype="<f8", count=count, offset=offset).reshape((int(N),) + dims).astype(float)
        if not np.all(np.isfinite(u)):
            raise InvalidStateError(f"{path}: field contains non-finite values")
        return FieldState(u=u, lengths=lengths, params=params, time=time)

    # -------------------------------------------------
    # PGM
    # -------------------------------------------------
    def write_pgm(self, path: Union[str, Path], image: np.ndarray) -> Path:
        """x along columns, y upward; values scaled linearly to 0..255."""
        path = Path(path)
        img = np.asarray(image, dtype=float).T[::-1]
        lo, hi = float(np.min(img)), float(np.max(img))
        scaled = np.zeros(img.shape) if hi <= lo else (img - lo) / (hi - lo)
        pixels = np.round(255.0 * scaled).astype(np.uint8)
        height, width = pixels.shape
        with path.open("wb") as fh:
            fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
            fh.write(pixels.tobytes())
        return path

    def write_snapshot(self, directory: Union[str, Path], stem: str, state: FieldState) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = [self.write(directory / f"{stem}.mfch", state)]
        for c in range(state.N):
            paths.append(self.write_pgm(directory / f"{stem}_u{c + 1}.pgm", state.u[c]))
        return paths

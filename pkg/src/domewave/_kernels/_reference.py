"""Pure-NumPy field kernel, used when the compiled extension is absent.

``np.sum`` performs pairwise accumulation, so results are deterministic and
accurate to well below the 1e-12 relative tolerance the field module
guarantees. Points are processed in chunks to bound the distance-matrix
memory at roughly 64 MB.
"""

import numpy as np

_CHUNK_ELEMS = 4_000_000


def pressure_sum(sources, w_re, w_im, points, wavenumber):
    """Sum of w_n * exp(i*k*d_n)/d_n over sources, for each observation point.

    sources: (N, 3) float64, w_re/w_im: (N,) float64, points: (M, 3) float64.
    Returns complex128 array of shape (M,). Raises ValueError on a zero
    source-observer distance.
    """
    sources = np.ascontiguousarray(sources, dtype=np.float64)
    points = np.ascontiguousarray(points, dtype=np.float64)
    weights = np.asarray(w_re, dtype=np.float64) + 1j * np.asarray(w_im, dtype=np.float64)
    n_src = sources.shape[0]
    n_pts = points.shape[0]
    out = np.empty(n_pts, dtype=np.complex128)
    chunk = max(1, _CHUNK_ELEMS // max(n_src, 1))
    for start in range(0, n_pts, chunk):
        block = points[start:start + chunk]
        diff = block[:, None, :] - sources[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=2))
        if np.any(dist == 0.0):
            raise ValueError("zero source-observer distance")
        out[start:start + chunk] = np.sum(
            weights[None, :] * np.exp(1j * wavenumber * dist) / dist, axis=1
        )
    return out

"""Seeded random inputs for the property suites.

Every trial draws from its own counter-based stream (Philox keyed by a
hash of the seed and a trial label), so a violation can be replayed from
its label alone and trials may run in any order.
"""

from __future__ import annotations

import hashlib
from typing import Tuple

import numpy as np


def substream(seed: int, *label) -> np.random.Generator:
    """Independent generator for ``(seed, *label)``."""
    text = repr((int(seed),) + tuple(label)).encode("utf-8")
    key = int.from_bytes(hashlib.blake2b(text, digest_size=16).digest(), "little")
    return np.random.Generator(np.random.Philox(key=key))


def sample_distribution(N: int, rng: np.random.Generator, floor: float = 0.0) -> np.ndarray:
    """Uniform draw from the probability simplex on ``N`` points.

    Normalized exponential spacings.  With ``floor > 0`` the draw is mixed
    as ``floor + (1 - N floor) p`` so every entry is at least ``floor``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if not 0 <= floor * N <= 1:
        raise ValueError("floor * N must lie in [0, 1]")
    e = rng.standard_exponential(N)
    p = e / e.sum()
    if floor > 0:
        p = floor + (1 - N * floor) * p
    return p


def sample_density(d: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """``G G* / tr(G G*)`` with ``G`` a complex Gaussian ``d x rank`` matrix."""
    if not 1 <= rank <= d:
        raise ValueError("rank must lie in [1, d]")
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = G @ G.conj().T
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def sample_density_pair(d: int, rng: np.random.Generator, mode: str = "any") -> Tuple[np.ndarray, np.ndarray]:
    """A pair of density operators drawn in one of several regimes.

    ``independent``: two full-rank Ginibre states; ``close``: the second is
    a small mixture towards an independent state (probes small trace
    distances); ``commuting``: both diagonal in a common random basis;
    ``low-rank``: random ranks including pure states.  ``any`` picks one of
    these at random.
    """
    modes = ("independent", "close", "commuting", "low-rank")
    if mode == "any":
        mode = modes[rng.integers(len(modes))]
    if mode == "independent":
        return sample_density(d, d, rng), sample_density(d, d, rng)
    if mode == "close":
        rho = sample_density(d, d, rng)
        t = 10.0 ** rng.uniform(-4, 0)
        return rho, (1 - t) * rho + t * sample_density(d, d, rng)
    if mode == "commuting":
        U = haar_unitary(d, rng)
        p, q = sample_distribution(d, rng), sample_distribution(d, rng)
        return (U * p) @ U.conj().T, (U * q) @ U.conj().T
    if mode == "low-rank":
        r1, r2 = rng.integers(1, d + 1, size=2)
        return sample_density(d, int(r1), rng), sample_density(d, int(r2), rng)
    raise ValueError(f"unknown mode {mode!r}")


def sample_full_rank_pair(d: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    mode = ("independent", "close", "commuting")[rng.integers(3)]
    return sample_density_pair(d, rng, mode)


def sample_joint(N: int, rng: np.random.Generator, mode: str = "any") -> np.ndarray:
    """Joint distribution ``J[x, y]`` on an ``N x N`` alphabet.

    ``uniform``: uniform on the simplex of all cells; ``fano``: Y uniform-ish,
    X equal to Y except with a random error spread evenly (the regime where
    the Fano bound is tight); ``coupling``: maximal coupling of two random
    marginals; ``diagonal-heavy``: a mixture of a diagonal and a uniform draw.
    """
    modes = ("uniform", "fano", "coupling", "diagonal-heavy")
    if mode == "any":
        mode = modes[rng.integers(len(modes))]
    if mode == "uniform":
        return sample_distribution(N * N, rng).reshape(N, N)
    if mode == "fano":
        pY = sample_distribution(N, rng)
        pe = rng.uniform()
        cond = np.full((N, N), pe / (N - 1))
        np.fill_diagonal(cond, 1 - pe)
        return cond * pY[None, :]
    if mode == "coupling":
        from ..classical import maximal_coupling

        return maximal_coupling(sample_distribution(N, rng), sample_distribution(N, rng))
    if mode == "diagonal-heavy":
        t = rng.uniform()
        diag = np.diag(sample_distribution(N, rng))
        return (1 - t) * diag + t * sample_distribution(N * N, rng).reshape(N, N)
    raise ValueError(f"unknown mode {mode!r}")

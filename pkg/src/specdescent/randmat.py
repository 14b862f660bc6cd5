"""Seedable generation of random matrices and data clouds.

Streams are derived, not shared: every call hashes (master seed, purpose
tag, indices) into a 64-bit token that seeds a fresh PCG64 generator, so
repeated calls reproduce bit-identically and parallel trials never
couple. Normal variates use numpy's ziggurat sampler; sequences are
fixed per numpy version, cross-version bit stability is not promised.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeError

# keeps a single matrix under ~1.6 GB of float64
MAX_ELEMENTS = 200_000_000


@dataclass(frozen=True)
class Seed:
    """Master seed from which per-(purpose, indices) substreams derive."""

    master: int

    def __post_init__(self):
        if not 0 <= int(self.master) < 2 ** 64:
            raise DomainError("master seed must fit in 64 unsigned bits")

    def token(self, purpose: str, *indices: int) -> int:
        """Stable 64-bit stream token for (master, purpose, indices)."""
        label = ":".join([str(self.master), purpose, *map(str, indices)])
        digest = hashlib.blake2b(label.encode(), digest_size=8).digest()
        return int.from_bytes(digest, "little")

    def stream(self, purpose: str, *indices: int) -> np.random.Generator:
        """Fresh generator owning its own state; value-like, never shared."""
        return np.random.Generator(np.random.PCG64(self.token(purpose, *indices)))

    def derive(self, *indices: int) -> "Seed":
        """Independent child seed, e.g. one per (grid point, trial)."""
        return Seed(self.token("derive", *indices))


def _coerce_seed(seed) -> Seed:
    if isinstance(seed, Seed):
        return seed
    if isinstance(seed, (int, np.integer)):
        return Seed(int(seed))
    raise DomainError(f"seed must be a Seed or int, got {type(seed).__name__}")


def _check_size(n: int, d: int, max_elements: int) -> tuple[int, int]:
    n, d = int(n), int(d)
    if n < 1 or d < 1:
        raise DomainError(f"dimensions must be positive, got {n}x{d}")
    if n * d > max_elements:
        raise SizeError(f"{n}x{d} = {n * d} entries exceeds the "
                        f"{max_elements} element cap")
    return n, d


def gaussian_matrix(n, d, seed, *, max_elements: int = MAX_ELEMENTS) -> np.ndarray:
    """n-by-d matrix of i.i.d. standard normal entries."""
    n, d = _check_size(n, d, max_elements)
    rng = _coerce_seed(seed).stream("gaussian")
    return rng.standard_normal((n, d))


def rademacher_matrix(n, d, seed, *, max_elements: int = MAX_ELEMENTS) -> np.ndarray:
    """n-by-d matrix of i.i.d. uniform {-1, +1} entries (mean 0, variance 1)."""
    n, d = _check_size(n, d, max_elements)
    rng = _coerce_seed(seed).stream("rademacher")
    return rng.integers(0, 2, size=(n, d)).astype(np.float64) * 2.0 - 1.0


def gaussian_cloud(n, d, seed, *, max_elements: int = MAX_ELEMENTS) -> np.ndarray:
    """n points in R^d with i.i.d. standard normal coordinates, one per row."""
    n, d = _check_size(n, d, max_elements)
    rng = _coerce_seed(seed).stream("cloud")
    return rng.standard_normal((n, d))

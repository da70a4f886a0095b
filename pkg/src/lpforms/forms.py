"""Dense m-linear forms on R^n x ... x R^n.

A form T is stored through its coefficient tensor T(e_{j1}, ..., e_{jm}),
kept as an ndarray of shape (n,) * m.  The flat interchange order is
row-major with j1 slowest, and all reductions follow that fixed order so
runs are bit-reproducible.  Multi-indices are 1-based in documentation and
in the CLI (j = 1..n); array code is 0-based internally.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

_EINSUM_LETTERS = "abcdefghijkl"
_DISTRIBUTIONS = ("gaussian", "rademacher_signs", "uniform")


@dataclass(frozen=True)
class MultilinearForm:
    """An order-m multilinear form with per-axis dimension n.

    ``coeffs`` has shape (n,) * m and is made read-only on construction;
    instances are immutable and safe to share between threads.
    """

    order: int
    dim: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1; got {self.order}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1; got {self.dim}")
        if self.order > len(_EINSUM_LETTERS):
            raise ValueError(f"order {self.order} beyond supported maximum")
        arr = np.array(self.coeffs, dtype=float, copy=True)
        expected = (self.dim,) * self.order
        if arr.size != self.dim**self.order:
            raise ValueError(
                f"coeffs must have {self.dim ** self.order} entries "
                f"for order {self.order}, dim {self.dim}; got {arr.size}"
            )
        arr = arr.reshape(expected)
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must all be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_flat(cls, order: int, dim: int, flat) -> "MultilinearForm":
        """Build from the row-major flat coefficient list (j1 slowest)."""
        return cls(order, dim, np.asarray(flat, dtype=float))

    @property
    def flat(self) -> np.ndarray:
        """Row-major flat view of the coefficients."""
        return self.coeffs.reshape(-1)

    @property
    def max_abs_coeff(self) -> float:
        return float(np.abs(self.coeffs).max())

    def _check_args(self, args) -> list[np.ndarray]:
        if len(args) != self.order:
            raise ValueError(
                f"expected {self.order} argument vectors, got {len(args)}"
            )
        vectors = []
        for k, x in enumerate(args, start=1):
            v = np.asarray(x, dtype=float)
            if v.shape != (self.dim,):
                raise ValueError(
                    f"argument {k} must be a vector of length {self.dim}; "
                    f"got shape {v.shape}"
                )
            if not np.all(np.isfinite(v)):
                raise ValueError(f"argument {k} has non-finite entries")
            vectors.append(v)
        return vectors

    def evaluate(self, args) -> float:
        """T(x1, ..., xm) = sum over multi-indices of coeff * x1_{j1}...xm_{jm}."""
        vectors = self._check_args(args)
        out = self.coeffs
        for v in vectors:
            out = np.tensordot(out, v, axes=([0], [0]))
        return float(out)

    def __call__(self, *args) -> float:
        return self.evaluate(args)

    def partial_coefficients(self, slot: int, fixed) -> np.ndarray:
        """Coefficients of the linear functional in argument ``slot`` (1-based).

        ``fixed`` supplies the other m-1 vectors in slot order; the result c
        satisfies <c, x> = T(..., x at slot, ...).
        """
        if not 1 <= slot <= self.order:
            raise ValueError(f"slot must be in 1..{self.order}; got {slot}")
        if len(fixed) != self.order - 1:
            raise ValueError(
                f"expected {self.order - 1} fixed vectors, got {len(fixed)}"
            )
        filled = list(fixed[: slot - 1]) + [np.ones(self.dim)] + list(fixed[slot - 1 :])
        vectors = self._check_args(filled)
        out = self.coeffs
        # Contract trailing slots first; axis k keeps position k that way.
        for k in range(self.order - 1, -1, -1):
            if k == slot - 1:
                continue
            out = np.tensordot(out, vectors[k], axes=([k], [0]))
        return np.asarray(out, dtype=float).reshape(self.dim)

    def scaled(self, alpha: float) -> "MultilinearForm":
        return MultilinearForm(self.order, self.dim, self.coeffs * float(alpha))

    def permuted(self, perm) -> "MultilinearForm":
        """Slot permutation: new form S with S(x_{perm(1)},...) semantics.

        ``perm`` is a tuple of 1-based slot indices; entry k names which old
        slot becomes new slot k.
        """
        axes = tuple(k - 1 for k in perm)
        if sorted(axes) != list(range(self.order)):
            raise ValueError(f"perm must permute 1..{self.order}; got {perm}")
        return MultilinearForm(self.order, self.dim, self.coeffs.transpose(axes))

    def digest(self) -> str:
        """Content hash of (order, dim, coefficient bytes)."""
        h = hashlib.sha256()
        h.update(f"{self.order}|{self.dim}|".encode())
        h.update(np.ascontiguousarray(self.coeffs).tobytes())
        return h.hexdigest()[:16]

    def to_dict(self) -> dict:
        return {"m": self.order, "n": self.dim, "coeffs": self.flat.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "MultilinearForm":
        try:
            m, n, coeffs = data["m"], data["n"], data["coeffs"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"form JSON must have keys m, n, coeffs: {exc}") from exc
        return cls.from_flat(int(m), int(n), coeffs)


def random_form(
    m: int, n: int, distribution: str = "gaussian", seed: int = 0
) -> MultilinearForm:
    """I.i.d. random coefficient tensor; deterministic given (m, n, distribution, seed)."""
    if distribution not in _DISTRIBUTIONS:
        raise ValueError(
            f"unknown distribution {distribution!r}; choose from {_DISTRIBUTIONS}"
        )
    rng = np.random.default_rng(seed)
    shape = (n,) * m
    if distribution == "gaussian":
        coeffs = rng.standard_normal(shape)
    elif distribution == "rademacher_signs":
        coeffs = rng.integers(0, 2, size=shape) * 2.0 - 1.0
    else:
        coeffs = rng.uniform(-1.0, 1.0, size=shape)
    return MultilinearForm(m, n, coeffs)


def save_form(form: MultilinearForm, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(form.to_dict(), fh)
        fh.write("\n")


def load_form(path) -> MultilinearForm:
    with open(path, "r", encoding="utf-8") as fh:
        return MultilinearForm.from_dict(json.load(fh))

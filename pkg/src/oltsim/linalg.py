"""Dense complex linear algebra on small qubit registers.

Operators are plain complex numpy matrices of dimension 2**k. Qubit 0 is the
leftmost tensor factor, i.e. the most significant bit of the basis-state
label. Registers stay small (at most ~12 qubits), so everything is dense.
"""

from __future__ import annotations

import string
from functools import reduce

import numpy as np

# Structural validation tolerance; floating comparisons in tests use 1e-9.
ATOL = 1e-10

_LETTERS = string.ascii_letters


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    return bool(np.max(np.abs(m - dag(m))) <= atol)


def n_qubits_of(m: np.ndarray) -> int:
    """Number of qubits an operator acts on; rejects malformed shapes."""
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
    d = m.shape[0]
    if d < 2 or d & (d - 1) != 0:
        raise ValueError(f"operator dimension must be a power of two >= 2, got {d}")
    return d.bit_length() - 1


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with `a` on the more significant qubits."""
    n_qubits_of(a)
    n_qubits_of(b)
    return np.kron(a, b)


def kron_all(ops) -> np.ndarray:
    """Tensor product of a sequence of operators, left to right."""
    ops = list(ops)
    if not ops:
        raise ValueError("kron_all needs at least one operator")
    return reduce(np.kron, ops)


def partial_trace(rho: np.ndarray, keep, n: int) -> np.ndarray:
    """Trace out all qubits of an n-qubit operator except `keep`.

    The result acts on the kept qubits in increasing index order. Linear and
    trace preserving; for keep = all qubits it returns the input unchanged.
    """
    if n < 1:
        raise ValueError(f"qubit count must be >= 1, got {n}")
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"expected a {2**n}x{2**n} matrix for n={n}, got shape {rho.shape}")
    kept = sorted(set(int(q) for q in keep))
    for q in kept:
        if not 0 <= q < n:
            raise ValueError(f"keep index {q} out of range for {n} qubits")
    kept_set = set(kept)
    row = [_LETTERS[q] for q in range(n)]
    col = [_LETTERS[n + q] if q in kept_set else row[q] for q in range(n)]
    out = "".join(row[q] for q in kept) + "".join(_LETTERS[n + q] for q in kept)
    sub = "".join(row) + "".join(col) + "->" + out
    d = 2 ** len(kept)
    return np.einsum(sub, rho.reshape((2,) * (2 * n))).reshape(d, d)


def expectation(obs: np.ndarray, rho: np.ndarray) -> float:
    """tr[obs @ rho] for a Hermitian observable; the trace must come out real.

    An imaginary residue at or above 1e-10 signals corrupted inputs and is
    reported as an error rather than silently discarded.
    """
    if obs.shape != rho.shape:
        raise ValueError(f"dimension mismatch: obs {obs.shape} vs state {rho.shape}")
    n_qubits_of(obs)
    if not is_hermitian(obs):
        raise ValueError("observable is not Hermitian within 1e-10")
    val = complex(np.einsum("ij,ji->", obs, rho))
    if abs(val.imag) >= ATOL:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e} >= 1e-10")
    return val.real


def herm_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, ascending."""
    n_qubits_of(m)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within 1e-10")
    return np.linalg.eigvalsh(m)

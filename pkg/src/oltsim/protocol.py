"""N-party protocol execution.

Each of the N parties holds one system qubit and one ancilla qubit and applies
a two-qubit unitary parameterized only by its own angle setting. Correlators
of the fixed z-basis measurement on the reduced system state are computed two
ways: the direct route simulates the full 2N-qubit register, the factorized
route multiplies the system-side parity constant by the expectation on the
locally rotated ancilla. The two must agree for every input, which the
analysis module verifies by randomized campaign.

Register layout: system qubits at indices 0..N-1, ancilla qubits at N..2N-1,
party i owning qubits i and N+i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .gates import AngleSetting, embed, olt_unitary, pauli, rotation
from .linalg import ATOL, dag, kron_all, partial_trace
from .states import DensityMatrix, validate_density

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def z_string(n: int) -> np.ndarray:
    """Parity observable on n qubits: tensor power of diag(1, -1)."""
    return kron_all([pauli(3)] * n)


@dataclass(frozen=True, eq=False)
class ProtocolState:
    """Full 2N-qubit state at some stage of the protocol."""

    n_parties: int
    full_state: DensityMatrix

    def __post_init__(self):
        if self.full_state.n_qubits != 2 * self.n_parties:
            raise ValueError(
                f"full state has {self.full_state.n_qubits} qubits, "
                f"expected {2 * self.n_parties} for {self.n_parties} parties"
            )


def assemble(system: DensityMatrix, ancilla: DensityMatrix) -> ProtocolState:
    """Product of system and ancilla states in the fixed register layout."""
    if system.n_qubits != ancilla.n_qubits:
        raise ValueError(
            f"party count mismatch: system has {system.n_qubits} qubits, "
            f"ancilla has {ancilla.n_qubits}"
        )
    full = np.kron(system.matrix, ancilla.matrix)
    return ProtocolState(system.n_qubits, validate_density(full))


def _check_settings(settings: Sequence[AngleSetting], n: int):
    if len(settings) != n:
        raise ValueError(f"expected {n} settings, one per party, got {len(settings)}")


def apply_olts(state: ProtocolState, settings: Sequence[AngleSetting]) -> ProtocolState:
    """Conjugate by every party's two-qubit unitary (they commute)."""
    n = state.n_parties
    _check_settings(settings, n)
    u = np.eye(4**n, dtype=complex)
    for i, setting in enumerate(settings):
        u = embed(olt_unitary(setting), [i, n + i], 2 * n) @ u
    out = u @ state.full_state.matrix @ dag(u)
    return ProtocolState(n, validate_density(out))


def reduced_system(state: ProtocolState) -> DensityMatrix:
    """Trace out all ancilla qubits."""
    n = state.n_parties
    red = partial_trace(state.full_state.matrix, range(n), 2 * n)
    return validate_density(red)


def correlation_direct(
    system: DensityMatrix, ancilla: DensityMatrix, settings: Sequence[AngleSetting]
) -> float:
    """Full-register simulation of one correlator.

    Assemble, apply the per-party unitaries, reduce, and measure the z-basis
    parity on the reduced system state.
    """
    state = apply_olts(assemble(system, ancilla), settings)
    red = reduced_system(state)
    return _tr_product(z_string(state.n_parties), red.matrix)


def _effective_observable(setting: AngleSetting) -> np.ndarray:
    r = rotation(setting)
    return dag(r) @ pauli(3) @ r


def correlation_factorized(
    system: DensityMatrix, ancilla: DensityMatrix, settings: Sequence[AngleSetting]
) -> float:
    """Factorized route: system parity constant times the rotated-ancilla parity.

    The rotations move into the ancilla state, so no 2N-qubit object is built.
    """
    n = system.n_qubits
    if ancilla.n_qubits != n:
        raise ValueError(
            f"party count mismatch: system has {n} qubits, ancilla has {ancilla.n_qubits}"
        )
    _check_settings(settings, n)
    z = z_string(n)
    sys_factor = _tr_product(z, system.matrix)
    r_all = kron_all([rotation(s) for s in settings])
    chi_rot = r_all @ ancilla.matrix @ dag(r_all)
    return sys_factor * _tr_product(z, chi_rot)


def _tr_product(obs: np.ndarray, rho: np.ndarray) -> float:
    val = complex(np.einsum("ij,ji->", obs, rho))
    if abs(val.imag) >= ATOL:
        raise ValueError(f"correlator has imaginary residue {val.imag:.3e} >= 1e-10")
    return val.real


class StabilizerResult(NamedTuple):
    """Parity eigenvalue of a state, when it has one."""

    eigenvalue: int | None
    expectation: float


def stabilizer_eigenvalue(system: DensityMatrix) -> StabilizerResult:
    """+1 or -1 when the state is a parity eigenstate, else None.

    The raw parity expectation is always reported; when the state is not an
    eigenstate it is the scaling constant the factorized route applies to
    every correlator.
    """
    z = z_string(system.n_qubits)
    value = _tr_product(z, system.matrix)
    commutes = np.max(np.abs(z @ system.matrix - system.matrix @ z)) <= ATOL
    if commutes and abs(abs(value) - 1.0) <= ATOL:
        return StabilizerResult(1 if value > 0 else -1, value)
    return StabilizerResult(None, value)


def correlator_table(
    system: DensityMatrix,
    ancilla: DensityMatrix,
    per_party_settings: Sequence[Sequence[AngleSetting]],
    method: str = "factorized",
) -> np.ndarray:
    """Correlator for every combination of one setting per party.

    The result has one axis per party, of length equal to that party's number
    of settings. The factorized route evaluates the whole table in a single
    tensor contraction; the direct route simulates every combination.
    """
    n = system.n_qubits
    if ancilla.n_qubits != n:
        raise ValueError(
            f"party count mismatch: system has {n} qubits, ancilla has {ancilla.n_qubits}"
        )
    if len(per_party_settings) != n:
        raise ValueError(f"expected {n} setting lists, got {len(per_party_settings)}")
    shape = tuple(len(lst) for lst in per_party_settings)
    if any(m == 0 for m in shape):
        raise ValueError("every party needs at least one setting")

    if method == "direct":
        table = np.empty(shape)
        for idx in np.ndindex(shape):
            chosen = [per_party_settings[i][idx[i]] for i in range(n)]
            table[idx] = correlation_direct(system, ancilla, chosen)
        return table
    if method != "factorized":
        raise ValueError(f"unknown method {method!r}; expected 'factorized' or 'direct'")

    sys_factor = _tr_product(z_string(n), system.matrix)
    stacks = [
        np.stack([_effective_observable(s) for s in lst]) for lst in per_party_settings
    ]
    table = table_from_observables(ancilla, stacks)
    return sys_factor * table


def table_from_observables(ancilla: DensityMatrix, stacks: Sequence[np.ndarray]) -> np.ndarray:
    """Expectations tr[(O_1 x ... x O_N) chi] for every combination of observables.

    stacks[i] has shape (M_i, 2, 2); the result has shape (M_1, ..., M_N).
    """
    n = ancilla.n_qubits
    chi_t = ancilla.matrix.reshape((2,) * (2 * n))
    subs = []
    for i in range(n):
        subs.append(_LETTERS[i] + _LETTERS[n + i] + _LETTERS[2 * n + i])
    chi_sub = _LETTERS[2 * n : 3 * n] + _LETTERS[n : 2 * n]
    out = _LETTERS[:n]
    table = np.einsum(",".join(subs) + "," + chi_sub + "->" + out, *stacks, chi_t)
    residue = float(np.max(np.abs(table.imag)))
    if residue >= ATOL:
        raise ValueError(f"correlator table has imaginary residue {residue:.3e} >= 1e-10")
    return table.real

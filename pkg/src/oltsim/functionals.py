"""Dichotomic full-correlation Bell functionals.

A functional is a real coefficient tensor with one axis per party and one
index per measurement setting, evaluated against a table of correlators of
the same shape. Classical bounds come from exhaustive enumeration of
deterministic strategies and are exact, never heuristic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import ATOL

ENUMERATION_CAP = 24  # total settings across parties; 2^24 deterministic strategies

VIOLATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BellFunctional:
    """Coefficient tensor over full correlators plus a label."""

    coefficients: np.ndarray
    label: str

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.ndim < 1:
            raise ValueError("coefficient tensor must have at least one axis")
        if any(m < 1 for m in c.shape):
            raise ValueError(f"every party needs at least one setting, got shape {c.shape}")
        if not np.any(c != 0.0):
            raise ValueError("coefficient tensor must have at least one nonzero entry")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def n_parties(self) -> int:
        return self.coefficients.ndim

    @property
    def settings_per_party(self) -> tuple[int, ...]:
        return self.coefficients.shape


def make_chsh() -> BellFunctional:
    """Two parties, two settings each: <11> + <12> + <21> - <22>."""
    return BellFunctional(np.array([[1.0, 1.0], [1.0, -1.0]]), "CHSH")


def make_mermin3() -> BellFunctional:
    """Three parties, two settings each: <112> + <121> + <211> - <222>."""
    c = np.zeros((2, 2, 2))
    c[0, 0, 1] = c[0, 1, 0] = c[1, 0, 0] = 1.0
    c[1, 1, 1] = -1.0
    return BellFunctional(c, "Mermin-3")


def classical_bound(functional: BellFunctional) -> float:
    """Maximum over all deterministic +-1 assignments, by exhaustion.

    The first party's optimal assignment is resolved analytically (sum of
    absolute contracted weights), so the enumeration runs over the remaining
    parties only. Exact for every functional under the enumeration cap.
    """
    ms = functional.settings_per_party
    if sum(ms) > ENUMERATION_CAP:
        raise ValueError(
            f"enumeration cap exceeded: {sum(ms)} total settings > {ENUMERATION_CAP} "
            f"(2^{ENUMERATION_CAP} deterministic strategies)"
        )
    sign_lists = [
        [np.array(signs) for signs in itertools.product((1.0, -1.0), repeat=m)]
        for m in ms[1:]
    ]
    best = -np.inf
    for assignment in itertools.product(*sign_lists):
        w = functional.coefficients
        for signs in reversed(assignment):
            w = w @ signs
        best = max(best, float(np.sum(np.abs(w))))
    return best


def evaluate(functional: BellFunctional, table: np.ndarray) -> float:
    """Signed value of the functional on a correlator table.

    Callers compare |value| or the signed value against the classical bound
    depending on how the inequality is stated.
    """
    t = np.asarray(table, dtype=float)
    if t.shape != functional.settings_per_party:
        raise ValueError(
            f"correlator table shape {t.shape} does not match "
            f"functional shape {functional.settings_per_party}"
        )
    worst = float(np.max(np.abs(t)))
    if worst > 1.0 + ATOL:
        raise ValueError(f"correlator magnitude {worst:.12g} exceeds 1")
    return float(np.sum(functional.coefficients * t))


@dataclass(frozen=True)
class ViolationReport:
    """Outcome of one Bell test: signed value against the classical bound."""

    value: float
    bound: float
    violated: bool
    margin: float


def violation_report(functional: BellFunctional, table: np.ndarray) -> ViolationReport:
    """Evaluate and compare |value| against the exhaustive classical bound."""
    value = evaluate(functional, table)
    bound = classical_bound(functional)
    margin = abs(value) - bound
    return ViolationReport(
        value=value, bound=bound, violated=margin > VIOLATION_TOL, margin=margin
    )


def parse_functional_spec(text: str) -> BellFunctional:
    """Parse a functional spec: chsh, mermin3, or custom:<M1>x...x<MN>:<coeffs>.

    Custom coefficients are decimal reals, comma separated, row-major over the
    setting indices.
    """
    s = text.strip()
    low = s.lower()
    if low == "chsh":
        return make_chsh()
    if low == "mermin3":
        return make_mermin3()
    if low.startswith("custom:"):
        body = s[len("custom:") :]
        shape_text, sep, coeff_text = body.partition(":")
        if not sep:
            raise ValueError(f"custom functional {text!r} needs custom:<shape>:<coefficients>")
        try:
            shape = tuple(int(m) for m in shape_text.lower().split("x"))
            coeffs = np.array([float(v) for v in coeff_text.split(",")])
        except ValueError as exc:
            raise ValueError(f"cannot parse custom functional {text!r}: {exc}") from exc
        expected = int(np.prod(shape)) if shape else 0
        if len(coeffs) != expected:
            raise ValueError(
                f"custom functional {text!r} has {len(coeffs)} coefficients, "
                f"shape {shape_text} needs {expected}"
            )
        return BellFunctional(coeffs.reshape(shape), "custom")
    raise ValueError(f"unknown functional spec {text!r}; expected chsh, mermin3, or custom:...")

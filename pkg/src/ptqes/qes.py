"""sl(2) algebraization of the quasi-exactly solvable families.

The generators act on polynomials of degree <= 2j in one variable ``s``
(``s = t`` for the quartic family, ``s = z = t**2`` for the sextic barrier
family, ``t = x + i*eps``)::

    J-  = d/ds
    J+  = s^2 d/ds - 2j s
    J0  = s d/ds - j

Matrices are written in the monomial basis ``1, s, ..., s^(2j)``; column
``k`` holds the image of ``s^k``.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import eigen
from .algebra import ShiftedPolynomial
from .potentials import (
    PotentialSpec,
    SexticBarrierParams,
    build_barrier_sextic,
    build_quartic_qes,
    check_half_integer,
)

__all__ = [
    "MAX_J",
    "Sl2Rep",
    "Gauge",
    "QESBlock",
    "QESLevel",
    "BlockSpectrum",
    "sl2_rep",
    "quartic_block",
    "sextic_block",
    "solve_block",
    "qes_wavefunction",
]

MAX_J = 16
PT_PAIRING_TOL = 1e-8
REALITY_TOL = 1e-8
SNAP_RTOL = 1e-8
VARIABLES = ("t", "z")


@dataclass(frozen=True, eq=False)
class Sl2Rep:
    j: float
    variable: str
    Jminus: np.ndarray
    Jzero: np.ndarray
    Jplus: np.ndarray

    @property
    def dim(self) -> int:
        return self.Jminus.shape[0]


def sl2_rep(j: float, variable: str = "t") -> Sl2Rep:
    """Matrices of the three generators on polynomials of degree <= 2j.

    Entries are integers or half-integers, hence exact in floating point.
    """
    j = check_half_integer(j)
    if j > MAX_J:
        raise ValueError(f"j={j} exceeds the supported maximum {MAX_J}")
    if variable not in VARIABLES:
        raise ValueError(f"variable must be one of {VARIABLES}")
    n = int(round(2 * j)) + 1
    jm = np.zeros((n, n))
    j0 = np.zeros((n, n))
    jp = np.zeros((n, n))
    for k in range(n):
        if k >= 1:
            jm[k - 1, k] = k
        j0[k, k] = k - j
        if k + 1 < n:
            jp[k + 1, k] = k - 2 * j
        # s^(2j) -> (2j - 2j) s^(2j+1) = 0: the space is closed
    for mtx in (jm, j0, jp):
        mtx.setflags(write=False)
    return Sl2Rep(j, variable, jm, j0, jp)


@dataclass(frozen=True)
class Gauge:
    """Prefactor multiplying the polynomial part of a QES eigenfunction.

    ``kind="cubic-phase"``: ``exp(i t^3 / 3)``.
    ``kind="sextic"``: ``exp(-t^4/4 - a t^2/2) * t^(-gamma)``.
    """

    kind: str
    a: float = 0.0
    gamma: float = 0.0

    def log_value(self, t):
        t = np.asarray(t, dtype=np.complex128)
        if self.kind == "cubic-phase":
            return 1j * t**3 / 3.0
        if self.kind == "sextic":
            return -(t**4) / 4.0 - self.a * t**2 / 2.0 - self.gamma * np.log(t)
        raise ValueError(f"unknown gauge kind {self.kind!r}")

    def __call__(self, t):
        return np.exp(self.log_value(t))


@dataclass(frozen=True, eq=False)
class QESBlock:
    """Finite block of a gauged Hamiltonian on its polynomial invariant space.

    A block eigenvalue ``mu`` is the physical energy ``slope * mu + intercept``.
    """

    matrix: np.ndarray
    slope: float
    intercept: float
    gauge: Gauge
    variable: str
    j: float
    family: str
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def energy(self, mu):
        return self.slope * np.asarray(mu) + self.intercept

    def charpoly(self) -> np.ndarray:
        """Characteristic polynomial of the block matrix (low-first)."""
        return eigen.charpoly(self.matrix)

    def potential(self, eps: float = 1.0) -> PotentialSpec:
        """The Schrodinger potential this block belongs to, on ``Im t = eps``."""
        if self.family == "quartic":
            return build_quartic_qes(self.j, self.params["B"], eps)
        return build_barrier_sextic(
            SexticBarrierParams(self.params["a"], self.params["gamma"], self.j), eps
        )


def quartic_block(j: float, B: float) -> QESBlock:
    """Block ``-(J-)^2 - 2i J+ + B j`` of ``V = -t^4 + 2i(2j+1) t + B j``.

    The gauged wavefunction is ``Psi = exp(i t^3/3) Phi(t)`` and block
    eigenvalues are energies directly.
    """
    rep = sl2_rep(j, "t")
    n = rep.dim
    m = -(rep.Jminus @ rep.Jminus) - 2j * rep.Jplus + B * rep.j * np.eye(n)
    return QESBlock(
        m.astype(np.complex128), 1.0, 0.0, Gauge("cubic-phase"), "t", rep.j, "quartic", {"B": float(B)}
    )


def sextic_block(j: float, a: float, gamma: float) -> QESBlock:
    """Block ``-4 J0 J- + 4 J+ + (4 gamma - 2 - 4j) J- + 4a J0`` in ``z = t^2``.

    Energies are ``E = mu + a - 2 a gamma + 4 a j``; the potential is
    ``t^6 + 2a t^4 + (a^2 - 8j - 3 + 2 gamma) t^2 + gamma (gamma + 1)/t^2``.
    """
    rep = sl2_rep(j, "z")
    m = (
        -4.0 * rep.Jzero @ rep.Jminus
        + 4.0 * rep.Jplus
        + (4.0 * gamma - 2.0 - 4.0 * rep.j) * rep.Jminus
        + 4.0 * a * rep.Jzero
    )
    intercept = a - 2.0 * a * gamma + 4.0 * a * rep.j
    return QESBlock(
        m.astype(np.complex128),
        1.0,
        float(intercept),
        Gauge("sextic", float(a), float(gamma)),
        "z",
        rep.j,
        "sextic",
        {"a": float(a), "gamma": float(gamma)},
    )


@dataclass(frozen=True, eq=False)
class QESLevel:
    energy: complex
    poly: ShiftedPolynomial
    algebraic_multiplicity: int
    geometric_multiplicity: int
    block_eigenvalue: complex

    @property
    def defective(self) -> bool:
        return self.geometric_multiplicity < self.algebraic_multiplicity

    @property
    def is_real(self) -> bool:
        return abs(self.energy.imag) <= REALITY_TOL * max(1.0, abs(self.energy))


@dataclass(frozen=True)
class BlockSpectrum(Sequence):
    """Levels of a block (ordered by real part, then imaginary part)."""

    levels: tuple
    pairing_defect: float

    def __getitem__(self, i):
        return self.levels[i]

    def __len__(self):
        return len(self.levels)

    @property
    def pt_paired(self) -> bool:
        return self.pairing_defect <= PT_PAIRING_TOL

    @property
    def all_real(self) -> bool:
        return all(lv.is_real for lv in self.levels)

    @property
    def energies(self) -> np.ndarray:
        """All energies repeated by algebraic multiplicity."""
        return np.array(
            [lv.energy for lv in self.levels for _ in range(lv.algebraic_multiplicity)],
            dtype=np.complex128,
        )


def _pairing_defect(values: np.ndarray) -> float:
    if values.size == 0:
        return 0.0
    cost = np.abs(values[:, None] - np.conj(values)[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def _normalize_poly(v: np.ndarray) -> np.ndarray:
    # inverse iteration leaves O(1e-10) admixtures along generalized
    # eigenvectors of defective blocks
    v = np.where(np.abs(v) <= SNAP_RTOL * np.max(np.abs(v)), 0.0, v)
    return v / v[np.nonzero(v)[0][0]]


def solve_block(block: QESBlock) -> BlockSpectrum:
    """Diagonalize a block; coincident eigenvalues are merged into one level.

    Raises NonConvergence from the eigen engine.
    """
    report = eigen.eigenvalues(block.matrix, vectors=True)
    norm = float(np.linalg.norm(block.matrix))
    levels = []
    for mu, idx in eigen.cluster_eigenvalues(report.values, norm):
        if len(idx) == 1:
            mu = complex(report.values[idx[0]])
        vec = _normalize_poly(report.vectors[:, idx[0]])
        levels.append(
            QESLevel(
                energy=complex(block.energy(mu)),
                poly=ShiftedPolynomial(vec, 0.0),
                algebraic_multiplicity=len(idx),
                geometric_multiplicity=int(report.geometric_multiplicities[idx[0]]),
                block_eigenvalue=complex(mu),
            )
        )
    levels.sort(key=lambda lv: (round(lv.energy.real, 10), round(lv.energy.imag, 10)))
    energies = np.array(
        [lv.energy for lv in levels for _ in range(lv.algebraic_multiplicity)], dtype=np.complex128
    )
    return BlockSpectrum(tuple(levels), _pairing_defect(energies))


def qes_wavefunction(level: QESLevel, block: QESBlock, grid, eps: float = 1.0) -> np.ndarray:
    """Sample ``P(s(t)) * gauge(t)`` on ``grid`` (plain x), unit discrete L2 norm.

    ``eps`` must be positive for the quartic family (the gauge modulus is
    ``exp(-eps x^2 + eps^3/3)``) and whenever the barrier is present.
    """
    x = np.asarray(grid, dtype=np.float64)
    if block.family == "quartic" and eps <= 0:
        raise ValueError("the quartic gauge is normalizable only for eps > 0")
    if block.family == "sextic" and block.gauge.gamma != 0 and eps == 0:
        raise ValueError("barrier wavefunctions need eps != 0")
    t = x + 1j * eps
    s = t if block.variable == "t" else t * t
    psi = level.poly.at(s) * block.gauge(t)
    norm = np.sqrt(np.trapezoid(np.abs(psi) ** 2, x)) if x.size > 1 else np.abs(psi[0])
    return psi / norm

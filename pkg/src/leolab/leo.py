"""Leakage-elimination pulses: synthesis routes and verification.

A leakage-elimination operator for a code subspace is a unitary equal, up
to one global phase, to minus the identity on the code and plus the
identity on its complement. Equivalently it commutes with every operator
confined to either side of the split and anticommutes with every leakage
operator, which is what makes it usable as a decoupling pulse.

Several constructions yield such a unitary: the projector reflection
I - 2P, the exponential of pi times a Hermitian involution supported on
the code, the exponential of -i pi times any block-diagonal generator with
integer spectra of opposite parity on the two sides, mode-counting phase
shifts for particle-number codes, and the total-spin-squared exponential
for the four-qubit singlet code. All of them are funneled through one
structural check at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import codes
from .classify import decompose
from .codes import CodeSubspace
from .opalg import (
    Operator,
    derived_seeds,
    hermitian_exponential,
    operator_from_json,
    operator_to_json,
    pauli_string,
    random_hermitian,
)

STRUCTURAL_TOL = 1e-10
SUPPORT_TOL = 1e-12
INVOLUTION_TOL = 1e-10
INTEGER_SPECTRUM_TOL = 1e-8

ROUTES = (
    "projector",
    "canonical",
    "generalized",
    "number_op",
    "phase_shifter",
    "exchange_2dfs",
    "s_squared",
)


class NotLogicalInvolutionError(ValueError):
    """The proposed generator is not a projective logical involution."""


class NotGeneralizedGeneratorError(ValueError):
    """The proposed generator fails the block/parity conditions."""


def reference_reflection(code: CodeSubspace) -> np.ndarray:
    """The phase-free target Q - P: -1 on the code, +1 on the complement."""
    return code.complement_projector - code.projector


def extract_phase(u: Operator, code: CodeSubspace) -> complex:
    """Global phase of a candidate relative to the Q - P reflection.

    Averages the diagonal of the complement block (every element equals the
    phase when the structural form holds); falls back to the negated code
    block for full-space codes. Returns a unit-modulus complex number.
    """
    if code.code_dim < code.ambient_dim:
        w = code.complement_basis
        z = np.trace(w.conj().T @ u.mat @ w) / (code.ambient_dim - code.code_dim)
    else:
        v = code.basis
        z = -np.trace(v.conj().T @ u.mat @ v) / code.code_dim
    if not (np.isfinite(z.real) and np.isfinite(z.imag)) or abs(z) < 0.5:
        raise ValueError(
            "cannot extract a global phase: candidate is far from the "
            "reflection form"
        )
    return complex(z / abs(z))


def structural_residual(u: Operator, code: CodeSubspace, phase: complex) -> float:
    """Frobenius distance between u and phase * (Q - P)."""
    return float(np.linalg.norm(u.mat - phase * reference_reflection(code)))


def equal_up_to_phase(a: Operator, b: Operator, tol: float = STRUCTURAL_TOL) -> bool:
    """Whether a = exp(i theta) b for the theta aligning their first big entries."""
    if a.dim != b.dim:
        return False
    flat = np.abs(b.mat).ravel()
    candidates = np.flatnonzero(flat > 1e-8)
    if candidates.size == 0:
        return bool(np.linalg.norm(a.mat) <= tol)
    k = int(candidates[0])
    i, j = divmod(k, b.dim)
    ratio = a.mat[i, j] / b.mat[i, j]
    if abs(ratio) < 1e-12:
        return False
    theta = ratio / abs(ratio)
    return bool(np.linalg.norm(a.mat - theta * b.mat) <= tol)


@dataclass(frozen=True, eq=False)
class LeakageEliminationOperator:
    """A verified decoupling pulse for one code subspace.

    Construction checks the defining property: the unitary is within
    STRUCTURAL_TOL of phase * (Q - P). generator, when present, is the
    Hermitian h with unitary = exp(-i pi h).
    """

    unitary: Operator
    code: CodeSubspace
    phase: complex
    route: str
    generator: Operator | None = None

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(
                f"unknown synthesis route {self.route!r}; valid: {', '.join(ROUTES)}"
            )
        if self.unitary.dim != self.code.ambient_dim:
            raise ValueError("pulse dimension does not match code ambient space")
        z = complex(self.phase)
        if not (np.isfinite(z.real) and np.isfinite(z.imag)) or abs(z) == 0:
            raise ValueError("phase must be a finite nonzero complex number")
        z = z / abs(z)
        object.__setattr__(self, "phase", z)
        res = structural_residual(self.unitary, self.code, z)
        if res > STRUCTURAL_TOL:
            raise ValueError(
                f"not a leakage-elimination operator: structural residual "
                f"{res:.3e} exceeds {STRUCTURAL_TOL:.0e}"
            )

    @property
    def dim(self) -> int:
        return self.unitary.dim

    def structural_error(self) -> float:
        return structural_residual(self.unitary, self.code, self.phase)

    def involution_residual(self) -> float:
        """Distance of R^2 from exp(2 i phi) I; zero for an exact pulse."""
        r = self.unitary.mat
        target = (self.phase**2) * np.eye(self.dim)
        return float(np.linalg.norm(r @ r - target))

    def __repr__(self) -> str:
        return (
            f"LeakageEliminationOperator(route={self.route!r}, "
            f"code={self.code.label!r}, dim={self.dim})"
        )


# ---------------------------------------------------------------------------
# synthesis routes
# ---------------------------------------------------------------------------


def projector_leo(code: CodeSubspace) -> LeakageEliminationOperator:
    """Reflection I - 2P about the complement of the code."""
    p = code.projector
    u = Operator(np.eye(code.ambient_dim) - 2.0 * p, frozenset({"unitary"}))
    gen = Operator((p + p.conj().T) / 2.0, frozenset({"hermitian"}))
    return LeakageEliminationOperator(u, code, extract_phase(u, code),
                                      "projector", gen)


def canonical_leo(
    involution: Operator, code: CodeSubspace, route: str = "canonical"
) -> LeakageEliminationOperator:
    """exp(i pi s) for a Hermitian s acting as an involution on the code.

    s must vanish outside the code and square to the code projector there;
    any logical Pauli works. The exponential is then -1 on the code and
    +1 elsewhere regardless of which involution was chosen.
    """
    if involution.dim != code.ambient_dim:
        raise NotLogicalInvolutionError(
            "involution dimension does not match the code's ambient space"
        )
    if "hermitian" not in involution.tags and not involution.is_hermitian():
        raise NotLogicalInvolutionError(
            "not a projective logical involution: generator is not Hermitian"
        )
    dec = decompose(involution, code)
    if dec.l_norm > SUPPORT_TOL or dec.eperp_norm > SUPPORT_TOL:
        raise NotLogicalInvolutionError(
            "not a projective logical involution: generator acts outside the code"
        )
    sq_dev = np.linalg.norm(involution.mat @ involution.mat - code.projector)
    if sq_dev > INVOLUTION_TOL:
        raise NotLogicalInvolutionError(
            f"not a projective logical involution: square deviates from the "
            f"code projector by {sq_dev:.3e}"
        )
    u = hermitian_exponential(involution, np.pi)
    return LeakageEliminationOperator(u, code, extract_phase(u, code), route,
                                      involution)


def exchange_dfs2_leo() -> LeakageEliminationOperator:
    """Exchange-interaction pulse for the dephasing-free pair.

    The logical bit flip (X1 X2 + Y1 Y2)/2 is an isotropic XY exchange term,
    so this pulse is generated by hardware-native coupling; its exponential
    equals the collective phase Z1 Z2.
    """
    xbar = Operator(
        (pauli_string("XX").mat + pauli_string("YY").mat) / 2.0,
        frozenset({"hermitian"}),
    )
    return canonical_leo(xbar, codes.dfs2_dephasing(), route="exchange_2dfs")


def _integer_parity(eigs: np.ndarray, side: str) -> int | None:
    """Common parity of a spectrum that must be near-integer; None if empty."""
    if eigs.size == 0:
        return None
    rounded = np.round(eigs)
    dev = np.max(np.abs(eigs - rounded))
    if dev > INTEGER_SPECTRUM_TOL:
        raise NotGeneralizedGeneratorError(
            f"not a generalized-LEO generator: {side} spectrum is not integer "
            f"(max deviation {dev:.3e})"
        )
    parities = {int(r) % 2 for r in rounded}
    if len(parities) != 1:
        raise NotGeneralizedGeneratorError(
            f"not a generalized-LEO generator: {side} spectrum mixes parities"
        )
    return parities.pop()


def generalized_leo(
    h: Operator, code: CodeSubspace
) -> LeakageEliminationOperator:
    """exp(-i pi h) for a block-diagonal h with opposite-parity integer spectra.

    The code block must have an all-even or all-odd integer spectrum and the
    complement block the opposite parity; the exponential is then a uniform
    sign on each side, i.e. a reflection up to global phase.
    """
    if h.dim != code.ambient_dim:
        raise NotGeneralizedGeneratorError(
            "generator dimension does not match the code's ambient space"
        )
    if "hermitian" not in h.tags and not h.is_hermitian():
        raise NotGeneralizedGeneratorError(
            "not a generalized-LEO generator: not Hermitian"
        )
    dec = decompose(h, code)
    if dec.l_norm > SUPPORT_TOL:
        raise NotGeneralizedGeneratorError(
            f"not a generalized-LEO generator: leakage block has norm "
            f"{dec.l_norm:.3e}"
        )
    v = code.basis
    w = code.complement_basis
    code_block = v.conj().T @ h.mat @ v
    code_parity = _integer_parity(np.linalg.eigvalsh(code_block), "code")
    if code.ambient_dim > code.code_dim:
        perp_block = w.conj().T @ h.mat @ w
        perp_parity = _integer_parity(np.linalg.eigvalsh(perp_block), "complement")
        if perp_parity == code_parity:
            raise NotGeneralizedGeneratorError(
                "not a generalized-LEO generator: code and complement spectra "
                "share the same parity"
            )
    u = hermitian_exponential(h, -np.pi)
    return LeakageEliminationOperator(u, code, extract_phase(u, code),
                                      "generalized", h)


def number_operator_leo(n_levels: int) -> LeakageEliminationOperator:
    """Phase kick exp(-i pi (n0 + n1)) on an n-level mode with a bare qubit.

    Counting population in the two code levels gives -1 there and +1 on all
    higher levels; the diagonal is written down exactly.
    """
    code = codes.bare_qubit_code(n_levels)
    diag = np.ones(n_levels)
    diag[:2] = -1.0
    u = Operator(np.diag(diag.astype(complex)),
                 frozenset({"hermitian", "unitary", "diagonal"}))
    gen_diag = np.zeros(n_levels)
    gen_diag[:2] = 1.0
    gen = Operator(np.diag(gen_diag.astype(complex)),
                   frozenset({"hermitian", "diagonal"}))
    return LeakageEliminationOperator(u, code, extract_phase(u, code),
                                      "number_op", gen)


def phase_shifter_leo() -> LeakageEliminationOperator:
    """Mode-counting pulse exp(-i pi (n1 + n2)) on the two-photon sector.

    Every dual-rail code state holds exactly one photon in modes {1, 2}
    (sign -1); every complement occupation holds zero or two (sign +1), so
    the pulse is an exact reflection on the truncated space.
    """
    code = codes.dual_rail_code()
    occs = codes.two_photon_occupations()
    counts = np.array([occ[0] + occ[1] for occ in occs], dtype=float)
    u = Operator(np.diag(((-1.0) ** counts).astype(complex)),
                 frozenset({"hermitian", "unitary", "diagonal"}))
    gen = codes.lift_quadratic(np.diag([1.0, 1.0, 0.0, 0.0]))
    return LeakageEliminationOperator(u, code, extract_phase(u, code),
                                      "phase_shifter", gen)


def s_squared_leo() -> LeakageEliminationOperator:
    """Total-spin pulse exp(-i pi S^2 / 2) on four qubits.

    Half the total-spin-squared eigenvalue is 0 on the two singlets, 1 on
    the nine triplet states and 3 on the five quintuplet states, so the
    exponential is +1 exactly on the singlet code and -1 everywhere else.
    """
    code = codes.dfs4_collective()
    gen = Operator(codes.s_squared(4).mat / 2.0, frozenset({"hermitian"}))
    u = hermitian_exponential(gen, -np.pi)
    return LeakageEliminationOperator(u, code, extract_phase(u, code),
                                      "s_squared", gen)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeCheck:
    """Residuals of one probe operator against the pulse.

    A true pulse anticommutes with the probe's leakage part and commutes
    with both same-side parts; all three numbers should vanish.
    """

    index: int
    anticommutator_leakage: float
    commutator_code: float
    commutator_outside: float

    @property
    def max_residual(self) -> float:
        return max(self.anticommutator_leakage, self.commutator_code,
                   self.commutator_outside)


@dataclass(frozen=True, eq=False)
class LeoVerification:
    passed: bool
    phase: complex
    structural_residual: float
    probe_checks: tuple[ProbeCheck, ...]
    max_residual: float
    tolerance: float

    def summary(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"{verdict}: structural residual {self.structural_residual:.3e}, "
            f"max probe residual "
            f"{max((p.max_residual for p in self.probe_checks), default=0.0):.3e} "
            f"over {len(self.probe_checks)} probes (tolerance {self.tolerance:.0e})"
        )


def verify_leo(
    candidate: Operator,
    code: CodeSubspace,
    probes: Sequence[Operator] = (),
    tol: float = STRUCTURAL_TOL,
) -> LeoVerification:
    """Check a candidate pulse against the structural and algebraic contracts.

    Failures land in the report rather than raising, so an unsuitable
    candidate (wrong form, wrong code) can be inspected.
    """
    if candidate.dim != code.ambient_dim:
        raise ValueError("candidate dimension does not match code ambient space")
    try:
        phase = extract_phase(candidate, code)
    except ValueError:
        phase = complex(1.0)
    s_res = structural_residual(candidate, code, phase)
    r = candidate.mat
    checks = []
    worst = s_res
    for i, probe in enumerate(probes):
        dec = decompose(probe, code)
        l = dec.l_part.mat
        e = dec.e_part.mat
        ep = dec.eperp_part.mat
        pc = ProbeCheck(
            index=i,
            anticommutator_leakage=float(np.linalg.norm(r @ l + l @ r)),
            commutator_code=float(np.linalg.norm(r @ e - e @ r)),
            commutator_outside=float(np.linalg.norm(r @ ep - ep @ r)),
        )
        checks.append(pc)
        worst = max(worst, pc.max_residual)
    return LeoVerification(
        passed=worst <= tol,
        phase=phase,
        structural_residual=s_res,
        probe_checks=tuple(checks),
        max_residual=worst,
        tolerance=tol,
    )


def random_probes(dim: int, count: int, seed: int) -> list[Operator]:
    """Seeded family of unit-norm Hermitian probes for verification."""
    return [random_hermitian(dim, s) for s in derived_seeds(seed, count)]


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def leo_to_json(pulse: LeakageEliminationOperator) -> dict:
    data = operator_to_json(pulse.unitary)
    data["route"] = pulse.route
    data["code_label"] = pulse.code.label
    data["phase"] = [pulse.phase.real, pulse.phase.imag]
    return data


def leo_from_json(data: dict) -> LeakageEliminationOperator:
    try:
        route = str(data["route"])
        code_label = str(data["code_label"])
        phase_re, phase_im = data["phase"]
    except (KeyError, TypeError, ValueError) as err:
        raise ValueError(f"malformed pulse record: {err}") from err
    code = codes.build_code(code_label)
    u = operator_from_json(data, tags=("unitary",))
    return LeakageEliminationOperator(
        u, code, complex(float(phase_re), float(phase_im)), route
    )

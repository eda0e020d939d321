"""Hamiltonian models: exchange interactions, logical rotations, and
seeded system-bath couplings with a known leakage structure.

Units: hbar = 1 throughout, so couplings are angular frequencies and
exp(-i H t) propagates for time t. Every random ingredient is drawn from
an explicitly seeded generator and normalized to unit spectral norm, so a
single scalar g sets the physical coupling scale and rebuilding a model
from (seed, g) is bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isfinite
from typing import Mapping, Sequence

import numpy as np

from . import codes as codes_mod
from .classify import decompose
from .codes import CodeSubspace
from .opalg import (
    Operator,
    derived_seeds,
    hermitian_exponential,
    pauli_string,
    random_hermitian,
)

RECONSTRUCTION_TOL = 1e-12

# system couplings that move population out of span{|01>, |10>}:
# single-qubit flips, optionally dressed with Z on the spectator qubit
DFS2_LEAK_LABELS = ("IX", "IY", "XI", "XZ", "YI", "YZ", "ZX", "ZY")


@dataclass(frozen=True)
class PairCoupling:
    """Exchange couplings (Jx, Jy, Jz) for one qubit pair."""

    jx: float
    jy: float
    jz: float

    def __post_init__(self):
        for v in (self.jx, self.jy, self.jz):
            if not isfinite(v):
                raise ValueError("couplings must be finite")

    def is_heisenberg(self) -> bool:
        return self.jx == self.jy == self.jz

    def is_xxz(self) -> bool:
        return (self.jx == self.jy or self.jx == -self.jy) and self.jz != self.jx

    def is_xy(self) -> bool:
        return self.jx == self.jy and self.jz == 0.0


@dataclass(frozen=True, eq=False)
class ExchangeCouplings:
    """Pairwise exchange couplings on a register, keyed by (i, j) with i < j."""

    terms: Mapping[tuple[int, int], PairCoupling]

    def __post_init__(self):
        clean = {}
        for pair, coupling in self.terms.items():
            i, j = pair
            if not (0 <= i < j):
                raise ValueError(f"pair {pair} must satisfy 0 <= i < j")
            if not isinstance(coupling, PairCoupling):
                coupling = PairCoupling(*coupling)
            clean[(int(i), int(j))] = coupling
        object.__setattr__(self, "terms", clean)

    @classmethod
    def uniform(cls, pairs: Sequence[tuple[int, int]], jx: float, jy: float,
                jz: float) -> "ExchangeCouplings":
        return cls({tuple(p): PairCoupling(jx, jy, jz) for p in pairs})

    @classmethod
    def heisenberg(cls, pairs: Sequence[tuple[int, int]], j: float):
        return cls.uniform(pairs, j, j, j)

    @classmethod
    def xy(cls, pairs: Sequence[tuple[int, int]], j: float):
        return cls.uniform(pairs, j, j, 0.0)

    @classmethod
    def xxz(cls, pairs: Sequence[tuple[int, int]], jxy: float, jz: float):
        return cls.uniform(pairs, jxy, jxy, jz)

    def is_heisenberg(self) -> bool:
        return all(c.is_heisenberg() for c in self.terms.values())

    def is_xxz(self) -> bool:
        return all(c.is_xxz() for c in self.terms.values())

    def is_xy(self) -> bool:
        return all(c.is_xy() for c in self.terms.values())

    def items(self):
        return sorted(self.terms.items())


def exchange_hamiltonian(n_qubits: int, couplings: ExchangeCouplings) -> Operator:
    """Sum of Jx XiXj + Jy YiYj + Jz ZiZj over the coupled pairs."""
    if n_qubits < 2:
        raise ValueError("exchange model needs at least two qubits")
    dim = 2**n_qubits
    h = np.zeros((dim, dim), dtype=complex)
    for (i, j), c in couplings.items():
        if j >= n_qubits:
            raise ValueError(f"pair ({i}, {j}) outside register of {n_qubits}")
        for name, strength in (("X", c.jx), ("Y", c.jy), ("Z", c.jz)):
            if strength == 0.0:
                continue
            chars = ["I"] * n_qubits
            chars[i] = name
            chars[j] = name
            h += strength * pauli_string("".join(chars)).mat
    h = (h + h.conj().T) / 2.0
    return Operator(h, frozenset({"hermitian"}))


@dataclass(frozen=True, eq=False)
class LogicalOps:
    """Logical Pauli triple on the dephasing-free pair.

    Each operator vanishes on span{|00>, |11>} and obeys the su(2) algebra
    on the code, and each commutes with the collective dephasing generator
    Z1 + Z2, so logical rotations never couple to that noise channel.
    """

    x: Operator
    y: Operator
    z: Operator


def logical_ops_dfs2() -> LogicalOps:
    # y sign: (Y1 X2 - X1 Y2)/2 is the choice whose code block is the
    # standard sigma_y when |01> is logical zero; the flipped sign breaks
    # the x/z recoupling identity
    x = (pauli_string("XX").mat + pauli_string("YY").mat) / 2.0
    y = (pauli_string("YX").mat - pauli_string("XY").mat) / 2.0
    z = (pauli_string("ZI").mat - pauli_string("IZ").mat) / 2.0
    herm = frozenset({"hermitian"})
    return LogicalOps(Operator(x, herm), Operator(y, herm), Operator(z, herm))


def recoupled_y_rotation(theta: float) -> Operator:
    """Logical y rotation built from x conjugation around a z rotation.

    exp(i pi/4 x) exp(-i theta z) exp(-i pi/4 x) rotates the z axis onto y,
    so only exchange (x-type) and detuning (z-type) generators are ever
    switched on; equals exp(-i theta y) on the whole four-dimensional space.
    """
    ops = logical_ops_dfs2()
    u = (
        hermitian_exponential(ops.x, np.pi / 4).mat
        @ hermitian_exponential(ops.z, -theta).mat
        @ hermitian_exponential(ops.x, -np.pi / 4).mat
    )
    return Operator(u, frozenset({"unitary"}))


# ---------------------------------------------------------------------------
# system-bath models
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SystemBathModel:
    """Joint Hamiltonian split by where its system factors act.

    h_c collects terms whose system side stays inside the code, h_perp the
    terms confined to the complement, h_l the leakage couplings; the three
    sum to h_joint exactly. The free bath Hamiltonian enters through h_c
    and h_perp (identity on the system splits into P + Q).
    """

    label: str
    code: CodeSubspace
    bath_dim: int
    coupling_strength: float
    bath_seed: int
    h_joint: Operator
    h_c: Operator
    h_perp: Operator
    h_l: Operator
    initial_bath_state: np.ndarray

    def __post_init__(self):
        joint = self.code.ambient_dim * self.bath_dim
        for part in (self.h_joint, self.h_c, self.h_perp, self.h_l):
            if part.dim != joint:
                raise ValueError("model parts have inconsistent dimensions")
        resid = np.linalg.norm(
            self.h_joint.mat - (self.h_c.mat + self.h_perp.mat + self.h_l.mat)
        )
        if resid > RECONSTRUCTION_TOL:
            raise ValueError(
                f"parts do not reconstruct the joint Hamiltonian: {resid:.3e}"
            )
        b = np.array(self.initial_bath_state, dtype=complex)
        if b.shape != (self.bath_dim,) or abs(np.linalg.norm(b) - 1.0) > 1e-12:
            raise ValueError("initial bath state must be a unit vector")
        b.setflags(write=False)
        object.__setattr__(self, "initial_bath_state", b)

    @property
    def system_dim(self) -> int:
        return self.code.ambient_dim

    @property
    def joint_dim(self) -> int:
        return self.system_dim * self.bath_dim

    @cached_property
    def joint_code_projector(self) -> np.ndarray:
        p = np.kron(self.code.projector, np.eye(self.bath_dim))
        p.setflags(write=False)
        return p

    @cached_property
    def joint_complement_projector(self) -> np.ndarray:
        q = np.kron(self.code.complement_projector, np.eye(self.bath_dim))
        q.setflags(write=False)
        return q

    @classmethod
    def from_terms(
        cls,
        label: str,
        code: CodeSubspace,
        terms: Sequence[tuple[float, Operator, Operator]],
        *,
        coupling_strength: float,
        bath_seed: int,
        bath_dim: int,
        free_bath: Operator | None = None,
        initial_bath_state: np.ndarray | None = None,
    ) -> "SystemBathModel":
        """Assemble a model from (weight, system factor, bath factor) terms.

        Each system factor is classified against the code and its pieces are
        routed into h_c / h_perp / h_l, so mixed factors are handled and the
        reconstruction identity holds by construction.
        """
        joint = code.ambient_dim * bath_dim
        h_c = np.zeros((joint, joint), dtype=complex)
        h_perp = np.zeros_like(h_c)
        h_l = np.zeros_like(h_c)
        for weight, sys_op, bath_op in terms:
            if bath_op.dim != bath_dim:
                raise ValueError("bath factor dimension mismatch")
            dec = decompose(sys_op, code)
            h_c += weight * np.kron(dec.e_part.mat, bath_op.mat)
            h_perp += weight * np.kron(dec.eperp_part.mat, bath_op.mat)
            h_l += weight * np.kron(dec.l_part.mat, bath_op.mat)
        if free_bath is not None:
            if free_bath.dim != bath_dim:
                raise ValueError("free bath Hamiltonian dimension mismatch")
            h_c += np.kron(code.projector, free_bath.mat)
            h_perp += np.kron(code.complement_projector, free_bath.mat)
        if initial_bath_state is None:
            initial_bath_state = np.zeros(bath_dim, dtype=complex)
            initial_bath_state[0] = 1.0
        herm = frozenset({"hermitian"})
        return cls(
            label=label,
            code=code,
            bath_dim=bath_dim,
            coupling_strength=coupling_strength,
            bath_seed=int(bath_seed),
            h_joint=Operator(h_c + h_perp + h_l, herm),
            h_c=Operator(h_c, herm),
            h_perp=Operator(h_perp, herm),
            h_l=Operator(h_l, herm),
            initial_bath_state=initial_bath_state,
        )


def hopping_model(
    n_levels: int,
    seed: int,
    g: float,
    bath_dim: int = 4,
    shared_bath: bool = False,
) -> SystemBathModel:
    """Random single-particle hopping on an n-level mode, bare-qubit code.

    The system Hamiltonian is a seeded unit-norm Hermitian scaled by g; each
    classified piece couples to its own seeded bath operator (or to one
    shared operator when shared_bath is set), plus a free bath term.
    """
    if n_levels < 3:
        raise ValueError("hopping model needs at least three levels to leak")
    code = codes_mod.bare_qubit_code(n_levels)
    h_sys = random_hermitian(n_levels, seed)
    dec = decompose(h_sys, code)
    seeds = derived_seeds(seed, 4)
    if shared_bath:
        b_c = b_perp = b_l = random_hermitian(bath_dim, seeds[0])
    else:
        b_c = random_hermitian(bath_dim, seeds[0])
        b_perp = random_hermitian(bath_dim, seeds[1])
        b_l = random_hermitian(bath_dim, seeds[2])
    h_bath = random_hermitian(bath_dim, seeds[3])
    return SystemBathModel.from_terms(
        "hopping",
        code,
        [(g, dec.e_part, b_c), (g, dec.eperp_part, b_perp), (g, dec.l_part, b_l)],
        coupling_strength=g,
        bath_seed=seed,
        bath_dim=bath_dim,
        free_bath=h_bath,
    )


def linear_optics_model(
    seed: int,
    g: float,
    bath_dim: int = 1,
    shared_bath: bool = False,
) -> SystemBathModel:
    """Random photon-conserving quadratic Hamiltonian on the dual-rail code.

    A seeded 4x4 mode matrix is lifted to the two-photon sector. With the
    default trivial bath the leakage is coherent: mode mixing between the
    {1,2} and {3,4} rails moves photons without any environment.
    """
    code = codes_mod.dual_rail_code()
    lifted = codes_mod.lift_quadratic(random_hermitian(4, seed).mat)
    if bath_dim == 1:
        one = Operator(np.ones((1, 1), dtype=complex),
                       frozenset({"hermitian", "diagonal"}))
        return SystemBathModel.from_terms(
            "linear_optics",
            code,
            [(g, lifted, one)],
            coupling_strength=g,
            bath_seed=seed,
            bath_dim=1,
        )
    dec = decompose(lifted, code)
    seeds = derived_seeds(seed, 4)
    if shared_bath:
        b_c = b_perp = b_l = random_hermitian(bath_dim, seeds[0])
    else:
        b_c = random_hermitian(bath_dim, seeds[0])
        b_perp = random_hermitian(bath_dim, seeds[1])
        b_l = random_hermitian(bath_dim, seeds[2])
    h_bath = random_hermitian(bath_dim, seeds[3])
    return SystemBathModel.from_terms(
        "linear_optics",
        code,
        [(g, dec.e_part, b_c), (g, dec.eperp_part, b_perp), (g, dec.l_part, b_l)],
        coupling_strength=g,
        bath_seed=seed,
        bath_dim=bath_dim,
        free_bath=h_bath,
    )


def dfs2_leakage_model(
    leak_set: Sequence[str],
    g: float,
    bath_seed: int,
    bath_dim: int = 4,
    shared_bath: bool = False,
    collective_strength: float = 0.0,
) -> SystemBathModel:
    """Dephasing-free pair with chosen leakage couplings to a qubit bath.

    leak_set names the system factors, e.g. "XI" for X on qubit 1 or "ZY"
    for Z1 Y2; each allowed label is purely off-diagonal with respect to
    the code. Child seed order: one bath operator per sorted label, one
    reserved for the optional collective dephasing term (Z1 + Z2), and the
    free bath Hamiltonian last, so toggling the collective term does not
    reshuffle the other draws.
    """
    labels = sorted(set(leak_set))
    if not labels:
        raise ValueError("leak_set must name at least one coupling")
    bad = [lab for lab in labels if lab not in DFS2_LEAK_LABELS]
    if bad:
        raise ValueError(
            f"unsupported leakage labels {bad}; allowed: {', '.join(DFS2_LEAK_LABELS)}"
        )
    code = codes_mod.dfs2_dephasing()
    seeds = derived_seeds(bath_seed, len(labels) + 2)
    terms: list[tuple[float, Operator, Operator]] = []
    for i, lab in enumerate(labels):
        bath_op = random_hermitian(bath_dim, seeds[0] if shared_bath else seeds[i])
        terms.append((g, pauli_string(lab), bath_op))
    if collective_strength != 0.0:
        collective = Operator(
            pauli_string("ZI").mat + pauli_string("IZ").mat,
            frozenset({"hermitian", "diagonal"}),
        )
        terms.append(
            (collective_strength, collective,
             random_hermitian(bath_dim, seeds[-2]))
        )
    h_bath = random_hermitian(bath_dim, seeds[-1])
    return SystemBathModel.from_terms(
        "dfs2_leakage",
        code,
        terms,
        coupling_strength=g,
        bath_seed=bath_seed,
        bath_dim=bath_dim,
        free_bath=h_bath,
    )


# ---------------------------------------------------------------------------
# config-driven construction
# ---------------------------------------------------------------------------

MODEL_NAMES = ("hopping", "linear_optics", "dfs2_leakage")


def model_from_config(config: Mapping) -> SystemBathModel:
    """Build a model from the JSON config layout.

    Expected keys: "model" (one of hopping / linear_optics / dfs2_leakage),
    "g", "seed", optional "bath_dim", and a "params" object with the
    model-specific fields.
    """
    if not isinstance(config, Mapping):
        raise ValueError("model config must be an object")
    name = config.get("model")
    if name not in MODEL_NAMES:
        raise ValueError(
            f"unknown model {name!r}; valid models: {', '.join(MODEL_NAMES)}"
        )
    params = config.get("params", {})
    if not isinstance(params, Mapping):
        raise ValueError("model params must be an object")
    allowed = {
        "hopping": {"n_levels", "shared_bath"},
        "linear_optics": {"shared_bath"},
        "dfs2_leakage": {"leak_set", "shared_bath", "collective_strength"},
    }[name]
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise ValueError(
            f"unknown params for model {name!r}: {', '.join(unknown)}; "
            f"allowed: {', '.join(sorted(allowed))}"
        )
    try:
        g = float(config["g"])
        seed = int(config["seed"])
    except (KeyError, TypeError, ValueError) as err:
        raise ValueError(f"model config needs numeric 'g' and integer 'seed': {err}")
    if not isfinite(g):
        raise ValueError("coupling strength g must be finite")
    shared_bath = bool(params.get("shared_bath", False))
    if name == "hopping":
        bath_dim = int(config.get("bath_dim", 4))
        return hopping_model(
            int(params.get("n_levels", 4)), seed, g,
            bath_dim=bath_dim, shared_bath=shared_bath,
        )
    if name == "linear_optics":
        bath_dim = int(config.get("bath_dim", 1))
        return linear_optics_model(
            seed, g, bath_dim=bath_dim, shared_bath=shared_bath,
        )
    bath_dim = int(config.get("bath_dim", 4))
    leak_set = params.get("leak_set")
    if not isinstance(leak_set, Sequence) or isinstance(leak_set, str):
        raise ValueError("dfs2_leakage params need a 'leak_set' list")
    return dfs2_leakage_model(
        [str(s) for s in leak_set],
        g,
        seed,
        bath_dim=bath_dim,
        shared_bath=shared_bath,
        collective_strength=float(params.get("collective_strength", 0.0)),
    )

"""Code subspaces and the structure needed to build them.

A code subspace is an isometry from logical coordinates into an ambient
Hilbert space. The builders here cover the registers used throughout:
the lowest two levels of a multilevel mode, the two-qubit dephasing-free
pair span{|01>, |10|}, collective-spin subspaces of three and four qubits
obtained from the total-spin sector decomposition, and the dual-rail
two-photon code on four bosonic modes.

All constructions are deterministic: repeated calls return bit-identical
bases, and every degeneracy is resolved by Gram-Schmidt against the
canonical basis in a fixed order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb, sqrt

import numpy as np

from .opalg import Operator

ISOMETRY_TOL = 1e-12
SECTOR_EIG_TOL = 1e-10

# threshold below which a Gram-Schmidt residual is treated as linearly
# dependent rather than as a new basis direction
_GS_RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CodeSubspace:
    """Isometry V from code coordinates into the ambient space.

    The columns of basis are the code vectors; V^dag V = I is checked at
    construction. Projectors and a canonical complement basis are derived
    lazily and cached.
    """

    label: str
    basis: np.ndarray

    def __post_init__(self):
        v = np.array(self.basis, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] < v.shape[1] or v.shape[1] < 1:
            raise ValueError(f"code basis has invalid shape {v.shape}")
        gram = v.conj().T @ v
        dev = np.max(np.abs(gram - np.eye(v.shape[1])))
        if dev > ISOMETRY_TOL:
            raise ValueError(
                f"code basis is not an isometry: gram deviation {dev:.3e}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "basis", v)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def code_dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        p = self.basis @ self.basis.conj().T
        p.setflags(write=False)
        return p

    @cached_property
    def complement_projector(self) -> np.ndarray:
        q = np.eye(self.ambient_dim) - self.projector
        q.setflags(write=False)
        return q

    @cached_property
    def complement_basis(self) -> np.ndarray:
        """Orthonormal basis of the orthogonal complement.

        Built by projecting canonical basis vectors out of the code in index
        order and keeping each nonvanishing residual, so the result is a
        deterministic function of the code basis alone.
        """
        cols = _gram_schmidt_complete(
            self.basis, self.ambient_dim - self.code_dim
        )
        cols.setflags(write=False)
        return cols

    def contains(self, vec: np.ndarray, tol: float = 1e-12) -> bool:
        v = np.asarray(vec, dtype=complex)
        return bool(np.linalg.norm(self.complement_projector @ v) <= tol)

    def __repr__(self) -> str:
        return (
            f"CodeSubspace({self.label!r}, ambient={self.ambient_dim}, "
            f"code={self.code_dim})"
        )


def _gram_schmidt_complete(v: np.ndarray, want: int) -> np.ndarray:
    """Extend the columns of v to a full basis; return the new columns."""
    dim = v.shape[0]
    accepted: list[np.ndarray] = []
    for j in range(dim):
        if len(accepted) == want:
            break
        w = np.zeros(dim, dtype=complex)
        w[j] = 1.0
        w = w - v @ (v.conj().T @ w)
        for a in accepted:
            w = w - a * np.vdot(a, w)
        nrm = np.linalg.norm(w)
        if nrm > _GS_RANK_TOL:
            w = w / nrm
            # second pass removes the O(eps) residue the first one leaves
            w = w - v @ (v.conj().T @ w)
            for a in accepted:
                w = w - a * np.vdot(a, w)
            accepted.append(w / np.linalg.norm(w))
    if len(accepted) != want:
        raise ValueError("failed to complete basis: input columns degenerate")
    if want == 0:
        return np.zeros((dim, 0), dtype=complex)
    return np.column_stack(accepted)


# ---------------------------------------------------------------------------
# elementary codes
# ---------------------------------------------------------------------------


def bare_qubit_code(n_levels: int) -> CodeSubspace:
    """Lowest two levels of an n-level mode as the qubit."""
    if n_levels < 2:
        raise ValueError("bare qubit needs at least two levels")
    v = np.zeros((n_levels, 2), dtype=complex)
    v[0, 0] = 1.0
    v[1, 1] = 1.0
    return CodeSubspace(f"bare{n_levels}", v)


def dfs2_dephasing() -> CodeSubspace:
    """Two-qubit code span{|01>, |10>}, immune to collective dephasing."""
    v = np.zeros((4, 2), dtype=complex)
    v[1, 0] = 1.0  # |01> -> logical 0
    v[2, 1] = 1.0  # |10> -> logical 1
    return CodeSubspace("dfs2", v)


# ---------------------------------------------------------------------------
# collective spin
# ---------------------------------------------------------------------------


def _single_site(op2: np.ndarray, site: int, n: int) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for i in range(n):
        m = np.kron(m, op2 if i == site else np.eye(2, dtype=complex))
    return m


def collective_spin(n_qubits: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Total spin components (Sx, Sy, Sz), each one half the Pauli sum."""
    sx = np.zeros((2**n_qubits,) * 2, dtype=complex)
    sy = np.zeros_like(sx)
    sz = np.zeros_like(sx)
    px = np.array([[0, 1], [1, 0]], dtype=complex)
    py = np.array([[0, -1j], [1j, 0]], dtype=complex)
    pz = np.array([[1, 0], [0, -1]], dtype=complex)
    for i in range(n_qubits):
        sx += _single_site(px, i, n_qubits) / 2.0
        sy += _single_site(py, i, n_qubits) / 2.0
        sz += _single_site(pz, i, n_qubits) / 2.0
    return sx, sy, sz


def s_squared(n_qubits: int) -> Operator:
    """Total-spin-squared operator Sx^2 + Sy^2 + Sz^2 on n qubits."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    sx, sy, sz = collective_spin(n_qubits)
    m = sx @ sx + sy @ sy + sz @ sz
    m = (m + m.conj().T) / 2.0
    return Operator(m, frozenset({"hermitian"}))


@dataclass(frozen=True, eq=False)
class SpinSector:
    """One total-spin value: multiplicity copies of a (2S+1)-dim ladder.

    Columns of basis are ordered by ascending Sz eigenvalue, then by copy
    index; copies are resolved by Gram-Schmidt against the computational
    basis on the highest-weight space, in index order.
    """

    spin: float
    multiplicity: int
    block_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=np.complex128)
        if b.shape[1] != self.multiplicity * self.block_dim:
            raise ValueError("sector basis has wrong number of columns")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)


@dataclass(frozen=True, eq=False)
class SpinSectorDecomposition:
    n_qubits: int
    sectors: tuple[SpinSector, ...]

    def __post_init__(self):
        total = sum(s.multiplicity * s.block_dim for s in self.sectors)
        if total != 2**self.n_qubits:
            raise ValueError(
                f"sector dimensions sum to {total}, expected {2**self.n_qubits}"
            )

    def sector(self, spin: float) -> SpinSector:
        for s in self.sectors:
            if abs(s.spin - spin) < 1e-9:
                return s
        raise KeyError(f"no sector with spin {spin}")

    def full_basis(self) -> np.ndarray:
        return np.hstack([s.basis for s in self.sectors])


def spin_multiplicity(n_qubits: int, spin: float) -> int:
    """Number of independent spin-S ladders in n spin-1/2 sites."""
    k = round(n_qubits / 2 - spin)
    if k < 0 or abs(n_qubits / 2 - spin - k) > 1e-9:
        return 0
    low = comb(n_qubits, k - 1) if k >= 1 else 0
    return comb(n_qubits, k) - low


def spin_sector_decomposition(n_qubits: int) -> SpinSectorDecomposition:
    """Simultaneous (S^2, Sz) eigenbasis of n qubits, organized by sector.

    Strategy: for each spin S, the states annihilated by the raising
    operator inside the Sz = S magnetization block are exactly the
    highest-weight vectors. A deterministic orthonormal basis of that
    space seeds the multiplicity copies, and repeated application of the
    lowering operator fills in each ladder with the standard
    sqrt((S+m)(S-m+1)) normalization.
    """
    if not 2 <= n_qubits <= 8:
        raise ValueError("supported register sizes are 2..8 qubits")
    dim = 2**n_qubits
    sx, sy, _ = collective_spin(n_qubits)
    s_plus = sx + 1j * sy
    s_minus = sx - 1j * sy

    # magnetization blocks: index i has popcount(i) down spins
    blocks: dict[int, list[int]] = {}
    for i in range(dim):
        blocks.setdefault(bin(i).count("1"), []).append(i)

    n_spins = n_qubits // 2 + 1
    spins = [n_qubits / 2.0 - j for j in range(n_spins)]

    sectors = []
    for spin in spins:
        mult = spin_multiplicity(n_qubits, spin)
        if mult == 0:
            continue
        k = round(n_qubits / 2 - spin)
        idx = blocks[k]
        if k == 0:
            hw = np.zeros((dim, 1), dtype=complex)
            hw[idx[0], 0] = 1.0
        else:
            # raising operator restricted to the Sz = spin block
            restricted = s_plus[np.ix_(blocks[k - 1], idx)]
            hw_local = _null_space_deterministic(restricted, mult)
            hw = np.zeros((dim, mult), dtype=complex)
            hw[idx, :] = hw_local
        ladders = []
        for a in range(mult):
            states = [hw[:, a]]
            m = spin
            while m > -spin + 1e-9:
                nxt = s_minus @ states[-1]
                nxt = nxt / sqrt((spin + m) * (spin - m + 1))
                states.append(nxt)
                m -= 1.0
            ladders.append(states)
        block_dim = len(ladders[0])
        # order columns by ascending Sz (ladders run from m=+S down)
        cols = []
        for j in range(block_dim - 1, -1, -1):
            for a in range(mult):
                cols.append(ladders[a][j])
        sectors.append(SpinSector(spin, mult, block_dim, np.column_stack(cols)))
    sectors.sort(key=lambda s: s.spin)
    return SpinSectorDecomposition(n_qubits, tuple(sectors))


def _null_space_deterministic(a: np.ndarray, expected: int) -> np.ndarray:
    """Orthonormal null-space basis with a canonical-basis-seeded order."""
    _, sing, vh = np.linalg.svd(a)
    tol = max(a.shape) * (sing[0] if sing.size else 0.0) * 1e-12
    rank = int(np.sum(sing > tol))
    null = vh[rank:].conj().T
    if null.shape[1] != expected:
        raise ValueError(
            f"null space dimension {null.shape[1]}, expected {expected}"
        )
    proj = null @ null.conj().T
    cols: list[np.ndarray] = []
    for j in range(a.shape[1]):
        if len(cols) == expected:
            break
        w = proj[:, j].copy()
        for c in cols:
            w -= c * np.vdot(c, w)
        nrm = np.linalg.norm(w)
        if nrm > _GS_RANK_TOL:
            w /= nrm
            for c in cols:
                w -= c * np.vdot(c, w)
            cols.append(w / np.linalg.norm(w))
    if len(cols) != expected:
        raise ValueError("could not seed null-space basis from canonical vectors")
    return np.column_stack(cols)


def dfs3_collective() -> CodeSubspace:
    """Spin-1/2 sector of three qubits: a four-dimensional noiseless subsystem.

    Both doublets are kept, so collective errors act only on the ladder
    index and the doublet label is preserved.
    """
    dec = spin_sector_decomposition(3)
    return CodeSubspace("dfs3", dec.sector(0.5).basis)


def dfs4_collective() -> CodeSubspace:
    """The two total singlets of four qubits."""
    dec = spin_sector_decomposition(4)
    return CodeSubspace("dfs4", dec.sector(0.0).basis)


# ---------------------------------------------------------------------------
# bosonic two-photon sector and the dual-rail code
# ---------------------------------------------------------------------------

N_MODES = 4
N_PHOTONS = 2


def two_photon_occupations() -> list[tuple[int, ...]]:
    """Occupation vectors of two photons in four modes, lexicographic order."""
    occs = [
        occ
        for occ in itertools.product(range(N_PHOTONS + 1), repeat=N_MODES)
        if sum(occ) == N_PHOTONS
    ]
    return sorted(occs)


def occupation_index(occ: tuple[int, ...]) -> int:
    return two_photon_occupations().index(tuple(occ))


def lift_quadratic(coeff: np.ndarray) -> Operator:
    """Lift sum_kl coeff[k,l] b_k^dag b_l to the two-photon sector.

    coeff is a 4x4 mode-space matrix; the result acts on the 10-dimensional
    occupation basis from two_photon_occupations(). Hermitian input yields
    a Hermitian-tagged output.
    """
    a = np.asarray(coeff, dtype=complex)
    if a.shape != (N_MODES, N_MODES):
        raise ValueError(f"coefficient matrix must be 4x4, got {a.shape}")
    occs = two_photon_occupations()
    index = {occ: i for i, occ in enumerate(occs)}
    dim = len(occs)
    h = np.zeros((dim, dim), dtype=complex)
    for occ in occs:
        col = index[occ]
        for l in range(N_MODES):
            if occ[l] == 0:
                continue
            for k in range(N_MODES):
                if a[k, l] == 0:
                    continue
                amp = sqrt(occ[l])
                step = list(occ)
                step[l] -= 1
                amp *= sqrt(step[k] + 1)
                step[k] += 1
                h[index[tuple(step)], col] += a[k, l] * amp
    hermitian_input = np.max(np.abs(a - a.conj().T)) <= 1e-14
    if hermitian_input:
        h = (h + h.conj().T) / 2.0
        return Operator(h, frozenset({"hermitian"}))
    return Operator(h)


def dual_rail_code() -> CodeSubspace:
    """Two dual-rail qubits: one photon in modes {1,2}, one in modes {3,4}.

    Logical basis order: |00> = b1 b3, |01> = b1 b4, |10> = b2 b3,
    |11> = b2 b4 (creation operators acting on vacuum).
    """
    occs = two_photon_occupations()
    index = {occ: i for i, occ in enumerate(occs)}
    logical = [(1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)]
    v = np.zeros((len(occs), 4), dtype=complex)
    for j, occ in enumerate(logical):
        v[index[occ], j] = 1.0
    return CodeSubspace("dual_rail", v)


# ---------------------------------------------------------------------------
# registry and serialization
# ---------------------------------------------------------------------------

_FIXED_CODES = {
    "dfs2": dfs2_dephasing,
    "dfs3": dfs3_collective,
    "dfs4": dfs4_collective,
    "dual_rail": dual_rail_code,
}


def code_labels() -> list[str]:
    return sorted(_FIXED_CODES) + ["bare<n>"]


def build_code(label: str) -> CodeSubspace:
    """Construct a registered code from its label ("dfs2", "bare4", ...)."""
    if label in _FIXED_CODES:
        return _FIXED_CODES[label]()
    if label.startswith("bare"):
        try:
            n = int(label[4:])
        except ValueError:
            n = 0
        if n >= 2:
            return bare_qubit_code(n)
    raise ValueError(
        f"unknown code label {label!r}; valid labels: {', '.join(code_labels())}"
    )


def code_to_json(code: CodeSubspace) -> dict:
    return {
        "label": code.label,
        "ambient_dim": code.ambient_dim,
        "code_dim": code.code_dim,
        "basis_re": code.basis.real.tolist(),
        "basis_im": code.basis.imag.tolist(),
    }


def code_from_json(data: dict) -> CodeSubspace:
    try:
        label = str(data["label"])
        ambient = int(data["ambient_dim"])
        cdim = int(data["code_dim"])
        re = np.array(data["basis_re"], dtype=float)
        im = np.array(data["basis_im"], dtype=float)
    except (KeyError, TypeError, ValueError) as err:
        raise ValueError(f"malformed code record: {err}") from err
    if re.shape != (ambient, cdim) or im.shape != (ambient, cdim):
        raise ValueError("code record dimensions disagree with basis shape")
    return CodeSubspace(label, re + 1j * im)

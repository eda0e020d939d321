#!/usr/bin/env python3
"""Reference oracle for the pinned leakage-suppression benchmark.

Recomputes every number in golden_oracle.json from first principles with
scipy.linalg.expm products and explicit state propagation. The main library
evolves with an eigendecomposition route instead, so agreement between the
two is a real cross-check, not a tautology. Nothing here imports leolab.

Regenerate the golden file with:

    python bench/oracle.py

The construction recipes (seeded Gaussian Hermitians, child-seed derivation,
model assembly order) are the shared contract between this script and the
library; both sides implement them independently.
"""

import json
import os

import numpy as np
from scipy.linalg import expm

# ---------------------------------------------------------------------------
# pinned benchmark definition
# ---------------------------------------------------------------------------

LEAK_SET = ["XI"]          # X on qubit 1, coupling the code to its complement
G = 0.05                   # coupling strength
BATH_SEED = 3
BATH_DIM = 4

BENCH_N_CYCLES = 64
BENCH_TOTAL_TIME = 2.0     # g * T = 0.1
EXAMPLE_N_CYCLES = 64
EXAMPLE_TAU = 0.01

SWEEP_N_LIST = [1, 2, 4, 8, 16, 32, 64]
SINGLE_CYCLE_TAUS = [0.1, 0.05, 0.025, 0.0125]

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def random_hermitian(dim, seed):
    """Unit-spectral-norm Hermitian from a seeded complex Gaussian draw."""
    rng = np.random.default_rng(int(seed))
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / 2.0
    return h / np.linalg.norm(h, 2)


def derived_seeds(base, count):
    """Child seeds for operators that must be independent but reproducible."""
    return [int(s) for s in np.random.SeedSequence(int(base)).generate_state(count)]


def build_benchmark_model():
    """Two-qubit dephasing-free code coupled to a two-qubit bath via X1.

    Child seed order: one per leakage label (sorted), one reserved for an
    optional collective-dephasing term, and the bath Hamiltonian last.
    """
    labels = sorted(LEAK_SET)
    assert labels == ["XI"]
    seeds = derived_seeds(BATH_SEED, len(labels) + 2)
    b_coupling = random_hermitian(BATH_DIM, seeds[0])
    h_bath = random_hermitian(BATH_DIM, seeds[-1])

    x1 = np.kron(X, I2)
    v = np.zeros((4, 2), dtype=complex)
    v[1, 0] = 1.0  # |01>
    v[2, 1] = 1.0  # |10>
    p = v @ v.conj().T
    q = np.eye(4) - p

    # X1 is purely off-diagonal with respect to the code split
    assert np.linalg.norm(p @ x1 @ p) < 1e-14
    assert np.linalg.norm(q @ x1 @ q) < 1e-14

    h_l = G * np.kron(x1, b_coupling)
    h_c = np.kron(p, h_bath)
    h_perp = np.kron(q, h_bath)
    h_joint = h_l + h_c + h_perp

    bath0 = np.zeros(BATH_DIM, dtype=complex)
    bath0[0] = 1.0
    psi0 = np.kron(v[:, 0], bath0)  # |01> (x) bath ground
    q_joint = np.kron(q, np.eye(BATH_DIM))
    r_joint = np.kron(np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex),
                      np.eye(BATH_DIM))  # Z1 Z2 pulse
    return h_joint, h_c, h_perp, h_l, psi0, q_joint, r_joint


def leakage(psi, q_joint):
    return float(np.vdot(psi, q_joint @ psi).real)


def kick_cycle(h_joint, r_joint, tau):
    e = expm(-1j * h_joint * tau)
    return e @ r_joint.conj().T @ e @ r_joint


def pulsed_unitary(h_joint, r_joint, n_cycles, tau):
    return np.linalg.matrix_power(kick_cycle(h_joint, r_joint, tau), n_cycles)


def main():
    h_joint, h_c, h_perp, h_l, psi0, q_joint, r_joint = build_benchmark_model()

    fingerprint = {
        "h_joint_fro": np.linalg.norm(h_joint),
        "h_c_fro": np.linalg.norm(h_c),
        "h_perp_fro": np.linalg.norm(h_perp),
        "h_l_fro": np.linalg.norm(h_l),
        "h_joint_0_0_re": h_joint[0, 0].real,
        "h_joint_0_8_re": h_joint[0, 8].real,
        "h_joint_0_9_re": h_joint[0, 9].real,
        "h_joint_0_9_im": h_joint[0, 9].imag,
        "h_joint_4_5_re": h_joint[4, 5].real,
        "h_joint_4_5_im": h_joint[4, 5].imag,
    }

    # fixed-tau example run
    u_ex = pulsed_unitary(h_joint, r_joint, EXAMPLE_N_CYCLES, EXAMPLE_TAU)
    t_ex = 2 * EXAMPLE_N_CYCLES * EXAMPLE_TAU
    u_ex_free = expm(-1j * h_joint * t_ex)
    example = {
        "n_cycles": EXAMPLE_N_CYCLES,
        "tau": EXAMPLE_TAU,
        "total_time": t_ex,
        "final_leakage_pulsed": leakage(u_ex @ psi0, q_joint),
        "final_leakage_free": leakage(u_ex_free @ psi0, q_joint),
    }

    # benchmark: fixed total time, g * T = 0.1
    tau_b = BENCH_TOTAL_TIME / (2 * BENCH_N_CYCLES)
    u_b = pulsed_unitary(h_joint, r_joint, BENCH_N_CYCLES, tau_b)
    u_free = expm(-1j * h_joint * BENCH_TOTAL_TIME)
    u_lim = expm(-1j * (h_c + h_perp) * BENCH_TOTAL_TIME)
    leak_pulsed = leakage(u_b @ psi0, q_joint)
    leak_free = leakage(u_free @ psi0, q_joint)
    benchmark = {
        "n_cycles": BENCH_N_CYCLES,
        "total_time": BENCH_TOTAL_TIME,
        "tau": tau_b,
        "final_leakage_pulsed": leak_pulsed,
        "final_leakage_free": leak_free,
        "suppression_factor": leak_free / leak_pulsed,
        "distance_to_limit": float(np.linalg.norm(u_b - u_lim, 2)),
        "free_distance_to_limit": float(np.linalg.norm(u_free - u_lim, 2)),
    }

    # convergence toward the decoupled limit at fixed total time
    distances = []
    final_leakages = []
    for n in SWEEP_N_LIST:
        tau = BENCH_TOTAL_TIME / (2 * n)
        u_n = pulsed_unitary(h_joint, r_joint, n, tau)
        distances.append(float(np.linalg.norm(u_n - u_lim, 2)))
        final_leakages.append(leakage(u_n @ psi0, q_joint))
    ratios = {}
    for n in (8, 16, 32):
        i = SWEEP_N_LIST.index(n)
        j = SWEEP_N_LIST.index(2 * n)
        ratios[str(n)] = distances[i] / distances[j]
    convergence = {
        "n_list": SWEEP_N_LIST,
        "distances": distances,
        "final_leakages": final_leakages,
        "ratios": ratios,
        "distance_monotone_nonincreasing": bool(
            all(b <= a * (1 + 1e-12) for a, b in zip(distances, distances[1:]))
        ),
        "pulsed_below_free_from_n": [
            int(n) for n, lk in zip(SWEEP_N_LIST, final_leakages) if lk < leak_free
        ],
    }

    # single-cycle defect against the limit over one period, expect slope 2
    defects = []
    for tau in SINGLE_CYCLE_TAUS:
        u1 = kick_cycle(h_joint, r_joint, tau)
        lim = expm(-1j * (h_c + h_perp) * 2 * tau)
        defects.append(float(np.linalg.norm(u1 - lim, 2)))
    slope = float(np.polyfit(np.log(SINGLE_CYCLE_TAUS), np.log(defects), 1)[0])
    single_cycle = {
        "taus": SINGLE_CYCLE_TAUS,
        "defects": defects,
        "loglog_slope": slope,
    }

    # seed pinned for the four-level hopping model: leakage block must be
    # well away from zero or the model exercises nothing
    h4 = random_hermitian(4, 7)
    p4 = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
    q4 = np.eye(4) - p4
    hopping = {
        "n_levels": 4,
        "seed": 7,
        "l_part_fro": float(np.linalg.norm(p4 @ h4 @ q4 + q4 @ h4 @ p4)),
    }

    golden = {
        "recipe": {
            "leak_set": LEAK_SET,
            "g": G,
            "bath_seed": BATH_SEED,
            "bath_dim": BATH_DIM,
            "derived_seeds": derived_seeds(BATH_SEED, len(LEAK_SET) + 2),
            "initial_state": "code:0",
        },
        "model_fingerprint": fingerprint,
        "example_run": example,
        "benchmark": benchmark,
        "convergence": convergence,
        "single_cycle": single_cycle,
        "hopping_seed7": hopping,
    }

    out = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                       "golden_oracle.json")
    with open(out, "w") as fh:
        json.dump(golden, fh, indent=2)
        fh.write("\n")
    print(f"wrote {out}")
    print(f"  benchmark suppression factor: {benchmark['suppression_factor']:.6g}")
    print(f"  example-run pulsed leakage:   {example['final_leakage_pulsed']:.6g}")
    print(f"  convergence ratios:           {ratios}")
    print(f"  single-cycle log-log slope:   {slope:.6g}")
    print(f"  hopping seed-7 leakage norm:  {hopping['l_part_fro']:.6g}")


if __name__ == "__main__":
    main()

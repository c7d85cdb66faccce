'''Initial wavepackets, propagation drivers and the density error
metric.

Three propagation routes produce grid-density trajectories from the
same initial state: exact evolution under the grid Hamiltonian
("classical"), evolution under the reassembled spin-model blocks
("ising"), and per-step compiled circuits for each parity block
("circuit-exact" / "circuit-shots").
'''

from dataclasses import dataclass

import numpy as np

from . import units
from .grid import eigensolve
from .givens import to_mapped_basis, from_mapped_basis
from .qsd import qsd_compile
from .sim import (exact_propagator, run_circuit, sample_shots,
                  mapped_density_to_grid)


@dataclass(frozen=True)
class WavepacketSpec:
    '''Initial state selector.

    kind "delta": unit amplitude at grid index x0_index (the donor-side
    endpoint by default); "gaussian": sampled exp(-(x-mu)^2 / 2 sigma^2);
    "thermal": normalized sum_j exp(-E_j / kT) chi_j.
    '''
    kind: str
    x0_index: int = 0
    mu: float = 0.0        # Angstrom
    sigma: float = 0.1     # Angstrom
    temperature: float = 300.0  # Kelvin
    sqrt_weights: bool = False  # use exp(-E/2kT) amplitudes instead


@dataclass(frozen=True)
class Trajectory:
    '''Time series of grid probability densities.'''
    t_fs: np.ndarray
    rho: np.ndarray          # shape (steps+1, 2^N)
    method: str
    dx: float                # grid spacing, Angstrom
    shots: int = None
    seed: object = None


def initial_wavepacket(spec, grid, eig=None):
    '''Grid-basis amplitudes for the requested wavepacket, normalized.'''
    n = grid.n_points
    if spec.kind == "delta":
        if not 0 <= spec.x0_index < n:
            raise ValueError("x0_index outside the grid")
        psi = np.zeros(n)
        psi[spec.x0_index] = 1.0
    elif spec.kind == "gaussian":
        if spec.sigma <= 0:
            raise ValueError("sigma must be positive")
        x = grid.points
        psi = np.exp(-(x - spec.mu) ** 2 / (2 * spec.sigma ** 2))
    elif spec.kind == "thermal":
        if eig is None:
            raise ValueError("thermal wavepacket needs the eigensystem")
        if spec.temperature <= 0:
            raise ValueError("temperature must be positive")
        kt = units.KB_HARTREE * spec.temperature
        e = eig.energies - eig.energies[0]
        w = np.exp(-e / (2 * kt if spec.sqrt_weights else kt))
        psi = eig.states @ w
    else:
        raise ValueError(f"unknown wavepacket kind {spec.kind!r}")
    return psi / np.linalg.norm(psi)


def evolve_exact(ham_or_eig, psi0, dt_fs, steps):
    '''Amplitude trajectory under exp(-i H t); shape (steps+1, dim).'''
    eig = ham_or_eig if hasattr(ham_or_eig, "energies") \
        else eigensolve(ham_or_eig)
    c0 = eig.states.T @ np.asarray(psi0, dtype=complex)
    t_au = units.fs_to_au(dt_fs) * np.arange(steps + 1)
    phases = np.exp(-1j * np.outer(t_au, eig.energies))
    return (phases * c0) @ eig.states.T


def _block_evolve(block_even, block_odd, psi0_map, partition, dt_fs, steps):
    '''Evolve the two parity components exactly under the given block
    matrices; returns mapped-basis amplitudes, shape (steps+1, 2^N).'''
    half = partition.half
    dim = 2 * half
    out = np.empty((steps + 1, dim), dtype=complex)
    for states, block in ((partition.even_states, block_even),
                          (partition.odd_states, block_odd)):
        comp = evolve_exact(block, psi0_map[states], dt_fs, steps)
        out[:, states] = comp
    return out


def _circuit_evolve(block_even, block_odd, psi0_map, partition, dt_fs, steps):
    '''Per-step compiled propagation: each U(t_s) of each parity block is
    compiled to gates and run on the block component.'''
    half = partition.half
    nb = partition.n_qubits - 1
    dim = 2 * half
    out = np.empty((steps + 1, dim), dtype=complex)
    for states, block in ((partition.even_states, block_even),
                          (partition.odd_states, block_odd)):
        eig = eigensolve(block)
        comp0 = psi0_map[states]
        out[0, states] = comp0
        for s in range(1, steps + 1):
            u = exact_propagator(None, s * dt_fs, eig=eig)
            if nb == 0:
                out[s, states] = u @ comp0
            else:
                seq = qsd_compile(u)
                out[s, states] = run_circuit(comp0, seq)
    return out


def propagate(method, ham, psi0, dt_fs, steps, gmap=None, partition=None,
              blocks=None, shots=None, seed=None):
    '''Produce a density Trajectory.

    method "classical": exact evolution of psi0 under `ham`.
    method "ising": block evolution under `blocks` = (even, odd) spin
    block matrices (e.g. MappedSystem.block_even/odd).
    method "circuit-exact" / "circuit-shots": per-step compiled circuits
    for `blocks` = the rotated Hamiltonian blocks in parity order.
    Shot mode samples `shots` measurements per step and uses the
    classical amplitudes as the pair-split reference.
    '''
    if method not in ("classical", "ising", "circuit-exact",
                      "circuit-shots"):
        raise ValueError(f"unknown method {method!r}")
    if dt_fs <= 0:
        raise ValueError("dt_fs must be positive")
    psi0 = np.asarray(psi0, dtype=complex)
    dx = ham.grid.dx
    t_fs = dt_fs * np.arange(steps + 1)
    ref = evolve_exact(ham, psi0, dt_fs, steps)
    if method == "classical":
        return Trajectory(t_fs=t_fs, rho=np.abs(ref) ** 2,
                          method=method, dx=dx)
    if gmap is None or partition is None or blocks is None:
        raise ValueError(f"method {method!r} needs gmap, partition, blocks")
    psi0_map = to_mapped_basis(psi0, gmap, partition)
    if method == "ising":
        states = _block_evolve(blocks[0], blocks[1], psi0_map, partition,
                               dt_fs, steps)
    else:
        states = _circuit_evolve(blocks[0], blocks[1], psi0_map, partition,
                                 dt_fs, steps)
    if method == "circuit-shots":
        if shots is None:
            raise ValueError("circuit-shots needs a shot count")
        rho = shot_density_trajectory(states, ref, gmap, partition,
                                      shots, seed)
        return Trajectory(t_fs=t_fs, rho=rho, method=method, dx=dx,
                          shots=int(shots), seed=seed)
    rho = np.array([np.abs(from_mapped_basis(s, gmap, partition)) ** 2
                    for s in states])
    return Trajectory(t_fs=t_fs, rho=rho, method=method, dx=dx)


def shot_density_trajectory(mapped_states, reference_states, gmap, partition,
                            shots, seed):
    '''Sample each mapped state and transport the empirical densities to
    the grid with the reference pair-split.  Per-step draws are
    independent streams spawned from one seed.'''
    ss = np.random.SeedSequence(seed)
    children = ss.spawn(len(mapped_states))
    rho = np.empty((len(mapped_states), mapped_states.shape[1]))
    for s, (state, child) in enumerate(zip(mapped_states, children)):
        res = sample_shots(state, shots, child)
        rho[s] = mapped_density_to_grid(res.probabilities, gmap, partition,
                                        reference=reference_states[s])
    return rho


def probability_error(traj_q, traj_c):
    '''Time- and grid-averaged absolute density difference.'''
    if traj_q.rho.shape != traj_c.rho.shape:
        raise ValueError("trajectories have different shapes")
    if not np.allclose(traj_q.t_fs, traj_c.t_fs):
        raise ValueError("trajectories have different time axes")
    return float(np.mean(np.abs(traj_q.rho - traj_c.rho)))

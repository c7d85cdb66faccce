'''Statevector execution of gate sequences, exact eigendecomposition
propagators, and seeded shot sampling.

The sampler uses numpy's Generator with the PCG64 bit generator; the
seed is recorded in every ShotResult so runs are bit-exact
reproducible.
'''

from dataclasses import dataclass

import numpy as np

from . import units
from .grid import NuclearHamiltonian, EigenSystem, eigensolve
from .givens import from_mapped_basis


@dataclass(frozen=True)
class ShotResult:
    '''Counts from measuring a state in the computational basis.'''
    shots: int
    counts: np.ndarray
    seed: object

    @property
    def probabilities(self):
        return self.counts / self.shots


def exact_propagator(ham, t_fs, eig=None):
    '''U(t) = X exp(-i E t) X^T from the eigendecomposition of a real
    symmetric Hamiltonian (Hartree, time in femtoseconds).'''
    if eig is None:
        eig = ham if isinstance(ham, EigenSystem) else eigensolve(ham)
    t_au = units.fs_to_au(t_fs)
    phases = np.exp(-1j * eig.energies * t_au)
    return (eig.states * phases) @ eig.states.T


def _apply_gate(amp, gate, n):
    '''Apply one gate in place to amplitudes of shape (2^n, ...).
    Axis 0 indexes the basis state (qubit q is bit q of the index);
    trailing axes are batch dimensions.'''
    if gate.kind == "phase":
        amp *= np.exp(1j * gate.angle)
        return amp
    dim = amp.shape[0]
    batch = amp.shape[1:]
    t = gate.target
    if gate.kind == "cx":
        c = gate.control
        if c > t:
            # axes: (high, bit c, mid, bit t, low) + batch
            b = amp.reshape((dim >> (c + 1), 2, 1 << (c - t - 1), 2,
                             1 << t) + batch)
            tmp = b[:, 1, :, 0].copy()
            b[:, 1, :, 0] = b[:, 1, :, 1]
            b[:, 1, :, 1] = tmp
        else:
            # axes: (high, bit t, mid, bit c, low) + batch
            b = amp.reshape((dim >> (t + 1), 2, 1 << (t - c - 1), 2,
                             1 << c) + batch)
            tmp = b[:, 0, :, 1].copy()
            b[:, 0, :, 1] = b[:, 1, :, 1]
            b[:, 1, :, 1] = tmp
        return amp
    a = amp.reshape((dim >> (t + 1), 2, 1 << t) + batch)
    lo, hi = a[:, 0], a[:, 1]
    if gate.kind == "ry":
        co, si = np.cos(gate.angle / 2), np.sin(gate.angle / 2)
        new_lo = co * lo - si * hi
        new_hi = si * lo + co * hi
        a[:, 0], a[:, 1] = new_lo, new_hi
    elif gate.kind == "rz":
        ph = np.exp(-0.5j * gate.angle)
        a[:, 0] = ph * lo
        a[:, 1] = np.conj(ph) * hi
    else:
        raise ValueError(f"unknown gate kind {gate.kind!r}")
    return amp


def run_circuit(psi, seq):
    '''Apply a gate sequence to a state vector (or a batch of column
    vectors) and return the evolved amplitudes.'''
    psi = np.array(psi, dtype=complex)
    n = seq.n_qubits
    if psi.shape[0] != 2 ** n:
        raise ValueError("state dimension does not match the circuit")
    for gate in seq:
        psi = _apply_gate(psi, gate, n)
    return psi


def circuit_matrix(seq):
    '''Dense matrix realized by a gate sequence (including phase).'''
    return run_circuit(np.eye(2 ** seq.n_qubits, dtype=complex), seq)


def sample_shots(psi, shots, seed):
    '''Multinomial measurement sampling of |psi_i|^2.'''
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = np.abs(np.asarray(psi)) ** 2
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p)
    return ShotResult(shots=int(shots), counts=counts, seed=seed)


def mapped_density_to_grid(probabilities, gmap, partition, reference=None):
    '''Transport a computational-basis probability vector to the grid.

    Probabilities alone fix only the symmetric part of each mirror-pair
    density; the interference split between x_i and x_{n-i} needs the
    relative phase of the even/odd pair amplitudes.  `reference` (a
    grid-basis amplitude vector, normally the classically propagated
    state at the same time) supplies that split; without it the split
    term is taken as zero.
    '''
    q = np.asarray(probabilities, dtype=float)
    dim = len(q)
    n = dim - 1
    half = dim // 2
    order = partition.order
    i = np.arange(half)
    if reference is not None:
        phi = gmap.matrix @ np.asarray(reference, dtype=complex)
        cross = np.real(np.conj(phi[:half]) * phi[n - i])
    else:
        cross = np.zeros(half)
    qp = q[order[i]]        # even-combination slot of pair i
    qm = q[order[n - i]]    # odd-combination slot of pair i
    s = 0.5 * (qp + qm)
    rho = np.empty(dim)
    rho[i] = s + cross
    rho[n - i] = s - cross
    return rho


def probability_density(source, gmap=None, partition=None, basis="grid",
                        reference=None):
    '''Probability density over grid points.

    `source` is either a mapped-basis StateVector (exact mode: the
    amplitudes are rotated back to the grid) or a ShotResult (empirical
    mode: see mapped_density_to_grid).  With basis="mapped" the density
    is returned over computational-basis states without transport.
    '''
    if isinstance(source, ShotResult):
        probs = source.probabilities
        if basis == "mapped":
            return probs
        if gmap is None or partition is None:
            raise ValueError("grid transport needs the basis maps")
        return mapped_density_to_grid(probs, gmap, partition, reference)
    psi = np.asarray(source)
    if basis == "mapped":
        return np.abs(psi) ** 2
    if gmap is None or partition is None:
        raise ValueError("grid transport needs the basis maps")
    return np.abs(from_mapped_basis(psi, gmap, partition)) ** 2

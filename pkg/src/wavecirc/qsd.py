'''Compilation of arbitrary unitaries into {Ry, Rz, CNOT} circuits.

The recursion alternates a cosine-sine decomposition, which turns the
central factor into a multiplexed Ry, with an eigen-demultiplexing of
each block-diagonal factor, which yields a multiplexed Rz between two
half-size unitaries.  Multiplexed rotations expand through the
Gray-code construction; 2x2 leaves are finished with a ZYZ split.
Global phase is carried explicitly so the gate product reproduces the
input matrix exactly.

Gates are listed in application order: the first gate in a sequence
acts on the state first.  Qubit q addresses bit q of the basis index
(qubit 0 is the least significant bit).
'''

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cossin, schur

DEGENERATE_TOL = 1e-13


@dataclass(frozen=True)
class Gate:
    '''One elementary gate.

    kind: "ry" | "rz" | "cx" | "phase".  Rotations use `target` and
    `angle`; cx uses `control` and `target`; phase is global.
    '''
    kind: str
    target: int = 0
    control: int = None
    angle: float = None

    def __post_init__(self):
        if self.kind == "cx" and self.control == self.target:
            raise ValueError("cx control and target must differ")
        if self.angle is not None and not np.isfinite(self.angle):
            raise ValueError("gate angle must be finite")


@dataclass
class GateSequence:
    '''Ordered gate list over n qubits with cached per-kind counts.'''
    n_qubits: int
    gates: list = field(default_factory=list)

    def append(self, gate):
        self.gates.append(gate)

    def extend(self, other):
        self.gates.extend(other.gates if isinstance(other, GateSequence)
                          else other)

    def counts(self):
        out = {}
        for g in self.gates:
            out[g.kind] = out.get(g.kind, 0) + 1
        return out

    def cnot_count(self):
        return sum(1 for g in self.gates if g.kind == "cx")

    def global_phase(self):
        return sum(g.angle for g in self.gates if g.kind == "phase")

    def without_phase(self):
        return GateSequence(self.n_qubits,
                            [g for g in self.gates if g.kind != "phase"])

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


@dataclass(frozen=True)
class CsdResult:
    '''U = blkdiag(l0, l1) @ [[C, -S], [S, C]] @ blkdiag(r0, r1) with
    C = diag(cos alpha), S = diag(sin alpha), alpha ascending.'''
    l0: np.ndarray
    l1: np.ndarray
    r0: np.ndarray
    r1: np.ndarray
    alpha: np.ndarray


@dataclass(frozen=True)
class DemuxResult:
    '''blkdiag(l0, l1) = blkdiag(v, v) @ blkdiag(D, D*) @ blkdiag(w, w)
    with D = diag(exp(i delta)).'''
    v: np.ndarray
    w: np.ndarray
    delta: np.ndarray


def _check_unitary(u, tol=1e-10):
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("input must be a square matrix")
    if np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() > tol:
        raise ValueError("input matrix is not unitary")
    return u


def cosine_sine_decompose(u):
    '''Split a 2m x 2m unitary into half-size blocks and mixing angles.'''
    u = _check_unitary(u)
    m = u.shape[0] // 2
    if 2 * m != u.shape[0]:
        raise ValueError("matrix dimension must be even")
    (l0, l1), alpha, (r0, r1) = cossin(u, p=m, q=m, separate=True)
    order = np.argsort(alpha, kind="stable")
    if not np.array_equal(order, np.arange(m)):
        p = np.eye(m)[:, order]
        l0, l1 = l0 @ p, l1 @ p
        r0, r1 = p.T @ r0, p.T @ r1
        alpha = alpha[order]
    return CsdResult(l0=l0, l1=l1, r0=r0, r1=r1, alpha=alpha)


def demultiplex(l0, l1):
    '''Factor blkdiag(l0, l1) through a shared eigenbasis.

    l0 l1^dag is unitary; its eigendecomposition V D^2 V^dag gives
    delta = arg(eigenvalue)/2 with arg in (-pi, pi], and w = D V^dag l1.
    Eigenvalues are sorted by phase angle.
    '''
    l0 = _check_unitary(l0)
    l1 = _check_unitary(l1)
    t, v = schur(l0 @ l1.conj().T, output="complex")
    phases = np.angle(np.diagonal(t))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    v = v[:, order]
    delta = phases / 2
    d = np.exp(1j * delta)
    w = (d[:, None] * v.conj().T) @ l1
    return DemuxResult(v=v, w=w, delta=delta)


def _gray(i):
    return i ^ (i >> 1)


def multiplexed_rotation_to_gates(axis, angles, target, controls):
    '''Expand a uniformly controlled rotation through Gray-code ordering.

    angles[b] is the rotation applied when the control qubits hold the
    binary value b (controls[0] supplies the least significant select
    bit).  Emits 2^k rotations and 2^k CNOTs for k controls.
    '''
    if axis not in ("y", "z"):
        raise ValueError("axis must be 'y' or 'z'")
    kind = "r" + axis
    controls = list(controls)
    if target in controls:
        raise ValueError("target must not be a control")
    k = len(controls)
    angles = np.asarray(angles, dtype=float)
    if len(angles) != 2 ** k:
        raise ValueError("need exactly 2^k angles for k controls")
    seq = GateSequence(max([target] + controls) + 1)
    if k == 0:
        seq.append(Gate(kind, target=target, angle=float(angles[0])))
        return seq
    size = 2 ** k
    m = np.array([[(-1.0) ** bin(b & _gray(s)).count("1")
                   for s in range(size)] for b in range(size)])
    theta = m.T @ angles / size
    for s in range(size):
        seq.append(Gate(kind, target=target, angle=float(theta[s])))
        diff = _gray(s) ^ _gray((s + 1) % size)
        seq.append(Gate("cx", control=controls[diff.bit_length() - 1],
                        target=target))
    return seq


def zyz(u):
    '''Angles (alpha, beta, gamma, delta) with
    u = exp(i alpha) Rz(beta) Ry(gamma) Rz(delta), gamma in [0, pi],
    beta in (-pi, pi], and delta = 0 when gamma is 0 or pi.'''
    u = _check_unitary(u)
    if u.shape != (2, 2):
        raise ValueError("zyz expects a 2x2 matrix")
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = 0.5 * np.angle(det)
    v = u * np.exp(-1j * alpha)
    gamma = 2 * np.arctan2(abs(v[1, 0]), abs(v[1, 1]))
    if abs(v[1, 0]) < DEGENERATE_TOL:
        beta, delta = 2 * np.angle(v[1, 1]), 0.0
    elif abs(v[1, 1]) < DEGENERATE_TOL:
        beta, delta = 2 * np.angle(v[1, 0]), 0.0
    else:
        p, q = np.angle(v[1, 0]), np.angle(v[1, 1])
        beta, delta = q + p, q - p
    # fold beta into (-pi, pi]; each 2pi shift flips the SU(2) sign,
    # compensated through the global phase
    for _ in range(2):
        if beta > np.pi:
            beta -= 2 * np.pi
            alpha += np.pi
        elif beta <= -np.pi:
            beta += 2 * np.pi
            alpha += np.pi
    return float(alpha), float(beta), float(gamma), float(delta)


def _compile(u, qubits, seq, phase):
    nq = len(qubits)
    if nq == 1:
        a, b, c, d = zyz(u)
        phase[0] += a
        q = qubits[0]
        seq.append(Gate("rz", target=q, angle=d))
        seq.append(Gate("ry", target=q, angle=c))
        seq.append(Gate("rz", target=q, angle=b))
        return
    top = qubits[-1]
    lower = qubits[:-1]
    csd = cosine_sine_decompose(u)
    _demux(csd.r0, csd.r1, lower, top, seq, phase)
    seq.extend(multiplexed_rotation_to_gates("y", 2 * csd.alpha, top, lower))
    _demux(csd.l0, csd.l1, lower, top, seq, phase)


def _demux(l0, l1, lower, top, seq, phase):
    dm = demultiplex(l0, l1)
    _compile(dm.w, lower, seq, phase)
    seq.extend(multiplexed_rotation_to_gates("z", -2 * dm.delta, top, lower))
    _compile(dm.v, lower, seq, phase)


def qsd_compile(u):
    '''Compile a 2^n x 2^n unitary into Ry/Rz/CNOT gates plus one
    trailing global-phase gate.'''
    u = _check_unitary(u)
    n = int(np.log2(u.shape[0]))
    if 2 ** n != u.shape[0]:
        raise ValueError("matrix dimension must be a power of two")
    if n > 12:
        raise ValueError("refusing to compile more than 12 qubits")
    seq = GateSequence(n)
    phase = [0.0]
    _compile(u, list(range(n)), seq, phase)
    seq.append(Gate("phase", angle=float(np.mod(phase[0] + np.pi, 2 * np.pi)
                                         - np.pi)))
    return seq


def cnot_count(n):
    '''Exact CNOT count of qsd_compile for an n-qubit unitary:
    (3/4) 4^n - (3/2) 2^n.'''
    if n < 1:
        raise ValueError("n must be >= 1")
    return 3 * 4 ** (n - 1) - 3 * 2 ** (n - 1)


def cnot_lower_bound(n):
    '''Theoretical minimum CNOT count for a generic n-qubit unitary,
    ceil((4^n - 3n - 1) / 4).'''
    if n < 1:
        raise ValueError("n must be >= 1")
    return -((4 ** n - 3 * n - 1) // -4)

'''Pairwise rotation of the grid basis into even/odd reflection
combinations, the resulting 2x2 block structure of the Hamiltonian, and
the parity-ordered computational basis used by the spin mapping.
'''

from dataclasses import dataclass

import numpy as np

from .grid import NuclearHamiltonian


@dataclass(frozen=True)
class GivensBasisMap:
    '''Orthogonal map G mixing mirror grid pairs (i, n-i).

    Row i for i < 2^(N-1) is (e_i + e_{n-i})/sqrt(2); row i for
    i >= 2^(N-1) is (e_{n-i} - e_i)/sqrt(2).
    '''
    n_qubits: int
    matrix: np.ndarray
    pairs: tuple


@dataclass(frozen=True)
class ParityPartition:
    '''Computational basis ordered by bitstring parity.

    `order[k]` is the basis index occupying slot k: even-popcount
    bitstrings first (ascending), then odd-popcount (ascending).
    The rightmost (least significant) bit is qubit 0.
    '''
    n_qubits: int
    order: np.ndarray
    inverse: np.ndarray

    @property
    def half(self):
        return 2 ** (self.n_qubits - 1)

    @property
    def even_states(self):
        return self.order[:self.half]

    @property
    def odd_states(self):
        return self.order[self.half:]


@dataclass(frozen=True)
class BlockHamiltonian:
    '''H in the rotated basis: two diagonal blocks plus a coupling block
    that vanishes for reflection-symmetric potentials.'''
    h_tilde: np.ndarray
    block_plus: np.ndarray    # even-combination block, size 2^(N-1)
    block_minus: np.ndarray   # odd-combination block
    coupling_norm: float      # Frobenius norm of the off-diagonal blocks
    source: NuclearHamiltonian = None


def givens_map(n_qubits):
    '''Build the orthogonal pair-mixing matrix for 2^N grid points.'''
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    dim = 2 ** n_qubits
    n = dim - 1
    half = dim // 2
    g = np.zeros((dim, dim))
    r = 1 / np.sqrt(2)
    for i in range(half):
        g[i, i] = r
        g[i, n - i] = r
    for i in range(half, dim):
        g[i, n - i] = r
        g[i, i] = -r
    pairs = tuple((i, n - i) for i in range(half))
    return GivensBasisMap(n_qubits=n_qubits, matrix=g, pairs=pairs)


def parity_partition(n_qubits):
    '''Order computational basis states even-parity first, odd second.'''
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    states = np.arange(2 ** n_qubits)
    pop = np.array([bin(s).count("1") & 1 for s in states])
    order = np.concatenate([states[pop == 0], states[pop == 1]])
    inverse = np.empty_like(order)
    inverse[order] = states
    return ParityPartition(n_qubits=n_qubits, order=order, inverse=inverse)


def _closed_form_blocks(ham):
    '''Diagonal/off-diagonal blocks from the Toeplitz kinetic band and the
    potential, without forming G H G^T.'''
    k = ham.kinetic_band
    v = ham.potential.values
    dim = len(v)
    n = dim - 1
    half = dim // 2
    i = np.arange(half)
    kk = np.abs(i[:, None] - i[None, :])       # |i - l|
    kr = np.abs(i[:, None] - (n - i)[None, :])  # |i - (n-l)|
    vs = np.diag(0.5 * (v[:half] + v[::-1][:half]))
    plus = k[kk] + k[kr] + vs
    # minus rows run through pairs in reverse: row a <-> pair half-1-a
    j = half - 1 - i
    kkm = np.abs(j[:, None] - j[None, :])
    krm = np.abs(j[:, None] - (n - j)[None, :])
    vsm = np.diag(0.5 * (v[j] + v[n - j]))
    minus = k[kkm] - k[krm] + vsm
    # coupling is anti-diagonal in the antisymmetric part of V
    coup = np.zeros((half, half))
    anti = 0.5 * (v[:half] - v[::-1][:half])
    coup[i, half - 1 - i] = anti
    return plus, minus, coup


def block_transform(ham, gmap):
    '''Rotate H into the pair basis and extract its blocks.

    When `ham` is a NuclearHamiltonian the blocks are checked against
    their closed forms in the Toeplitz band and the potential.
    '''
    if isinstance(ham, NuclearHamiltonian):
        h = ham.matrix
        source = ham
    else:
        h = np.asarray(ham)
        source = None
    g = gmap.matrix
    if h.shape != g.shape:
        raise ValueError("Hamiltonian and basis map dimensions differ")
    ht = g @ h @ g.T
    half = h.shape[0] // 2
    plus = ht[:half, :half]
    minus = ht[half:, half:]
    coup = ht[:half, half:]
    coupling_norm = float(np.sqrt(2) * np.linalg.norm(coup))
    if source is not None and source.potential is not None:
        cp, cm, cc = _closed_form_blocks(source)
        scale = max(np.linalg.norm(h), 1.0)
        err = max(np.abs(plus - cp).max(), np.abs(minus - cm).max(),
                  np.abs(coup - cc).max())
        if err > 1e-12 * scale:
            raise AssertionError(
                f"rotated blocks disagree with closed forms by {err:.3e}")
    return BlockHamiltonian(h_tilde=ht, block_plus=plus, block_minus=minus,
                            coupling_norm=coupling_norm, source=source)


def to_mapped_basis(psi, gmap, partition):
    '''Grid amplitudes -> parity-ordered computational-basis amplitudes.

    Pair-basis component i is placed at computational state order[i].
    '''
    psi = np.asarray(psi)
    if len(psi) != len(gmap.matrix):
        raise ValueError("state dimension does not match the basis map")
    phi = gmap.matrix @ psi
    out = np.empty_like(phi)
    out[partition.order] = phi
    return out


def from_mapped_basis(psi, gmap, partition):
    '''Inverse of to_mapped_basis.'''
    psi = np.asarray(psi)
    if len(psi) != len(gmap.matrix):
        raise ValueError("state dimension does not match the basis map")
    phi = psi[partition.order]
    return gmap.matrix.T @ phi

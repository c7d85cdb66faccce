'''Extraction of programmable spin-model parameters from the parity
blocks of the rotated Hamiltonian, and reassembly of the spin
Hamiltonian from those parameters.

The target model is an all-to-all two-body spin Hamiltonian
c*I + sum_j Bz_j sz_j + sum_{j<k} (Jx sx sx + Jy sy sy + Jz sz sz)
with no transverse local fields, so it is block-diagonal in the parity
partition of the computational basis.
'''

from dataclasses import dataclass

import numpy as np

RCOND = 1e-12


class BrokenSymmetryError(ValueError):
    '''Raised when the coupling between parity blocks is too large for
    the block-wise parameter map to be meaningful.'''


@dataclass(frozen=True)
class IsingParameters:
    '''Parameters of one parity block (Hartree).  The J arrays are
    strictly upper triangular; only entries with j < k are meaningful.'''
    n_qubits: int
    offset: float
    b_z: np.ndarray
    j_z: np.ndarray
    j_x: np.ndarray
    j_y: np.ndarray
    diag_residual: float
    offdiag_residual: float


@dataclass(frozen=True)
class MappedSystem:
    '''Per-block spin parameters and the assembled block matrices.'''
    even: IsingParameters
    odd: IsingParameters
    block_even: np.ndarray
    block_odd: np.ndarray
    recon_error_even: float
    recon_error_odd: float


def _pairs(n):
    return [(j, k) for j in range(n) for k in range(j + 1, n)]


def _bit(s, j):
    return (s >> j) & 1


def _diag_design(bitstrings, n):
    '''Rows: one equation per basis state; columns: [1, Bz_j, Jz_jk].'''
    rows = []
    for s in bitstrings:
        row = [1.0]
        row += [(-1.0) ** _bit(s, j) for j in range(n)]
        row += [(-1.0) ** (_bit(s, j) ^ _bit(s, k)) for j, k in _pairs(n)]
        rows.append(row)
    return np.array(rows)


def extract_diagonal_params(diag, bitstrings, n):
    '''Fit offset, local sz fields and sz-sz couplings to a block
    diagonal by minimum-norm least squares.

    Returns (offset, b_z, j_z, residual) with residual = ||A theta - d||_2.
    '''
    d = np.asarray(diag, dtype=float)
    if len(d) == 0:
        raise ValueError("empty block")
    a = _diag_design(bitstrings, n)
    theta, _, _, _ = np.linalg.lstsq(a, d, rcond=RCOND)
    residual = float(np.linalg.norm(a @ theta - d))
    offset = theta[0]
    b_z = theta[1:1 + n]
    j_z = np.zeros((n, n))
    for c, (j, k) in enumerate(_pairs(n)):
        j_z[j, k] = theta[1 + n + c]
    return float(offset), b_z, j_z, residual


def extract_offdiag_params(block, bitstrings, n):
    '''Fit sx-sx and sy-sy couplings to the off-diagonal elements of a
    parity block.

    Elements between states at Hamming distance 2 differing in bits j < k
    satisfy M = Jx_jk - s*Jy_jk with s = +1 when the differing bits agree
    in the bra (00<->11 flips) and s = -1 otherwise (01<->10 flips).
    Elements at Hamming distance >= 4 cannot be produced by two-body
    couplings and enter the residual with weight 2 (both Hermitian
    partners).
    '''
    m = np.asarray(block)
    if np.abs(m - m.conj().T).max() > 1e-12 * max(1.0, np.abs(m).max()):
        raise ValueError("block matrix is not Hermitian")
    pairs = _pairs(n)
    col = {p: c for c, p in enumerate(pairs)}
    rows, rhs = [], []
    unmapped_sq = 0.0
    size = len(bitstrings)
    for a in range(size):
        for b in range(a + 1, size):
            diff = int(bitstrings[a]) ^ int(bitstrings[b])
            dist = bin(diff).count("1")
            if dist == 2:
                j = (diff & -diff).bit_length() - 1
                k = diff.bit_length() - 1
                s = 1.0 if _bit(int(bitstrings[a]), j) == _bit(int(bitstrings[a]), k) else -1.0
                row = np.zeros(2 * len(pairs))
                row[col[(j, k)]] = 1.0
                row[len(pairs) + col[(j, k)]] = -s
                rows.append(row)
                rhs.append(m[a, b].real)
                unmapped_sq += 2 * m[a, b].imag ** 2
            else:
                # distance != 2: not reachable by two-body couplings
                unmapped_sq += 2 * abs(m[a, b]) ** 2
    j_x = np.zeros((n, n))
    j_y = np.zeros((n, n))
    if rows:
        a_mat = np.array(rows)
        theta, _, _, _ = np.linalg.lstsq(a_mat, np.array(rhs), rcond=RCOND)
        misfit = float(np.linalg.norm(a_mat @ theta - rhs))
        for c, (j, k) in enumerate(pairs):
            j_x[j, k] = theta[c]
            j_y[j, k] = theta[len(pairs) + c]
    else:
        misfit = 0.0
    residual = float(np.sqrt(misfit ** 2 + unmapped_sq))
    return j_x, j_y, residual


def assemble_ising(params, n=None):
    '''Dense 2^n Hermitian matrix of the two-body spin Hamiltonian.'''
    if n is None:
        n = params.n_qubits
    dim = 2 ** n
    h = np.zeros((dim, dim), dtype=complex)
    states = np.arange(dim)
    diag = np.full(dim, params.offset, dtype=float)
    for j in range(n):
        diag += params.b_z[j] * (-1.0) ** ((states >> j) & 1)
    for j, k in _pairs(n):
        zz = (-1.0) ** (((states >> j) & 1) ^ ((states >> k) & 1))
        diag += params.j_z[j, k] * zz
        mask = (1 << j) | (1 << k)
        flipped = states ^ mask
        same = ((states >> j) & 1) == ((states >> k) & 1)
        # <s^mask| sx sx |s> = 1 ; <s^mask| sy sy |s> = -1 if bits agree else +1
        vals = params.j_x[j, k] + params.j_y[j, k] * np.where(same, -1.0, 1.0)
        h[flipped, states] += vals
    h[states, states] += diag
    return h


def extract_block_params(block, bitstrings, n):
    '''Run both extractions on one parity block.'''
    diag = np.real(np.diagonal(block))
    offset, b_z, j_z, dres = extract_diagonal_params(diag, bitstrings, n)
    j_x, j_y, ores = extract_offdiag_params(block, bitstrings, n)
    return IsingParameters(n_qubits=n, offset=offset, b_z=b_z, j_z=j_z,
                           j_x=j_x, j_y=j_y, diag_residual=dres,
                           offdiag_residual=ores)


def restrict_to_block(matrix, bitstrings):
    '''Restrict a full 2^n matrix to the given basis states, in order.'''
    idx = np.asarray(bitstrings)
    return matrix[np.ix_(idx, idx)]


def map_system(bh, partition, force=False, threshold_ratio=1e-8, joint=False):
    '''Map both parity blocks of a BlockHamiltonian to spin parameters.

    Refuses (unless `force`) when the inter-block coupling exceeds
    threshold_ratio * ||H||_F, since the block-diagonal spin model cannot
    represent the coupling.  With `joint=True` a single parameter set is
    fitted to both blocks at once.
    '''
    n = partition.n_qubits
    h_norm = np.linalg.norm(bh.h_tilde)
    if bh.coupling_norm > threshold_ratio * max(h_norm, 1e-300) and not force:
        raise BrokenSymmetryError(
            "map undefined for broken symmetry: coupling norm "
            f"{bh.coupling_norm:.3e} exceeds {threshold_ratio:.1e}*||H||")
    even_states = partition.even_states
    odd_states = partition.odd_states
    if joint:
        both = np.concatenate([even_states, odd_states])
        pe = po = extract_block_params(bh.h_tilde, both, n)
    else:
        pe = extract_block_params(bh.block_plus, even_states, n)
        po = extract_block_params(bh.block_minus, odd_states, n)
    he = restrict_to_block(assemble_ising(pe, n), even_states)
    ho = restrict_to_block(assemble_ising(po, n), odd_states)
    # blocks of a real symmetric Hamiltonian are real; drop the zero
    # imaginary part so downstream eigensolves stay in real arithmetic
    if np.abs(he.imag).max() == 0.0:
        he = he.real
    if np.abs(ho.imag).max() == 0.0:
        ho = ho.real
    return MappedSystem(
        even=pe, odd=po, block_even=he, block_odd=ho,
        recon_error_even=float(np.linalg.norm(he - bh.block_plus)),
        recon_error_odd=float(np.linalg.norm(ho - bh.block_minus)))


def parameters_to_dict(params):
    '''JSON-ready dictionary of one block's parameters.'''
    pairs = _pairs(params.n_qubits)
    return {
        "offset": params.offset,
        "b_z": list(params.b_z),
        "j_x": {f"{j},{k}": params.j_x[j, k] for j, k in pairs},
        "j_y": {f"{j},{k}": params.j_y[j, k] for j, k in pairs},
        "j_z": {f"{j},{k}": params.j_z[j, k] for j, k in pairs},
        "residuals": {
            "diagonal": params.diag_residual,
            "offdiagonal": params.offdiag_residual,
        },
    }

"""Compiled inner loops for Pauli-basis transforms.

An n-qubit Pauli string acts as a signed permutation: row r of its matrix
holds a single nonzero entry, in column r ^ x, where the bit mask x flags
the qubits carrying an X or Y factor.  The entry factorizes into a
row-independent unit phase (a power of -i counting the Y factors) and a
row-dependent sign (-1)**popcount(r & q), with q flagging the qubits
carrying a Y or Z factor.  Both kernels below walk the d nonzeros of each
of the d**2 strings, so a full basis change costs O(d**3).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def accumulate_pauli_terms(out, x_masks, q_masks, coefs, signs):
    """Add coefs[i] * (i-th phased permutation) into `out`, in place.

    `signs` is the d x d parity table signs[r, q] = (-1)**popcount(r & q);
    the unit phase of each string must already be folded into coefs.
    """
    d = out.shape[0]
    for i in range(x_masks.shape[0]):
        x = x_masks[i]
        q = q_masks[i]
        c = coefs[i]
        for r in range(d):
            out[r, r ^ x] += c * signs[r, q]


@njit(cache=True)
def phased_diagonal_sums(state, x_masks, q_masks, signs, out):
    """out[i] = sum_r signs[r, q_i] * state[r ^ x_i, r].

    Multiplying by the i-th string's unit phase afterwards turns this into
    the trace of (string_i @ state).
    """
    d = state.shape[0]
    for i in range(x_masks.shape[0]):
        x = x_masks[i]
        q = q_masks[i]
        acc = 0.0 + 0.0j
        for r in range(d):
            acc += signs[r, q] * state[r ^ x, r]
        out[i] = acc

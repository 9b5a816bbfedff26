"""Pauli and Gell-Mann generator sets as fixed constant matrices.

Both bases are Hermitian, traceless and orthogonal under Tr(T_a T_b) = 2 d_ab.
Indices are 1-based, matching the conventional subscripts.  The Cartan
(diagonal) generators commute with any diagonal density matrix; the remaining
"coset" generators are the directions that actually move the eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SQRT3 = float(np.sqrt(3.0))


def _const(rows) -> np.ndarray:
    m = np.array(rows, dtype=np.complex128)
    m.flags.writeable = False
    return m


_PAULI = (
    _const([[0, 1], [1, 0]]),
    _const([[0, -1j], [1j, 0]]),
    _const([[1, 0], [0, -1]]),
)

_GELL_MANN = (
    _const([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
    _const([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]),
    _const([[1, 0, 0], [0, -1, 0], [0, 0, 0]]),
    _const([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
    _const([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]),
    _const([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
    _const([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]),
    _const([[1 / SQRT3, 0, 0], [0, 1 / SQRT3, 0], [0, 0, -2 / SQRT3]]),
)

_CARTAN = {2: (3,), 3: (3, 8)}


def pauli(k: int) -> np.ndarray:
    """Return the Pauli matrix sigma_k, k in 1..3."""
    if k not in (1, 2, 3):
        raise IndexError(f"Pauli index must be 1..3, got {k}")
    return _PAULI[k - 1]


def gell_mann(k: int) -> np.ndarray:
    """Return the Gell-Mann matrix lambda_k, k in 1..8."""
    if k not in range(1, 9):
        raise IndexError(f"Gell-Mann index must be 1..8, got {k}")
    return _GELL_MANN[k - 1]


@dataclass(frozen=True)
class GeneratorSet:
    """An ordered Hermitian generator basis with its Cartan/coset split.

    ``generators[k-1]`` is the generator with 1-based index ``k``;
    ``cartan_indices`` are the diagonal ones.
    """

    n: int
    generators: tuple[np.ndarray, ...]
    cartan_indices: tuple[int, ...]

    @property
    def coset_indices(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, len(self.generators) + 1)
                     if k not in self.cartan_indices)

    def coset_generators(self) -> tuple[np.ndarray, ...]:
        return tuple(self.generators[k - 1] for k in self.coset_indices)


def generator_set(n: int) -> GeneratorSet:
    """Return the generator basis for SU(n), n in {2, 3}."""
    if n == 2:
        return GeneratorSet(2, tuple(_PAULI), _CARTAN[2])
    if n == 3:
        return GeneratorSet(3, tuple(_GELL_MANN), _CARTAN[3])
    raise ValueError(f"only n in {{2, 3}} is supported, got {n}")

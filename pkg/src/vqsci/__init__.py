"""Variational groundstate solver for selected-configuration Hermitian matrices.

The library selects dominant configurations of a Hermitian matrix, packs the
surviving indices onto ceil(log2 D) simulated qubits, rewrites the matrix as a
weighted sum of Pauli strings, and minimizes the energy of a layered Ry/CNOT
circuit over that operator, either with exact statevector expectations or with
shot-sampled estimates under an optional readout-noise model.
"""

__version__ = "0.1.0"

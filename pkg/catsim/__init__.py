"""
Catsim

Numerical simulator and exact-algebra oracle for quantum computation with
optical coherent-state qubits: truncated Fock-space optics, coherent
superposition algebra, teleported gates, conditional cat generation and
photon-loss error models.
"""

__version__ = "0.1.0"
__author__ = "Catsim Team"
__description__ = (
    "Coherent-state qubit simulator with a truncated Fock-space engine "
    "and an exact coherent-superposition oracle"
)

"""Regenerates the noiseless three-qubit tomography fixtures.

Evolves |000> under the kicked top (kappa0 = 0.5, p = pi/2) in the full
8-dimensional register, then writes every Pauli expectation and the
computational-basis populations distorted by the readout model in
readout.json. Qubit 1 is the most significant bit and the leftmost label
character.
"""

import csv
import itertools
import json
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).parent
KAPPA0 = 0.5
STEPS = range(0, 6)

I2 = np.eye(2)
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def kron(*ms):
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


def collective(p):
    return sum(kron(*[PAULI[p] / 2 if q == k else I2 for q in range(3)]) for k in range(3))


def expm_herm(h, t):
    w, v = np.linalg.eigh(h)
    return v @ np.diag(np.exp(-1j * t * w)) @ v.conj().T


jz, jy = collective("Z"), collective("Y")
u = expm_herm(jz @ jz, KAPPA0 / 3.0) @ expm_herm(jy, np.pi / 2)

readout = json.loads((HERE / "readout.json").read_text())
f_full = kron(*[np.array([[f0, 1 - f1], [1 - f0, f1]]) for f0, f1 in zip(readout["f0"], readout["f1"])])

labels = ["".join(t) for t in itertools.product("IXYZ", repeat=3)]
psi = np.zeros(8, dtype=complex)
psi[0] = 1.0
states = {}
for n in range(max(STEPS) + 1):
    if n in STEPS:
        states[n] = np.outer(psi, psi.conj())
    psi = u @ psi

with open(HERE / "expectations.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["step", "label", "value"])
    for n, rho in states.items():
        for label in labels:
            value = np.trace(rho @ kron(*[PAULI[c] for c in label])).real
            w.writerow([n, label, repr(float(value))])

with open(HERE / "populations.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["step"] + [f"p{b:03b}" for b in range(8)])
    for n, rho in states.items():
        measured = f_full @ np.diag(rho).real
        w.writerow([n] + [repr(float(p)) for p in measured])

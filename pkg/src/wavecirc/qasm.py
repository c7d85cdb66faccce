'''OpenQASM 2.0 export of gate sequences and a reader for the emitted
subset (ry, rz, cx on a single register).

The global phase has no OpenQASM 2.0 representation; it is dropped at
export and noted in the file header.
'''

import re

from .qsd import Gate, GateSequence

_GATE_RE = re.compile(
    r"^(ry|rz)\(([^)]+)\)\s+q\[(\d+)\];$|^cx\s+q\[(\d+)\],\s*q\[(\d+)\];$")


def to_qasm(seq):
    '''Serialize a GateSequence to OpenQASM 2.0 text.'''
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    phase = seq.global_phase()
    if phase:
        lines.append(f"// global phase dropped: {phase:.17g}")
    lines.append(f"qreg q[{seq.n_qubits}];")
    for g in seq:
        if g.kind == "phase":
            continue
        if g.kind == "cx":
            lines.append(f"cx q[{g.control}],q[{g.target}];")
        elif g.kind in ("ry", "rz"):
            lines.append(f"{g.kind}({g.angle:.17g}) q[{g.target}];")
        else:
            raise ValueError(f"gate kind {g.kind!r} has no QASM form")
    return "\n".join(lines) + "\n"


def from_qasm(text):
    '''Parse text produced by to_qasm back into a GateSequence.'''
    n_qubits = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if (not line or line.startswith("//") or line.startswith("OPENQASM")
                or line.startswith("include")):
            continue
        m = re.match(r"^qreg\s+q\[(\d+)\];$", line)
        if m:
            n_qubits = int(m.group(1))
            continue
        m = _GATE_RE.match(line)
        if not m:
            raise ValueError(f"unsupported QASM line: {line!r}")
        if m.group(1):
            gates.append(Gate(m.group(1), target=int(m.group(3)),
                              angle=float(m.group(2))))
        else:
            gates.append(Gate("cx", control=int(m.group(4)),
                              target=int(m.group(5))))
    if n_qubits is None:
        raise ValueError("missing qreg declaration")
    return GateSequence(n_qubits=n_qubits, gates=gates)


def write_qasm(seq, path):
    with open(path, "w") as fh:
        fh.write(to_qasm(seq))


def read_qasm(path):
    with open(path) as fh:
        return from_qasm(fh.read())

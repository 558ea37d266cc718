"""Named operators, states and parameter sets usable from run configs."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Any, Callable

from .bw import BWParams
from .hilbert import (
    basis_state,
    pauli_x,
    pauli_y,
    pauli_z,
    phase_state,
    truncated_oscillator,
)


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str  # operator | pair | state | bw | family | zeno
    description: str
    provenance: str
    build: Callable[..., Any]


def _family(anchor_kind):
    def build():
        anchor = basis_state(2, 0) if anchor_kind == "eta" else phase_state(0.0)
        return {
            "A": pauli_x(),
            "H": pauli_z(),
            "anchor": anchor,
            "thetas": [math.pi / 2, math.pi / 6],
            "grid": {"start": 1e-1, "stop": 1e-5, "ratio": 10.0},
        }

    return build


_CATALOG = [
    Fixture("sigma-x", "operator", "Pauli X", "standard", pauli_x),
    Fixture("sigma-y", "operator", "Pauli Y", "standard", pauli_y),
    Fixture("sigma-z", "operator", "Pauli Z", "standard", pauli_z),
    Fixture("pauli-xy", "pair", "(sigma-x, sigma-y)", "standard", lambda: (pauli_x(), pauli_y())),
    Fixture("pauli-xz", "pair", "(sigma-x, sigma-z); A and H for MT runs", "standard", lambda: (pauli_x(), pauli_z())),
    Fixture(
        "osc-N",
        "pair",
        "(X, P) of the oscillator truncated to N levels, e.g. osc-6",
        "standard, truncation corner [X,P]_{N-1,N-1} = i(1-N)",
        lambda n: tuple(truncated_oscillator(n)),
    ),
    Fixture("ket0", "state", "|0>", "standard", lambda: basis_state(2, 0)),
    Fixture("ket1", "state", "|1>", "standard", lambda: basis_state(2, 1)),
    Fixture("plus", "state", "(|0> + |1>)/sqrt2, eigenvector of sigma-x", "standard", lambda: phase_state(0.0)),
    Fixture("phase-pi4", "state", "(|0> + e^{i pi/4}|1>)/sqrt2", "lab", lambda: phase_state(math.pi / 4)),
    Fixture("phase-pi6", "state", "(|0> + e^{i pi/6}|1>)/sqrt2", "lab", lambda: phase_state(math.pi / 6)),
    Fixture("phase-pi2", "state", "(|0> + i|1>)/sqrt2", "lab", lambda: phase_state(math.pi / 2)),
    Fixture(
        "bw-default",
        "bw",
        "Breit-Wigner E0=1, Gamma0=0.1, Emin=0",
        "lab",
        lambda: BWParams(1.0, 0.1, 0.0),
    ),
    Fixture(
        "eta-family",
        "family",
        "A=sigma-x, H=sigma-z, anchor |0> (eigenvector of H), directions theta=pi/2, pi/6, grid 1e-1..1e-5",
        "lab",
        _family("eta"),
    ),
    Fixture(
        "lambda-family",
        "family",
        "A=sigma-x, H=sigma-z, anchor (|0>+|1>)/sqrt2 (eigenvector of A), directions theta=pi/2, pi/6",
        "lab",
        _family("lambda"),
    ),
    Fixture(
        "zeno-sigmax",
        "zeno",
        "H=sigma-x, psi=|0>, t=1, n in {10, 100, 1000}",
        "lab",
        lambda: {"H": pauli_x(), "psi": basis_state(2, 0), "total_t": 1.0, "n_list": [10, 100, 1000]},
    ),
]

CATALOG = {f.name: f for f in _CATALOG}

_OSC = re.compile(r"^osc-(\d+)$")


def lookup(name: str, kind: str | None = None):
    """Build the named fixture, checking its kind when given. Raises KeyError if unknown."""
    m = _OSC.match(name)
    if m:
        fix, args = CATALOG["osc-N"], (int(m.group(1)),)
    elif name in CATALOG and name != "osc-N":
        fix, args = CATALOG[name], ()
    else:
        raise KeyError(name)
    if kind is not None and fix.kind != kind:
        raise KeyError(f"{name} is a {fix.kind} fixture, expected {kind}")
    return fix.build(*args)


def list_fixtures() -> list[Fixture]:
    return list(_CATALOG)


def format_catalog() -> str:
    width = max(len(f.name) for f in _CATALOG)
    lines = [f"{f.name:<{width}}  {f.kind:<8}  [{f.provenance}]  {f.description}" for f in _CATALOG]
    return "\n".join(lines)

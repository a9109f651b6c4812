#!/usr/bin/env python3
"""Smoke test for the stegqec_py extension module.

Builds the cdylib with cargo if needed, stages it under a temp directory
with the canonical module filename, imports it, and exercises one call
from every exposed surface.

Run from the repository root:  python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    subprocess.run(
        ["cargo", "build", "-p", "stegqec-py", "--release"],
        cwd=ROOT,
        check=True,
    )
    libdir = ROOT / "target" / "release"
    for name in ("libstegqec_py.so", "libstegqec_py.dylib", "stegqec_py.dll"):
        candidate = libdir / name
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no stegqec_py cdylib under {libdir}")


def stage_module(lib: Path) -> Path:
    staging = Path(tempfile.mkdtemp(prefix="stegqec_py_"))
    ext = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy2(lib, staging / f"stegqec_py{ext}")
    # A plain .so name also satisfies the import machinery on Linux.
    shutil.copy2(lib, staging / "stegqec_py.so")
    return staging


def main() -> None:
    staging = stage_module(build_extension())
    sys.path.insert(0, str(staging))
    import stegqec_py as sq

    # Pauli algebra.
    a = sq.Pauli("ZZI")
    b = sq.Pauli("IZZ")
    assert str(a * b) == "ZIZ"
    assert not sq.Pauli("X").commutes_with(sq.Pauli("Z"))

    # Codes, syndromes, distance, encoder round trip.
    five = sq.Code.builtin("five_qubit")
    assert five.validate()
    assert five.syndrome("IIIIZ") == "0001"
    assert five.distance() == 3
    circuit = five.synthesize_encoder()
    assert five.verify_encoder(circuit)
    image = circuit.conjugate(sq.Pauli("IIIIZ"))
    assert image.n == 5

    ea = five.reduce_to_ea(1)
    assert ea.ebits == 1 and ea.validate()

    # Linear programming.
    status, x, value = sq.lp_solve_max([1.0, 1.0], [[1.0, 1.0]], [1.0])
    assert status == "optimal" and abs(value - 1.0) < 1e-9

    # Classical rates.
    forms = sq.three_bit_forms(0.5)
    assert abs(forms["navg_packed"] - 1.5) < 1e-12
    n_avg, entropy = sq.class_lp_optimum("three_bit", 0.5)
    assert abs(n_avg - 2.0) < 1e-6 and abs(entropy - 2.0) < 1e-12
    closed, exact = sq.key_rates(0.1, 0.01, 10_000)
    assert abs(closed - exact) < 0.02

    # Quantum analytics.
    norm, p_opt = sq.diamond_norm("bsc", 0.1, 0.02, 1)
    assert abs(norm - 0.04) < 1e-12 and abs(p_opt - 0.51) < 1e-12
    assert abs(sq.entropy(0.5) - 1.0) < 1e-12
    r1 = sq.protocol1(0.1, 0.01, 10_000, 0.1)
    assert abs(r1["kcr_closed"] - r1["kcr_exact"]) < 0.05
    r2 = sq.protocol2("bsc", 0.25, 0.0, 64, 0.1)
    assert r2["rate"] > 0
    nr = sq.noisy_rate(0.05, 0.01)
    assert nr["rate"] > nr["protocol1_rate"]

    # Perfect-code protocol.
    mix = sq.perfect_mixture(0.1)
    assert math.isclose(mix["q0"] + mix["q1"] + mix["q2"] + mix["residual"], 1.0)
    transcript = sq.perfect_simulate(0.05, "1010", 7)
    assert float(transcript["recovery_fidelity"]) > 1 - 1e-9
    stats = sq.perfect_eve_check(0.05, 20_000, 11)
    assert stats["p_value"] > 0.001

    print("stegqec_py smoke test passed")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Smoke test for the zec_py extension module.

Builds the extension with cargo if needed, loads it, and checks a handful
of known values end to end. Run from anywhere:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    lib = ROOT / "target" / "release" / "libzec_py.so"
    subprocess.run(
        ["cargo", "build", "-p", "zec-py", "--release"],
        cwd=ROOT,
        check=True,
    )
    if not lib.exists():  # non-Linux fallbacks
        for candidate in ("libzec_py.dylib", "zec_py.dll"):
            alt = lib.with_name(candidate)
            if alt.exists():
                return alt
        raise FileNotFoundError("built extension library not found")
    return lib


def load_module(lib: Path):
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    staging = Path(tempfile.mkdtemp(prefix="zec_py_"))
    shutil.copy2(lib, staging / f"zec_py{suffix}")
    sys.path.insert(0, str(staging))
    import zec_py

    return zec_py


def main() -> None:
    zec_py = load_module(build_extension())

    # modular arithmetic
    assert zec_py.psi(-3, 5) == 2
    assert zec_py.psi(0, 5) == 0
    assert zec_py.lee_abs(4, 5) == 1
    assert zec_py.lee_distance([0, 0], [1, 3], 5) == 3
    assert zec_py.l1_distance([0, 1], [2, 2], 5) == 3

    # perfect Lee codes
    assert zec_py.exists_pl(2, 5) and not zec_py.exists_pl(2, 7)
    code = zec_py.LeeCode.construct(2, 5)
    assert len(code) == 5 and code.verify_perfect()
    worked = zec_py.LeeCode.from_codewords(
        2, 5, [[0, 0], [1, 3], [2, 1], [3, 4], [4, 2]]
    )
    assert worked.verify_perfect()
    _shift, _members, mapped = code.extract_window(3)
    assert len(mapped) == 2
    assert zec_py.l1_distance(mapped[0], mapped[1], 3) >= 3

    # confusion graph and exact solvers
    g = zec_py.ConfusionGraph.nne(2, 3)
    assert g.num_vertices == 9 and g.num_edges == 26
    alpha, witness = g.max_independent_set()
    assert alpha == 2 and len(witness) == 2
    num, den = g.clique_cover_lp()
    assert Fraction(num, den) == Fraction(5, 2)
    assert g.power(2).num_vertices == 81
    assert g.to_dimacs().startswith("p edge 9 26\n")

    # capacity bracket with the exact chain
    report = zec_py.capacity_bracket(2, 3, exact_alpha=True, lp=True)
    assert report["lower_closed"] == 2
    assert report["alpha_exact"] == 2
    assert Fraction(*report["lp_exact"]) == Fraction(5, 2)
    assert Fraction(*report["upper"]) == Fraction(41, 5)
    assert report["capacity_lo_bits"] == 1.0
    assert not report["flags"]

    # zero-error transmission
    trials, failures, rate = zec_py.demo(2, 3, k=2, trials=5000, seed=7)
    assert trials == 5000 and failures == 0
    assert math.isclose(rate, 1.0)

    print("smoke test passed")


if __name__ == "__main__":
    main()

"""Builds the extension module, imports it and checks a few exact values.

Run from anywhere: python3 python/smoke_test.py
"""

import json
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_module(target: Path) -> None:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "l2dim-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "release" / "libpyl2dim.so"
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(built, target / f"pyl2dim{suffix}")


CIRCLE = {
    "format": 1,
    "group": {"type": "free_abelian", "rank": 1},
    "cells": [
        {"id": "v", "dim": 0},
        {"id": "e", "dim": 1, "boundary": [["v", [[[1], 1, 1], [[0], -1, 1]]]]},
    ],
    "connected": True,
}

WEDGE = {
    "format": 1,
    "group": {"type": "free", "rank": 2},
    "cells": [
        {"id": "v", "dim": 0},
        {"id": "a", "dim": 1, "boundary": [["v", [[[1], 1, 1], [[], -1, 1]]]]},
        {"id": "b", "dim": 1, "boundary": [["v", [[[2], 1, 1], [[], -1, 1]]]]},
    ],
    "connected": True,
}

POINT_S3 = {
    "format": 1,
    "group": {"type": "finite", "preset": "symmetric", "n": 3},
    "cells": [{"id": "p", "dim": 0, "stabilizer": "6"}],
    "connected": True,
}

ZP = {"format": 1, "group": {"type": "finite", "preset": "cyclic", "n": 5}}


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        build_module(Path(tmp))
        sys.path.insert(0, tmp)
        import pyl2dim

        assert pyl2dim.betti_numbers(json.dumps(CIRCLE)) == [0, 0]
        assert pyl2dim.betti_numbers(json.dumps(WEDGE)) == [0, 1]
        assert pyl2dim.l2_euler(json.dumps(POINT_S3)) == Fraction(1, 6)

        ids, matrix = pyl2dim.character_matrix(json.dumps(ZP))
        assert ids == ["1", "5"]
        assert matrix == [[1, Fraction(1, 5)], [0, 1]]
        ok, xi = pyl2dim.integrality(json.dumps(ZP), ["1/5", 0])
        assert not ok and xi == [Fraction(1, 5), 0]

        e9 = pyl2dim.example9(2, 3, 2)
        assert e9["element"] == {"H0": Fraction(-2, 3), "H1": 1, "H2": 1}
        assert e9["l2_euler"] == 0
        assert e9["conditions"][0].startswith("η₀ − (1/3)Σηᵢ ∈ Z")

        assert pyl2dim.return_probs("free_abelian", 1, 2) == [Fraction(1, 2), Fraction(3, 8)]
        assert pyl2dim.return_probs("free", 2, 1) == [Fraction(1, 4)]
        report = json.loads(pyl2dim.kesten("free", 2, 30, "1/10"))
        assert report["verdict"] == "NonamenableEvidence"

        module = {"format": 1, "ring": "integers", "generators": 2, "relations": [[2, 0]]}
        assert pyl2dim.extended_dimension(json.dumps(module)) == 1

        try:
            pyl2dim.betti_numbers("{")
        except ValueError:
            pass
        else:
            raise AssertionError("malformed JSON accepted")
    print("python smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())

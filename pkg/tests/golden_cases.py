"""Golden CLI reports: each case is an argv whose JSON output is frozen in tests/golden/.

Regenerate with ``python3 tests/golden_cases.py``; the tests compare byte for byte.
"""
import json
import os
import subprocess
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "golden")

CASES = {
    "witt-ops-p3-n3": ["witt", "ops", "--p", "3", "--n", "3", "--x", "1,2,3", "--y", "4,5,6"],
    "witt-fp-iso-p3-n2": ["witt", "fp-iso", "--p", "3", "--n", "2"],
    "derham-e2-residue": ["derham", "--ring", "Zp-ramified-e2", "--p", "3", "--residue"],
    "drw-e1-n2-q1-modp": ["drw", "--ring", "Zp-unramified", "--p", "3", "--n", "2", "--q", "1", "--mod-p"],
    "drw-e1-n3-q2-table": ["drw", "--ring", "Zp-unramified", "--p", "3", "--n", "3", "--q", "2", "--table"],
    "drw-e2-n2-q1-matrices": ["drw", "--ring", "Zp-ramified-e2", "--p", "3", "--n", "2", "--q", "1",
                              "--matrices", "--precision", "5"],
    "drw-fp-n2-q0": ["drw", "--ring", "Fp", "--p", "3", "--n", "2", "--q", "0"],
    "kmilnor-f9": ["kmilnor", "--field", "F9"],
    "kmilnor-fpt-steinberg": ["kmilnor", "--ring", "Fp[t]", "--p", "3", "--symbol", "t,s"],
    "kmilnor-e2-trace": ["kmilnor", "--ring", "Zp-ramified-e2", "--p", "3", "--n", "2", "--symbol", "pi",
                         "--precision", "4"],
    "tate-m3-Z-i0": ["tate", "--m", "3", "--M", "Z", "--i", "0"],
    "tate-e2-n2": ["tate", "--pages", "--n", "2", "--p", "3", "--coeff", "0:Z", "--coeff", "1:Z/3",
                   "--coeff", "2:Z/9 + Z", "--s-min", "-3", "--s-max", "3"],
    "tate-e2-n3": ["tate", "--pages", "--n", "3", "--p", "3", "--coeff", "0:Z", "--coeff", "2:Z",
                   "--coeff", "4:Z", "--t-max", "4"],
    "fontaine-theta-n1": ["fontaine", "theta-check", "--p", "3", "--n", "1", "--precision", "4"],
    "fontaine-cocycle-n1": ["fontaine", "cocycle-check", "--n", "1"],
    "assemble-e1-n3-q1": ["assemble", "--ring", "Zp-unramified", "--p", "3", "--n", "3", "--q", "1"],
}


def render(argv, env=None) -> bytes:
    """Run the CLI in a fresh interpreter and return its stdout."""
    proc = subprocess.run([sys.executable, "-m", "drwitt"] + list(argv), capture_output=True, env=env,
                          check=False)
    if proc.returncode not in (0, 2):
        raise RuntimeError(proc.stderr.decode() or proc.stdout.decode())
    return proc.stdout


def path(name: str) -> str:
    return os.path.join(GOLDEN, name + ".json")


def write_all(env=None):
    os.makedirs(GOLDEN, exist_ok=True)
    with open(os.path.join(GOLDEN, "cases.json"), "w", encoding="utf-8") as fh:
        json.dump(CASES, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for name, argv in CASES.items():
        with open(path(name), "wb") as fh:
            fh.write(render(argv, env))


if __name__ == "__main__":
    write_all()

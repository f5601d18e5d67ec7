"""Built-in log rings used by the command line and the test suites."""
from __future__ import annotations

from .exact.rings import PresentedRing, PrimeField
from .logdr import FgMonoid, LogRing, dvr_model, trivial_log

PRESETS = ("Zp-unramified", "Zp-ramified-e2", "Fp", "Fp[t]")


def fp_t(p: int) -> LogRing:
    """F_p[t, 1/t, 1/(1−t)] with M = <t, 1−t>, so that {t, 1−t} is a symbol."""
    F = PrimeField(p)
    R = PresentedRing(F, ["t"], inverted=[{(1,): 1}, {(0,): 1, (1,): -1}])
    t = R.gen_raw("t")
    return LogRing(R, FgMonoid(("t", "s"), {"t", "s"}), {"t": t, "s": R.sub(R.one, t)},
                   name=f"(F_{p}[t,1/t,1/(1-t)], <t,1-t>)")


def fp_tu(p: int) -> LogRing:
    """F_p[t, u, 1/t, 1/(1−t), 1/u] with M = <t, 1−t, u>.

    Ω^2 is nonzero here, so dlog t ∧ dlog(1−t) = 0 is a genuine relation
    (dlog t ∧ dlog u is not zero).
    """
    F = PrimeField(p)
    R = PresentedRing(F, ["t", "u"], inverted=[{(1, 0): 1}, {(0, 0): 1, (1, 0): -1}, {(0, 1): 1}])
    t, u = R.gen_raw("t"), R.gen_raw("u")
    return LogRing(R, FgMonoid(("t", "s", "u"), {"t", "s", "u"}), {"t": t, "s": R.sub(R.one, t), "u": u},
                   name=f"(F_{p}[t,u,1/t,1/(1-t),1/u], <t,1-t,u>)")


def get_preset(name: str, p: int, units=()) -> LogRing:
    if name == "Zp-unramified":
        return dvr_model(p, 1, units)
    if name == "Zp-ramified-e2":
        return dvr_model(p, 2, units)
    if name == "Fp":
        return trivial_log(PrimeField(p), name=f"(F_{p}, trivial)")
    if name == "Fp[t]":
        return fp_t(p)
    raise KeyError(f"unknown ring preset {name!r}; choose from {', '.join(PRESETS)}")


def steinberg_units(name: str, p: int):
    """A unit 1 − π for the DVR presets, so that (π, 1 − π) is a declared pair."""
    if name == "Zp-unramified":
        return [1 - p]
    if name == "Zp-ramified-e2":
        return [(1, -1)]
    return []

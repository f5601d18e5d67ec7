"""Command line interface: one JSON report per invocation.

Exit status: 0 success, 2 result emitted but flagged (not stabilized,
precision exhausted, mismatch with a prediction), 1 invalid input.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from typing import List, Sequence

from .exact.errors import DrwError, NotStabilized, PrecisionExhausted
from .presets import PRESETS, get_preset, steinberg_units

EXIT_OK, EXIT_INVALID, EXIT_FLAGGED = 0, 1, 2


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _ints(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# subcommands


def cmd_witt(a):
    from .exact.rings import IntegerRing
    from .witt import witt_fp_iso, witt_ring
    if a.action == "fp-iso":
        rep = witt_fp_iso(a.p, a.n)
        return {"verified": rep["verified"], "checked": rep["checked"], "p": a.p, "n": a.n,
                "bijective": rep["bijective"], "additive": rep["additive"],
                "multiplicative": rep["multiplicative"]}, False
    if a.x is None:
        raise InvalidInput("--x is required")
    W = witt_ring(a.p, a.n, IntegerRing())
    x = W(_ints(a.x))
    if len(x.coords) != a.n:
        raise InvalidInput("--x must have n coordinates")
    out = {"x": x.to_json(), "ghost_x": [str(g) for g in x.ghost()]}
    if a.action == "ops":
        if a.y is None:
            raise InvalidInput("--y is required for ops")
        y = W(_ints(a.y))
        out.update({"y": y.to_json(), "sum": (x + y).to_json(), "product": (x * y).to_json(),
                    "difference": (x - y).to_json()})
        if a.n >= 2:
            out["frobenius_x"] = x.frobenius().to_json()
            out["verschiebung_x"] = x.restriction().verschiebung().to_json()
    return out, False


def cmd_derham(a):
    from .logdr import exterior_powers, residue_sequence_check
    L = get_preset(a.ring, a.p)
    D = exterior_powers(L, a.q_max)
    out = {"ring": L.name, "groups": {}}
    for q in range(a.q_max + 1):
        try:
            out["groups"][str(q)] = D.group(q).to_json()
        except DrwError:
            out["groups"][str(q)] = D.decompose(q).to_json()
    if a.residue:
        if L.dvr is None:
            raise InvalidInput("the residue sequence needs a DVR preset")
        out["residue"] = {str(q): residue_sequence_check(L, q) for q in range(a.q_max + 1)}
        flagged = not all(r["exact"] for r in out["residue"].values())
        return out, flagged
    return out, False


def cmd_drw(a):
    from .drw import (dim_mod_p, dimension_formula, family, model_from_log_ring,
                      operator_matrices, saturate)
    L = get_preset(a.ring, a.p)
    model = model_from_log_ring(L)
    g = saturate(L, a.n, a.q, depth=a.depth, precision=a.precision, strict=False)
    flagged = not g.stabilized or g.report.overflow
    if a.mod_p:
        dim = dim_mod_p(g)
        out = {"dim": dim, "stabilized": g.stabilized}
        if not model.residue_field:
            pred = dimension_formula(0, model.e, a.q, a.n, a.p)
            out["predicted"] = pred
            if pred != dim:
                out["finding"] = "dimension differs from the formula for the localized (non-henselian) model"
                flagged = True
        return out, flagged
    out = {"ring": L.name, "group": g.to_json()}
    if a.table:
        rows = []
        for n in range(1, a.n + 1):
            for q in range(a.q + 1):
                h = saturate(L, n, q, precision=a.precision or a.n + 2)
                pred = None if model.residue_field else dimension_formula(0, model.e, q, n, a.p)
                rows.append({"n": n, "q": q, "dim": dim_mod_p(h), "predicted": pred,
                             "stabilized": h.stabilized})
                flagged |= not h.stabilized or (pred is not None and pred != dim_mod_p(h))
        out["table"] = rows
    if a.matrices:
        fam = family(L, a.n, a.q, precision=a.precision or a.n + 2)
        ops = operator_matrices(list(fam.values()))
        out["operators"] = {k: [[str(x) for x in row] for row in v] for k, v in sorted(ops.items())}
        out["bases"] = {f"{n},{q}": g2.group.to_json() for (n, q), g2 in sorted(fam.items())}
    return out, flagged


def _presentation(a):
    from .symbols import UnitPresentation, finite_field_presentation
    if a.field:
        text = a.field.upper().lstrip("F")
        q = int(text)
        p, k = _prime_power(q)
        return finite_field_presentation(p, k)
    if a.presentation:
        with open(a.presentation, encoding="utf-8") as fh:
            data = json.load(fh)
        pairs = [(tuple(x), tuple(y)) for x, y in data.get("steinberg", [])]
        return UnitPresentation(tuple(data["gens"]), tuple(data["orders"]), pairs, label=data.get("label", ""))
    raise InvalidInput("give --field or --presentation")


def _prime_power(q: int):
    from sympy import factorint
    f = factorint(q)
    if len(f) != 1:
        raise InvalidInput(f"{q} is not a prime power")
    (p, k), = f.items()
    return int(p), int(k)


def cmd_kmilnor(a):
    from .symbols import milnor_k, steinberg_check, trace_to_drw
    out = {}
    flagged = False
    if a.field or a.presentation:
        U = _presentation(a)
        K = milnor_k(U, a.q, a.v, a.p if a.v else None)
        out["group"] = K.to_json()
        out["steinberg_pairs"] = len(U.steinberg)
    if a.ring:
        units = steinberg_units(a.ring, a.p)
        L = get_preset(a.ring, a.p, units)
        if a.symbol:
            syms = [s.split(",") for s in a.symbol]
            out["traces"] = [{"symbol": s, "image": trace_to_drw(L, s, a.n, a.precision).to_json()} for s in syms]
        from .symbols import UnitPresentation
        gens = L.monoid.gens
        if len(gens) >= 2:
            pair = (tuple(1 if i == 0 else 0 for i in range(len(gens))),
                    tuple(1 if i == 1 else 0 for i in range(len(gens))))
            U = UnitPresentation(gens, (0,) * len(gens), [pair])
            rep = steinberg_check(U, L, a.n, precision=a.precision)
            out["steinberg"] = rep
            flagged = not rep["all_zero"]
    if not out:
        raise InvalidInput("nothing to compute: give --field/--presentation and/or --ring")
    return out, flagged


def cmd_tate(a):
    from .tate import e2_pages, homology_cyclic, parse_group, tate_cyclic
    if a.pages:
        coeffs = {}
        for spec in a.coeff or []:
            t, g = spec.split(":", 1)
            coeffs[int(t)] = parse_group(g)
        hom, tate = e2_pages(a.n, a.p, coeffs, (a.s_min, a.s_max), (a.t_min, a.t_max))
        return {"homology": hom.to_json(), "tate": tate.to_json()}, False
    if a.m is None or a.M is None:
        raise InvalidInput("--m and --M are required")
    M = parse_group(a.M)
    out = {"m": a.m, "M": M.to_json()}
    if a.i is not None:
        out["group"] = tate_cyclic(a.m, M, a.i).to_json()
    elif a.s is not None:
        out["group"] = homology_cyclic(a.m, M, a.s).to_json()
    else:
        raise InvalidInput("give --i (Tate) or --s (homology)")
    return out, False


def cmd_fontaine(a):
    from .fontaine import (build_tower, cocycle_check, epsilon, geometric_identity, kernel_generator,
                           required_depth, tate_module_model, theta)
    m = a.length
    T = build_tower(a.p, required_depth(a.n, m, a.precision), a.precision)
    eps = epsilon(T)
    if a.action == "theta-check":
        g = kernel_generator(eps, a.n, m)
        th = theta(a.n, g)
        out = {"p": a.p, "n": a.n, "precision": f"{a.p}^{a.precision}", "length": m,
               "geometric_identity": geometric_identity(eps, a.n, m),
               "theta_kernel_zero": th.is_zero(), "compatible": g.is_compatible()}
        ok = out["geometric_identity"] and out["theta_kernel_zero"] and out["compatible"]
    elif a.action == "cocycle-check":
        gens = _ints(a.units) if a.units else [c for c in range(2, a.p ** 2) if c % a.p and _is_generator(c, a.p)]
        rows = [cocycle_check(eps, a.n, c1, c2, m) for c1 in gens for c2 in gens]
        out = {"p": a.p, "n": a.n, "generators": gens, "pairs": rows}
        ok = all(r["cocycle"] and r["galois_on_eps"] for r in rows)
    else:
        out = tate_module_model(eps, a.n, m)
        ok = out["R_bott"] and out["F_bott"]
    return out, not ok


def _is_generator(c, p):
    """c generates (Z/p^2)^*."""
    m = p * p
    order = p * (p - 1)
    x, k = c % m, 1
    while x != 1:
        x = x * c % m
        k += 1
    return k == order


def cmd_assemble(a):
    from .drw import family
    from .symbols import ses_outer_terms, tr_model
    L = get_preset(a.ring, a.p)
    fam = family(L, a.n, max(a.q + 1, 0), precision=a.precision or a.n + 2)
    out = {"tr_model": tr_model(fam, a.q, a.n, a.v, a.p).to_json()}
    ses = ses_outer_terms(fam, a.q, a.v, a.p)
    out["ses"] = ses.to_json()
    return out, not ses.consistent()


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    P = _Parser(prog="drwitt", description="Witt vectors, log de Rham-Witt groups and companions")
    P.add_argument("--config", help="INI file whose [job] section supplies defaults for the flags")
    P.add_argument("--output", help="write the JSON report to this path")
    P.add_argument("--seed", type=int, default=0)
    sub = P.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("witt")
    w.add_argument("action", choices=["ops", "ghost", "fp-iso"])
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--x")
    w.add_argument("--y")

    d = sub.add_parser("derham")
    d.add_argument("--ring", choices=PRESETS, required=True)
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--q-max", type=int, default=2)
    d.add_argument("--residue", action="store_true")

    r = sub.add_parser("drw")
    r.add_argument("--ring", choices=PRESETS, required=True)
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--q", type=int, required=True)
    r.add_argument("--depth", type=int)
    r.add_argument("--precision", type=int)
    r.add_argument("--mod-p", action="store_true")
    r.add_argument("--table", action="store_true")
    r.add_argument("--matrices", action="store_true")

    k = sub.add_parser("kmilnor")
    k.add_argument("--field", help="finite field such as F9")
    k.add_argument("--presentation", help="JSON file with gens, orders, steinberg")
    k.add_argument("--ring", choices=PRESETS)
    k.add_argument("--p", type=int, default=3)
    k.add_argument("--q", type=int, default=2)
    k.add_argument("--v", type=int)
    k.add_argument("--n", type=int, default=1)
    k.add_argument("--precision", type=int)
    k.add_argument("--symbol", action="append", help="comma-separated monoid generators, repeatable")

    t = sub.add_parser("tate")
    t.add_argument("--m", type=int)
    t.add_argument("--M")
    t.add_argument("--i", type=int)
    t.add_argument("--s", type=int)
    t.add_argument("--pages", action="store_true")
    t.add_argument("--n", type=int, default=2)
    t.add_argument("--p", type=int, default=3)
    t.add_argument("--coeff", action="append", help="t:GROUP, e.g. 0:Z, repeatable")
    t.add_argument("--s-min", type=int, default=0)
    t.add_argument("--s-max", type=int, default=4)
    t.add_argument("--t-min", type=int, default=0)
    t.add_argument("--t-max", type=int, default=2)

    f = sub.add_parser("fontaine")
    f.add_argument("action", choices=["theta-check", "cocycle-check", "tate-module"])
    f.add_argument("--p", type=int, default=3)
    f.add_argument("--n", type=int, default=1)
    f.add_argument("--precision", type=int, default=4)
    f.add_argument("--length", type=int, default=2)
    f.add_argument("--units", help="comma-separated exponents c (default: generators of (Z/p^2)^*)")

    s = sub.add_parser("assemble")
    s.add_argument("--ring", choices=PRESETS, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--v", type=int, default=1)
    s.add_argument("--precision", type=int)
    return P


COMMANDS = {"witt": cmd_witt, "derham": cmd_derham, "drw": cmd_drw, "kmilnor": cmd_kmilnor,
            "tate": cmd_tate, "fontaine": cmd_fontaine, "assemble": cmd_assemble}


def _config_argv(argv: Sequence[str]) -> List[str]:
    """Prepend flags from ``--config`` so that explicit flags still win."""
    argv = list(argv)
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    cp = configparser.ConfigParser()
    if not cp.read(path, encoding="utf-8"):
        raise InvalidInput(f"cannot read config {path}")
    if "job" not in cp:
        raise InvalidInput("config needs a [job] section")
    job = dict(cp["job"])
    command = job.pop("command", None)
    rest = argv[:i] + argv[i + 2:]
    if command and command not in rest:
        rest = [command] + rest
    if not rest:
        raise InvalidInput("no subcommand")
    head, tail = rest[0], rest[1:]
    extra = []
    for key, value in job.items():
        if key == "action":
            if not tail or tail[0].startswith("--"):
                tail = [value] + tail
            continue
        flag = "--" + key.replace("_", "-")
        if flag in tail:
            continue
        if value.lower() in ("true", "yes", "on"):
            extra.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            extra += [flag, value]
    if tail and not tail[0].startswith("--"):
        return [head, tail[0]] + extra + tail[1:]
    return [head] + extra + tail


def run(argv: Sequence[str]) -> tuple:
    """Return (report dict, exit code) without touching stdout."""
    try:
        args = build_parser().parse_args(_config_argv(argv))
        if getattr(args, "p", None) is not None and args.p < 2:
            raise InvalidInput("--p must be a prime")
        report, flagged = COMMANDS[args.command](args)
        return report, (EXIT_FLAGGED if flagged else EXIT_OK), args
    except InvalidInput as exc:
        return {"error": str(exc)}, EXIT_INVALID, None
    except (NotStabilized, PrecisionExhausted) as exc:
        return {"error": str(exc), "flagged": True}, EXIT_FLAGGED, None
    except (DrwError, ValueError, KeyError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}, EXIT_INVALID, None


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    report, code, args = run(argv)
    text = dumps(report)
    if args is not None and args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

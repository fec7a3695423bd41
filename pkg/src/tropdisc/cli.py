"""Command-line front end.

Every subcommand reads a configuration (``--matrix``) or a Cayley block
family (``--cayley``), prints a report on stdout and diagnostics on stderr.
Exit status: 0 on success, 2 for invalid input (with a machine-readable
reason), 3 when no generic weight was found within the budget.
"""

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from .cayley import (
    CayleyConfig,
    delta_equivalence_classes,
    is_essential,
    membership_via_mixed,
    mixed_subdivision,
    resultant_degree,
    total_volume,
)
from .config import Configuration, check_configuration, check_weight
from .exceptions import (
    Defective,
    DimensionMismatch,
    DimensionTooLarge,
    GenericityFailure,
    InvalidConfiguration,
    KernelNotOneDimensional,
    LatticeTooLarge,
    NotEssential,
    TooFewBlocks,
    TropdiscError,
)
from .fan import (
    WeightedFan,
    co_bergman_fan,
    hypersurface_cones,
    membership,
    tropical_discriminant,
)
from .initial import DEFAULT_BUDGET, ChainEngine, GenericityReport, degree, sample_weight
from .matroid import DEFAULT_MAX_FLATS, FlatLattice
from .newton import hull_summary, recover_discriminant, sample_extreme_monomials

SCHEMA_VERSION = 1


class InputError(TropdiscError, ValueError):
    def __init__(self, reason, message):
        self.reason = reason
        super().__init__(message)


# --------------------------------------------------------------------------
# input parsing


def parse_matrix_text(text):
    """``d n`` on the first line, then ``d`` rows of ``n`` integers; a JSON
    object ``{"d", "n", "matrix"}`` or a bare JSON list of rows also works."""
    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError("parse", f"bad JSON matrix: {exc}") from None
        rows = data["matrix"] if isinstance(data, dict) else data
        matrix = tuple(tuple(int(x) for x in row) for row in rows)
        if isinstance(data, dict) and "d" in data and "n" in data:
            if len(matrix) != int(data["d"]) or any(len(r) != int(data["n"]) for r in matrix):
                raise InputError("shape", "matrix does not match the declared d and n")
        return matrix
    lines = [ln.split("#")[0].split() for ln in stripped.splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        d, n = (int(x) for x in lines[0])
        rows = tuple(tuple(int(x) for x in ln) for ln in lines[1:])
    except (ValueError, IndexError):
        raise InputError("parse", "expected 'd n' followed by d rows of integers") from None
    if len(rows) != d or any(len(r) != n for r in rows):
        raise InputError("shape", f"expected {d} rows of {n} integers")
    return rows


def parse_cayley_text(text):
    try:
        data = json.loads(text)
        return CayleyConfig.from_dict(data)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError("parse", f"bad Cayley input: {exc}") from None


def parse_w(text):
    try:
        return tuple(Fraction(x.strip()) for x in text.split(",") if x.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError("parse", f"cannot read weight vector {text!r}") from None


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError("io", str(exc)) from None


def load_inputs(args):
    """Return ``(Configuration, CayleyConfig or None)`` from the flags."""
    cayley = None
    if args.cayley:
        cayley = parse_cayley_text(_read(args.cayley))
        matrix = cayley.matrix()
    elif args.matrix:
        matrix = parse_matrix_text(_read(args.matrix))
    else:
        raise InputError("missing-input", "pass --matrix FILE or --cayley FILE")
    return Configuration(matrix), cayley


def _weights(args, n):
    if not args.w:
        return None
    return check_weight(parse_w(args.w), n)


def _fmt_q(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _monomial(exp):
    parts = []
    for i, e in enumerate(exp):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e:
            parts.append(f"x{i + 1}^{e}")
    return " ".join(parts) or "1"


def _cycle_text(cyc, n):
    if cyc.codim == 1:
        return _monomial(cyc.exponent_vector(n))
    parts = []
    for tau, m in sorted(cyc.entries.items()):
        gens = ",".join(f"x{i}" for i in tau)
        parts.append(f"<{gens}>^{m}" if m != 1 else f"<{gens}>")
    return " ".join(parts)


# --------------------------------------------------------------------------
# subcommands; each returns (payload dict, list of text lines)


def cmd_validate(args, cfg, cayley):
    flags = cfg.flags
    payload = {"d": cfg.d, "n": cfg.n, "flags": flags, "valid": all(flags.values())}
    cfg.validate()
    return payload, [f"valid configuration: d={cfg.d} n={cfg.n}"]


def cmd_gale(args, cfg, cayley):
    B = cfg.gale
    Bt = [list(col) for col in zip(*B)]
    lines = ["B^t ="] + ["  " + " ".join(f"{x:3d}" for x in row) for row in Bt]
    return {"gale": [list(r) for r in B], "gale_transpose": Bt}, lines


def _lattice(args, cfg):
    return FlatLattice(cfg.gale, max_flats=args.max_flats or DEFAULT_MAX_FLATS)


def cmd_chains(args, cfg, cayley):
    lat = _lattice(args, cfg)
    chains = lat.maximal_chains()
    enc = [[sorted(i + 1 for i in F) for F in ch] for ch in chains]
    lines = [f"{len(lat)} flats, {len(chains)} maximal chains of length {lat.rank - 1}"]
    lines += [" < ".join("{" + ",".join(map(str, F)) + "}" for F in ch) for ch in enc]
    return {"flats": len(lat), "chain_length": lat.rank - 1, "chains": enc}, lines


def _discriminant_fan(args, cfg):
    return tropical_discriminant(cfg, lattice=_lattice(args, cfg))


def cmd_fan(args, cfg, cayley):
    fan = _discriminant_fan(args, cfg)
    coarse = co_bergman_fan(cfg, max_flats=args.max_flats)
    facets = len(hypersurface_cones(cfg, coarse))
    lines = [
        f"ambient {fan.ambient}, dimension {fan.dim}, lineality {fan.lineality_dim}, "
        f"{len(fan.cones)} maximal cones",
        f"co-Bergman fan: {len(coarse.cones)} maximal cones, {facets} map to codimension one",
    ]
    payload = {
        "fan": fan.to_dict(),
        "co_bergman_cones": len(coarse.cones),
        "codim_one_cones": facets,
    }
    return payload, lines


def cmd_dimension(args, cfg, cayley):
    engine = ChainEngine(cfg, lattice=_lattice(args, cfg))
    c = engine.codim
    payload = {
        "codim": c,
        "defective": c > 1,
        "dual_variety_dim": cfg.n - 1 - c,
        "chain_rank": cfg.n - c,
    }
    return payload, [f"codimension {c}" + (" (defective)" if c > 1 else "")]


def _engine(args, cfg):
    return ChainEngine(cfg, lattice=_lattice(args, cfg))


def cmd_initial(args, cfg, cayley):
    engine = _engine(args, cfg)
    cycles = []
    w = _weights(args, cfg.n)
    if w is not None:
        cycles.append(engine.cycle(w))
    else:
        rng = np.random.default_rng(args.seed)
        for _ in range(args.samples):
            for _attempt in range(args.budget):
                v = sample_weight(rng, cfg.n)
                try:
                    cycles.append(engine.cycle(v))
                    break
                except GenericityFailure:
                    continue
            else:
                raise GenericityFailure(v, "budget exhausted")
    payload = {"codim": engine.codim, "cycles": [c.to_dict() for c in cycles]}
    if engine.codim == 1:
        for entry, c in zip(payload["cycles"], cycles):
            entry["exp"] = list(c.exponent_vector(cfg.n))
    lines = [_cycle_text(c, cfg.n) for c in cycles]
    return payload, lines


def cmd_degree(args, cfg, cayley):
    engine = _engine(args, cfg)
    report = GenericityReport()
    deg = degree(cfg, seed=args.seed, budget=args.budget, engine=engine, report=report)
    payload = {"codim": engine.codim, "degree": deg, "attempts": report.attempts}
    return payload, [str(deg)]


def cmd_newton(args, cfg, cayley):
    w = _weights(args, cfg.n)
    mons = sample_extreme_monomials(
        cfg, args.samples, args.seed, weights=[w] if w else (), engine=_engine(args, cfg),
        budget=args.budget,
    )
    exps = mons.monomials
    payload = {"degree": sum(exps[0]) if exps else 0, "monomials": mons.to_list()}
    try:
        payload["fvector"] = list(hull_summary(exps).fvector)
    except DimensionTooLarge:
        payload["fvector"] = None
    lines = [f"degree {payload['degree']}, {len(exps)} extreme monomials"]
    lines += [_monomial(e) for e in exps]
    if payload["fvector"] is not None:
        lines.append("f-vector " + " ".join(map(str, payload["fvector"])))
    return payload, lines


def cmd_recover(args, cfg, cayley):
    mons = sample_extreme_monomials(
        cfg, args.samples, args.seed, engine=_engine(args, cfg), budget=args.budget
    )
    coeffs = recover_discriminant(cfg, mons.monomials, seed=args.seed)
    payload = {
        "degree": sum(mons.monomials[0]),
        "coefficients": [{"exp": list(e), "coeff": _fmt_q(c)} for e, c in sorted(coeffs.items())],
    }
    terms = []
    for e, c in sorted(coeffs.items()):
        scale = "" if abs(c) == 1 else f"{_fmt_q(abs(c))}*"
        terms.append(f"{'+' if c > 0 else '-'} {scale}{_monomial(e)}")
    return payload, [" ".join(terms).lstrip("+ ")]


def _need_cayley(cayley):
    if cayley is None:
        raise InputError("missing-input", "this subcommand needs --cayley FILE")
    return cayley


def cmd_cayley_degree(args, cfg, cayley):
    cayley = _need_cayley(cayley)
    deg = resultant_degree(cayley, seed=args.seed)
    return {"essential": True, "resultant_degree": deg}, [str(deg)]


def cmd_mixed(args, cfg, cayley):
    cayley = _need_cayley(cayley)
    w = _weights(args, cayley.n)
    if w is None:
        raise InputError("missing-w", "mixed needs --w")
    cells = mixed_subdivision(cayley, w)
    total = sum(c.normalized_volume for c in cells)
    payload = {
        "cells": [c.to_dict() for c in cells],
        "total_normalized_volume": total,
        "minkowski_normalized_volume": total_volume(cayley),
    }
    lines = []
    for c in cells:
        parts = ["{" + ",".join(map(str, s)) + "}" if len(s) > 1 else str(s[0]) for s in c.summands]
        flag = " fully mixed" if c.fully_mixed else (" mixed" if c.mixed else "")
        lines.append(f"({', '.join(parts)}) volume {_fmt_q(c.volume)}{flag}")
    return payload, lines


def cmd_classes(args, cfg, cayley):
    res = delta_equivalence_classes(cfg, samples=args.samples, seed=args.seed, engine=_engine(args, cfg))
    payload = res.to_dict()
    return payload, [f">= {res.count} classes observed in {res.samples} draws"]


def cmd_membership(args, cfg, cayley):
    if args.fan:
        try:
            fan = WeightedFan.from_json(_read(args.fan))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InputError("parse", f"bad fan file: {exc}") from None
        w = _weights(args, fan.ambient)
    else:
        if cfg is None:
            raise InputError("missing-input", "pass --matrix, --cayley or --fan")
        cfg.validate()
        fan = _discriminant_fan(args, cfg)
        w = _weights(args, cfg.n)
    if w is None:
        raise InputError("missing-w", "membership needs --w")
    inside = membership(fan, w)
    payload = {"member": inside}
    if cayley is not None and is_essential(cayley) and cayley.m >= cayley.r + 1:
        payload["member_via_mixed"] = membership_via_mixed(cayley, w)
    return payload, ["true" if inside else "false"]


COMMANDS = {
    "validate": cmd_validate,
    "gale": cmd_gale,
    "chains": cmd_chains,
    "fan": cmd_fan,
    "dimension": cmd_dimension,
    "initial": cmd_initial,
    "degree": cmd_degree,
    "newton": cmd_newton,
    "recover": cmd_recover,
    "cayley-degree": cmd_cayley_degree,
    "mixed": cmd_mixed,
    "classes": cmd_classes,
    "membership": cmd_membership,
}

# subcommands that do not need the standing hypotheses on the matrix
_NO_VALIDATION = {"validate", "cayley-degree", "mixed", "membership"}

_DEFAULT_SAMPLES = {"newton": 200, "recover": 200, "classes": 10_000}


def build_parser():
    p = argparse.ArgumentParser(
        prog="tropdisc",
        description="Tropical discriminants, initial monomials and resultant degrees.",
    )
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    src = p.add_mutually_exclusive_group()
    src.add_argument("--matrix", metavar="FILE", help="configuration: 'd n' then d rows, or JSON")
    src.add_argument("--cayley", metavar="FILE", help='JSON {"r": r, "blocks": [[point, ...], ...]}')
    p.add_argument("--fan", metavar="FILE", help="fan JSON written by the 'fan' subcommand")
    p.add_argument("--w", metavar="CSV", help="explicit weight vector, e.g. 3,1,4/3")
    p.add_argument("--samples", type=int, metavar="INT", help="number of random weights")
    p.add_argument("--seed", type=int, default=0, metavar="INT", help="random seed (default 0)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-flats", type=int, metavar="INT", help="cap on the lattice of flats")
    p.add_argument(
        "--budget", type=int, default=DEFAULT_BUDGET, metavar="INT",
        help=f"redraws per non-generic weight (default {DEFAULT_BUDGET})",
    )
    return p


def _emit(args, payload, lines, out):
    if args.format == "json":
        body = {"schema_version": SCHEMA_VERSION, "command": args.subcommand, **payload}
        out.write(json.dumps(body, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def _fail(args, status, reason, message, out, err):
    err.write(f"error: {message}\n")
    if getattr(args, "format", "text") == "json":
        body = {"schema_version": SCHEMA_VERSION, "error": reason, "message": message}
        out.write(json.dumps(body, sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"error: {reason}\n")
    return status


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.samples is not None and args.w:
        return _fail(args, 2, "conflicting-flags", "--w and --samples are mutually exclusive", out, err)
    if args.samples is None:
        args.samples = _DEFAULT_SAMPLES.get(args.subcommand, 0)
    if args.subcommand == "initial" and not args.w and not args.samples:
        return _fail(args, 2, "missing-w", "initial needs --w or --samples", out, err)
    start = time.perf_counter()
    try:
        if args.subcommand == "membership" and args.fan and not (args.matrix or args.cayley):
            cfg, cayley = None, None
        else:
            cfg, cayley = load_inputs(args)
            if args.subcommand not in _NO_VALIDATION:
                check_configuration(cfg)
        payload, lines = COMMANDS[args.subcommand](args, cfg, cayley)
    except InvalidConfiguration as exc:
        return _fail(args, 2, exc.reason, str(exc), out, err)
    except InputError as exc:
        return _fail(args, 2, exc.reason, str(exc), out, err)
    except Defective as exc:
        return _fail(args, 2, "defective", str(exc), out, err)
    except NotEssential as exc:
        return _fail(args, 2, "not-essential", str(exc), out, err)
    except TooFewBlocks as exc:
        return _fail(args, 2, "too-few-blocks", str(exc), out, err)
    except (DimensionMismatch, DimensionTooLarge, LatticeTooLarge) as exc:
        return _fail(args, 2, type(exc).__name__, str(exc), out, err)
    except GenericityFailure as exc:
        return _fail(args, 3, "non-generic", str(exc), out, err)
    except KernelNotOneDimensional as exc:
        return _fail(args, 3, "kernel-dimension", str(exc), out, err)
    _emit(args, payload, lines, out)
    err.write(f"Time elapsed: {time.perf_counter() - start:.3f} s\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

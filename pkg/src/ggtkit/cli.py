"""Command-line entry point: config ingestion, subcommand dispatch, and
machine-readable JSON reports.

Reports are canonical JSON (sorted keys, fixed separators) so repeated runs
with the same config and seed are byte-identical; wall time goes to stderr
and enters the payload only under --timing.

Exit codes: 0 success, 1 domain error, 2 config error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .bounds import PresentationConstants, bcp_epsilon, theorem_bound
from .cache import get_or_build_ball
from .cayley import (
    CyclicSubgroup,
    FactorSubgroup,
    cayley_graph,
    coned_off,
    estimate_delta_4point,
)
from .config import CACHE_DIR_ENV, RunConfig, Caps
from .conjugacy import (
    brute_force_conjugator,
    free_group_conjugacy,
    nilpotent_conjugator,
    profile_conjugacy_bound,
)
from .errors import ConfigError, DomainError, GgtError, ResourceCapError
from .groups import FreeGroup, FreeProduct, TwoStepNilpotent, model_from_dict
from .homology import (
    burghelea_split,
    connes_B,
    cyclic_quotient,
    hochschild_boundary,
    hochschild_slice,
    homology_dims,
)
from .rdalgebra import SupportedVector, check_product_estimate, parse_bounding_function

SCHEMA_VERSION = 1


def _load_group(spec: str):
    if spec is None:
        raise ConfigError("missing required --group")
    text = spec.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"inline group spec is not valid JSON: {exc}") from exc
        return model_from_dict(data)
    if text.endswith(".json"):
        try:
            with open(text) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read group file {text!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"group file {text!r} is not valid JSON: {exc}") from exc
        return model_from_dict(data)
    return model_from_dict(text)


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _report(subcommand: str, inputs: dict, results: dict, constants=None, warnings=(), timing=None) -> dict:
    report = {
        "schema": SCHEMA_VERSION,
        "toolkit_version": __version__,
        "subcommand": subcommand,
        "inputs": _jsonable(inputs),
        "results": _jsonable(results),
        "warnings": list(warnings),
    }
    if constants is not None:
        report["constants"] = _jsonable(constants)
    if timing is not None:
        report["wall_time_s"] = timing
    return report


def _parse_cone(model, text: str):
    kind, _, arg = text.partition(":")
    if kind == "cyclic":
        return CyclicSubgroup(model.parse_element(arg), label=f"<{arg}>")
    if kind == "factor":
        if not isinstance(model, FreeProduct):
            raise ConfigError("factor cones need a free product group")
        return FactorSubgroup(int(arg))
    raise ConfigError(f"unknown cone spec {text!r}; use cyclic:<element> or factor:<index>")


def _constants_from_args(args) -> PresentationConstants:
    kwargs = {}
    for field, flag in [
        ("delta", "delta"),
        ("L_pres", "L"),
        ("M_pres", "M"),
        ("C_ds", "C"),
        ("M_ballcard", "Mball"),
        ("K_axis", "Kaxis"),
        ("K_h", "Kh"),
        ("d_trans", "dtrans"),
    ]:
        val = getattr(args, flag, None)
        if val is not None:
            kwargs[field] = Fraction(val)
    return PresentationConstants(**kwargs)


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(
        caps=Caps(
            ball_size=getattr(args, "cap_ball", None) or Caps().ball_size,
            basis_size=getattr(args, "cap_basis", None) or Caps().basis_size,
        ),
        seed=getattr(args, "seed", 0),
        parallelism=getattr(args, "parallelism", 1),
        cache_dir=getattr(args, "cache_dir", None),
    )
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_ball(args, cfg):
    model = _load_group(args.group)
    b, source = get_or_build_ball(
        model, args.radius, cfg.resolved_cache_dir(), cap=cfg.caps.ball_size
    )
    by_length = [0] * (args.radius + 1)
    for length in b.lengths:
        by_length[length] += 1
    return _report(
        "ball",
        {"group": model.to_dict(), "radius": args.radius},
        {
            "size": len(b.elements),
            "sizes_by_length": by_length,
            "cache": source,
            "sample": [model.element_str(e) for e in b.elements[: min(8, len(b.elements))]],
        },
    )


def _cmd_graph(args, cfg):
    model = _load_group(args.group)
    b, source = get_or_build_ball(
        model, args.radius, cfg.resolved_cache_dir(), cap=cfg.caps.ball_size
    )
    graph = cayley_graph(b)
    delta = estimate_delta_4point(graph, seed=cfg.seed) if not args.no_delta else None
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["vertex_a", "vertex_b", "weight"])
            writer.writerows(graph.csv_rows())
    summary = graph.summary()
    summary["delta_estimate"] = str(delta) if delta is not None else None
    summary["cache"] = source
    return _report("graph", {"group": model.to_dict(), "radius": args.radius}, summary)


def _cmd_delta(args, cfg):
    model = _load_group(args.group)
    b, source = get_or_build_ball(
        model, args.radius, cfg.resolved_cache_dir(), cap=cfg.caps.ball_size
    )
    graph = cayley_graph(b)
    exhaustive = True if args.exhaustive else None
    delta = estimate_delta_4point(
        graph, exhaustive=exhaustive, sample_vertices=args.sample_vertices, seed=cfg.seed
    )
    mode = "exhaustive" if (args.exhaustive or graph.n <= 200) else "sampled"
    return _report(
        "delta",
        {"group": model.to_dict(), "radius": args.radius, "mode": mode},
        {"delta": str(delta), "vertices": graph.n, "cache": source},
    )


def _cmd_coned(args, cfg):
    model = _load_group(args.group)
    b, source = get_or_build_ball(
        model, args.radius, cfg.resolved_cache_dir(), cap=cfg.caps.ball_size
    )
    oracles = [_parse_cone(model, spec) for spec in args.cone]
    coned = coned_off(b, oracles)
    results = coned.summary()
    results["cache"] = source
    if args.pair:
        u = model.parse_element(args.pair[0])
        v = model.parse_element(args.pair[1])
        results["pair_distance"] = str(coned.distance(b.element_index(u), b.element_index(v)))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["vertex_a", "vertex_b", "weight"])
            writer.writerows(coned.graph.csv_rows())
    return _report(
        "coned",
        {"group": model.to_dict(), "radius": args.radius, "cones": args.cone},
        results,
    )


def _cmd_bounds(args, cfg):
    consts = _constants_from_args(args)
    if args.bounds_action == "eval":
        chain = bcp_epsilon(Fraction(args.k), consts)
        return _report(
            "bounds",
            {"action": "eval", "k": str(Fraction(args.k))},
            chain.as_dict(),
            constants=consts.as_dict(),
            warnings=[chain.note],
        )
    if args.bounds_action == "theorem":
        c_of_k = parse_bounding_function(args.c)
        qs = [parse_bounding_function(q) for q in args.q]
        rep = theorem_bound(Fraction(args.lu), Fraction(args.lv), consts, c_of_k, qs)
        return _report(
            "bounds",
            {"action": "theorem", "lu": args.lu, "lv": args.lv, "c": args.c, "q": args.q},
            rep.as_dict(),
            constants=consts.as_dict(),
        )
    raise ConfigError(f"unknown bounds action {args.bounds_action!r}")


def _cmd_conj_solve(args, cfg):
    model = _load_group(args.group)
    u = model.parse_element(args.u)
    v = model.parse_element(args.v)
    solver = args.solver
    if solver == "auto":
        if isinstance(model, FreeGroup):
            solver = "free"
        elif isinstance(model, TwoStepNilpotent):
            solver = "nilpotent"
        else:
            solver = "brute"
    if solver == "free":
        if not isinstance(model, FreeGroup):
            raise ConfigError("--solver free needs a free group")
        result = free_group_conjugacy(model, u, v)
    elif solver == "nilpotent":
        if not isinstance(model, TwoStepNilpotent):
            raise ConfigError("--solver nilpotent needs a two-step nilpotent group")
        result = nilpotent_conjugator(model, u, v)
    elif solver == "brute":
        result = brute_force_conjugator(model, u, v, args.radius, ball_cap=cfg.caps.ball_size)
    else:
        raise ConfigError(f"unknown solver {solver!r}")
    return _report(
        "conj",
        {
            "group": model.to_dict(),
            "u": model.element_str(u),
            "v": model.element_str(v),
            "solver": solver,
            "radius": args.radius,
        },
        result.as_dict(model),
    )


def _cmd_profile(args, cfg):
    model = _load_group(args.group)
    cache_dir = cfg.resolved_cache_dir()
    base, src1 = get_or_build_ball(model, args.radius, cache_dir, cap=cfg.caps.ball_size)
    search, src2 = get_or_build_ball(
        model, 2 * args.radius + args.slack, cache_dir, cap=cfg.caps.ball_size
    )
    result = profile_conjugacy_bound(
        model,
        args.radius,
        args.solver,
        slack=args.slack,
        fit_cap=cfg.fit_cap,
        ball_cap=cfg.caps.ball_size,
        parallelism=cfg.parallelism,
        base_ball=base,
        search_ball=search,
    )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            csv.writer(fh).writerows(result.csv_rows())
    fit = result.fit
    return _report(
        "profile",
        {"group": model.to_dict(), "radius": args.radius, "solver": args.solver, "slack": args.slack},
        {
            "records": len(result.records),
            "fit_degree": fit.degree,
            "fit_constant": str(fit.constant) if fit.constant is not None else None,
            "per_degree_constant": {str(d): str(a) for d, a in fit.per_degree.items()},
            "dominated": fit.dominated,
            "unknown_pairs": len(result.unknown_pairs),
            "max_min_conjugator_length": max(
                (r.min_conjugator_length for r in result.records), default=0
            ),
            "cache": [src1, src2],
        },
        warnings=result.notes,
    )


def _cmd_rd(args, cfg):
    import random as _random

    model = _load_group(args.group)
    f = parse_bounding_function(args.f)
    b, source = get_or_build_ball(
        model, args.radius, cfg.resolved_cache_dir(), cap=cfg.caps.ball_size
    )
    rng = _random.Random(cfg.seed)
    failures = 0
    first_failure = None
    for trial in range(args.trials):
        vecs = []
        for _ in range(2):
            support_size = rng.randint(1, min(6, len(b.elements)))
            vec = SupportedVector(model, exact=True)
            for _ in range(support_size):
                elem = b.elements[rng.randrange(len(b.elements))]
                vec.add_term(elem, Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
            vecs.append(vec)
        rep = check_product_estimate(vecs[0], vecs[1], f, length_cap=2 * args.radius + 1)
        if not rep.holds:
            failures += 1
            if first_failure is None:
                first_failure = trial
    return _report(
        "rd",
        {"group": model.to_dict(), "trials": args.trials, "f": args.f, "radius": args.radius},
        {
            "trials": args.trials,
            "failures": failures,
            "first_failure": first_failure,
            "cache": source,
        },
    )


def _cmd_homology(args, cfg):
    model = _load_group(args.group)
    if not hasattr(model, "order"):
        raise ConfigError("homology needs a finite group")
    n_max = args.nmax
    if n_max is None:
        n_max = 3 if model.order <= 6 else 2
    if args.split:
        slice_ = burghelea_split(model, n_max, basis_cap=cfg.caps.basis_size)
    else:
        slice_ = hochschild_slice(model, n_max, basis_cap=cfg.caps.basis_size)
    hh = homology_dims(slice_)
    cy = cyclic_quotient(model, n_max, split=args.split, basis_cap=cfg.caps.basis_size)
    hc = homology_dims(cy)
    identities = {}
    for n in range(2, n_max + 1):
        prod = hochschild_boundary(model, n - 1, basis_cap=cfg.caps.basis_size).matmul(
            hochschild_boundary(model, n, basis_cap=cfg.caps.basis_size)
        )
        identities[f"b{n - 1}b{n}"] = "0" if prod.is_zero() else "NONZERO"
    for n in range(0, min(2, n_max - 1) + 1):
        if n + 2 <= n_max:
            prod = connes_B(model, n + 1, basis_cap=cfg.caps.basis_size).matmul(
                connes_B(model, n, basis_cap=cfg.caps.basis_size)
            )
            identities[f"B{n + 1}B{n}"] = "0" if prod.is_zero() else "NONZERO"
    for n in range(1, n_max):
        anti = hochschild_boundary(model, n + 1, basis_cap=cfg.caps.basis_size).matmul(
            connes_B(model, n, basis_cap=cfg.caps.basis_size)
        )
        for key, val in (
            connes_B(model, n - 1, basis_cap=cfg.caps.basis_size)
            .matmul(hochschild_boundary(model, n, basis_cap=cfg.caps.basis_size))
            .entries.items()
        ):
            anti.add_at(key[0], key[1], val)
        identities[f"bB+Bb@{n}"] = "0" if anti.is_zero() else "NONZERO"
    results = {
        "n_max": n_max,
        "hochschild": hh.as_dict(),
        "cyclic": hc.as_dict(),
        "identities": identities,
    }
    return _report(
        "homology",
        {"group": model.to_dict(), "nmax": n_max, "split": bool(args.split)},
        results,
    )


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ggtkit",
        description="Exact computational toolkit for conjugacy bounds, coned-off "
        "Cayley geometry, rapid-decay seminorms, and group-algebra homology.",
    )
    parser.add_argument("--version", action="version", version=f"ggtkit {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="builtin name, inline JSON, or path to a .json file")
    common.add_argument("--cap-ball", type=int, help="ball size cap")
    common.add_argument("--cap-basis", type=int, help="tuple basis cap")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled scans")
    common.add_argument("--parallelism", type=int, default=1)
    common.add_argument("--cache-dir", help=f"ball cache directory (or ${CACHE_DIR_ENV})")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ball", parents=[common], help="enumerate a Cayley ball")
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("graph", parents=[common], help="Cayley graph of a ball")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--csv", help="write the edge list to this CSV file")
    p.add_argument("--no-delta", action="store_true", help="skip the delta estimate")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("delta", parents=[common], help="four-point hyperbolicity defect")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--sample-vertices", type=int, default=64)
    p.set_defaults(func=_cmd_delta)

    p = sub.add_parser("coned", parents=[common], help="coned-off Cayley graph")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument(
        "--cone",
        action="append",
        required=True,
        help="subgroup to cone off: cyclic:<element> or factor:<index> (repeatable)",
    )
    p.add_argument("--pair", nargs=2, metavar=("U", "V"), help="report the coned distance")
    p.add_argument("--csv", help="write the coned edge list to this CSV file")
    p.set_defaults(func=_cmd_coned)

    p = sub.add_parser("bounds", help="bound-formula evaluators")
    bounds_sub = p.add_subparsers(dest="bounds_action", required=True)
    pe = bounds_sub.add_parser("eval", parents=[common], help="coset-penetration constant chain")
    pe.add_argument("--k", required=True)
    for flag in ("--delta", "--L", "--M", "--C", "--Mball", "--Kaxis", "--Kh", "--dtrans"):
        pe.add_argument(flag)
    pe.set_defaults(func=_cmd_bounds)
    pt = bounds_sub.add_parser("theorem", parents=[common], help="composite conjugator-length bound")
    pt.add_argument("--lu", required=True)
    pt.add_argument("--lv", required=True)
    pt.add_argument("--c", default="(1+x)", help="coset-penetration bound function")
    pt.add_argument("--q", action="append", default=[], help="subgroup polynomial bound (repeatable)")
    for flag in ("--delta", "--L", "--M", "--C", "--Mball", "--Kaxis", "--Kh", "--dtrans"):
        pt.add_argument(flag)
    pt.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("conj", help="conjugacy solvers")
    conj_sub = p.add_subparsers(dest="conj_action", required=True)
    ps = conj_sub.add_parser("solve", parents=[common])
    ps.add_argument("--u", required=True)
    ps.add_argument("--v", required=True)
    ps.add_argument("--solver", default="auto", choices=["auto", "brute", "nilpotent", "free"])
    ps.add_argument("--radius", type=int, default=6)
    ps.set_defaults(func=_cmd_conj_solve)
    pp = conj_sub.add_parser("profile", parents=[common])
    pp.add_argument("--radius", type=int, required=True)
    pp.add_argument("--solver", default="auto")
    pp.add_argument("--slack", type=int, default=2)
    pp.add_argument("--csv", help="write profile records to this CSV file")
    pp.set_defaults(func=_cmd_profile)

    p = sub.add_parser("rd", help="rapid-decay seminorm checks")
    rd_sub = p.add_subparsers(dest="rd_action", required=True)
    pc = rd_sub.add_parser("check", parents=[common])
    pc.add_argument("--trials", type=int, default=100)
    pc.add_argument("--f", default="(1+x)^2")
    pc.add_argument("--radius", type=int, default=3)
    pc.set_defaults(func=_cmd_rd)

    p = sub.add_parser("homology", parents=[common], help="group-algebra homology")
    p.add_argument("--nmax", type=int)
    p.add_argument("--split", action="store_true", help="partition by conjugacy class")
    p.set_defaults(func=_cmd_homology)

    p = sub.add_parser("profile", parents=[common], help="conjugacy-bound profiler")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--solver", default="auto")
    p.add_argument("--slack", type=int, default=2)
    p.add_argument("--csv", help="write profile records to this CSV file")
    p.set_defaults(func=_cmd_profile)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        cfg = _config_from_args(args)
        report = args.func(args, cfg)
    except ConfigError as exc:
        print(f"ggtkit: config error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"ggtkit: resource cap: {exc}", file=sys.stderr)
        return 3
    except (DomainError, GgtError) as exc:
        print(f"ggtkit: error: {exc}", file=sys.stderr)
        return 1
    elapsed = time.monotonic() - started
    if getattr(args, "timing", False):
        report["wall_time_s"] = round(elapsed, 6)
    print(f"ggtkit: wall_time_s={elapsed:.6f}", file=sys.stderr)
    sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line interface.

Verbs: sample, encode, decode, saw-encode, saw-decode, enumerate,
verify, experiment.  Exit status 0 on success, 1 when a verification
fails, 2 on usage errors (argparse's default).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bijection import bdg_forward, bdg_inverse, encoding_from_forest, build_map
from .enumerator import (
    ENUMERATION_CAP,
    count_formula,
    enumerate_bridges,
    enumerate_forests,
    enumerate_quadrangulations,
)
from .forest import Bridge, ForestShape, WellLabeledForest
from .planarmap import BoundaryMap, PointedBoundaryMap, canonical_code
from .sampler import (
    RNG_ID,
    Seed,
    rng_from_seed,
    sample_bridge,
    sample_encoding,
    sample_forest_shape,
    sample_labels,
)
from .saw import SawConfiguration, quadrangulation_to_saw, saw_to_quadrangulation


def forest_to_json(wlf: WellLabeledForest, b: Bridge) -> str:
    return json.dumps(
        {
            "child_counts": [list(t) for t in wlf.shape.child_counts],
            "labels": list(wlf.labels),
            "bridge": list(b.values),
        }
    )


def forest_from_json(text: str) -> tuple[WellLabeledForest, Bridge]:
    doc = json.loads(text)
    shape = ForestShape(tuple(tuple(t) for t in doc["child_counts"]))
    wlf = WellLabeledForest(shape, tuple(int(x) for x in doc["labels"]))
    return wlf, Bridge(tuple(int(x) for x in doc["bridge"]))


def _read_input(args) -> str:
    if args.input and args.input != "-":
        with open(args.input) as fh:
            return fh.read()
    return sys.stdin.read()


def _write_output(args, text: str) -> None:
    if getattr(args, "output", None) and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_sample(args) -> int:
    lines = []
    for r in range(args.reps):
        seed = Seed(args.seed, r)
        if args.kind == "bridge":
            b = sample_bridge(args.sigma, seed)
            lines.append(json.dumps({"bridge": list(b.values)}))
        elif args.kind == "forest":
            rng = rng_from_seed(seed)
            shape = sample_forest_shape(args.n, args.sigma, rng)
            wlf = sample_labels(shape, rng)
            b = sample_bridge(args.sigma, rng)
            lines.append(forest_to_json(wlf, b))
        else:
            enc = sample_encoding(args.n, args.sigma, seed)
            pq = build_map(enc, check=False)
            lines.append(pq.to_json())
    _write_output(args, "\n".join(lines))
    return 0


def cmd_encode(args) -> int:
    wlf, b = forest_from_json(_read_input(args))
    pq = bdg_forward(wlf, b)
    _write_output(args, pq.to_json())
    return 0


def cmd_decode(args) -> int:
    pq = PointedBoundaryMap.from_json(_read_input(args))
    wlf, b = bdg_inverse(pq)
    _write_output(args, forest_to_json(wlf, b))
    return 0


def cmd_saw_encode(args) -> int:
    m, _ = BoundaryMap.from_json(_read_input(args))
    cfg = quadrangulation_to_saw(m)
    cfg.validate()
    _write_output(args, cfg.to_json())
    return 0


def cmd_saw_decode(args) -> int:
    cfg = SawConfiguration.from_json(_read_input(args))
    m = saw_to_quadrangulation(cfg)
    _write_output(args, m.to_json())
    return 0


def cmd_enumerate(args) -> int:
    n, sigma = args.n, args.sigma
    if args.kind == "bridges":
        total = 0
        for b in enumerate_bridges(sigma):
            total += 1
            if args.dump:
                print(json.dumps(list(b.values)))
    elif args.kind == "forests":
        if args.dump:
            for wlf in enumerate_forests(n, sigma):
                print(
                    json.dumps(
                        {
                            "child_counts": [
                                list(t) for t in wlf.shape.child_counts
                            ],
                            "labels": list(wlf.labels),
                        }
                    )
                )
        total = sum(1 for _ in enumerate_forests(n, sigma))
    else:
        total = 0
        for code, pq, mult in enumerate_quadrangulations(n, sigma):
            total += 1
            if args.dump:
                print(pq.map.to_json())
    expected = count_formula(
        {"bridges": "bridges", "forests": "forests", "maps": "quadrangulations"}[
            args.kind
        ],
        n,
        sigma,
    )
    print(f"count {total} expected {expected}", file=sys.stderr)
    return 0 if total == expected else 1


def cmd_verify(args) -> int:
    rng = rng_from_seed(Seed(args.seed))
    if args.check == "roundtrip":
        if args.exhaustive:
            bad = tot = 0
            for wlf in enumerate_forests(args.n, args.sigma):
                for b in enumerate_bridges(args.sigma):
                    pq = bdg_forward(wlf, b)
                    tot += 1
                    if bdg_inverse(pq) != (wlf, b):
                        bad += 1
            print(f"roundtrip exhaustive n={args.n} sigma={args.sigma}: "
                  f"{tot - bad}/{tot} ok")
            return 0 if bad == 0 else 1
        bad = 0
        for r in range(args.reps):
            enc = sample_encoding(args.n, args.sigma, rng)
            pq = build_map(enc)
            wlf, b = bdg_inverse(pq)
            enc2 = encoding_from_forest(wlf, b)
            if not (
                np.array_equal(enc.corner_vertex, enc2.corner_vertex)
                and np.array_equal(enc.labels, enc2.labels)
                and np.array_equal(enc.bridge, enc2.bridge)
            ):
                bad += 1
        print(f"roundtrip random n={args.n} sigma={args.sigma}: "
              f"{args.reps - bad}/{args.reps} ok")
        return 0 if bad == 0 else 1
    if args.check == "counts":
        distinct = sum(
            1 for _ in enumerate_quadrangulations(args.n, args.sigma)
        )
        expected = count_formula("quadrangulations", args.n, args.sigma)
        ok = distinct == expected
        print(f"counts n={args.n} sigma={args.sigma}: {distinct} vs {expected}")
        return 0 if ok else 1
    if args.check == "saw":
        bad = 0
        for r in range(args.reps):
            enc = sample_encoding(args.n, args.sigma, rng)
            m = build_map(enc, check=False).map
            cfg = quadrangulation_to_saw(m)
            cfg.validate()
            if canonical_code(saw_to_quadrangulation(cfg)) != canonical_code(m):
                bad += 1
        print(f"saw roundtrip: {args.reps - bad}/{args.reps} ok")
        return 0 if bad == 0 else 1
    if args.check == "bounds":
        from .metrics import check_cactus_lower_bound, check_distance_upper_bound

        worst_hi = worst_lo = -np.inf
        for r in range(args.reps):
            enc = sample_encoding(args.n, args.sigma, rng)
            pq = build_map(enc, check=False)
            wlf, b = bdg_inverse(pq)
            worst_hi = max(
                worst_hi, check_distance_upper_bound(pq, n_pairs=200, rng=rng)
            )
            worst_lo = max(
                worst_lo,
                check_cactus_lower_bound(pq, wlf, b, n_pairs=200, rng=rng),
            )
        print(f"bounds: upper slack {worst_hi}, lower slack {worst_lo}")
        return 0 if worst_hi <= 0 and worst_lo <= 0 else 1
    raise AssertionError


def cmd_experiment(args) -> int:
    from . import scaling

    fns = {
        "bridge-variance": lambda: scaling.bridge_variance_experiment(
            n=args.n, replicas=args.reps, seed=args.seed
        ),
        "dimension": lambda: scaling.dimension_experiment(
            n=args.n, replicas=args.reps, seed=args.seed
        ),
        "sigma-zero": lambda: scaling.sigma_zero_experiment(
            replicas=args.reps, seed=args.seed
        ),
        "sigma-infinity": lambda: scaling.sigma_infinity_experiment(
            replicas=args.reps, seed=args.seed
        ),
    }
    res = fns[args.name]()
    _write_output(args, json.dumps(res.to_dict(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bquad",
        description="uniform quadrangulations with a boundary",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("sample", help="draw uniform objects as JSON lines")
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--sigma", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--reps", type=int, default=1)
    sp.add_argument(
        "--kind", choices=["quadrangulation", "forest", "bridge"],
        default="quadrangulation",
    )
    sp.add_argument("--output", "-o", default="-")
    sp.set_defaults(fn=cmd_sample)

    for verb, fn in [
        ("encode", cmd_encode),
        ("decode", cmd_decode),
        ("saw-encode", cmd_saw_encode),
        ("saw-decode", cmd_saw_decode),
    ]:
        sp = sub.add_parser(verb)
        sp.add_argument("--input", "-i", default="-")
        sp.add_argument("--output", "-o", default="-")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("enumerate", help="exhaustive listing for small sizes")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sigma", type=int, required=True)
    sp.add_argument(
        "--kind", choices=["bridges", "forests", "maps"], default="maps"
    )
    sp.add_argument("--dump", action="store_true")
    sp.set_defaults(fn=cmd_enumerate)

    sp = sub.add_parser("verify", help="self checks; exit 1 on failure")
    sp.add_argument(
        "check", choices=["roundtrip", "counts", "saw", "bounds"]
    )
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--sigma", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--reps", type=int, default=10)
    sp.add_argument("--exhaustive", action="store_true")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("experiment", help="scaling-limit statistics")
    sp.add_argument(
        "name",
        choices=["bridge-variance", "dimension", "sigma-zero", "sigma-infinity"],
    )
    sp.add_argument("--n", type=int, default=10000)
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output", "-o", default="-")
    sp.set_defaults(fn=cmd_experiment)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

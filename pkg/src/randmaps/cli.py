"""Command line front end: ``randmaps <command> ...``.

Every command prints ``randmaps <version> seed=<seed>`` first. Data go to
``--out`` when given, otherwise to stdout after that line. Exit codes are
0 on success, 1 when a verification fails and 2 for usage or config errors.
"""

import argparse
import json
import sys

import numpy as np
from scipy.sparse.csgraph import shortest_path

from randmaps import __version__
from randmaps.cvs import (
    MAX_VERIFY_EDGES,
    label_identity_holds,
    quad_to_tree,
    tree_to_quad,
    verify_two_to_one,
)
from randmaps.errors import BijectionViolation, RandMapsError
from randmaps.experiment import ConfigError, ReplicaError, load_config, run_experiment
from randmaps.looptree import build_looptree, loop_diameter, stable_scaling_samples
from randmaps.maps import dumps_map
from randmaps.snake import LABEL_METHODS, snake_widths
from randmaps.stats import ks_two_sample
from randmaps.tree import (
    dumps_tree,
    enumerate_labeled_trees,
    enumerate_plane_trees,
    sample_labeled_tree,
)

LOOPTREE_VERIFY_EDGES = 7          # every plane tree with at most 8 vertices


class VerificationFailure(Exception):
    def __init__(self, suite, message, witness=None):
        super().__init__(message)
        self.suite = suite
        self.witness = witness


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def nonnegative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {text}")
    return value


def _resolve_seed(seed):
    return int(np.random.SeedSequence().entropy) if seed is None else seed


def _banner(seed=None):
    tail = "" if seed is None else f" seed={seed}"
    print(f"randmaps {__version__}{tail}")


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


# -------------------------------------------------------------- commands

def cmd_sample_quad(args):
    seed = _resolve_seed(args.seed)
    _banner(seed)
    rng = np.random.default_rng(seed)
    lt = sample_labeled_tree(args.faces, rng)
    q = tree_to_quad(lt, int(rng.integers(2)))
    radius = int(q.bfs_distances(q.pointed_vertex).max())
    print(f"V={q.n_vertices} E={q.n_edges} F={q.n_faces} radius={radius}")
    _emit(dumps_map(q), args.out)
    return 0


def _suite_bijection(k, log):
    for n in range(1, k + 1):
        try:
            report = verify_two_to_one(n, encode=tree_to_quad)
        except BijectionViolation as exc:
            raise VerificationFailure("bijection", str(exc), exc.witness) from exc
        log(f"{report.n_labeled_trees} trees / {report.n_pointed_rooted} pointed quads "
            f"({report.n_rooted} rooted) at n={n}")


def _suite_label_identity(k, log):
    count = 0
    for n in range(1, k + 1):
        for lt in enumerate_labeled_trees(n):
            for bit in (0, 1):
                if not label_identity_holds(lt, tree_to_quad(lt, bit)):
                    raise VerificationFailure("label-identity", "distance to the pointed vertex "
                                              "differs from the shifted label", (lt, bit))
                count += 1
    log(f"{count} encodings checked")


def _suite_euler(k, log):
    count = 0
    for n in range(1, k + 1):
        for lt in enumerate_labeled_trees(n):
            for bit in (0, 1):
                q = tree_to_quad(lt, bit)
                chi = q.n_vertices - q.n_edges + q.n_faces
                if chi != 2 or (q.face_degrees != 4).any() or not q.is_bipartite():
                    raise VerificationFailure(
                        "euler", f"V-E+F={chi}, face degrees {q.face_degrees.tolist()}", (lt, bit))
                if quad_to_tree(q) != lt:
                    raise VerificationFailure("euler", "inverse does not return the tree", (lt, bit))
                count += 1
    log(f"{count} maps with V-E+F=2")


def _suite_looptree(log):
    count = 0
    for n in range(0, LOOPTREE_VERIFY_EDGES + 1):
        for tau in enumerate_plane_trees(n):
            g = build_looptree(tau)
            internal = int((tau.child_counts > 0).sum())
            problems = []
            if g.n_vertices != tau.n_nodes:
                problems.append("vertex count")
            if g.n_edges != tau.n_edges + internal:
                problems.append(f"{g.n_edges} edges, expected {tau.n_edges + internal}")
            if not g.is_connected():
                problems.append("disconnected")
            if not problems and g.n_vertices > 1:
                adj = np.zeros((g.n_vertices, g.n_vertices))
                adj[g.edges[:, 0], g.edges[:, 1]] = 1
                oracle = shortest_path(adj, method="FW", directed=False, unweighted=True)
                ours = np.array([g.distances(v) for v in range(g.n_vertices)])
                if not np.array_equal(ours, oracle.astype(np.int64)):
                    problems.append("distances differ from all-pairs oracle")
                elif loop_diameter(g) != int(oracle.max()):
                    problems.append("diameter differs from all-pairs oracle")
            if problems:
                raise VerificationFailure("looptree", ", ".join(problems), (tau, None))
            count += 1
    log(f"{count} trees with at most {LOOPTREE_VERIFY_EDGES + 1} vertices")


def _dump_witness(witness):
    obj, bit = witness if isinstance(witness, tuple) else (witness, None)
    if obj is None:
        return
    print("witness:")
    sys.stdout.write(dumps_tree(obj))
    if bit is not None:
        print(f"orientation_bit {bit}")


def cmd_verify(args):
    _banner()
    suites = [
        ("bijection", lambda log: _suite_bijection(args.max_edges, log)),
        ("label-identity", lambda log: _suite_label_identity(args.max_edges, log)),
        ("euler", lambda log: _suite_euler(args.max_edges, log)),
        ("looptree", _suite_looptree),
    ]
    for name, run in suites:
        notes = []
        try:
            run(notes.append)
        except VerificationFailure as exc:
            print(f"FAIL {exc.suite}: {exc}")
            _dump_witness(exc.witness)
            return 1
        for note in notes:
            print(f"  {name}: {note}")
        print(f"PASS {name}")
    return 0


def cmd_experiment(args):
    try:
        cfg = load_config(args.config)
    except FileNotFoundError:
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    _banner(cfg.seed)
    try:
        result = run_experiment(cfg)
    except ReplicaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not cfg.output:
        sys.stdout.write(result.to_csv())
    else:
        print(f"wrote {cfg.output}")
    if cfg.summary_path:
        print(f"wrote {cfg.summary_path}")
    else:
        print(json.dumps(result.summary, indent=2, sort_keys=True))
    return 0


def cmd_snake(args):
    seed = _resolve_seed(args.seed)
    _banner(seed)
    widths = snake_widths(args.grid, args.replicas, seed, args.method)
    text = "replica,width\n" + "".join(f"{i},{w!r}\n" for i, w in enumerate(widths.tolist()))
    print(f"grid={args.grid} replicas={args.replicas} mean_width={widths.mean():.6f}")
    _emit(text, args.out)
    return 0


def cmd_looptree(args):
    seed = _resolve_seed(args.seed)
    _banner(seed)
    table = stable_scaling_samples(args.alpha, args.sizes, args.replicas, seed, k_max=args.k_max)
    text = "n,replica,value\n" + "".join(f"{n},{i},{v!r}\n" for n, i, v in table.tolist())
    for n in args.sizes:
        print(f"n={n} mean={table['value'][table['n'] == n].mean():.6f}")
    for a, b in zip(args.sizes, args.sizes[1:]):
        ks = ks_two_sample(table["value"][table["n"] == a], table["value"][table["n"] == b])
        print(f"ks {a}-{b} = {ks:.6f}")
    _emit(text, args.out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="randmaps", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"randmaps {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-quad", help="uniform pointed rooted quadrangulation")
    p.add_argument("--faces", type=positive_int, required=True)
    p.add_argument("--seed", type=nonnegative_int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample_quad)

    p = sub.add_parser("verify", help="exhaustive bijection and invariant suites")
    p.add_argument("--max-edges", type=positive_int, default=MAX_VERIFY_EDGES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="Monte Carlo experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("snake", help="widths of discretised snake label measures")
    p.add_argument("--grid", type=positive_int, default=2000)
    p.add_argument("--replicas", type=positive_int, required=True)
    p.add_argument("--seed", type=nonnegative_int)
    p.add_argument("--method", choices=LABEL_METHODS, default="sequential")
    p.add_argument("--out")
    p.set_defaults(func=cmd_snake)

    p = sub.add_parser("looptree", help="rescaled looptree diameters of stable GW trees")
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--sizes", type=positive_int, nargs="+", required=True)
    p.add_argument("--replicas", type=positive_int, required=True)
    p.add_argument("--seed", type=nonnegative_int)
    p.add_argument("--k-max", type=positive_int, default=10**4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_looptree)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify" and args.max_edges > MAX_VERIFY_EDGES:
        ap.error(f"--max-edges is capped at {MAX_VERIFY_EDGES}")
    if args.command == "snake" and args.grid < 2:
        ap.error("--grid must be at least 2")
    if args.command == "looptree" and not 1 < args.alpha < 2:
        ap.error("--alpha must lie in (1, 2)")
    try:
        return args.func(args)
    except (RandMapsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver.

Commands: tree, orbits, minimal, counts, matrix, verify, example.
Exit codes: 0 all requested checks pass, 1 a verification failed, 2 usage.
Output is deterministic for a fixed configuration (seed included).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources

from .padics import PadicConfig
from .tree import dot_tree
from .orbits import OrbitRegistry, build_registry, check_partition, minimal_orbits, verify_counts
from .chains import assemble_dbar1, verify_exactness


@dataclass
class RunConfig:
    p: int
    k: int
    n: int
    d: int
    N: int
    seed: int
    command: str
    out: str | None
    format: str

    @staticmethod
    def auto_precision(p: int, k: int, n: int, d: int) -> int:
        # >= k + n + d + 4 guard digits; transported centers need ~k + 2n more
        return k + 2 * n + d + 8

    def padic(self) -> PadicConfig:
        return PadicConfig(self.p, self.N)


def _record_json(reg: OrbitRegistry, rec, parents, children) -> dict:
    return {
        "id": rec.id_str(),
        "simplex": rec.simplex.id_str(),
        "ball": rec.ball.to_json(reg.cfg),
        "minimal": reg.minimal_flags.get(rec.id_str(), False),
        "parents": sorted(parents),
        "children": sorted(children),
    }


def registry_json(reg: OrbitRegistry) -> dict:
    vrecs = list(reg.all_vertex_records())
    links_up = {r.id_str(): [] for r in vrecs}
    links_down = {r.id_str(): [] for r in vrecs}
    for a in vrecs:
        for b in vrecs:
            if a.ball != b.ball and a.ball.subset(b.ball):
                links_up[a.id_str()].append(b.id_str())
                links_down[b.id_str()].append(a.id_str())
    orbits = [_record_json(reg, r, links_up[r.id_str()], links_down[r.id_str()]) for r in vrecs]
    orbits.extend(
        {
            "id": r.id_str(),
            "simplex": r.simplex.id_str(),
            "ball": r.ball.to_json(reg.cfg),
            "owner": reg.edge_owner[r.id_str()].id_str(),
        }
        for r in reg.all_edge_records()
    )
    return {
        "params": {"p": reg.p, "k": reg.k, "n": reg.n, "N": reg.cfg.N},
        "vertices": [v.id_str() for v in reg.vertices()],
        "edges": [e.id_str() for e in reg.edges()],
        "orbits": orbits,
    }


def reference_matrix_structure() -> dict:
    with resources.files("btcomplex.data").joinpath("boundary_matrix_p2_k1_n1.json").open() as fh:
        return json.load(fh)


def compare_to_reference(cfg: PadicConfig) -> dict:
    """Structural comparison of the assembled 6x6 block layout at p=2, k=1, n=1."""
    golden = reference_matrix_structure()
    reg = build_registry(cfg, 1, 1)
    mat = assemble_dbar1(reg, d=1)
    got = {(b["row"], b["col"], b["kind"], b["sign"]) for b in mat.structure()}
    want = {(b["row"], b["col"], b["kind"], b["sign"]) for b in golden["blocks"]}
    return {
        "size": {"expected": golden["size"], "actual": mat.size},
        "missing": sorted(map(list, want - got)),
        "unexpected": sorted(map(list, got - want)),
        "match": mat.size == golden["size"] and got == want,
        "order": [r.id_str() for r in mat.order],
    }


def _emit(cfg_run: RunConfig, text: str):
    if cfg_run.out:
        with open(cfg_run.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, default=str)


def run(rc: RunConfig) -> int:
    cfg = rc.padic()
    if rc.command == "tree":
        if rc.format == "json":
            from .tree import edges_upto, vertices_upto

            _emit(rc, _dump({
                "vertices": [v.to_json() for v in vertices_upto(rc.p, rc.n)],
                "edges": [e.id_str() for e in edges_upto(rc.p, rc.n)],
            }))
        else:
            _emit(rc, dot_tree(rc.p, rc.n))
        return 0

    if rc.command == "orbits":
        _emit(rc, _dump(registry_json(build_registry(cfg, rc.n, rc.k))))
        return 0

    if rc.command == "minimal":
        reg = build_registry(cfg, rc.n, rc.k)
        mins = minimal_orbits(reg)
        ok = check_partition(cfg, [r.ball for r in mins], level=rc.k + rc.n + 1)
        _emit(rc, _dump({
            "params": {"p": rc.p, "k": rc.k, "n": rc.n},
            "minimal": [{"id": r.id_str(), "ball": r.ball.to_json(cfg)} for r in mins],
            "partition": ok,
        }))
        return 0 if ok else 1

    if rc.command == "counts":
        report = verify_counts(build_registry(cfg, rc.n, rc.k))
        _emit(rc, _dump(report))
        return 0 if report["pass"] else 1

    if rc.command == "matrix":
        mat = assemble_dbar1(build_registry(cfg, rc.n, rc.k), rc.d)
        _emit(rc, _dump(mat.to_json()))
        return 0

    if rc.command == "verify":
        reg = build_registry(cfg, rc.n, rc.k)
        report = verify_exactness(reg, rc.d, seed=rc.seed)
        report["counts"] = verify_counts(reg)
        report["minimal_partition"] = check_partition(
            cfg, [r.ball for r in minimal_orbits(reg)], level=rc.k + rc.n + 1
        )
        _emit(rc, _dump(report))
        ok = report["verdict"] == "exact" and report["counts"]["pass"] and report["minimal_partition"]
        return 0 if ok else 1

    if rc.command == "example":
        report = compare_to_reference(PadicConfig(2, RunConfig.auto_precision(2, 1, 1, rc.d)))
        _emit(rc, _dump(report))
        return 0 if report["match"] else 1

    raise AssertionError(f"unhandled command {rc.command}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="btcomplex",
        description="Exact congruence-orbit and chain-complex certificates on the GL2 tree.",
    )
    ap.add_argument("command", choices=["tree", "orbits", "minimal", "counts", "matrix", "verify", "example"])
    ap.add_argument("--p", type=int, default=3, help="prime (default 3)")
    ap.add_argument("--k", type=int, default=1, help="congruence level (default 1)")
    ap.add_argument("--n", type=int, default=1, help="tree truncation depth (default 1)")
    ap.add_argument("--d", type=int, default=1, help="polynomial truncation degree (default 1)")
    ap.add_argument("--prec", default="auto", help="stored p-adic digits; 'auto' picks k+2n+d+8")
    ap.add_argument("--seed", type=int, default=0, help="seed for all sampled checks")
    ap.add_argument("--out", default=None, help="output path (default stdout)")
    ap.add_argument("--format", choices=["json", "dot"], default=None,
                    help="output format (tree defaults to dot, everything else json)")
    return ap


def parse_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.p < 2 or ns.k < 1 or ns.n < 0 or ns.d < 0:
        raise SystemExit(2)
    prec = RunConfig.auto_precision(ns.p, ns.k, ns.n, ns.d) if ns.prec == "auto" else int(ns.prec)
    if prec < ns.k + ns.n + ns.d + 4:
        print(f"precision {prec} below the floor k+n+d+4", file=sys.stderr)
        raise SystemExit(2)
    fmt = ns.format or ("dot" if ns.command == "tree" else "json")
    if fmt == "dot" and ns.command != "tree":
        print("dot output is only available for the tree command", file=sys.stderr)
        raise SystemExit(2)
    return RunConfig(ns.p, ns.k, ns.n, ns.d, prec, ns.seed, ns.command, ns.out, fmt)


def main(argv=None) -> int:
    try:
        rc = parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return run(rc)
    except (AssertionError, ValueError, ArithmeticError) as e:
        print(f"verification error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: gen, partition, bench, dilation, render.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 every bench
row failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from amrpart.errors import AmrPartError, InvalidArgumentError, NotFoundError, ValidationError
from amrpart.partition.common import PartitionAssignment

log = logging.getLogger("amrpart")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_ALL_FAILED = 0, 1, 2, 3

BENCH_COLUMNS = (
    "method", "curve", "n", "seed", "epsilon", "edge_cut", "connectivity_cut",
    "max_ghost_weight", "wall_time_ms", "status",
)
DILATION_COLUMNS = ("curve", "p", "order", "wl_p", "cube_root", "table1_reference", "deviation")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# shared helpers


def _mesh_from_source(preset: str | None, seed: int, path: str | None):
    from amrpart.grid.io import load_mesh
    from amrpart.grid.synthetic import generate_synthetic, preset_config

    if path:
        if not Path(path).exists():
            raise ValidationError(f"mesh file {path} does not exist")
        return load_mesh(path)
    return generate_synthetic(preset_config(preset or "s-like"), seed)


def write_assignment(mesh, assignment: PartitionAssignment, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["cell_id", "part"])
    for cell_id, part in zip(np.asarray(mesh.ids).tolist(), assignment.part_of.tolist()):
        writer.writerow([cell_id, part])


def read_assignment(mesh, path) -> PartitionAssignment:
    """Read ``cell_id,part`` rows; the part count is one more than the largest part."""
    part_of = np.full(len(mesh), -1, dtype=np.int64)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["cell_id", "part"]:
            raise ValidationError(f"{path}: expected header cell_id,part")
        for lineno, row in enumerate(reader, start=2):
            try:
                cell_id, part = int(row[0]), int(row[1])
            except (ValueError, IndexError) as exc:
                raise ValidationError(f"{path} line {lineno}: {exc}") from None
            try:
                part_of[mesh.index_of(cell_id)] = part
            except NotFoundError:
                raise ValidationError(f"{path} line {lineno}: unknown cell {cell_id}") from None
    if np.any(part_of < 0):
        raise ValidationError(f"{path}: assignment does not cover every cell")
    return PartitionAssignment(int(part_of.max()) + 1, part_of)


def _params(args):
    from amrpart.partition.common import PartitionerParams
    from amrpart.sfc.codec import AxisPermutation

    return PartitionerParams(
        order=args.curve_order,
        axes=AxisPermutation.parse(args.axes) if args.axes else AxisPermutation(),
        imbalance_tol=args.tol,
        rectilinear=args.rectilinear,
        seed=args.seed,
    )


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args) -> int:
    from amrpart.grid.io import save_mesh
    from amrpart.grid.synthetic import generate_synthetic, level_shares, preset_config

    mesh = generate_synthetic(preset_config(args.preset), args.seed)
    save_mesh(mesh, args.output)
    shares = " ".join(f"L{lvl}={pct:.1f}%" for lvl, pct in enumerate(level_shares(mesh)))
    print(f"{len(mesh)} cells written to {args.output} ({shares})", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# partition


def cmd_partition(args) -> int:
    from amrpart.grid.io import load_mesh
    from amrpart.partition import partition_mesh

    mesh = load_mesh(args.mesh)
    assignment = partition_mesh(mesh, args.method, args.parts, _params(args))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_assignment(mesh, assignment, fh)
    else:
        write_assignment(mesh, assignment, sys.stdout)
    if args.report:
        from amrpart.grid.graphs import build_hypergraph
        from amrpart.metrics import full_report

        report = full_report(mesh, build_hypergraph(mesh), assignment)
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench


@dataclass
class ExperimentConfig:
    """One bench matrix: mesh source, methods x curves x part counts x seeds."""

    methods: list[str]
    n_parts: list[int]
    curves: list[str] = field(default_factory=lambda: ["beta"])
    seeds: list[int] = field(default_factory=lambda: [0])
    preset: str | None = "s-like"
    mesh_seed: int = 0
    mesh_file: str | None = None
    output_dir: str = "bench-out"
    render_axis: int | None = 2
    render_index: int | None = None

    def __post_init__(self):
        if not self.methods:
            raise ValidationError("config needs at least one method")
        if not self.n_parts:
            raise ValidationError("config needs at least one part count")
        if self.mesh_file and not Path(self.mesh_file).exists():
            raise ValidationError(f"mesh file {self.mesh_file} does not exist")

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config fields: {', '.join(sorted(unknown))}")
        return cls(**data)


def bench_runs(config: ExperimentConfig) -> list[tuple[str, str, int, int]]:
    """Expanded (method, curve, n, seed) rows in output order."""
    from amrpart.partition import parse_method

    runs = set()
    for method in config.methods:
        name, curve = parse_method(method)
        if name == "hsfc" and ":" not in method:
            curves = config.curves
        elif name == "hsfc":
            curves = [curve]
        elif name == "morton":
            curves = ["morton"]
        else:
            curves = [""]
        for c in curves:
            for n in config.n_parts:
                for seed in config.seeds:
                    runs.add((f"hsfc:{c}" if name == "hsfc" else name, c, int(n), int(seed)))
    return sorted(runs)


def _fmt(value: float) -> str:
    return repr(float(value))


def run_bench(config: ExperimentConfig) -> tuple[list[dict], Path]:
    from amrpart.grid.graphs import build_graph, build_hypergraph
    from amrpart.metrics import full_report
    from amrpart.partition import partition_mesh
    from amrpart.partition.common import PartitionerParams
    from amrpart.render import render_slice

    mesh = _mesh_from_source(config.preset, config.mesh_seed, config.mesh_file)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    runs = bench_runs(config)
    hypergraph = build_hypergraph(mesh)
    graph = build_graph(mesh) if any(r[0] == "graph" for r in runs) else None
    rows = []
    for method, curve, n, seed in runs:
        row = {"method": method, "curve": curve, "n": n, "seed": seed}
        start = time.perf_counter()
        try:
            params = PartitionerParams(seed=seed)
            assignment = partition_mesh(mesh, method, n, params, hypergraph=hypergraph, graph=graph)
            elapsed = (time.perf_counter() - start) * 1000.0
            report = full_report(mesh, hypergraph, assignment, graph=graph)
            row.update(
                epsilon=_fmt(report.epsilon),
                edge_cut=_fmt(report.edge_cut),
                connectivity_cut=_fmt(report.connectivity_cut),
                max_ghost_weight=_fmt(report.max_ghost_weight),
                wall_time_ms=f"{elapsed:.1f}",
                status="ok",
            )
            if config.render_axis is not None:
                axis = config.render_axis
                extent = mesh.base_dims[axis] << mesh.max_level
                index = extent // 2 if config.render_index is None else config.render_index
                tag = method.replace(":", "-")
                render_slice(mesh, assignment, axis, index, out / f"slice_{tag}_n{n}_s{seed}.ppm")
        except AmrPartError as exc:
            log.warning("bench row %s/%s n=%d seed=%d failed: %s", method, curve, n, seed, exc)
            row.update(epsilon="", edge_cut="", connectivity_cut="", max_ghost_weight="",
                       wall_time_ms="", status=f"failed: {exc}")
        rows.append(row)
    path = out / "bench.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return rows, path


def cmd_bench(args) -> int:
    if args.config:
        config = ExperimentConfig.from_file(args.config)
    else:
        if not args.methods or not args.parts:
            raise UsageError("bench needs --config or both --methods and --parts")
        config = ExperimentConfig(
            methods=args.methods, n_parts=args.parts, curves=args.curves or ["beta"],
            seeds=args.seeds or [0], preset=args.preset, mesh_seed=args.mesh_seed,
            mesh_file=args.mesh, output_dir=args.output_dir,
        )
    if args.output_dir and args.config:
        config = replace(config, output_dir=args.output_dir)
    rows, path = run_bench(config)
    print(f"{len(rows)} rows written to {path}", file=sys.stderr)
    if rows and all(r["status"] != "ok" for r in rows):
        return EXIT_ALL_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# dilation


def dilation_rows(curves, order: int, ps) -> list[dict]:
    from amrpart.locality import NAMED_CURVES, P_VALUES, TABLE1, dilation_all_norms, normalize_p
    from amrpart.sfc.catalogue import curve_table

    names = list(NAMED_CURVES) if curves == ["all"] else curves
    keys = list(P_VALUES) if ps == ["all"] else [normalize_p(p) for p in ps]
    rows = []
    for name in names:
        table = curve_table(name)
        values = dilation_all_norms(table, order)
        for p in keys:
            ref = TABLE1.get(table.name, (None, None, None))[P_VALUES.index(p)]
            cube_root = float(np.cbrt(values[p]))
            rows.append({
                "curve": table.name, "p": p, "order": order, "wl_p": _fmt(values[p]),
                "cube_root": _fmt(cube_root),
                "table1_reference": "" if ref is None else ref,
                "deviation": "" if ref is None else _fmt(cube_root / ref - 1.0),
            })
    return rows


def cmd_dilation(args) -> int:
    rows = dilation_rows([args.curve], args.order, [args.p])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=DILATION_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.output:
        Path(args.output).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# render


def cmd_render(args) -> int:
    from amrpart.grid.io import load_mesh
    from amrpart.render import render_slice

    mesh = load_mesh(args.mesh)
    assignment = read_assignment(mesh, args.assignment)
    render_slice(mesh, assignment, args.axis, args.index, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="amrpart", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a synthetic mesh")
    gen.add_argument("--preset", default="s-like", help="s-like or trivial")
    gen.add_argument("--seed", type=int, default=0, help="RNG seed of the weight field")
    gen.add_argument("-o", "--output", required=True, help="mesh file (JSON lines)")
    gen.set_defaults(func=cmd_gen)

    part = sub.add_parser("partition", help="partition a mesh file")
    part.add_argument("mesh", help="mesh file written by gen")
    part.add_argument("--method", default="hsfc:beta",
                      help="greedy, lpt, rcb, rib, hsfc:<curve>, morton, graph or hypergraph")
    part.add_argument("--parts", type=int, required=True, help="number of parts")
    part.add_argument("--seed", type=int, default=0, help="seed for randomized methods")
    part.add_argument("--tol", type=float, default=0.02, help="imbalance tolerance")
    part.add_argument("--curve-order", type=int, default=None,
                      help="curve order (default: just fine enough for the mesh)")
    part.add_argument("--axes", default=None, help='axis permutation such as "zyx" or "-z+y+x"')
    part.add_argument("--rectilinear", action="store_true",
                      help="RCB: only cut between distinct cell-center planes")
    part.add_argument("-o", "--output", help="assignment CSV (default: stdout)")
    part.add_argument("--report", help="write the metrics report (JSON) here")
    part.set_defaults(func=cmd_partition)

    bench = sub.add_parser("bench", help="run a method x curve x parts x seed matrix")
    bench.add_argument("--config", help="JSON experiment config")
    bench.add_argument("--methods", nargs="+", help="methods to run")
    bench.add_argument("--curves", nargs="+", help="curves for plain hsfc (default: beta)")
    bench.add_argument("--parts", nargs="+", type=int, help="part counts")
    bench.add_argument("--seeds", nargs="+", type=int, help="partitioner seeds")
    bench.add_argument("--preset", default="s-like", help="synthetic mesh preset")
    bench.add_argument("--mesh-seed", type=int, default=0, help="seed of the preset mesh")
    bench.add_argument("--mesh", help="mesh file instead of a preset")
    bench.add_argument("--output-dir", default=None, help="where bench.csv and slices go (default: bench-out)")
    bench.set_defaults(func=cmd_bench)

    dil = sub.add_parser("dilation", help="discrete L_p dilation of catalogue curves")
    dil.add_argument("--curve", default="all", help="catalogue curve or all")
    dil.add_argument("--order", type=int, default=4, help="grid order, 1 to 5")
    dil.add_argument("--p", default="all", help="1, 2, inf or all")
    dil.add_argument("-o", "--output", help="CSV file (default: stdout)")
    dil.set_defaults(func=cmd_dilation)

    ren = sub.add_parser("render", help="render a slice of a partition as a P6 image")
    ren.add_argument("mesh", help="mesh file")
    ren.add_argument("assignment", help="assignment CSV from partition")
    ren.add_argument("--axis", type=int, default=2, help="axis normal to the slice (0, 1 or 2)")
    ren.add_argument("--index", type=int, required=True, help="slice index in finest-level units")
    ren.add_argument("-o", "--output", required=True, help="P6 image file")
    ren.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"amrpart: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "bench" and args.output_dir is None and not args.config:
        args.output_dir = "bench-out"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"amrpart: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"amrpart: validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (InvalidArgumentError, NotFoundError) as exc:
        print(f"amrpart: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"amrpart: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Three subcommands: `evaluate` runs the full pipeline (load -> standardize ->
cluster -> cut -> indices -> similarity -> protocol scores) and writes the
report files, `plot` emits the data and charts behind the three report
figures, and `synth` writes a labeled Gaussian-blob CSV for experiments.

Outputs are deterministic: fixed row ordering, shortest round-trip float
formatting, atomic writes, and chart renderers that embed no timestamps.
Exit codes: 0 ok, 2 configuration error, 3 data error, 4 degenerate
evaluation; failures print one `cvibench: <kind>: <reason>` line to stderr.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import figures, svgchart
from .data import euclidean_distances, generate_blobs, load_csv, standardize
from .errors import ConfigError, DataError, DegenerateError
from .evaluate import PROTOCOLS, EvaluationReport, evaluate_suite, vendramin_score
from .hierclust import cut_range, upgma
from .internal_cvi import CVI_SPECS, DEFAULT_CVI_ORDER, resolve_cvi_name

PLOT_KINDS = ("ari_vs_k", "cvi_vs_k", "correlation_vs_kmax")
FORMATS = ("csv", "json", "svg", "png")


@dataclass
class RunConfig:
    input: str = ""
    label_col: str = "0"
    has_header: bool = True
    standardize: bool = True
    k_min: int = 2
    k_max: int = 15
    cvis: list = field(default_factory=lambda: list(DEFAULT_CVI_ORDER))
    protocols: list = field(default_factory=lambda: list(PROTOCOLS))
    correlation: str = "pearson"
    output_dir: str = "out"
    formats: list = field(default_factory=lambda: list(FORMATS))
    seed: int = 0
    expect_checksum: str = ""
    dump_dendrogram: bool = False
    sweep_min: int = 10
    sweep_max: int = 100


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvibench",
        description="Evaluate internal cluster validity indices against a labeled dataset.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--input", required=True, help="labeled CSV dataset")
        p.add_argument("--label-col", default="0",
                       help="class column, by header name or 0-based index (default 0)")
        p.add_argument("--no-header", action="store_true", help="the file has no header row")
        p.add_argument("--no-standardize", action="store_true",
                       help="cluster on raw features instead of z-scores")
        p.add_argument("--kmin", type=int, default=2, help="smallest cluster count (default 2)")
        p.add_argument("--kmax", type=int, default=15, help="largest cluster count (default 15)")
        p.add_argument("--cvis", default="all",
                       help="comma-separated index names, or 'all' "
                            f"(known: {', '.join(CVI_SPECS)})")
        p.add_argument("--protocols", default="all",
                       help="comma-separated protocol names, 'all', or 'none' "
                            f"(known: {', '.join(PROTOCOLS)})")
        p.add_argument("--correlation", choices=("pearson", "spearman"), default="pearson")
        p.add_argument("--output-dir", default="out")
        p.add_argument("--formats", default="csv,json,svg,png",
                       help="comma-separated subset of csv,json,svg,png")
        p.add_argument("--expect-checksum", default="",
                       help="require this sha256 of the input file")

    p_eval = sub.add_parser("evaluate", help="run the pipeline and write report files")
    add_common(p_eval)
    p_eval.add_argument("--dump-dendrogram", action="store_true",
                        help="also write the merge tree as dendrogram.json")

    p_plot = sub.add_parser("plot", help="write figure data (CSV) and charts (SVG, PNG)")
    p_plot.add_argument("kind", choices=PLOT_KINDS)
    add_common(p_plot)
    p_plot.add_argument("--sweep-min", type=int, default=10,
                        help="first k_max of the correlation sweep (default 10)")
    p_plot.add_argument("--sweep-max", type=int, default=100,
                        help="last k_max of the correlation sweep (default 100)")

    p_synth = sub.add_parser("synth", help="write a labeled Gaussian-blob CSV")
    p_synth.add_argument("--blobs", required=True,
                         help="semicolon-separated blobs, each center:sd:count "
                              "with a comma-separated center, e.g. '0,0:0.5:40;6,6:0.5:40'")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--output", required=True, help="CSV file to write")
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(
        input=args.input,
        label_col=args.label_col,
        has_header=not args.no_header,
        standardize=not args.no_standardize,
        k_min=args.kmin,
        k_max=args.kmax,
        cvis=_parse_cvis(args.cvis),
        protocols=_parse_protocols(args.protocols),
        correlation=args.correlation,
        output_dir=args.output_dir,
        formats=_parse_formats(args.formats),
        expect_checksum=args.expect_checksum,
        dump_dendrogram=getattr(args, "dump_dendrogram", False),
        sweep_min=getattr(args, "sweep_min", 10),
        sweep_max=getattr(args, "sweep_max", 100),
    )
    if not cfg.cvis:
        raise ConfigError("at least one index is required")
    return cfg


def _parse_cvis(text: str) -> list:
    if text.strip().lower() == "all":
        return list(DEFAULT_CVI_ORDER)
    try:
        return [resolve_cvi_name(part) for part in text.split(",") if part.strip()]
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None


def _parse_protocols(text: str) -> list:
    key = text.strip().lower()
    if key == "all":
        return list(PROTOCOLS)
    if key == "none":
        return []
    out = []
    for part in text.split(","):
        name = part.strip().lower()
        if not name:
            continue
        if name not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {part.strip()!r}; known: {', '.join(PROTOCOLS)}")
        out.append(name)
    return out


def _parse_formats(text: str) -> list:
    out = []
    for part in text.split(","):
        name = part.strip().lower()
        if not name:
            continue
        if name not in FORMATS:
            raise ConfigError(f"unknown format {part.strip()!r}; known: {', '.join(FORMATS)}")
        if name not in out:
            out.append(name)
    return out


def _check_k_range(cfg: RunConfig, n: int, k_needed: int) -> None:
    if not (2 <= cfg.k_min <= cfg.k_max):
        raise ConfigError(f"invalid k range [{cfg.k_min}, {cfg.k_max}]")
    if k_needed > n:
        raise ConfigError(f"k range exceeds n: need k up to {k_needed} but the dataset has {n} rows")


def cmd_evaluate(cfg: RunConfig) -> int:
    if cfg.expect_checksum:
        _verify_checksum(cfg)
    dataset = load_csv(cfg.input, cfg.label_col, cfg.has_header)
    _check_k_range(cfg, dataset.n, cfg.k_max)
    matrix = standardize(dataset.features) if cfg.standardize else dataset.features
    distances = euclidean_distances(matrix)
    dendrogram = upgma(distances)
    cuts = cut_range(dendrogram, cfg.k_min, cfg.k_max)
    report = evaluate_suite(
        dataset,
        cuts,
        cvis=cfg.cvis,
        protocols=cfg.protocols,
        correlation=cfg.correlation,
        matrix=matrix,
        distances=distances,
        dataset_id=Path(cfg.input).name,
    )

    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.dump_dendrogram:
        _write_text(out / "dendrogram.json", _json_text(dendrogram.to_dict()))

    if not cfg.protocols:
        _write_text(out / "partitions.csv", _partitions_csv(report, cfg.cvis))
        return 0

    if "csv" in cfg.formats:
        _write_text(out / "partitions.csv", _partitions_csv(report, cfg.cvis))
        _write_text(out / "summary.csv", _summary_csv(report, cfg.cvis, cfg.protocols))
    if "json" in cfg.formats:
        _write_text(out / "report.json", _json_text(report.as_dict()))
    if "png" in cfg.formats:
        ks = [row.k for row in report.rows]
        _write_bytes(out / "ari_vs_k.png",
                     figures.render_ari_curve(ks, [row.ari for row in report.rows]))
        values = {name: [row.values[name] for row in report.rows] for name in cfg.cvis}
        best = {
            name: (s.best_k, s.best_value) if s.best_index is not None else None
            for name, s in report.per_cvi.items()
        }
        _write_bytes(out / "cvi_vs_k.png", figures.render_cvi_panels(ks, values, best))

    for name, summary in report.per_cvi.items():
        for proto, reason in summary.protocol_errors.items():
            print(f"cvibench: degenerate-error: {proto} uncomputable for {name}: {reason}",
                  file=sys.stderr)
            return 4
    return 0


def cmd_plot(cfg: RunConfig, kind: str) -> int:
    if cfg.expect_checksum:
        _verify_checksum(cfg)
    dataset = load_csv(cfg.input, cfg.label_col, cfg.has_header)
    k_top = cfg.sweep_max if kind == "correlation_vs_kmax" else cfg.k_max
    _check_k_range(cfg, dataset.n, k_top)
    if kind == "correlation_vs_kmax" and not (cfg.k_min <= cfg.sweep_min <= cfg.sweep_max):
        raise ConfigError(
            f"invalid sweep [{cfg.sweep_min}, {cfg.sweep_max}] for k_min {cfg.k_min}"
        )
    matrix = standardize(dataset.features) if cfg.standardize else dataset.features
    distances = euclidean_distances(matrix)
    dendrogram = upgma(distances)
    cuts = cut_range(dendrogram, cfg.k_min, k_top)
    report = evaluate_suite(
        dataset, cuts, cvis=cfg.cvis, protocols=[], correlation=cfg.correlation,
        matrix=matrix, distances=distances, dataset_id=Path(cfg.input).name,
    )
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    ks = [row.k for row in report.rows]
    aris = [row.ari for row in report.rows]
    if kind == "ari_vs_k":
        _emit_ari_plot(cfg, out, ks, aris)
    elif kind == "cvi_vs_k":
        _emit_cvi_plot(cfg, out, report, ks)
    else:
        _emit_sweep_plot(cfg, out, report, ks, aris)
    return 0


def _emit_ari_plot(cfg, out, ks, aris) -> None:
    if "csv" in cfg.formats:
        _write_text(out / "ari_vs_k.csv", _table_csv(["k", "adjusted_rand"], zip(ks, aris)))
    best = max(range(len(ks)), key=lambda i: aris[i])
    if "svg" in cfg.formats:
        panel = svgchart.Panel(
            series=[svgchart.Series("", ks, aris)],
            title="similarity to reference classification",
            x_label="number of clusters",
            y_label="adjusted Rand index",
            markers=[(ks[best], aris[best])],
        )
        _write_text(out / "ari_vs_k.svg", svgchart.render_chart(panel))
    if "png" in cfg.formats:
        _write_bytes(out / "ari_vs_k.png", figures.render_ari_curve(ks, aris))


def _emit_cvi_plot(cfg, out, report: EvaluationReport, ks) -> None:
    values = {name: [row.values[name] for row in report.rows] for name in cfg.cvis}
    best = {}
    for name in cfg.cvis:
        summary = report.per_cvi[name]
        best[name] = None if summary.best_index is None else (summary.best_k, summary.best_value)
    if "csv" in cfg.formats:
        rows = (
            [ks[i]] + [values[name][i] for name in cfg.cvis]
            for i in range(len(ks))
        )
        _write_text(out / "cvi_vs_k.csv", _table_csv(["k"] + list(cfg.cvis), rows))
    if "svg" in cfg.formats:
        panels = [
            svgchart.Panel(
                series=[svgchart.Series("", ks, values[name])],
                title=name,
                x_label="number of clusters",
                markers=[] if best[name] is None else [best[name]],
            )
            for name in cfg.cvis
        ]
        _write_text(out / "cvi_vs_k.svg", svgchart.render_grid(panels))
    if "png" in cfg.formats:
        _write_bytes(out / "cvi_vs_k.png", figures.render_cvi_panels(ks, values, best))


def _emit_sweep_plot(cfg, out, report: EvaluationReport, ks, aris) -> None:
    sweep = list(range(cfg.sweep_min, cfg.sweep_max + 1))
    corr: dict[str, list] = {name: [] for name in cfg.cvis}
    for name in cfg.cvis:
        column = [row.values[name] for row in report.rows]
        direction = CVI_SPECS[name].direction
        for top in sweep:
            pairs = [
                (column[i], aris[i])
                for i in range(len(ks))
                if ks[i] <= top and column[i] is not None
            ]
            try:
                score = vendramin_score(
                    [v for v, _ in pairs], [s for _, s in pairs],
                    method=cfg.correlation, direction=direction,
                )
                corr[name].append(score.value)
            except (DegenerateError, ValueError):
                corr[name].append(None)
    if "csv" in cfg.formats:
        rows = ([sweep[i]] + [corr[name][i] for name in cfg.cvis] for i in range(len(sweep)))
        _write_text(out / "correlation_vs_kmax.csv", _table_csv(["kmax"] + list(cfg.cvis), rows))
    if "svg" in cfg.formats:
        panel = svgchart.Panel(
            series=[svgchart.Series(name, sweep, corr[name]) for name in cfg.cvis],
            title=f"{cfg.correlation} correlation with adjusted Rand index",
            x_label="largest cluster count in the evaluation set",
            y_label="correlation",
        )
        _write_text(out / "correlation_vs_kmax.svg", svgchart.render_chart(panel, width=760, height=480))
    if "png" in cfg.formats:
        _write_bytes(out / "correlation_vs_kmax.png", figures.render_correlation_sweep(sweep, corr))


def cmd_synth(args) -> int:
    spec = _parse_blob_spec(args.blobs)
    dataset = generate_blobs(spec, args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    p = dataset.features.p
    writer.writerow([f"f{i + 1}" for i in range(p)] + ["class"])
    for row, label in zip(dataset.features.values, dataset.labels.assign):
        writer.writerow([_cell(float(v)) for v in row] + [int(label)])
    _write_text(Path(args.output), buf.getvalue())
    return 0


def _parse_blob_spec(text: str) -> list:
    spec = []
    for i, part in enumerate(filter(None, (s.strip() for s in text.split(";"))), start=1):
        fields = part.split(":")
        if len(fields) != 3:
            raise ConfigError(f"blob {i}: expected center:sd:count, got {part!r}")
        try:
            center = [float(x) for x in fields[0].split(",")]
            sd = float(fields[1])
            count = int(fields[2])
        except ValueError:
            raise ConfigError(f"blob {i}: cannot parse {part!r}") from None
        spec.append((center, sd, count))
    if not spec:
        raise ConfigError("blob spec is empty")
    return spec


def _verify_checksum(cfg: RunConfig) -> None:
    try:
        digest = hashlib.sha256(Path(cfg.input).read_bytes()).hexdigest()
    except OSError as exc:
        raise DataError(f"cannot read {cfg.input}: {exc}") from exc
    if digest != cfg.expect_checksum.lower():
        raise DataError(f"checksum mismatch for {cfg.input}: sha256 is {digest}")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        # plain-float repr is the shortest round-trip form; the cast also
        # keeps numpy scalar reprs ("np.float64(...)") out of the files
        return repr(float(v))
    return str(v)


def _table_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _partitions_csv(report: EvaluationReport, cvis) -> str:
    rows = (
        [row.k] + [row.values[name] for name in cvis] + [row.ari]
        for row in report.rows
    )
    return _table_csv(["k"] + list(cvis) + ["adjusted_rand"], rows)


def _summary_csv(report: EvaluationReport, cvis, protocols) -> str:
    ordered_protocols = [p for p in PROTOCOLS if p in protocols]
    header = ["cvi", "best_value", "best_k", "ari_at_best"] + ordered_protocols
    rows = []
    for name in cvis:
        s = report.per_cvi[name]
        row = [name, s.best_value, s.best_k, s.ari_at_best]
        for proto in ordered_protocols:
            score = s.protocols.get(proto)
            if score is None:
                row.append(None)
            elif proto in ("milligan_cooper", "gurrutxaga"):
                row.append(int(score.value))
            else:
                row.append(score.value)
        rows.append(row)
    return _table_csv(header, rows)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _write_text(path: Path, text: str) -> None:
    _write_bytes(path, text.encode("utf-8"))


def _write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            return cmd_synth(args)
        cfg = config_from_args(args)
        if args.command == "evaluate":
            return cmd_evaluate(cfg)
        return cmd_plot(cfg, args.kind)
    except ConfigError as exc:
        print(f"cvibench: config-error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"cvibench: data-error: {exc}", file=sys.stderr)
        return 3
    except DegenerateError as exc:
        print(f"cvibench: degenerate-error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

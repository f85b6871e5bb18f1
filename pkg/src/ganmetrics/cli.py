"""Command-line surface: score, bias, synth, compare.

Exit codes: 0 success, 1 usage error, 2 input/format error, 3 numerical
failure, 4 registry discrepancy.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bias import SyntheticGaussianSpec, fid_bias_curve
from .errors import ExitStatus, GanMetricsError
from .npyio import read_csv_features, read_npy, write_npy
from .protocol import (
    DEFAULT_SEEDS,
    PRESETS,
    ProtocolConfig,
    compare_reports,
    load_report,
    preset_config,
    run_protocol,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; the contract reserves 2 for
    # input/format errors and uses 1 for usage.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(int(ExitStatus.USAGE), f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="ganmetrics", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    score = sub.add_parser("score", help="run an evaluation protocol on feature files")
    score.add_argument("--metric", choices=["is", "fid", "kid"])
    score.add_argument("--fake", required=True, help="fake feature/logit file (.npy or .csv)")
    score.add_argument("--real", help="real feature file (required for fid/kid)")
    score.add_argument("--num-real", type=int, help="real sample count per seed")
    score.add_argument("--num-fake", type=int, help="fake sample count per seed")
    score.add_argument("--seeds", default=None, help="comma-separated seed list (default 0,1,2)")
    score.add_argument("--splits", type=int, help="split count for is/kid (default 10)")
    score.add_argument("--preset", choices=sorted(PRESETS), help="named protocol preset")
    score.add_argument("--feature-source", default="unspecified",
                       help="identifier of the feature extractor")
    score.add_argument("--out", help="write the report JSON here instead of stdout")
    score.add_argument("--no-timing", action="store_true",
                       help="write timing_ms as 0 for byte-stable reports")

    bias = sub.add_parser("bias", help="run the sample-size bias study on synthetic data")
    bias.add_argument("--dim", type=int, required=True)
    bias.add_argument("--sizes", required=True, help="comma-separated ascending sample sizes")
    bias.add_argument("--repeats", type=int, required=True)
    bias.add_argument("--seed", type=int, default=0)
    bias.add_argument("--true-fid-spec",
                      help="JSON file with real/fake mean and var (default: identical standard normals)")
    bias.add_argument("--out", help="write the bias report JSON here instead of stdout")
    bias.add_argument("--csv", help="also write the curve as CSV here")

    synth = sub.add_parser("synth", help="write a synthetic Gaussian feature file")
    synth.add_argument("--n", type=int, required=True)
    synth.add_argument("--dim", type=int, required=True)
    synth.add_argument("--mean", type=float, default=0.0)
    synth.add_argument("--var", type=float, default=1.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True)

    compare = sub.add_parser("compare", help="check whether two reports are comparable")
    compare.add_argument("report_a")
    compare.add_argument("report_b")
    return parser


def _read_matrix(path: str):
    if path.endswith(".csv"):
        return read_csv_features(path)
    return read_npy(path)


def _parse_seed_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"seeds must be comma-separated integers, got {text!r}") from None


def _parse_size_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise ValueError(f"sizes must be comma-separated integers, got {text!r}") from None


def _cmd_score(args) -> int:
    metric = args.metric or (PRESETS[args.preset]["metric"] if args.preset else None)
    if metric is None:
        raise ValueError("--metric is required when no --preset is given")
    if metric != "is" and args.real is None:
        raise ValueError(f"--real is required for {metric}")

    fake = _read_matrix(args.fake)
    real = _read_matrix(args.real) if metric != "is" else None

    overrides = {"metric": metric}
    if args.num_real is not None:
        overrides["n_real"] = args.num_real
    if args.num_fake is not None:
        overrides["n_fake"] = args.num_fake
    if args.splits is not None:
        overrides["splits"] = args.splits
    seeds = _parse_seed_list(args.seeds) if args.seeds else DEFAULT_SEEDS

    if args.preset:
        config = preset_config(args.preset, seeds=seeds,
                               feature_source=args.feature_source, **overrides)
    else:
        # Without explicit counts, score the full files.
        overrides.setdefault("n_fake", fake.shape[0])
        if metric != "is":
            overrides.setdefault("n_real", real.shape[0])
        config = ProtocolConfig(seeds=seeds, feature_source=args.feature_source,
                                **overrides)
    report = run_protocol(config, real, fake)
    text = report.to_json(include_timing=not args.no_timing)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"{config.metric}: {report.mean:.6g} ± {report.std:.6g}")
    return int(ExitStatus.OK)


def _load_bias_specs(args) -> tuple[SyntheticGaussianSpec, SyntheticGaussianSpec]:
    if args.true_fid_spec:
        with open(args.true_fid_spec, encoding="utf-8") as fh:
            data = json.load(fh)
        try:
            real = data["real"]
            fake = data["fake"]
            return (
                SyntheticGaussianSpec(n=2, d=args.dim, mean=real.get("mean", 0.0),
                                      diag_cov=real.get("var", 1.0), seed=args.seed),
                SyntheticGaussianSpec(n=2, d=args.dim, mean=fake.get("mean", 0.0),
                                      diag_cov=fake.get("var", 1.0), seed=args.seed),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(
                f"{args.true_fid_spec}: expected {{'real': {{'mean', 'var'}}, 'fake': ...}}: {exc}"
            ) from None
    spec = SyntheticGaussianSpec(n=2, d=args.dim, seed=args.seed)
    return spec, spec


def _cmd_bias(args) -> int:
    if args.repeats < 1:
        raise ValueError(f"--repeats must be positive, got {args.repeats}")
    if args.dim < 1:
        raise ValueError(f"--dim must be positive, got {args.dim}")
    sizes = _parse_size_list(args.sizes)
    real_spec, fake_spec = _load_bias_specs(args)
    report = fid_bias_curve(real_spec, fake_spec, sizes, repeats=args.repeats)
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
    else:
        sys.stdout.write(report.to_json())
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    print(f"true_fid: {report.true_fid:.6g}")
    return int(ExitStatus.OK)


def _cmd_synth(args) -> int:
    if args.var <= 0:
        raise ValueError(f"--var must be positive, got {args.var}")
    if args.n < 1 or args.dim < 1:
        raise ValueError("--n and --dim must be positive")
    from .bias import synth_features

    spec = SyntheticGaussianSpec(n=args.n, d=args.dim, mean=args.mean,
                                 diag_cov=args.var, seed=args.seed)
    write_npy(synth_features(spec), args.out, dtype="float64")
    print(f"wrote {args.n}x{args.dim} features to {args.out}")
    return int(ExitStatus.OK)


def _cmd_compare(args) -> int:
    verdict = compare_reports(load_report(args.report_a), load_report(args.report_b))
    print(str(verdict))
    return int(ExitStatus.OK)


_COMMANDS = {
    "score": _cmd_score,
    "bias": _cmd_bias,
    "synth": _cmd_synth,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except json.JSONDecodeError as exc:
        print(f"ganmetrics {args.command}: error: invalid JSON: {exc}", file=sys.stderr)
        return int(ExitStatus.INPUT)
    except ValueError as exc:
        print(f"ganmetrics {args.command}: error: {exc}", file=sys.stderr)
        return int(ExitStatus.USAGE)
    except OSError as exc:
        print(f"ganmetrics {args.command}: error: {exc}", file=sys.stderr)
        return int(ExitStatus.INPUT)
    except GanMetricsError as exc:
        print(f"ganmetrics {args.command}: error: {exc}", file=sys.stderr)
        return int(exc.exit_code)


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()

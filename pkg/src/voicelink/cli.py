"""Command-line front end: ``simulate``, ``compare`` and ``validate``.

Every flag can also be supplied through a line-oriented ``key = value``
config file (``--config``); explicit flags override file values.
"""

from __future__ import annotations

import argparse
import sys

from .fec import ConvCodeConfig, CyclicCodeConfig
from .interleave import InterleaverConfig
from .ofdm import OfdmParams
from .simrun import (
    REFERENCE_POINTS,
    SweepConfig,
    emit_plot,
    run_sweep,
    validate_oracles,
    write_csv,
    write_csv_groups,
)

_DEFAULTS = {
    "scheme": "uncoded",
    "channel": "awgn",
    "snr": "0:14:1",
    "seed": 1,
    "min_bits": 1_000_000,
    "wav": None,
    "rician_k": 1.0,
    "rows": 35,
    "cols": 1,
    "n_sub": 8,
    "cp": 1,
    "out_csv": None,
    "out_plot": None,
}

_CONVERTERS = {
    "scheme": str,
    "channel": str,
    "snr": str,
    "seed": int,
    "min_bits": int,
    "wav": str,
    "rician_k": float,
    "rows": int,
    "cols": int,
    "n_sub": int,
    "cp": int,
    "out_csv": str,
    "out_plot": str,
}


def parse_snr_spec(spec: str) -> tuple[float, ...]:
    """Parse ``value``, ``start:stop`` or ``start:stop:step`` (inclusive)."""
    fields = str(spec).split(":")
    if len(fields) == 1:
        return (float(fields[0]),)
    if len(fields) not in (2, 3):
        raise ValueError("snr spec must be 'x', 'start:stop' or 'start:stop:step'")
    start, stop = float(fields[0]), float(fields[1])
    step = float(fields[2]) if len(fields) == 3 else 1.0
    if step <= 0:
        raise ValueError("snr step must be positive")
    if stop < start:
        raise ValueError("snr stop must not precede start")
    count = int((stop - start) / step + 1e-9) + 1
    return tuple(start + i * step for i in range(count))


def load_config_file(path) -> dict[str, str]:
    """Read ``key = value`` lines; '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown key '{key}'")
            values[key] = value
    return values


def _resolve(args: argparse.Namespace) -> dict:
    file_values = load_config_file(args.config) if args.config else {}
    resolved = {}
    for key, default in _DEFAULTS.items():
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            resolved[key] = cli_value
        elif key in file_values:
            resolved[key] = _CONVERTERS[key](file_values[key])
        else:
            resolved[key] = default
    return resolved


def _sweep_config(opts: dict, scheme: str) -> SweepConfig:
    return SweepConfig(
        scheme=scheme,
        channel=opts["channel"],
        snr_points=parse_snr_spec(opts["snr"]),
        rician_k=opts["rician_k"],
        master_seed=opts["seed"],
        min_bits=opts["min_bits"],
        wav_path=opts["wav"],
        cyclic=CyclicCodeConfig(),
        conv=ConvCodeConfig(),
        interleaver=InterleaverConfig(rows=opts["rows"], cols=opts["cols"]),
        ofdm=OfdmParams(n_subcarriers=opts["n_sub"], cp_len=opts["cp"]),
    )


def _add_link_flags(parser: argparse.ArgumentParser, with_scheme: bool) -> None:
    if with_scheme:
        parser.add_argument("--scheme", choices=["uncoded", "cyclic", "conv"])
    parser.add_argument("--channel", choices=["awgn", "rayleigh", "rician"])
    parser.add_argument("--snr", help="sweep spec, e.g. 6 or 0:14:1")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--min-bits", type=int, dest="min_bits")
    parser.add_argument("--wav", help="source WAV file (mono 8-bit PCM)")
    parser.add_argument("--rician-k", type=float, dest="rician_k")
    parser.add_argument("--rows", type=int, help="interleaver rows")
    parser.add_argument("--cols", type=int, help="interleaver columns")
    parser.add_argument("--n-sub", type=int, dest="n_sub", help="OFDM subcarriers")
    parser.add_argument("--cp", type=int, help="cyclic prefix length")
    parser.add_argument("--config", help="key = value file mirroring the flags")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voicelink",
        description="BER simulation of an FEC-coded OFDM voice link",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="sweep one scheme over one channel")
    _add_link_flags(sim, with_scheme=True)
    sim.add_argument("--out-csv", dest="out_csv", required=True)
    sim.add_argument("--out-plot", dest="out_plot")

    cmp_ = sub.add_parser("compare", help="sweep all three schemes on one channel")
    _add_link_flags(cmp_, with_scheme=False)
    cmp_.add_argument("--out-csv", dest="out_csv")
    cmp_.add_argument("--out-plot", dest="out_plot", required=True)

    val = sub.add_parser("validate", help="check simulation against closed forms")
    val.add_argument("--seed", type=int)
    val.add_argument("--min-bits", type=int, dest="min_bits")
    val.add_argument("--config", help="key = value file mirroring the flags")
    return parser


def _cmd_simulate(args: argparse.Namespace) -> int:
    opts = _resolve(args)
    cfg = _sweep_config(opts, opts["scheme"])
    points = run_sweep(cfg)
    write_csv(points, cfg, opts["out_csv"])
    print(f"wrote {opts['out_csv']} ({len(points)} points)")
    if opts["out_plot"]:
        emit_plot(
            {cfg.scheme: points},
            opts["out_plot"],
            title=f"{cfg.scheme} over {cfg.channel}",
        )
        print(f"wrote {opts['out_plot']}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    opts = _resolve(args)
    groups = {}
    runs = []
    for scheme in ("uncoded", "cyclic", "conv"):
        cfg = _sweep_config(opts, scheme)
        points = run_sweep(cfg)
        groups[scheme] = points
        runs.append((cfg, points))
        top = points[-1]
        print(f"{scheme:8s} ber at {top.snr_db:g} dB: {top.ber:.3e}")
    channel = runs[0][0].channel
    emit_plot(
        groups,
        opts["out_plot"],
        title=f"coded vs uncoded over {channel}",
        annotations=REFERENCE_POINTS.get(channel, ()),
    )
    print(f"wrote {opts['out_plot']}")
    if opts["out_csv"]:
        write_csv_groups(runs, opts["out_csv"])
        print(f"wrote {opts['out_csv']}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    opts = _resolve(args)
    rows = validate_oracles(master_seed=opts["seed"], min_bits=opts["min_bits"])
    failed = 0
    for row in rows:
        verdict = "ok" if row["ok"] else "FAIL"
        print(
            f"{row['channel']:8s} Eb/N0 {row['eb_n0_db']:5.1f} dB  "
            f"ber {row['ber']:.6e}  expected {row['expected']:.6e}  "
            f"tolerance {3 * row['sigma']:.2e}  {verdict}"
        )
        failed += 0 if row["ok"] else 1
    if failed:
        print(f"{failed} oracle check(s) failed")
        return 1
    print("all oracle checks passed")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "compare": _cmd_compare,
        "validate": _cmd_validate,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 on success, 2 for usage or configuration problems (including
module-level value errors triggered by bad inputs), 1 for anything
unexpected. All CSV output is stable-ordered and headered so re-runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .codec import CodecConfig, decode_descriptor, encode_descriptor
from .duality import PdfGrid, design_quantizer_via_sampling, quantizer_to_csv
from .errors import DecodeError
from .multidim import (
    INTERVAL_INERTIA,
    bennett_mse_kd,
    gradient_field_from_csv,
    mse_lower_bound_kd,
    optimal_density_kd,
)
from .reconstruction import SamplerDescriptor, describe, reconstruct
from .sampling import (
    bennett_mse,
    empirical_mse,
    mse_sweep_to_csv,
    optimal_samples,
    panter_dite_mse,
)
from .segmentation import (
    DERIVATIVE_ENERGY_FLOOR,
    compressor,
    density_to_csv,
    optimal_density,
    segment_by_expander,
    segment_by_threshold,
    segmentation_to_csv,
    uniform_segmentation,
)
from .signals import generate, parse_signal_spec, signal_from_csv


def _load_signal(args):
    if getattr(args, "csv", None):
        return signal_from_csv(args.csv)
    if getattr(args, "signal", None):
        if not args.nu:
            raise ValueError("--nu is required with --signal")
        return generate(parse_signal_spec(args.signal), args.nu)
    raise ValueError("provide --signal or --csv")


def _segmentation(signal, n, method, eps):
    if method == "uniform":
        return uniform_segmentation(signal.n_grid, n), None
    from .signals import derivative

    d = derivative(signal)
    if method == "expander":
        return segment_by_expander(compressor(optimal_density(d, eps)), n), None
    result = segment_by_threshold(d, n)
    return result.segmentation, result.segment_mass


def _write_piecewise(pc, path):
    import csv as _csv

    with open(path, "w", newline="") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["left_index", "right_index", "sample"])
        b = pc.segmentation.boundaries
        for i, sample in enumerate(pc.samples):
            writer.writerow([int(b[i]), int(b[i + 1]), repr(float(sample))])


def _cmd_segment(args):
    if args.method == "uniform" and not (args.signal or args.csv):
        seg = uniform_segmentation(args.nu, args.n)
        segmentation_to_csv(seg, args.out)
        return 0
    signal = _load_signal(args)
    seg, _ = _segmentation(signal, args.n, args.method, args.epsilon)
    segmentation_to_csv(seg, args.out)
    if args.density_out:
        from .signals import derivative

        density_to_csv(optimal_density(derivative(signal), args.epsilon), args.density_out)
    return 0


def _cmd_sample(args):
    signal = _load_signal(args)
    seg, _ = _segmentation(signal, args.n, args.method, args.epsilon)
    pc = optimal_samples(signal, seg)
    _write_piecewise(pc, args.out)
    print(f"mse={empirical_mse(signal, pc)!r}")
    return 0


def _cmd_reconstruct(args):
    if args.descriptor:
        desc = SamplerDescriptor.from_json(Path(args.descriptor).read_text())
    else:
        if args.n is None:
            raise ValueError("--n is required when reconstructing from a signal")
        desc = describe(_load_signal(args), args.n)
    if args.descriptor_out:
        Path(args.descriptor_out).write_text(desc.to_json())
    _write_piecewise(reconstruct(desc), args.out)
    return 0


def _codec_config(args) -> CodecConfig:
    return CodecConfig(
        count_bits=args.b_j,
        value_bits=args.b_ext,
        start_value_bits=args.b_val0,
        amp_min=args.phi_min,
        amp_max=args.phi_max,
    )


def _cmd_encode(args):
    signal = _load_signal(args)
    cfg = _codec_config(args)
    desc = describe(signal, args.n)
    stream = encode_descriptor(desc, cfg)
    Path(args.out).write_bytes(stream)
    decoded, _ = decode_descriptor(stream, cfg)
    mse = empirical_mse(signal, reconstruct(decoded))
    bits = len(stream) * 8
    print(f"bits={bits}")
    print(f"bits_per_input_sample={bits / signal.n_grid!r}")
    print(f"decode_mse={mse!r}")
    return 0


def _cmd_decode(args):
    stream = Path(args.stream).read_bytes()
    desc, _ = decode_descriptor(stream, _codec_config(args))
    if args.descriptor_out:
        Path(args.descriptor_out).write_text(desc.to_json())
    _write_piecewise(reconstruct(desc), args.out)
    return 0


def _parse_mu_grid(text):
    if text is None:
        return None
    if ":" in text:
        lo, hi, points = text.split(":")
        return np.logspace(np.log10(float(lo)), np.log10(float(hi)), int(points))
    return np.array([float(tok) for tok in text.split(",") if tok.strip()])


def _cmd_bench_sampling(args):
    signal = _load_signal(args)
    cfg = bench_mod.BenchConfig(depth=args.depth, mu_grid=_parse_mu_grid(args.mu_grid))
    rows = bench_mod.bench_sampling(signal, cfg)
    mse_sweep_to_csv(rows, args.out)
    if args.check_holder:
        _holder_check(signal, rows, args.check_holder, args.seed)
    return 0


def _holder_check(signal, rows, count, seed):
    """Seeded random density perturbations must never beat the optimum."""
    from .signals import derivative

    d = derivative(signal)
    n = max(row["n"] for row in rows)
    base = optimal_density(d)
    floor_mse = panter_dite_mse(d, n)
    rng = np.random.default_rng(seed)
    margin = np.inf
    for _ in range(count):
        perturbed = base * (1.0 + 0.5 * rng.uniform(-1.0, 1.0, base.size))
        perturbed /= perturbed.sum() / base.size
        margin = min(margin, bennett_mse(d, perturbed, n) - floor_mse)
    print(f"holder_min_margin={margin!r}")
    print(f"holder_ok={str(margin >= -1e-9).lower()}")


def _cmd_bench_codec(args):
    signal = _load_signal(args)
    cfg = bench_mod.BenchConfig(
        depth=args.depth,
        mu_grid=_parse_mu_grid(args.mu_grid),
        codec=_codec_config(args),
    )
    mse_sweep_to_csv(bench_mod.bench_codec(signal, cfg), args.out)
    if args.tree_sweep_out:
        from .bench import default_mu_grid
        from .tree import build_full_tree, rate_distortion_sweep

        grid = cfg.mu_grid
        if grid is None:
            grid = default_mu_grid(build_full_tree(signal, cfg.depth))
        mse_sweep_to_csv(
            rate_distortion_sweep(signal, cfg.depth, grid), args.tree_sweep_out
        )
    return 0


def _builtin_pdf(name: str, grid: int) -> PdfGrid:
    x = np.arange(grid) / grid
    if name == "uniform":
        values = np.ones(grid)
    elif name == "triangular":
        values = 2.0 * x
        values = values / (values.sum() / grid)
    else:
        raise ValueError(f"unknown pdf {name!r} (use uniform or triangular)")
    return PdfGrid(values, (0.0, 1.0))


def _cmd_quantize_design(args):
    if args.pdf_csv:
        lo, hi = (float(tok) for tok in args.support.split(":"))
        raw = np.array(
            [float(line) for line in Path(args.pdf_csv).read_text().split() if line.strip()]
        )
        width = hi - lo
        pdf = PdfGrid(raw / (raw.sum() * width / raw.size), (lo, hi))
    else:
        pdf = _builtin_pdf(args.pdf, args.grid)
    spec = design_quantizer_via_sampling(pdf, args.n, args.epsilon)
    quantizer_to_csv(spec, args.out)
    return 0


def _cmd_multidim_bound(args):
    field = gradient_field_from_csv(args.field_csv)
    density = optimal_density_kd(field, args.epsilon)
    print(f"k={field.ndim}")
    print(f"bennett_mse={bennett_mse_kd(field, density, args.mk, args.n)!r}")
    print(f"lower_bound={mse_lower_bound_kd(field, args.n, args.mk)!r}")
    return 0


def _read_config(path) -> dict:
    values = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}: bad config line {line!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _add_signal_args(parser, nu_default=None):
    parser.add_argument("--signal", help="analytic spec, e.g. exp:alpha=3 or cos:alpha=5,scale=255")
    parser.add_argument("--csv", help="CSV file with one amplitude per line")
    parser.add_argument("--nu", type=int, default=nu_default, help="dense grid size for analytic signals")


def _add_codec_args(parser):
    parser.add_argument("--b-j", type=int, default=8, help="bits for the extrema count")
    parser.add_argument("--b-ext", type=int, default=13, help="bits per extremum amplitude")
    parser.add_argument("--b-val0", type=int, default=15, help="bits for the starting amplitude")
    parser.add_argument("--phi-min", type=float, default=-255.0)
    parser.add_argument("--phi-max", type=float, default=255.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nusamp", description=__doc__)
    parser.add_argument("--config", help="flat key=value file supplying flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="write segmentation boundary indices as CSV")
    _add_signal_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("expander", "threshold", "uniform"), default="threshold")
    p.add_argument("--epsilon", type=float, default=DERIVATIVE_ENERGY_FLOOR)
    p.add_argument("--out", required=True)
    p.add_argument("--density-out", help="also export the (t, density) grid")
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("sample", help="segment and write per-segment optimal samples")
    _add_signal_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("expander", "threshold", "uniform"), default="threshold")
    p.add_argument("--epsilon", type=float, default=DERIVATIVE_ENERGY_FLOOR)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("reconstruct", help="sample into a descriptor and reconstruct from it")
    _add_signal_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--descriptor", help="reconstruct from a descriptor JSON instead of a signal")
    p.add_argument("--descriptor-out", help="write the descriptor JSON")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("encode", help="encode a descriptor into a bitstream file")
    _add_signal_args(p)
    p.add_argument("--n", type=int, required=True)
    _add_codec_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="decode a bitstream and reconstruct")
    p.add_argument("--stream", required=True)
    _add_codec_args(p)
    p.add_argument("--descriptor-out")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("bench-sampling", help="MSE sweep: adaptive vs uniform vs tree")
    _add_signal_args(p)
    p.add_argument("--depth", type=int, default=11)
    p.add_argument("--mu-grid", help="lo:hi:points (log spaced) or comma list of leaf prices")
    p.add_argument("--check-holder", type=int, default=0, metavar="COUNT",
                   help="verify the optimality floor on COUNT seeded density perturbations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench_sampling)

    p = sub.add_parser("bench-codec", help="rate/distortion sweep: descriptor codec vs coded tree")
    _add_signal_args(p)
    p.add_argument("--depth", type=int, default=11)
    p.add_argument("--mu-grid")
    p.add_argument("--seed", type=int, default=0)
    _add_codec_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--tree-sweep-out", help="also export the tree sweep as (mu, leaves, bits, mse)")
    p.set_defaults(func=_cmd_bench_codec)

    p = sub.add_parser("quantize-design", help="design a scalar quantizer from a pdf")
    p.add_argument("--pdf", default="uniform", help="builtin pdf: uniform or triangular")
    p.add_argument("--pdf-csv", help="pdf values on a uniform grid, one per line")
    p.add_argument("--support", default="0:1", help="support interval lo:hi for --pdf-csv")
    p.add_argument("--grid", type=int, default=4096, help="grid size for builtin pdfs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=DERIVATIVE_ENERGY_FLOOR)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_quantize_design)

    p = sub.add_parser("multidim-bound", help="evaluate the K-dimensional error bound")
    p.add_argument("--field-csv", required=True, help="gradient-energy field with a shape header")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mk", type=float, default=INTERVAL_INERTIA,
                   help="normalized inertia constant of the tessellating cell")
    p.add_argument("--epsilon", type=float, default=DERIVATIVE_ENERGY_FLOOR)
    p.set_defaults(func=_cmd_multidim_bound)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        # A config file only supplies defaults; explicit flags win because
        # they are parsed after set_defaults.
        if "--config" in argv:
            config_path = argv[argv.index("--config") + 1]
            raw = _read_config(config_path)
            for action in parser._subparsers._group_actions[0].choices.values():  # noqa: SLF001
                defaults = {}
                for sub_action in action._actions:  # noqa: SLF001
                    key = sub_action.dest
                    if key in raw:
                        value = raw[key]
                        defaults[key] = sub_action.type(value) if sub_action.type else value
                action.set_defaults(**defaults)
        args = parser.parse_args(argv)
        return args.func(args)
    except (ValueError, OSError, DecodeError) as exc:
        print(f"nusamp: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    except Exception as exc:  # pragma: no cover - defensive
        print(f"nusamp: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

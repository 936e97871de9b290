"""Command-line entry point: ``ggec <subcommand> [flags]``.

Exit status is 0 on success, 1 for usage errors (bad flags or flag values)
and 2 for data errors (unreadable or malformed inputs).  Files are written
atomically.  Only ``tables`` and ``sigma-opt`` print to stdout, and only
when ``--out`` is absent.
"""

from __future__ import annotations

import argparse
import sys

from . import analysis, formats
from .codec import LatentBatch, ParamTable, decode_stream, encode_stream
from .errors import ConfigError, DomainError, GgecError
from .interval_model import (
    DEFAULT_ALPHABET,
    Alphabet,
    CodingMode,
    SymbolParams,
    build_cdf_table,
)
from .synth import SynthConfig, gen_latents

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _flag_type(parse):
    def convert(text):
        try:
            return parse(text)
        except ConfigError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    convert.__name__ = getattr(parse, "__name__", "value")
    return convert


_mode = _flag_type(CodingMode.parse)
_alphabet = _flag_type(Alphabet.parse)
_family = _flag_type(analysis.Family.parse)


def _mode_list(text):
    return [_mode(part) for part in text.split(",") if part.strip()]


def _read(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _emit(text: str, out) -> None:
    if out:
        formats.write_atomic(out, text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def cmd_encode(args) -> None:
    params = ParamTable.from_bytes(_read(args.params))
    symbols = formats.unpack_symbols(_read(args.symbols))
    batch = LatentBatch(symbols, params)
    formats.write_atomic(args.out, encode_stream(batch, args.mode, args.alphabet or DEFAULT_ALPHABET))


def cmd_decode(args) -> None:
    params = ParamTable.from_bytes(_read(args.params))
    symbols = decode_stream(_read(getattr(args, "in")), params, args.alphabet)
    formats.write_atomic(args.out, formats.pack_symbols(symbols))


def _load_config(args) -> SynthConfig:
    cfg = SynthConfig.from_json(_read(args.config).decode("utf-8"))
    if args.alphabet is not None:
        cfg.alphabet = str(args.alphabet)
    return cfg


def cmd_synth(args) -> None:
    batch = gen_latents(_load_config(args))
    formats.write_atomic(args.out + ".ggsy", formats.pack_symbols(batch.y_hat))
    formats.write_atomic(args.out + ".ggpr", batch.params.to_bytes())


def cmd_bench(args) -> None:
    cfg = _load_config(args)
    modes = args.modes or ([args.mode] if args.mode is not None else list(CodingMode))
    reports = analysis.compare_modes(gen_latents(cfg), modes, cfg.alphabet_obj())
    formats.write_atomic(args.out, analysis.reports_csv(reports).encode("utf-8"))


def cmd_sigma_opt(args) -> None:
    rows = analysis.sigma_opt_sweep(args.family, args.objective, args.rmin, args.rmax, args.steps)
    _emit(analysis.sweep_csv(rows, args.family, args.objective), args.out)


def cmd_tables(args) -> None:
    alphabet = args.alphabet or DEFAULT_ALPHABET
    p = SymbolParams(args.mu, args.sigma, args.beta, args.pi)
    table = build_cdf_table(p, args.mode if args.mode is not None else CodingMode.DYNAMIC_GGD, alphabet)
    lines = ["symbol,freq"]
    lines += ["%d,%d" % (s, f) for s, f in zip(range(alphabet.min_sym, alphabet.max_sym + 1), table.freq.tolist())]
    _emit("\n".join(lines) + "\n", args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ggec", description="Generalized-Gaussian entropy coding of integer latents.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="command")
    sub.required = True

    def common(p, out_required=True, mode=True):
        p.add_argument("--out", required=out_required, help="output path")
        p.add_argument("--alphabet", type=_alphabet, default=None, help="symbol range min:max (default -255:255)")
        if mode:
            p.add_argument("--mode", type=_mode, default=None, help="coding mode, e.g. dynamic-ggd")

    p = sub.add_parser("encode", help="range-code a symbols file")
    p.add_argument("--params", required=True)
    p.add_argument("--symbols", required=True)
    common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover a symbols file from a container")
    p.add_argument("--params", required=True)
    p.add_argument("--in", required=True, metavar="CONTAINER")
    common(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("synth", help="write PREFIX.ggsy and PREFIX.ggpr from a JSON config")
    p.add_argument("--config", required=True)
    common(p, mode=False)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="compare coding modes on a synthetic dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--modes", type=_mode_list, default=None, help="comma-separated modes (default all)")
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sigma-opt", help="sweep the likelihood-maximizing scale over residuals")
    p.add_argument("--family", type=_family, default=analysis.Family("gaussian"))
    p.add_argument("--objective", choices=analysis.OBJECTIVES, default="interval-mass")
    p.add_argument("--rmin", type=float, default=1.0)
    p.add_argument("--rmax", type=float, default=20.0)
    p.add_argument("--steps", type=int, default=20)
    common(p, out_required=False, mode=False)
    p.set_defaults(func=cmd_sigma_opt)

    p = sub.add_parser("tables", help="print one quantized frequency table")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--pi", type=float, default=0.5)
    common(p, out_required=False)
    p.set_defaults(func=cmd_tables)
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    # "--alphabet -32:32" would otherwise read -32:32 as a flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--alphabet" and i + 1 < len(argv) and argv[i + 1][:1] == "-" and argv[i + 1][1:2].isdigit():
            out.append("%s=%s" % (tok, argv[i + 1]))
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except UsageError as exc:
        print("ggec: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        args.func(args)
    except (ConfigError, DomainError) as exc:
        # flag-only commands report bad values as usage errors
        print("ggec: error: %s" % exc, file=sys.stderr)
        return EXIT_DATA if args.command in ("synth", "bench") else EXIT_USAGE
    except (GgecError, OSError, ArithmeticError) as exc:
        print("ggec: error: %s" % exc, file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: sweeps, theory curves, and a quick self check.

Subcommands: sweep-snr, sweep-power, sweep-distance, analyze, selfcheck.
Flags mirror the config keys; a JSON config file with flat dotted keys
("crc.koopman_hex", "grand.max_weight", ...) may supply defaults that
explicit flags override.  Records go to stdout or --out; progress and
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .config import CHANNELS, DECODERS, DEFAULT_CRC, SCENARIOS, ConfigError, ScenarioConfig
from .crc import CrcSpec
from .harness import CSV_FIELDS, SweepRecord, run_point, run_sweep, write_records
from .phy import path_loss
from .theory import (
    TheoryInputs,
    awgn_gain_sampler,
    ber_user1,
    ber_user2,
    bler_upper_bound,
    rayleigh_gain_sampler,
)

# config-file key -> argparse dest
CONFIG_KEYS = {
    "scenario": "scenario",
    "decoder": "decoder",
    "channel": "channel",
    "alpha1": "alpha1",
    "P": "power",
    "d1": "d1",
    "d2": "d2",
    "xi": "xi",
    "ebn0_db_list": "ebn0",
    "crc.koopman_hex": "crc_koopman",
    "crc.k": "crc_k",
    "crc.n": "crc_n",
    "grand.max_weight": "grand_max_weight",
    "orb.query_budget": "orb_query_budget",
    "orb.max_logistic_weight": "orb_max_lw",
    "min_block_errors": "min_block_errors",
    "max_blocks": "max_blocks",
    "seed": "seed",
    "workers": "workers",
    "trials_per_batch": "trials_per_batch",
}


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in str(text).replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with flat config keys; flags override")
    parser.add_argument("--scenario", choices=SCENARIOS)
    parser.add_argument("--decoder", choices=DECODERS)
    parser.add_argument("--channel", choices=CHANNELS)
    parser.add_argument("--alpha1", type=float)
    parser.add_argument("--power", type=float, help="total transmit power P")
    parser.add_argument("--d1", type=float)
    parser.add_argument("--d2", type=float)
    parser.add_argument("--xi", type=float, help="path-loss exponent")
    parser.add_argument("--crc-koopman", help="generator in Koopman hex, e.g. 0x8f3")
    parser.add_argument("--crc-k", type=int, help="message length in bits")
    parser.add_argument("--crc-n", type=int, help="codeword length in bits")
    parser.add_argument("--grand-max-weight", type=int)
    parser.add_argument("--orb-query-budget", type=int)
    parser.add_argument("--orb-max-lw", type=int)
    parser.add_argument("--min-block-errors", type=int)
    parser.add_argument("--max-blocks", type=int)
    parser.add_argument("--trials-per-batch", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grandnoma",
        description="Two-user downlink NOMA link simulator with CRC-only "
                    "error correction via guess-and-check decoding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-snr", help="BER/BLER vs Eb/N0")
    _add_common(p)
    p.add_argument("--ebn0", type=_float_list, help="Eb/N0 points in dB, e.g. '0,2,4'")

    p = sub.add_parser("sweep-power", help="BER/BLER vs power allocation alpha1")
    _add_common(p)
    p.add_argument("--ebn0", type=_float_list, help="single Eb/N0 point in dB")
    p.add_argument("--alpha1-list", type=_float_list, required=True)

    p = sub.add_parser("sweep-distance", help="BER/BLER vs near-user distance d1")
    _add_common(p)
    p.add_argument("--ebn0", type=_float_list, help="single Eb/N0 point in dB")
    p.add_argument("--d1-list", type=_float_list, required=True)

    p = sub.add_parser("analyze", help="theoretical BER curves and BLER bound")
    _add_common(p)
    p.add_argument("--ebn0", type=_float_list, help="Eb/N0 points in dB")
    p.add_argument("--p-ue", type=float, default=0.0,
                   help="undetected-error probability for the near-user mixture")
    p.add_argument("--theory-samples", type=int, default=100_000,
                   help="Monte Carlo samples for fading expectations")

    p = sub.add_parser("selfcheck", help="fast internal consistency checks")
    _add_common(p)

    return parser


def _load_config_file(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    unknown = set(data) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"config file: unknown keys {sorted(unknown)}")
    return data


def _build_config(args: argparse.Namespace) -> tuple[ScenarioConfig, list[float]]:
    """Merge defaults < config file < flags into a ScenarioConfig plus the
    Eb/N0 list."""
    merged: dict = {}
    if args.config:
        for key, value in _load_config_file(args.config).items():
            merged[CONFIG_KEYS[key]] = value
    for dest in set(CONFIG_KEYS.values()):
        flag_value = getattr(args, dest, None)
        if flag_value is not None:
            merged[dest] = flag_value

    crc = DEFAULT_CRC
    if any(k in merged for k in ("crc_koopman", "crc_k", "crc_n")):
        koopman = merged.get("crc_koopman", hex(DEFAULT_CRC.koopman))
        koopman = int(koopman, 16) if isinstance(koopman, str) else int(koopman)
        crc = CrcSpec(
            koopman=koopman,
            message_len=int(merged.get("crc_k", DEFAULT_CRC.message_len)),
            codeword_len=int(merged.get("crc_n", DEFAULT_CRC.codeword_len)),
        )

    ebn0_list = merged.get("ebn0")
    if ebn0_list is not None:
        if not isinstance(ebn0_list, list):
            ebn0_list = [ebn0_list]
        ebn0_list = [float(v) for v in ebn0_list]

    kwargs = {}
    for dest, field in [
        ("scenario", "scenario"), ("decoder", "decoder"), ("channel", "channel"),
        ("alpha1", "alpha1"), ("power", "power"), ("d1", "d1"), ("d2", "d2"),
        ("xi", "xi"), ("grand_max_weight", "grand_max_weight"),
        ("orb_query_budget", "orb_query_budget"), ("orb_max_lw", "orb_max_logistic_weight"),
        ("min_block_errors", "min_block_errors"), ("max_blocks", "max_blocks"),
        ("seed", "master_seed"), ("workers", "workers"),
        ("trials_per_batch", "trials_per_batch"),
    ]:
        if dest in merged:
            kwargs[field] = merged[dest]
    cfg = ScenarioConfig(crc=crc, **kwargs)
    if ebn0_list is not None:
        cfg = cfg.at(ebn0_db=float(ebn0_list[0]))
    return cfg, ebn0_list or []


class _Flusher:
    """Streams CSV rows (or collects JSON records) as points finish."""

    def __init__(self, fmt: str, out: str | None):
        self.fmt = fmt
        self.out = out
        self.records: list[SweepRecord] = []

    def __call__(self, new_records: list[SweepRecord]) -> None:
        self.records.extend(new_records)
        if self.out is not None:
            write_records(self.records, self.fmt, self.out)

    def finish(self) -> None:
        if self.out is None:
            write_records(self.records, self.fmt, None)


def _progress(args: argparse.Namespace, message: str) -> None:
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def _run_simulation_sweep(args: argparse.Namespace) -> int:
    cfg, ebn0_list = _build_config(args)
    if args.command == "sweep-snr":
        axis, values = "ebn0", ebn0_list
        if not values:
            raise ConfigError("ebn0_db_list: sweep-snr requires --ebn0")
    elif args.command == "sweep-power":
        axis, values = "alpha1", args.alpha1_list
    else:
        axis, values = "d1", args.d1_list
    flusher = _Flusher(args.format, args.out)

    def on_point(pair: list[SweepRecord]) -> None:
        rec = pair[0]
        _progress(
            args,
            f"[{args.command}] {axis}={getattr(rec, 'ebn0_db' if axis == 'ebn0' else axis):g} "
            f"blocks={rec.blocks} ber1={pair[0].ber:.3e} ber2={pair[1].ber:.3e} "
            f"({rec.wall_time_s:.1f}s)",
        )
        flusher(pair)

    run_sweep(cfg, axis, values, on_point=on_point)
    flusher.finish()
    return 0


def _run_analyze(args: argparse.Namespace) -> int:
    cfg, ebn0_list = _build_config(args)
    if not ebn0_list:
        raise ConfigError("ebn0_db_list: analyze requires --ebn0")
    n = cfg.crc.codeword_len
    l1 = path_loss(cfg.d1, cfg.xi)
    l2 = path_loss(cfg.d2, cfg.xi)
    records = []
    for value in ebn0_list:
        point = cfg.at(ebn0_db=float(value))
        if cfg.channel == "rayleigh":
            sampler = rayleigh_gain_sampler(n, l1, l2)
            n_samples = args.theory_samples
        else:
            sampler = awgn_gain_sampler(n, l1, l2)
            n_samples = 1
        inputs = TheoryInputs(
            alpha1=point.alpha1, alpha2=point.alpha2, power=point.power,
            sigma2=point.sigma2, codeword_len=n, p_ue=args.p_ue,
            channel_sampler=sampler, n_samples=n_samples,
        )
        rng = np.random.default_rng(point.master_seed)
        ber1 = ber_user1(inputs, rng)
        ber2 = ber_user2(inputs, rng)
        for user, ber in ((1, ber1), (2, ber2)):
            records.append(SweepRecord(
                scenario=point.scenario,
                decoder="theory",
                channel=point.channel,
                ebn0_db=point.ebn0_db,
                alpha1=point.alpha1,
                d1=point.d1,
                d2=point.d2,
                user=user,
                bits=0, bit_errors=0,
                ber=ber,
                blocks=0, block_errors=0,
                bler=bler_upper_bound(ber, n, point.grand_max_weight),
                mean_queries=0.0,
                undetected_rate=args.p_ue if user == 1 else 0.0,
                seed=point.master_seed,
                wall_time_s=0.0,
            ))
        _progress(args, f"[analyze] ebn0={value:g} ber1={ber1:.3e} ber2={ber2:.3e}")
    write_records(records, args.format, args.out)
    return 0


def _run_selfcheck(args: argparse.Namespace) -> int:
    import itertools

    from .crc import crc_check, crc_encode, get_code, koopman_to_normal
    from .grand import hard_grand_decode
    from .theory import q_function

    failures = 0

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        status = "PASS" if ok else "FAIL"
        print(f"[selfcheck] {name}: {status}{' - ' + detail if detail else ''}")
        failures += not ok

    # generator expansion of the default code
    coeffs = koopman_to_normal(DEFAULT_CRC)
    ok = list(coeffs) == [1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1]
    report("crc generator expansion", ok)

    # hard guess-and-check realizes minimum-distance decoding on a toy code
    toy = CrcSpec(0x5, 4, 7)
    code = get_code(toy)
    codebook = [crc_encode(np.array(m, dtype=np.uint8), toy)
                for m in itertools.product((0, 1), repeat=4)]
    ok = True
    for word_bits in itertools.product((0, 1), repeat=7):
        word = np.array(word_bits, dtype=np.uint8)
        best = min(int(np.count_nonzero(word != c)) for c in codebook)
        result = hard_grand_decode(word, code, max_weight=7)
        if result.abandoned or int(np.count_nonzero(word != result.codeword)) != best:
            ok = False
            break
    report("toy-code maximum-likelihood equivalence", ok)

    # single-user BPSK calibration against the Gaussian tail at 4 dB
    rng = np.random.default_rng(7)
    n_bits = 200_000
    ebn0 = 10.0 ** 0.4
    sigma = np.sqrt(1.0 / (2.0 * ebn0))
    bits = rng.integers(0, 2, n_bits)
    rx = (1.0 - 2.0 * bits) + sigma * rng.standard_normal(n_bits)
    ber = np.mean((rx < 0) != bits)
    expect = float(q_function(np.sqrt(2.0 * ebn0)))
    tol = 4.0 * np.sqrt(expect * (1.0 - expect) / n_bits)
    report("bpsk awgn calibration", abs(ber - expect) <= tol, f"ber={ber:.3e} expect={expect:.3e}")

    # reproducibility across worker counts on a tiny point
    cfg = ScenarioConfig(scenario="grand", decoder="grand", ebn0_db=8.0,
                         min_block_errors=5, max_blocks=200, master_seed=11)
    rec_a = run_point(cfg, 0)
    rec_b = run_point(cfg.at(workers=2), 0)
    same = all(
        getattr(a, f) == getattr(b, f)
        for a, b in zip(rec_a, rec_b)
        for f in CSV_FIELDS if f != "wall_time_s"
    )
    report("worker-count reproducibility", same)

    # round trip encode -> check
    rng = np.random.default_rng(3)
    msg = rng.integers(0, 2, DEFAULT_CRC.message_len).astype(np.uint8)
    report("encode/check round trip", crc_check(crc_encode(msg, DEFAULT_CRC), DEFAULT_CRC))

    return 1 if failures else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("sweep-snr", "sweep-power", "sweep-distance"):
            return _run_simulation_sweep(args)
        if args.command == "analyze":
            return _run_analyze(args)
        return _run_selfcheck(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

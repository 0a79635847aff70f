#!/usr/bin/env python3
"""
RMRPA (Reed-Muller Recursive Projection-Aggregation) Main Entry Point

Command-line access to the encoders, decoders and the Monte-Carlo harness:
encode, decode, simulate, sweep, width and invariance-audit.
"""

import sys
import os
import argparse
import copy
from typing import Dict, Any, Optional

import numpy as np

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src.decoders import DecoderError, create_decoder
from src.models import ChannelKind, DecoderVariant, SweepSpec
from src.utils.channels import ChannelModel, llr
from src.utils.config import (
    ConfigError, load_config, load_sweep_spec, sweep_spec_from, update_config_value, validate_config
)
from src.utils.list_concat import OuterCode
from src.utils.logging_config import setup_logging, get_logger
from src.utils.rm_core import build_code, encode
from src.utils.sim_harness import (
    curve_from_summary, default_header, emit_csv, grid_from_text, invariance_audit,
    run_sweep, summary_from_csv, summary_table, transition_width, word_from_hex, word_to_hex
)


class RmrpaManager:
    """
    Loads the configuration, sets up logging and runs CLI subcommands.

    Command-line flags override the matching configuration values.
    """

    # flag name -> config key path
    OVERRIDES = {
        'm': 'code.m',
        'r': 'code.r',
        'decoder': 'decoder.name',
        'channel': 'channel.kind',
        'nmax': 'decoder.n_max',
        'theta': 'decoder.theta',
        'voting_set_size': 'decoder.voting_set_size',
        'list_t': 'list.t',
        'lmax_mult': 'list.l_max_mult',
        'parities': 'outer.parities',
        'trials': 'simulation.trials',
        'seed': 'simulation.seed',
        'threads': 'simulation.threads',
    }

    def __init__(self, config_path: str = "config.yaml", log_level: Optional[str] = None):
        """
        Initialize the manager.

        Args:
            config_path: Path to configuration file
            log_level: Optional override of ``logging.level``
        """
        self.config = load_config(config_path)
        if log_level:
            update_config_value(self.config, 'logging.level', log_level)
        setup_logging(self.config)
        self.logger = get_logger(__name__)
        self.logger.debug(f"Configuration loaded from {config_path}")

    def merged_config(self, args: argparse.Namespace) -> Dict[str, Any]:
        """Configuration with command-line overrides applied and validated."""
        config = copy.deepcopy(self.config)
        for flag, key_path in self.OVERRIDES.items():
            value = getattr(args, flag, None)
            if value is not None:
                update_config_value(config, key_path, value)
        grid = getattr(args, 'p', None) or getattr(args, 'ebn0_db', None)
        if getattr(args, 'p', None) is not None:
            update_config_value(config, 'channel.kind', ChannelKind.BSC.value)
        elif getattr(args, 'ebn0_db', None) is not None:
            update_config_value(config, 'channel.kind', ChannelKind.AWGN.value)
        if grid is not None:
            update_config_value(config, 'channel.grid', list(grid_from_text(grid)))
        validate_config(config)
        return config

    def build_spec(self, args: argparse.Namespace) -> SweepSpec:
        """SweepSpec from a --spec file or from the configuration plus flags."""
        config = self.merged_config(args)
        if getattr(args, 'spec', None):
            return load_sweep_spec(args.spec, config)
        return sweep_spec_from(config)

    def encode(self, args: argparse.Namespace) -> str:
        """Encode a message given as a 0/1 string in basis order."""
        config = self.merged_config(args)
        code = build_code(config['code']['m'], config['code']['r'])
        bits = [int(c) for c in args.message.strip() if c in '01']
        if len(bits) != code.k:
            raise ConfigError(f"Message must have k={code.k} bits, got {len(bits)}")
        return word_to_hex(encode(code, np.array(bits, dtype=np.uint8)))

    def decode(self, args: argparse.Namespace) -> str:
        """
        Decode one word read from --in.

        LLR files hold one decimal value per line; with --hard the file holds a
        hex-packed hard word whose bits become LLRs of a BSC (--p, default 0.1).
        """
        config = self.merged_config(args)
        spec = sweep_spec_from(config)
        code = build_code(spec.m, spec.r)
        with open(args.input, 'r', encoding='utf-8') as f:
            text = f.read()

        crossover = None
        if args.hard:
            crossover = float(args.p.split(',')[0]) if args.p else 0.1
            L = llr(ChannelModel.bsc(crossover), word_from_hex(text, code.n))
        else:
            L = np.array([float(v) for v in text.split()], dtype=np.float64)

        outer = None
        if spec.decoder is DecoderVariant.RPA_LIST_CONCAT:
            outer = OuterCode.random(code.k, spec.parities, spec.outer_seed)
        decoder = create_decoder(spec.decoder, code, spec.decoder_config, spec.list_config,
                                 outer=outer, crossover=crossover)
        result = decoder.run(L)
        self.logger.info(f"{decoder.name} decoded RM({code.m},{code.r}) in "
                         f"{decoder.get_metrics()['last_run_duration'] * 1e3:.2f} ms")
        if result.failure:
            return "FAILURE"
        return word_to_hex(result.codeword)

    def simulate(self, args: argparse.Namespace) -> str:
        """Run a sweep and return its CSV text."""
        spec = self.build_spec(args)
        progress = bool(self.config.get('simulation', {}).get('progress', True))
        summary = run_sweep(spec, progress=progress)
        table = summary_table(summary).to_string(index=False)
        # stdout carries only the CSV unless it goes to a file
        if args.out:
            print(table)
        else:
            self.logger.info(f"Sweep summary:\n{table}")
        return emit_csv(summary, header_comment=default_header(spec), timing=not args.no_timing)

    def width(self, args: argparse.Namespace) -> str:
        """Transition width w(delta) of a sweep CSV."""
        with open(args.input, 'r', encoding='utf-8') as f:
            curve = curve_from_summary(summary_from_csv(f.read()))
        return f"{transition_width(curve, args.delta):.6g}"

    def audit(self, args: argparse.Namespace) -> bool:
        """Run the matched-noise invariance audit; True when it passes."""
        spec = self.build_spec(args)
        result = invariance_audit(spec, grid_index=args.grid_index, trials=args.audit_trials)
        print(f"Trials: {result.trials}")
        print(f"Block-error indicator mismatches: {result.indicator_mismatches}")
        print(f"Non-equivariant decodes: {result.equivariance_failures}")
        print(f"Result: {'PASS' if result.passed else 'FAIL'}")
        return result.passed


def _write(text: str, out: Optional[str]) -> None:
    if out:
        out_dir = os.path.dirname(out)
        if out_dir and not os.path.exists(out_dir):
            os.makedirs(out_dir)
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text if text.endswith('\n') else text + '\n')
        print(f"Wrote {out}")
    else:
        print(text.rstrip('\n'))


def _add_code_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--m', type=int, help='Number of variables (n = 2^m)')
    parser.add_argument('--r', type=int, help='Code order')
    parser.add_argument('--decoder', choices=[v.value for v in DecoderVariant], help='Decoder variant')
    parser.add_argument('--nmax', type=int, help='Maximum RPA iterations (default ceil(m/2))')
    parser.add_argument('--theta', type=float, help='LLR early-exit threshold')
    parser.add_argument('--voting-set-size', type=int, help='Number of subspaces used per level')
    parser.add_argument('--list-t', type=int, help='Chase list exponent (2^t candidates)')
    parser.add_argument('--lmax-mult', type=int, choices=[1, 2], help='L_max as a multiple of max|L|')
    parser.add_argument('--parities', type=int, choices=[1, 2], help='Outer parity checks')
    parser.add_argument('--out', help='Output file (default stdout)')


def _add_channel_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--channel', choices=[k.value for k in ChannelKind], help='Channel model')
    grid = parser.add_mutually_exclusive_group()
    grid.add_argument('--p', help='Comma-separated BSC crossover probabilities')
    grid.add_argument('--ebn0-db', help='Comma-separated Eb/N0 values in dB')
    parser.add_argument('--trials', type=int, help='Trials per grid point')
    parser.add_argument('--seed', type=int, help='Master seed')
    parser.add_argument('--threads', type=int, help='Worker processes')
    parser.add_argument('--spec', help='Sweep specification YAML')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='RMRPA - Recursive Projection-Aggregation decoding of Reed-Muller codes',
        epilog='Flags override values from the configuration file.'
    )
    parser.add_argument('--config', '-c', default='config.yaml', help='Configuration file path')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='Logging level')
    commands = parser.add_subparsers(dest='command', required=True)

    enc = commands.add_parser('encode', help='Encode a message')
    _add_code_flags(enc)
    enc.add_argument('--message', required=True, help='Message bits in basis order, e.g. 10110')

    dec = commands.add_parser('decode', help='Decode one received word')
    _add_code_flags(dec)
    dec.add_argument('--in', dest='input', required=True, help='LLR file or hex word (with --hard)')
    dec.add_argument('--hard', action='store_true', help='Input is a hex-packed hard word')
    dec.add_argument('--p', help='BSC crossover used for hard input')

    for name, help_text in (('simulate', 'Run a Monte-Carlo simulation'),
                            ('sweep', 'Run a sweep from a specification file')):
        sim = commands.add_parser(name, help=help_text)
        _add_code_flags(sim)
        _add_channel_flags(sim)
        sim.add_argument('--no-timing', action='store_true', help='Write wall_ms as 0')

    width = commands.add_parser('width', help='Transition width of a sweep CSV')
    width.add_argument('--in', dest='input', required=True, help='CSV written by simulate/sweep')
    width.add_argument('--delta', type=float, default=0.1, help='Level delta in (0, 0.5)')

    audit = commands.add_parser('invariance-audit', help='Matched-noise codeword invariance check')
    _add_code_flags(audit)
    _add_channel_flags(audit)
    audit.add_argument('--grid-index', type=int, default=0, help='Grid point to audit')
    audit.add_argument('--audit-trials', type=int, default=100, help='Number of audited trials')

    return parser


def main(argv: Optional[list] = None) -> int:
    """Main entry point for the RMRPA command line."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        manager = RmrpaManager(args.config, args.log_level)

        if args.command == 'encode':
            _write(manager.encode(args), args.out)
        elif args.command == 'decode':
            _write(manager.decode(args), args.out)
        elif args.command in ('simulate', 'sweep'):
            if args.command == 'sweep' and not args.spec:
                raise ConfigError("sweep requires --spec")
            _write(manager.simulate(args), args.out)
        elif args.command == 'width':
            print(manager.width(args))
        elif args.command == 'invariance-audit':
            return 0 if manager.audit(args) else 1

    except KeyboardInterrupt:
        print("\nOperation cancelled by user")
        return 1
    except (ConfigError, DecoderError, ValueError, OSError) as e:
        print(f"Error: {e}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""
Monte-Carlo evaluation harness.

Every trial transmits the all-zero codeword: for the symmetric channels used
here the error event of the RPA decoders depends only on the channel noise, so
the block-error rate does not depend on the transmitted codeword.
``invariance_audit`` checks that claim trial by trial.

Trial t of grid point g draws its noise from ``trial_rng(seed, g, t)``, so
results do not depend on how trials are split across worker processes.
"""

import io
import math
import time
import logging
from dataclasses import replace
from multiprocessing import Pool
from typing import Dict, Any, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import isotonic_regression
from tqdm import tqdm

from ..decoders import BaseDecoder, create_decoder
from ..models import (
    AuditSummary, ChannelKind, DecoderConfig, DecoderVariant, PointSummary,
    SweepSpec, TransitionCurve, TrialSummary
)
from .channels import EBN0_CONVENTION, ChannelError, channel_from_param, llr, transmit, trial_rng
from .config import ConfigError
from .list_concat import OuterCode, ml_score
from .logging_config import configure_worker_logging
from .rm_core import MAX_CODEBOOK_DIMENSION, RmCode, build_code, encode, is_codeword
from .rpa import rpa_decode

logger = logging.getLogger(__name__)

COLUMNS = [
    'm', 'r', 'decoder', 'channel', 'param', 'trials',
    'block_errors', 'bit_errors', 'failures', 'ml_lb_errors', 'seed', 'wall_ms'
]
NOISE_STREAM = 0
CODEWORD_STREAM = 1
CHUNKS_PER_WORKER = 4


class WidthError(ValueError):
    """Raised when a transition curve does not cross a requested level."""
    pass


def validate_spec(spec: SweepSpec) -> None:
    """
    Check decoder/channel/code combinations that the dataclass cannot.

    Raises:
        ConfigError: For unsupported combinations or channel grids
    """
    if spec.decoder is DecoderVariant.RPA_BSC and spec.channel is not ChannelKind.BSC:
        raise ConfigError("Decoder 'rpa-bsc' requires the BSC channel")
    if spec.decoder is not DecoderVariant.REED and not 1 <= spec.r <= spec.m:
        raise ConfigError(f"Decoder '{spec.decoder.value}' needs 1 <= r <= m, got m={spec.m}, r={spec.r}")
    code = build_code(spec.m, spec.r)
    if spec.decoder is DecoderVariant.ML and code.k > MAX_CODEBOOK_DIMENSION:
        raise ConfigError(f"Decoder 'ml' enumerates the codebook and needs k <= {MAX_CODEBOOK_DIMENSION}, got {code.k}")
    if spec.decoder is DecoderVariant.RPA_LIST_CONCAT and spec.parities > code.k:
        raise ConfigError(f"Outer code needs at most k={code.k} parities")
    for param in spec.grid:
        try:
            channel_from_param(spec.channel, param, code.rate)
        except ChannelError as e:
            raise ConfigError(f"Invalid channel grid value {param}: {e}")


def build_decoder(spec: SweepSpec, code: RmCode, crossover: Optional[float] = None) -> BaseDecoder:
    """Decoder instance for a sweep, with its outer code when needed."""
    outer = None
    if spec.decoder is DecoderVariant.RPA_LIST_CONCAT:
        outer = OuterCode.random(code.k, spec.parities, spec.outer_seed)
    return create_decoder(spec.decoder, code, spec.decoder_config, spec.list_config,
                          outer=outer, crossover=crossover)


def _ml_certifies(code: RmCode, decoded: np.ndarray, transmitted: np.ndarray, L: np.ndarray) -> bool:
    """True when the decoded codeword is strictly more likely than the transmitted one."""
    if not is_codeword(code, decoded):
        return False
    return bool(ml_score(decoded, L) > ml_score(transmitted, L))


def _run_trial_chunk(task: Tuple[SweepSpec, int, int, int]) -> np.ndarray:
    """
    Worker entry point: counters for trials [start, stop) of one grid point.

    Returns:
        Array (block_errors, bit_errors, failures, ml_lb_errors)
    """
    spec, grid_index, start, stop = task
    code = build_code(spec.m, spec.r)
    param = spec.grid[grid_index]
    ch = channel_from_param(spec.channel, param, code.rate)
    decoder = build_decoder(spec, code, crossover=ch.p)
    zero = np.zeros(code.n, dtype=np.uint8)

    counts = np.zeros(4, dtype=np.int64)
    for trial in range(start, stop):
        rng = trial_rng(spec.seed, grid_index, trial, NOISE_STREAM)
        L = llr(ch, transmit(ch, zero, rng))
        result = decoder.run(L)
        if result.failure:
            counts[0] += 1
            counts[2] += 1
            continue
        errors = int(result.codeword.sum())
        if errors:
            counts[0] += 1
            counts[1] += errors
            if _ml_certifies(code, result.codeword, zero, L):
                counts[3] += 1
    return counts


def _chunks(trials: int, workers: int) -> List[Tuple[int, int]]:
    bounds = np.linspace(0, trials, min(trials, workers * CHUNKS_PER_WORKER) + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]


def run_point(spec: SweepSpec, grid_index: int, pool: Optional[Any] = None) -> PointSummary:
    """
    Simulate ``spec.trials`` transmissions at one grid point.

    A failure of the concatenated decoder counts as a block error without bit
    errors. On every other block error the ML lower-bound counter fires when
    the decoded word is a codeword that scores strictly higher than the
    transmitted one. The codeword requirement is stricter than a bare score
    comparison: RPA can return a non-codeword that outscores the transmitted
    word, and such a word proves nothing about what ML would decide.

    Args:
        spec: Sweep specification
        grid_index: Index into ``spec.grid``
        pool: Optional multiprocessing pool spreading trial chunks

    Returns:
        Counters for this grid point
    """
    validate_spec(spec)
    if not 0 <= grid_index < len(spec.grid):
        raise ConfigError(f"Grid index {grid_index} out of range for {len(spec.grid)} points")

    start = time.perf_counter()
    if pool is None:
        counts = _run_trial_chunk((spec, grid_index, 0, spec.trials))
    else:
        tasks = [(spec, grid_index, a, b) for a, b in _chunks(spec.trials, spec.threads)]
        counts = np.sum(pool.map(_run_trial_chunk, tasks), axis=0)
    wall_ms = (time.perf_counter() - start) * 1000.0

    point = PointSummary(
        m=spec.m, r=spec.r, decoder=spec.decoder.value, channel=spec.channel.value,
        param=spec.grid[grid_index], trials=spec.trials,
        block_errors=int(counts[0]), bit_errors=int(counts[1]),
        failures=int(counts[2]), ml_lb_errors=int(counts[3]),
        seed=spec.seed, wall_ms=wall_ms,
    )
    logger.info(f"RM({spec.m},{spec.r}) {spec.decoder.value} {spec.channel.value}={point.param:g}: "
                f"{point.block_errors}/{point.trials} block errors, "
                f"{point.ml_lb_errors} ML-certified, {wall_ms:.0f} ms")
    return point


def run_sweep(spec: SweepSpec, threads: Optional[int] = None, progress: bool = True) -> TrialSummary:
    """
    Run every grid point of a sweep.

    With more than one worker the trials of each point are spread over a
    process pool; the counters are identical for any worker count.
    """
    validate_spec(spec)
    threads = threads or spec.threads
    if threads != spec.threads:
        spec = replace(spec, threads=threads)

    summary = TrialSummary()
    points = tqdm(range(len(spec.grid)), desc=f"RM({spec.m},{spec.r}) {spec.decoder.value}",
                  unit="point", disable=not progress)
    if threads > 1:
        with Pool(processes=threads, initializer=configure_worker_logging,
                  initargs=(logging.getLogger().getEffectiveLevel(),)) as pool:
            for grid_index in points:
                summary.points.append(run_point(spec, grid_index, pool))
    else:
        for grid_index in points:
            summary.points.append(run_point(spec, grid_index))
    return summary


def invariance_audit(spec: SweepSpec, grid_index: int = 0, trials: int = 100) -> AuditSummary:
    """
    Matched-noise check that the error event does not depend on the codeword.

    For each trial the channel noise of the all-zero transmission is reused on a
    random codeword c0 (BSC: the same flips; AWGN: the same noise, i.e. the
    LLRs are multiplied by (-1)^c0). The block-error indicators must agree;
    ``equivariance_failures`` counts trials where the two decodings do not
    differ by exactly c0. For the concatenated decoder c0 is drawn from the
    outer code.
    """
    validate_spec(spec)
    code = build_code(spec.m, spec.r)
    ch = channel_from_param(spec.channel, spec.grid[grid_index], code.rate)
    decoder = build_decoder(spec, code, crossover=ch.p)
    outer = getattr(decoder, 'outer', None)
    zero = np.zeros(code.n, dtype=np.uint8)
    audit = AuditSummary(trials=trials)

    for trial in range(trials):
        received = transmit(ch, zero, trial_rng(spec.seed, grid_index, trial, NOISE_STREAM))
        info_rng = trial_rng(spec.seed, grid_index, trial, CODEWORD_STREAM)
        if outer is None:
            message = info_rng.integers(0, 2, size=code.k, dtype=np.uint8)
        else:
            message = outer.complete(info_rng.integers(0, 2, size=code.k - outer.q, dtype=np.uint8))
        c0 = encode(code, message)
        if ch.kind is ChannelKind.BSC:
            shifted = received ^ c0
        else:
            shifted = (1.0 - 2.0 * c0) * received

        first = decoder.run(llr(ch, received))
        second = decoder.run(llr(ch, shifted))
        first_error = first.failure or bool(first.codeword.any())
        second_error = second.failure or bool((second.codeword != c0).any())
        if first_error != second_error:
            audit.indicator_mismatches += 1
        if first.failure or second.failure:
            equivariant = first.failure and second.failure
        else:
            equivariant = np.array_equal(first.codeword ^ c0, second.codeword)
        if not equivariant:
            audit.equivariance_failures += 1

    logger.info(f"Invariance audit over {trials} trials: {audit.indicator_mismatches} indicator mismatches, "
                f"{audit.equivariance_failures} non-equivariant decodes")
    return audit


def wilson_interval(errors: int, trials: int, z: float = 1.96) -> Tuple[float, float]:
    """Wilson score interval for an error probability estimated from ``errors``/``trials``."""
    if trials < 1 or not 0 <= errors <= trials:
        raise ValueError(f"Need 0 <= errors <= trials and trials >= 1, got {errors}/{trials}")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def is_monotone_within_bands(summary: TrialSummary, n_se: float = 3.0) -> bool:
    """
    True when the block-error estimates never decrease with channel noise by
    more than ``n_se`` combined standard errors between neighbouring points.

    Noise grows with p on the BSC and falls with Eb/N0 on AWGN.
    """
    points = summary.points
    for a, b in zip(points, points[1:]):
        if a.channel == ChannelKind.AWGN.value:
            a, b = b, a
        se = math.sqrt(a.block_error_rate * (1 - a.block_error_rate) / a.trials
                       + b.block_error_rate * (1 - b.block_error_rate) / b.trials)
        if b.block_error_rate + n_se * se < a.block_error_rate:
            return False
    return True


def curve_from_summary(summary: TrialSummary) -> TransitionCurve:
    """
    Transition curve of a sweep, noise increasing to the right.

    BSC points map p to the block-error rate; AWGN points use -Eb/N0 (dB) as
    the parameter so that the curve is again increasing.
    """
    pairs = []
    for point in summary.points:
        eps = point.param if point.channel == ChannelKind.BSC.value else -point.param
        pairs.append((eps, point.block_error_rate))
    pairs.sort(key=lambda pair: pair[0])
    return TransitionCurve(eps=tuple(e for e, _ in pairs), pe=tuple(p for _, p in pairs))


def _inverse(eps: np.ndarray, pe: np.ndarray, level: float) -> float:
    """inf{eps : P_e(eps) >= level} on the piecewise-linear monotone curve."""
    if level > pe[-1] or level < pe[0]:
        raise WidthError(f"Curve does not cross level {level:g} (range [{pe[0]:g}, {pe[-1]:g}])")
    i = int(np.argmax(pe >= level))
    if pe[i] == level or i == 0:
        return float(eps[i])
    return float(eps[i - 1] + (level - pe[i - 1]) * (eps[i] - eps[i - 1]) / (pe[i] - pe[i - 1]))


def transition_width(curve: TransitionCurve, delta: float) -> float:
    """
    Gap between the channel parameters where P_e crosses 1 - delta and delta.

    The estimates are first made nondecreasing by isotonic regression, then
    inverted by linear interpolation.

    Raises:
        WidthError: If delta is outside (0, 0.5) or a level is not crossed
    """
    if not 0.0 < delta < 0.5:
        raise WidthError(f"delta must lie in (0, 0.5), got {delta}")
    eps = np.asarray(curve.eps, dtype=np.float64)
    pe = isotonic_regression(np.asarray(curve.pe, dtype=np.float64), increasing=True).x
    return _inverse(eps, pe, 1.0 - delta) - _inverse(eps, pe, delta)


def emit_csv(summary: TrialSummary, header_comment: Optional[str] = None, timing: bool = True) -> str:
    """
    CSV text with one row per grid point.

    Floats are written with 6 significant digits. ``header_comment`` lines are
    prefixed with '#'. With ``timing`` off the wall-clock column is zeroed so
    that runs can be compared byte for byte.
    """
    rows = summary.rows()
    if not timing:
        rows = [{**row, 'wall_ms': 0.0} for row in rows]
    frame = pd.DataFrame(rows, columns=COLUMNS)
    body = frame.to_csv(index=False, float_format='%.6g', lineterminator='\n')
    if header_comment is None:
        return body
    comment = ''.join(f"# {line}\n" for line in header_comment.splitlines())
    return comment + body


def default_header(spec: SweepSpec) -> str:
    """Comment block written above sweep CSVs."""
    lines = [f"RM({spec.m},{spec.r}) decoder={spec.decoder.value} channel={spec.channel.value}"]
    if spec.channel is ChannelKind.AWGN:
        lines.append(EBN0_CONVENTION)
    return '\n'.join(lines)


def parse_csv(text: str) -> List[Dict[str, Any]]:
    """Rows of a CSV written by ``emit_csv``; comment lines are skipped."""
    frame = pd.read_csv(io.StringIO(text), comment='#')
    missing = [c for c in COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"CSV is missing columns: {missing}")
    return frame[COLUMNS].to_dict('records')


def summary_from_csv(text: str) -> TrialSummary:
    """TrialSummary rebuilt from ``emit_csv`` output."""
    points = []
    for row in parse_csv(text):
        points.append(PointSummary(
            m=int(row['m']), r=int(row['r']), decoder=str(row['decoder']), channel=str(row['channel']),
            param=float(row['param']), trials=int(row['trials']),
            block_errors=int(row['block_errors']), bit_errors=int(row['bit_errors']),
            failures=int(row['failures']), ml_lb_errors=int(row['ml_lb_errors']),
            seed=int(row['seed']), wall_ms=float(row['wall_ms']),
        ))
    return TrialSummary(points=points)


def word_to_hex(word: np.ndarray) -> str:
    """Hex string of a bit word packed LSB-first (bit z of the word is bit z mod 8 of byte z // 8)."""
    return np.packbits(np.asarray(word, dtype=np.uint8), bitorder='little').tobytes().hex()


def word_from_hex(text: str, n: int) -> np.ndarray:
    """
    Inverse of ``word_to_hex`` for a word of length n.

    Raises:
        ValueError: If the text is not hex or too short
    """
    data = np.frombuffer(bytes.fromhex(''.join(text.split())), dtype=np.uint8)
    bits = np.unpackbits(data, bitorder='little')
    if bits.size < n:
        raise ValueError(f"Hex word holds {bits.size} bits, expected {n}")
    return bits[:n].astype(np.uint8)


def measure_decode_time(m: int, r: int, batch_symbols: int = 1 << 14, repeats: int = 5,
                        ebn0_db: float = 2.0, seed: int = 0) -> float:
    """
    Median seconds per word of sequential soft-decision RPA on RM(m, r).

    Words are decoded in batches of ``batch_symbols`` / 2^m with one iteration
    per level, so the timing reflects the work of a single projection and
    aggregation pass at every level.
    """
    code = build_code(m, r)
    ch = channel_from_param(ChannelKind.AWGN, ebn0_db, code.rate)
    batch = max(1, batch_symbols >> m)
    zero = np.zeros((batch, code.n), dtype=np.uint8)
    cfg = DecoderConfig(n_max=1)

    timings = []
    for repeat in range(repeats):
        L = llr(ch, transmit(ch, zero, trial_rng(seed, 0, repeat, NOISE_STREAM)))
        start = time.perf_counter()
        rpa_decode(L, m, r, cfg)
        timings.append((time.perf_counter() - start) / batch)
    median = float(np.median(timings))
    logger.debug(f"RM({m},{r}) median decode time {median * 1e3:.3f} ms per word")
    return median


def summary_table(summary: TrialSummary, z: float = 1.96) -> pd.DataFrame:
    """Block/bit error rates with Wilson intervals, one row per grid point."""
    records: List[Dict[str, Any]] = []
    for point in summary.points:
        low, high = wilson_interval(point.block_errors, point.trials, z)
        records.append({
            'param': point.param,
            'bler': point.block_error_rate,
            'bler_low': low,
            'bler_high': high,
            'ber': point.bit_error_rate,
            'ml_lb': point.ml_lb_errors / point.trials,
            'failures': point.failures,
        })
    return pd.DataFrame(records, columns=['param', 'bler', 'bler_low', 'bler_high', 'ber', 'ml_lb', 'failures'])


def grid_from_text(text: str) -> Sequence[float]:
    """Parse a comma-separated grid such as '0.01,0.02,0.05'."""
    try:
        values = sorted(float(v) for v in text.split(',') if v.strip())
    except ValueError as e:
        raise ConfigError(f"Invalid channel grid '{text}': {e}")
    if not values:
        raise ConfigError("Channel grid must be nonempty")
    return values

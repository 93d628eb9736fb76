"""Apriori-style discovery driver over the unified counting engine.

Alternates candidate generation and one-pass counting level by level.
Level 1 starts from every alphabet symbol; each later level's candidates
come from the generator matching the mode's anti-monotonicity class.
The all-occurrences count has no such class, so its levels are counted
exhaustively.  The total frequency is computed alongside the head count
via the suffix recursion: tot(alpha) = min(head(alpha), tot(suffix)).
"""

from __future__ import annotations

from itertools import product

from .candgen import LevelSet, generate_full, generate_head, generate_suffix_prefix
from .core import ConfigurationError, Episode, EventSequence
from .counting import CountRequest, FrequencyMode, count

TOTAL = "tot"

_FULL_APRIORI = {
    FrequencyMode.WINDOWS,
    FrequencyMode.NON_OVERLAPPED,
    FrequencyMode.NON_OVERLAPPED_INNERMOST,
    FrequencyMode.NON_OVERLAPPED_EXPIRY,
    FrequencyMode.DISTINCT,
}
_SUFFIX_PREFIX = {
    FrequencyMode.MINIMAL,
    FrequencyMode.MINIMAL_EXPIRY,
    FrequencyMode.NON_INTERLEAVED,
}


def total_frequency(
    head_counts: dict[Episode, int], suffix_totals: dict[Episode, int]
) -> dict[Episode, int]:
    """Totals at level N from head counts and the previous level's totals.

    For a 1-node episode the total equals its head count; otherwise it is
    min(head(alpha), total(alpha's (N-1)-suffix)).  A missing suffix entry
    is a caller bug: whoever generated the candidates must have kept the
    suffix around.
    """
    out: dict[Episode, int] = {}
    for ep, fh in head_counts.items():
        if len(ep) == 1:
            out[ep] = fh
        else:
            out[ep] = min(fh, suffix_totals[ep.suffix()])
    return out


def mine(
    sequence: EventSequence,
    mode: FrequencyMode | str,
    threshold: int,
    t_x: int | None = None,
    max_len: int = 4,
) -> dict[Episode, int]:
    """All episodes of up to `max_len` nodes with frequency >= `threshold`."""
    if threshold < 1:
        raise ConfigurationError(f"threshold must be >= 1, got {threshold}")
    if max_len < 1:
        raise ConfigurationError(f"max_len must be >= 1, got {max_len}")
    is_total = mode == TOTAL
    if is_total:
        if t_x is None:
            raise ConfigurationError("total frequency requires a window width (t_x)")
        count_mode = FrequencyMode.HEAD
    else:
        count_mode = FrequencyMode(mode)

    symbols = list(range(len(sequence.alphabet)))
    # The all-occurrences count admits no pruning (a 3-node episode can
    # out-count every 2-node one), so its levels are counted exhaustively.
    exhaustive = not is_total and count_mode is FrequencyMode.ALL_OCCURRENCES
    candidates = [Episode((tid,)) for tid in symbols]
    result: dict[Episode, int] = {}
    totals: dict[Episode, int] = {}
    level: LevelSet | None = None

    for k in range(1, max_len + 1):
        if k > 1:
            if exhaustive:
                candidates = [Episode(nodes) for nodes in product(symbols, repeat=k)]
            elif level is None or not level.entries:
                break
            elif is_total or count_mode in _FULL_APRIORI:
                candidates = generate_full(level)
            elif count_mode in _SUFFIX_PREFIX:
                candidates = generate_suffix_prefix(level)
            else:
                candidates = generate_head(level, symbols)
        if not candidates:
            break
        report = count(CountRequest(tuple(candidates), count_mode, t_x), sequence)
        if is_total:
            level_totals = total_frequency(report.counts, totals)
            totals.update(level_totals)
            frequent = {ep: f for ep, f in level_totals.items() if f >= threshold}
        else:
            frequent = {ep: f for ep, f in report.counts.items() if f >= threshold}
        result.update(frequent)
        if not exhaustive:
            level = LevelSet.from_counts(k, frequent)

    return result

"""Brute-force reference semantics for every frequency definition.

Everything here computes straight from the definitions: exhaustive
occurrence enumeration, definitional window scans, and maximum
pairwise-compatible-set searches.  It exists to pin down expected values
for tests and to differentially check the single-pass engine, so clarity
beats speed and hard caps refuse inputs beyond desk scale.
"""

from __future__ import annotations

from .core import (
    CapacityError,
    ConfigurationError,
    Episode,
    EventSequence,
    Occurrence,
    Window,
    all_subepisodes,
)
from .counting import CountRequest, FrequencyMode, count, policy_for

DEFAULT_OCCURRENCE_CAP = 5000
_DO_SEARCH_BUDGET = 2_000_000


def enumerate_occurrences(
    alpha: Episode, sequence: EventSequence, cap: int = DEFAULT_OCCURRENCE_CAP
) -> list[Occurrence]:
    """All occurrences of `alpha`, lexicographically sorted.

    Exhaustive recursion over event-index choices; refuses to build more
    than `cap` occurrences.
    """
    nodes = alpha.nodes
    depth = len(nodes)
    types = sequence.types
    times = sequence.times
    n = len(types)
    out: list[Occurrence] = []
    picked_idx: list[int] = []
    picked_t: list[int] = []

    def rec(k: int, start: int, last_time: int) -> None:
        if k == depth:
            if len(out) >= cap:
                raise CapacityError(f"more than {cap} occurrences; refusing to enumerate")
            out.append(Occurrence(tuple(picked_idx), tuple(picked_t)))
            return
        want = nodes[k]
        for i in range(start, n):
            if types[i] == want and times[i] > last_time:
                picked_idx.append(i)
                picked_t.append(times[i])
                rec(k + 1, i + 1, times[i])
                picked_idx.pop()
                picked_t.pop()

    rec(0, 0, 0)
    out.sort(key=Occurrence.sort_key)
    return out


def enumerate_et(alpha: Episode, sequence: EventSequence) -> list[Occurrence]:
    """The earliest-transiting occurrences, one per viable start event.

    From each event matching the first node, every later node greedily
    takes the first event of the right type strictly after the previous
    node's time.  Sorted lexicographically (which coincides with start
    order).
    """
    nodes = alpha.nodes
    depth = len(nodes)
    types = sequence.types
    times = sequence.times
    n = len(types)
    out: list[Occurrence] = []
    for s in range(n):
        if types[s] != nodes[0]:
            continue
        idx = [s]
        last = times[s]
        pos = s + 1
        ok = True
        for k in range(1, depth):
            want = nodes[k]
            while pos < n and (types[pos] != want or times[pos] <= last):
                pos += 1
            if pos == n:
                ok = False
                break
            idx.append(pos)
            last = times[pos]
            pos += 1
        if ok:
            out.append(Occurrence(tuple(idx), tuple(times[i] for i in idx)))
    out.sort(key=Occurrence.sort_key)
    return out


def minimal_windows(
    alpha: Episode, sequence: EventSequence, cap: int = DEFAULT_OCCURRENCE_CAP
) -> list[Window]:
    """Occurrence time-windows with no proper sub-window holding an occurrence."""
    occs = enumerate_occurrences(alpha, sequence, cap)
    windows = sorted({o.window for o in occs}, key=lambda w: (w.t_s, w.t_e))
    return [
        w
        for w in windows
        if not any(w.properly_contains(other) for other in windows if other != w)
    ]


def _non_overlapped_after(h1: Occurrence, h2: Occurrence) -> bool:
    return h1.times[-1] < h2.times[0]


def _non_interleaved_after(h1: Occurrence, h2: Occurrence) -> bool:
    t1, t2 = h1.times, h2.times
    return all(t2[j] >= t1[j + 1] for j in range(len(t1) - 1))


def _max_chain(occs: list[Occurrence], after) -> int:
    # Both compatibilities are transitive along the lexicographic order,
    # so a maximum pairwise-compatible set is a longest chain.
    best = 0
    scores: list[int] = []
    for i, hi in enumerate(occs):
        fi = 1
        for j in range(i):
            if scores[j] >= fi and after(occs[j], hi):
                fi = scores[j] + 1
        scores.append(fi)
        if fi > best:
            best = fi
    return best


def _max_disjoint(occs: list[Occurrence]) -> int:
    """Maximum number of occurrences sharing no event: branch and bound."""
    m = len(occs)
    if m == 0:
        return 0
    depth = len(occs[0])
    order = sorted(range(m), key=lambda i: (occs[i].indices[-1], occs[i].indices))
    masks = []
    for i in order:
        mask = 0
        for idx in occs[i].indices:
            mask |= 1 << idx
        masks.append(mask)
    all_events = 0
    for mask in masks:
        all_events |= mask
    best = 0
    budget = _DO_SEARCH_BUDGET

    def rec(i: int, used: int, size: int, free: int) -> None:
        nonlocal best, budget
        if size > best:
            best = size
        for j in range(i, m):
            budget -= 1
            if budget < 0:
                raise CapacityError("distinct-set search budget exceeded")
            if size + 1 + min(m - j - 1, (free - depth) // depth) <= best:
                continue
            mask = masks[j]
            if mask & used == 0:
                rec(j + 1, used | mask, size + 1, free - depth)

    rec(0, 0, 0, bin(all_events).count("1"))
    return best


def oracle_frequency(
    alpha: Episode,
    sequence: EventSequence,
    mode: FrequencyMode | str,
    t_x: int | None = None,
    cap: int = DEFAULT_OCCURRENCE_CAP,
) -> int:
    """The frequency of `alpha` under `mode`, computed definitionally."""
    mode = FrequencyMode(mode)
    CountRequest((alpha,), mode, t_x)  # reuse the t_x validity rules
    if len(sequence) == 0:
        return 0
    if mode is FrequencyMode.WINDOWS:
        occs = enumerate_occurrences(alpha, sequence, cap)
        fits = [(o.times[0], o.times[-1]) for o in occs]
        total = 0
        for t_s in range(sequence.t_first - t_x, sequence.t_last + 1):
            t_e = t_s + t_x
            if any(t_s <= a and b <= t_e for a, b in fits):
                total += 1
        return total
    if mode is FrequencyMode.MINIMAL:
        return len(minimal_windows(alpha, sequence, cap))
    if mode is FrequencyMode.MINIMAL_EXPIRY:
        return sum(1 for w in minimal_windows(alpha, sequence, cap) if w.width <= t_x)
    if mode is FrequencyMode.HEAD:
        return sum(1 for o in enumerate_et(alpha, sequence) if o.span <= t_x)
    if mode is FrequencyMode.ALL_OCCURRENCES:
        return len(enumerate_occurrences(alpha, sequence, cap))
    occs = enumerate_occurrences(alpha, sequence, cap)
    if mode is FrequencyMode.NON_OVERLAPPED:
        return _max_chain(occs, _non_overlapped_after)
    if mode is FrequencyMode.NON_OVERLAPPED_INNERMOST:
        return _max_chain(occs, _non_overlapped_after)
    if mode is FrequencyMode.NON_OVERLAPPED_EXPIRY:
        within = [o for o in occs if o.span <= t_x]
        return _max_chain(within, _non_overlapped_after)
    if mode is FrequencyMode.NON_INTERLEAVED:
        return _max_chain(occs, _non_interleaved_after)
    if mode is FrequencyMode.DISTINCT:
        return _max_disjoint(occs)
    raise ConfigurationError(f"unhandled mode {mode}")  # pragma: no cover


def oracle_total(
    alpha: Episode,
    sequence: EventSequence,
    t_x: int,
    cap: int = DEFAULT_OCCURRENCE_CAP,
) -> int:
    """Minimum head frequency over all subepisodes of alpha (alpha included)."""
    return min(
        oracle_frequency(beta, sequence, FrequencyMode.HEAD, t_x, cap)
        for beta in all_subepisodes(alpha)
    )


def _engine_trace(
    alpha: Episode, sequence: EventSequence, mode: FrequencyMode, t_x: int | None = None
) -> list[tuple[int, ...]]:
    report = count(CountRequest((alpha,), mode, t_x), sequence, trace=True)
    return report.occurrences(alpha)


def check_lemma_suite(
    sequence: EventSequence, alpha: Episode, t_x: int | None = None
) -> dict[str, bool]:
    """Exhaustively verify the correctness facts behind the counters.

    Assumes distinct event timestamps (the regime the facts are stated
    for).  Returns one pass/fail entry per fact rather than raising, so a
    caller can report every failure of an instance at once.

    Checks: earliest-transiting domination; the minimality criterion for
    ET occurrences (both directions); that the minimal-window counter
    counts exactly the ET occurrences ending strictly before their
    successor; maximality of the expiry-bounded non-overlapped counter
    and the shape of its tracked set; the positional structure of the
    non-interleaved tracked set; the end-time correspondence between the
    one-automaton and innermost non-overlapped counters; and that the
    expiry counter at full span reduces to the innermost one.
    """
    results: dict[str, bool] = {}
    if t_x is None:
        t_x = sequence.span if len(sequence) else 0
    occs = enumerate_occurrences(alpha, sequence)
    ets = enumerate_et(alpha, sequence)
    n_nodes = len(alpha)

    # ET domination: an ET occurrence lexicographically before any other
    # occurrence is componentwise no later than it.
    ok = True
    for h in ets:
        for hp in occs:
            if h.times < hp.times and any(a > b for a, b in zip(h.times, hp.times)):
                ok = False
    results["et_domination"] = ok

    # An ET occurrence is non-minimal exactly when its successor ET
    # occurrence ends at the same time.
    minimal = {(w.t_s, w.t_e) for w in minimal_windows(alpha, sequence)}
    ok = True
    for i, h in enumerate(ets):
        is_min = (h.times[0], h.times[-1]) in minimal
        same_end = i + 1 < len(ets) and ets[i + 1].times[-1] == h.times[-1]
        if is_min == same_end:
            ok = False
    results["minimality_criterion"] = ok

    # The minimal-window counter tracks exactly the ET occurrences whose
    # successor ends strictly later.
    expected_mo = [
        h.times
        for i, h in enumerate(ets)
        if i + 1 == len(ets) or ets[i + 1].times[-1] > h.times[-1]
    ]
    results["minimal_counter_tracks"] = (
        _engine_trace(alpha, sequence, FrequencyMode.MINIMAL) == expected_mo
    )

    # Maximality of the expiry-bounded non-overlapped count.
    within = [o for o in occs if o.span <= t_x]
    nox = _engine_trace(alpha, sequence, FrequencyMode.NON_OVERLAPPED_EXPIRY, t_x)
    results["expiry_maximality"] = len(nox) == _max_chain(within, _non_overlapped_after)

    # Tracked shape of the expiry-bounded counter: each element is the
    # first expiry-satisfying minimal occurrence starting after the
    # previous one ends, and none remains beyond the last.
    min_occs = [
        h for h in ets if (h.times[0], h.times[-1]) in minimal and h.span <= t_x
    ]
    expected_nox: list[tuple[int, ...]] = []
    horizon = None
    for h in min_occs:
        if horizon is None or h.times[0] > horizon:
            expected_nox.append(h.times)
            horizon = h.times[-1]
    results["expiry_tracked_shape"] = nox == expected_nox

    # Positional structure of the non-interleaved tracked set.
    ni = _engine_trace(alpha, sequence, FrequencyMode.NON_INTERLEAVED)
    ok = True
    if ni:
        if n_nodes == 1:
            wanted = [
                (t,)
                for tid, t in zip(sequence.types, sequence.times)
                if tid == alpha.nodes[0]
            ]
            ok = ni == wanted
        else:
            first = min(occs, key=Occurrence.sort_key) if occs else None
            ok = first is not None and ni[0] == first.times
            for prev, cur in zip(ni, ni[1:]):
                for j in range(n_nodes - 1):
                    ok = ok and cur[j] == _first_at_or_after(
                        sequence, alpha.nodes[j], prev[j + 1]
                    )
                ok = ok and cur[n_nodes - 1] == _first_at_or_after(
                    sequence, alpha.nodes[n_nodes - 1], cur[n_nodes - 2] + 1
                )
        last_vec = ni[-1]
        for o in occs:
            if o.times != last_vec and all(
                o.times[j] >= last_vec[j + 1] for j in range(n_nodes - 1)
            ):
                ok = False
    elif occs:
        ok = False
    results["interleave_tracked_shape"] = ok

    # End-time correspondence between the one-automaton non-overlapped
    # counter and the innermost variant.
    no = _engine_trace(alpha, sequence, FrequencyMode.NON_OVERLAPPED)
    noi = _engine_trace(alpha, sequence, FrequencyMode.NON_OVERLAPPED_INNERMOST)
    results["innermost_end_alignment"] = [v[-1] for v in no] == [v[-1] for v in noi]

    # With the bound at full span the expiry counter reduces to the
    # innermost counter.
    full = _engine_trace(
        alpha, sequence, FrequencyMode.NON_OVERLAPPED_EXPIRY, sequence.span if len(sequence) else 0
    )
    results["full_span_reduction"] = full == noi

    return results


def _first_at_or_after(sequence: EventSequence, tid: int, t: int) -> int | None:
    for typ, time in zip(sequence.types, sequence.times):
        if typ == tid and time >= t:
            return time
    return None

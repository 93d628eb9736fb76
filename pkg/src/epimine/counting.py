"""One-pass automaton engine for every episode-frequency definition.

A single generic loop drives recognizers for a whole candidate set over
the event stream.  Per-mode behaviour is factored into five rule slots,
chosen by a Policy row: whether a waiting recognizer may transit, whether
a transit leaves a copy behind, whether two recognizers reaching the same
state are merged (newest kept), whether a completed occurrence counts
(always, or only when its span fits the expiry/window bound), and whether
a counted completion retires the episode's whole pool.

Events sharing a timestamp are processed as one batch: a recognizer may
consume at most one event per batch (two same-time events can never
belong to one occurrence), merging/retiring is resolved once per batch,
and for the non-interleaved mode a transition that left two recognizers
in one state is undone before the next batch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .automata import Automaton, WaitsIndex
from .core import (
    CapacityError,
    ConfigurationError,
    Episode,
    EventSequence,
    Window,
)

DEFAULT_AUTOMATON_CAP = 1_000_000


class FrequencyMode(str, enum.Enum):
    """The supported frequency definitions (CLI tokens as values)."""

    WINDOWS = "wb"
    MINIMAL = "mo"
    MINIMAL_EXPIRY = "mo-x"
    NON_OVERLAPPED = "no"
    NON_OVERLAPPED_INNERMOST = "no-i"
    NON_OVERLAPPED_EXPIRY = "no-x"
    NON_INTERLEAVED = "ni"
    DISTINCT = "do"
    ALL_OCCURRENCES = "ao"
    HEAD = "hd"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class TransitRule(enum.Enum):
    ALWAYS = "always"
    # distinct occurrences: one transition per event, oldest eligible wins
    OLDEST_ELIGIBLE = "oldest-eligible"
    # non-interleaved: transit freely inside a batch, undo coalescing after
    FREE_WITH_REVERT = "free-with-revert"


class CopyRule(enum.Enum):
    NEVER = "never"
    ON_START_EXIT = "start-exit"
    ALWAYS = "always"


@dataclass(frozen=True)
class Policy:
    """One row of rule selections that specializes the generic engine."""

    transit: TransitRule
    copy: CopyRule
    join: bool
    span_bounded: bool  # completion counts only when span <= t_x
    retire_all: bool  # a counted completion clears the episode's pool
    windows_increment: bool  # frequency grows by the sliding-window rule
    needs_expiry: bool  # t_x is part of the mode's definition


_A, _S = TransitRule.ALWAYS, CopyRule.ON_START_EXIT

_POLICIES: dict[FrequencyMode, Policy] = {
    FrequencyMode.WINDOWS: Policy(_A, _S, True, True, False, True, True),
    FrequencyMode.MINIMAL: Policy(_A, _S, True, False, False, False, False),
    FrequencyMode.MINIMAL_EXPIRY: Policy(_A, _S, True, True, False, False, True),
    FrequencyMode.NON_OVERLAPPED: Policy(_A, CopyRule.NEVER, False, False, True, False, False),
    FrequencyMode.NON_OVERLAPPED_INNERMOST: Policy(_A, _S, True, False, True, False, False),
    FrequencyMode.NON_OVERLAPPED_EXPIRY: Policy(_A, _S, True, True, True, False, True),
    FrequencyMode.NON_INTERLEAVED: Policy(
        TransitRule.FREE_WITH_REVERT, _S, False, False, False, False, False
    ),
    FrequencyMode.DISTINCT: Policy(
        TransitRule.OLDEST_ELIGIBLE, _S, False, False, False, False, False
    ),
    FrequencyMode.ALL_OCCURRENCES: Policy(
        _A, CopyRule.ALWAYS, False, False, False, False, False
    ),
    FrequencyMode.HEAD: Policy(_A, _S, False, True, False, False, True),
}


def policy_for(mode: FrequencyMode) -> Policy:
    """The rule row for `mode`."""
    return _POLICIES[FrequencyMode(mode)]


@dataclass(frozen=True)
class CountRequest:
    """What to count: candidate episodes, a mode, and its span bound.

    `t_x` is the window width for the windows-based and head counts and
    the expiry bound for the expiry-constrained modes; it is required
    there and rejected everywhere else (no algorithm counts
    non-interleaved or distinct occurrences under an expiry constraint).
    """

    candidates: tuple[Episode, ...]
    mode: FrequencyMode
    t_x: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", FrequencyMode(self.mode))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        pol = policy_for(self.mode)
        if pol.needs_expiry:
            if self.t_x is None:
                raise ConfigurationError(
                    f"mode {self.mode.value} requires a window/expiry bound (t_x)"
                )
            if self.t_x < 0:
                raise ConfigurationError(f"t_x must be >= 0, got {self.t_x}")
        elif self.t_x is not None:
            if self.mode in (FrequencyMode.NON_INTERLEAVED, FrequencyMode.DISTINCT):
                raise ConfigurationError(
                    f"expiry not supported for {self.mode.value}: no algorithm counts "
                    "non-interleaved or distinct occurrences under an expiry constraint"
                )
            raise ConfigurationError(
                f"mode {self.mode.value} does not take a window/expiry bound"
            )


@dataclass
class FrequencyReport:
    """Counts per candidate, plus counted occurrences when tracing."""

    mode: FrequencyMode
    t_x: int | None
    episodes: tuple[Episode, ...]
    counts: dict[Episode, int]
    traces: dict[Episode, list[tuple[int, ...]]] | None = None

    def frequency(self, episode: Episode) -> int:
        return self.counts[episode]

    def occurrences(self, episode: Episode) -> list[tuple[int, ...]]:
        if self.traces is None:
            raise ValueError("run was not traced")
        return self.traces[episode]


def wb_increment(prev: Window | None, cur: Window, t_x: int) -> int:
    """Sliding-window count contributed by a new minimal window.

    Width-`t_x` windows containing `cur` start in [cur.t_e - t_x, cur.t_s].
    When the previously counted minimal window already lies inside the
    first of those, only the starts after it are new; otherwise the whole
    range is new.
    """
    if cur.width > t_x:
        raise ValueError(f"minimal window {cur} wider than t_x={t_x}")
    if prev is not None and prev.t_s >= cur.t_e - t_x:
        return cur.t_s - prev.t_s
    return t_x - cur.width + 1


class _EpisodeState:
    """Mutable per-candidate bookkeeping for one counting pass."""

    __slots__ = (
        "episode",
        "nodes",
        "n_nodes",
        "freq",
        "traces",
        "live",
        "dead",
        "free",
        "births",
        "prev_window",
        "touched",
        "event_seq",
    )

    def __init__(self, episode: Episode):
        self.episode = episode
        self.nodes = episode.nodes
        self.n_nodes = len(episode.nodes)
        self.freq = 0
        self.traces: list[tuple[int, ...]] = []
        self.live: list[Automaton] = []
        self.dead = 0
        self.free: list[Automaton] = []
        self.births = 0
        self.prev_window: Window | None = None
        self.touched = False
        self.event_seq = 0


class CountingRun:
    """One pass of the unified algorithm over one event sequence.

    Normally driven to completion through `count()`; `advance()` processes
    a single timestamp batch so tests (and curious callers) can observe
    the pool between batches via `live_automata()`.
    """

    def __init__(
        self,
        sequence: EventSequence,
        request: CountRequest,
        *,
        trace: bool = False,
        automaton_cap: int = DEFAULT_AUTOMATON_CAP,
    ):
        self.sequence = sequence
        self.request = request
        self.policy = policy_for(request.mode)
        self.trace = trace
        self.automaton_cap = automaton_cap
        self._t_x = request.t_x
        self._waits = WaitsIndex()
        self._states: dict[Episode, _EpisodeState] = {}
        self._order: list[_EpisodeState] = []
        for ep in request.candidates:
            if ep not in self._states:
                st = _EpisodeState(ep)
                self._states[ep] = st
                self._order.append(st)
        self._cursor = 0
        self._batch_seq = 0
        self._event_seq = 0
        self._live_total = 0
        self._touched: list[_EpisodeState] = []
        for st in self._order:
            self._spawn_start(st)

    # -- pool management ------------------------------------------------

    def _new_automaton(self, st: _EpisodeState) -> Automaton:
        st.births += 1
        if st.free:
            a = st.free.pop().reset(st.births)
        else:
            a = Automaton(st.episode, st.births)
            a.owner = st
        st.live.append(a)
        self._live_total += 1
        if self._live_total > self.automaton_cap:
            raise CapacityError(
                f"live automaton cap of {self.automaton_cap} exceeded "
                f"(mode {self.request.mode.value})"
            )
        return a

    def _spawn_start(self, st: _EpisodeState) -> Automaton:
        a = self._new_automaton(st)
        self._waits.add(a)
        return a

    def _spawn_copy(self, st: _EpisodeState, src: Automaton) -> Automaton:
        c = self._new_automaton(st)
        c.state = src.state
        c.trail_indices.extend(src.trail_indices)
        c.trail_times.extend(src.trail_times)
        self._waits.add(c)
        return c

    def _retire(self, st: _EpisodeState, a: Automaton, in_waits: bool) -> None:
        a.alive = False
        if in_waits and a.state < st.n_nodes:
            self._waits.remove(a, st.nodes[a.state])
        self._live_total -= 1
        st.dead += 1
        # Batch-resolved modes compact in _finalize_batch; compacting here
        # would rebind st.live under the sweeps iterating it.
        if st.dead > 64 and st.dead * 2 > len(st.live) and not st.touched:
            self._compact(st)

    def _compact(self, st: _EpisodeState) -> None:
        keep: list[Automaton] = []
        for a in st.live:
            if a.alive:
                keep.append(a)
            else:
                st.free.append(a)
        st.live = keep
        st.dead = 0

    def _mark_touched(self, st: _EpisodeState) -> None:
        if not st.touched:
            st.touched = True
            self._touched.append(st)

    # -- the event loop --------------------------------------------------

    def advance(self) -> bool:
        """Process the next same-timestamp batch; False once exhausted."""
        times = self.sequence.times
        types = self.sequence.types
        n = len(times)
        i = self._cursor
        if i >= n:
            return False
        t = times[i]
        j = i + 1
        while j < n and times[j] == t:
            j += 1
        self._cursor = j
        self._batch_seq += 1

        pol = self.policy
        waits = self._waits
        rule = pol.transit
        mark_transits = pol.join or rule is TransitRule.FREE_WITH_REVERT

        for k in range(i, j):
            self._event_seq += 1
            event_seq = self._event_seq
            queue = waits.waiting(types[k])
            if not queue:
                continue
            tid = types[k]
            for a in queue[:]:
                # Entries can be stale within one event (the automaton moved
                # or completed on an earlier index of this snapshot), and an
                # automaton may consume at most one event per timestamp.
                if not a.alive or a.state >= a.owner.n_nodes or a.owner.nodes[a.state] != tid:
                    continue
                if a.trail_times and a.trail_times[-1] >= t:
                    continue
                st = a.owner
                if rule is TransitRule.OLDEST_ELIGIBLE:
                    if st.event_seq == event_seq:
                        continue
                    st.event_seq = event_seq
                self._transit(st, a, k, t, tid, mark_transits)

        for st in self._touched:
            self._finalize_batch(st)
            st.touched = False
        self._touched.clear()
        return True

    def _transit(
        self,
        st: _EpisodeState,
        a: Automaton,
        index: int,
        t: int,
        tid: int,
        mark: bool,
    ) -> None:
        pol = self.policy
        copy_rule = pol.copy
        if copy_rule is CopyRule.ALWAYS or (
            copy_rule is CopyRule.ON_START_EXIT and a.state == 0
        ):
            a.batch_copy = self._spawn_copy(st, a)
        else:
            a.batch_copy = None
        self._waits.remove(a, tid)
        a.state += 1
        a.trail_indices.append(index)
        a.trail_times.append(t)
        a.batch_seq = self._batch_seq
        if a.state == st.n_nodes:
            if pol.join or pol.retire_all or pol.transit is TransitRule.FREE_WITH_REVERT:
                self._mark_touched(st)  # completion resolved at batch end
            else:
                self._complete_now(st, a)
        else:
            self._waits.add(a)
            if mark:
                self._mark_touched(st)

    def _complete_now(self, st: _EpisodeState, a: Automaton) -> None:
        if not self.policy.span_bounded or a.span() <= self._t_x:
            st.freq += 1
            if self.trace:
                st.traces.append(tuple(a.trail_times))
        self._retire(st, a, in_waits=False)

    # -- batch resolution -------------------------------------------------

    def _finalize_batch(self, st: _EpisodeState) -> None:
        pol = self.policy
        if pol.join:
            self._join_sweep(st)
        elif pol.transit is TransitRule.FREE_WITH_REVERT:
            self._revert_coalesced(st)

        finished = [a for a in st.live if a.alive and a.state == st.n_nodes]
        if not finished:
            self._compact(st)
            return
        finished.sort(key=lambda a: a.birth)
        for a in finished:
            counted = not pol.span_bounded or a.span() <= self._t_x
            if counted:
                if pol.windows_increment:
                    cur = Window(a.trail_times[0], a.trail_times[-1])
                    st.freq += wb_increment(st.prev_window, cur, self._t_x)
                    st.prev_window = cur
                else:
                    st.freq += 1
                if self.trace:
                    st.traces.append(tuple(a.trail_times))
            self._retire(st, a, in_waits=False)
            if pol.retire_all and counted:
                for b in tuple(st.live):
                    if b.alive:
                        self._retire(st, b, in_waits=True)
                self._spawn_start(st)
        self._compact(st)

    def _join_sweep(self, st: _EpisodeState) -> None:
        # Two recognizers in one state track occurrences ending together;
        # only the newest (innermost) can still be minimal, so older ones
        # retire once per batch.
        by_state: dict[int, Automaton] = {}
        doomed: list[Automaton] = []
        for a in st.live:
            if not a.alive:
                continue
            other = by_state.get(a.state)
            if other is None:
                by_state[a.state] = a
            elif other.birth < a.birth:
                doomed.append(other)
                by_state[a.state] = a
            else:
                doomed.append(a)
        for a in doomed:
            self._retire(st, a, in_waits=True)

    def _revert_coalesced(self, st: _EpisodeState) -> None:
        # Undo in-batch transitions that left two live recognizers in one
        # state (accepting state excluded: at most one entry per batch can
        # reach it for multi-node episodes, and 1-node completions are all
        # legitimately counted).
        batch = self._batch_seq
        while True:
            by_state: dict[int, list[Automaton]] = {}
            for a in st.live:
                if a.alive and a.state < st.n_nodes:
                    by_state.setdefault(a.state, []).append(a)
            coalesced = [s for s, group in by_state.items() if len(group) > 1]
            if not coalesced:
                return
            state = max(coalesced)
            z = max(by_state[state], key=lambda a: a.birth)
            assert z.batch_seq == batch, "only an in-batch transition can coalesce"
            if z.batch_copy is not None and z.batch_copy.alive:
                self._delete_copy_chain(st, z.batch_copy, batch)
            self._waits.remove(z, st.nodes[z.state])
            z.state -= 1
            z.trail_indices.pop()
            z.trail_times.pop()
            z.batch_seq = 0
            z.batch_copy = None
            self._waits.add(z)

    def _delete_copy_chain(self, st: _EpisodeState, c: Automaton, batch: int) -> None:
        # A reverted transition never happened, so neither did the copy it
        # spawned -- nor anything that copy spawned inside the same batch.
        if c.batch_seq == batch and c.batch_copy is not None and c.batch_copy.alive:
            self._delete_copy_chain(st, c.batch_copy, batch)
        assert c.state < st.n_nodes, "an in-batch copy cannot have completed"
        self._retire(st, c, in_waits=True)

    # -- results -----------------------------------------------------------

    def live_automata(self, episode: Episode) -> list[Automaton]:
        """Live recognizers for `episode`, oldest first (for inspection)."""
        st = self._states[episode]
        return sorted((a for a in st.live if a.alive), key=lambda a: a.birth)

    def run(self) -> FrequencyReport:
        while self.advance():
            pass
        return self.report()

    def report(self) -> FrequencyReport:
        counts = {st.episode: st.freq for st in self._order}
        traces = {st.episode: list(st.traces) for st in self._order} if self.trace else None
        return FrequencyReport(
            mode=self.request.mode,
            t_x=self.request.t_x,
            episodes=tuple(st.episode for st in self._order),
            counts=counts,
            traces=traces,
        )


def count(
    request: CountRequest,
    sequence: EventSequence,
    *,
    trace: bool = False,
    automaton_cap: int = DEFAULT_AUTOMATON_CAP,
) -> FrequencyReport:
    """Count every candidate's frequency in one pass over `sequence`."""
    return CountingRun(
        sequence, request, trace=trace, automaton_cap=automaton_cap
    ).run()

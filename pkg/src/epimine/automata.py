"""Per-episode recognizers and the waits index that drives many of them.

One recognizer instance walks a single candidate occurrence: in state j
it has accepted the episode's first j types and waits for type j+1; the
state equal to the episode length is accepting.  A counting pass keeps
many recognizers alive at once (across candidates) and routes each event
to the ones able to accept it through a waits index keyed by event type.

Recognizers are plain mutable objects confined to one counting pass; the
pass recycles retired instances to keep the event loop allocation-free.
"""

from __future__ import annotations

import itertools

from .core import Episode, Event, Occurrence

_fresh_births = itertools.count(1)


class Automaton:
    """One recognizer instance for a serial episode.

    `state` is in [0, N]; the trail records the (event index, time) of
    every transition made so far, so an accepting automaton carries a
    complete occurrence.  `birth` is a monotone counter: within one
    counting pass the i-th recognizer initialized for an episode has the
    i-th smallest birth, which is what the oldest/newest tie rules of the
    counting policies key on.
    """

    __slots__ = (
        "episode",
        "state",
        "trail_indices",
        "trail_times",
        "birth",
        "alive",
        # bookkeeping slots owned by the counting engine
        "owner",
        "batch_seq",
        "batch_copy",
    )

    def __init__(self, episode: Episode, birth: int):
        self.episode = episode
        self.state = 0
        self.trail_indices: list[int] = []
        self.trail_times: list[int] = []
        self.birth = birth
        self.alive = True
        self.owner = None
        self.batch_seq = 0
        self.batch_copy: Automaton | None = None

    @property
    def waiting_for(self) -> int | None:
        """Type id this automaton can accept next; None once accepting."""
        if self.state >= len(self.episode.nodes):
            return None
        return self.episode.nodes[self.state]

    @property
    def accepting(self) -> bool:
        return self.state == len(self.episode.nodes)

    @property
    def last_time(self) -> int:
        """Time of the most recent transition (0 before any)."""
        return self.trail_times[-1] if self.trail_times else 0

    def can_step(self, event: Event) -> bool:
        return (
            self.waiting_for == event.event_type
            and (not self.trail_times or event.time > self.trail_times[-1])
        )

    def step(self, event: Event, index: int) -> Automaton:
        """Advance one state on `event` (stored in the sequence at `index`).

        Raises ValueError when the event type is not the one waited for or
        its time does not strictly exceed the last transition time; both
        are caller bugs, not data conditions.
        """
        expected = self.waiting_for
        if expected is None:
            raise ValueError("automaton is already in its accepting state")
        if event.event_type != expected:
            raise ValueError(
                f"automaton waits for type {expected}, got {event.event_type}"
            )
        if self.trail_times and event.time <= self.trail_times[-1]:
            raise ValueError(
                f"transition time {event.time} not after previous {self.trail_times[-1]}"
            )
        self.state += 1
        self.trail_indices.append(index)
        self.trail_times.append(event.time)
        return self

    def occurrence(self) -> Occurrence:
        """The tracked occurrence; only valid in the accepting state."""
        if not self.accepting:
            raise ValueError(f"automaton in state {self.state} has not accepted yet")
        return Occurrence(tuple(self.trail_indices), tuple(self.trail_times))

    def reset(self, birth: int) -> Automaton:
        self.state = 0
        self.trail_indices.clear()
        self.trail_times.clear()
        self.birth = birth
        self.alive = True
        self.batch_seq = 0
        self.batch_copy = None
        return self

    def span(self) -> int:
        """Time between the first and the most recent transition."""
        if not self.trail_times:
            raise ValueError("automaton has made no transitions")
        return self.trail_times[-1] - self.trail_times[0]

    def __repr__(self) -> str:
        return (
            f"Automaton(nodes={self.episode.nodes}, state={self.state},"
            f" trail={self.trail_times}, birth={self.birth})"
        )


def fresh(episode: Episode) -> Automaton:
    """A new start-state automaton with a globally monotone birth counter."""
    return Automaton(episode, next(_fresh_births))


class WaitsIndex:
    """Map each event type to the automata currently able to accept it.

    Collections are kept ordered by birth (oldest first).  An automaton in
    state j < N is filed under its episode's (j+1)-th type; accepting
    automata are filed nowhere.
    """

    __slots__ = ("_by_type",)

    def __init__(self):
        self._by_type: dict[int, list[Automaton]] = {}

    def add(self, automaton: Automaton) -> None:
        tid = automaton.waiting_for
        if tid is None:
            return
        lst = self._by_type.setdefault(tid, [])
        # Births are usually appended in increasing order; walk back only
        # when an older automaton re-enters a list behind younger ones.
        if lst and lst[-1].birth > automaton.birth:
            pos = len(lst)
            while pos > 0 and lst[pos - 1].birth > automaton.birth:
                pos -= 1
            lst.insert(pos, automaton)
        else:
            lst.append(automaton)

    def remove(self, automaton: Automaton, tid: int) -> None:
        lst = self._by_type.get(tid)
        if lst is not None:
            try:
                lst.remove(automaton)
            except ValueError:
                pass

    def waiting(self, tid: int) -> list[Automaton]:
        """The current collection for `tid` (shared, do not mutate)."""
        return self._by_type.get(tid, _EMPTY)

    def __contains__(self, automaton: Automaton) -> bool:
        tid = automaton.waiting_for
        return tid is not None and automaton in self._by_type.get(tid, _EMPTY)


_EMPTY: list[Automaton] = []

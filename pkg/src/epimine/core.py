"""Domain types and pure episode/occurrence algebra.

An event sequence is a time-ordered stream of (event-type, timestamp)
pairs over a finite alphabet.  A serial episode is an ordered pattern of
event types; an occurrence maps the episode's nodes to events of the
sequence with strictly increasing timestamps.  Everything downstream
(recognizers, counters, the brute-force oracle, the miner) is built on
the types in this module.

Symbols are interned to dense integer ids at ingestion so that all inner
loops compare ints, never strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

EPISODE_ARROW = "->"


class ParseError(ValueError):
    """Malformed textual input (episode notation or event log)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigurationError(ValueError):
    """A request combined options that the algorithms do not support."""


class CapacityError(RuntimeError):
    """A combinatorial safety cap was exceeded."""


class Alphabet:
    """Two-way mapping between symbol names and dense integer ids.

    Ids are assigned in first-seen order and never change, so an id is a
    stable handle for a symbol within one alphabet instance.
    """

    __slots__ = ("_names", "_ids")

    def __init__(self, symbols: Iterable[str] = ()):
        self._names: list[str] = []
        self._ids: dict[str, int] = {}
        for sym in symbols:
            self.intern(sym)

    def intern(self, symbol: str) -> int:
        """Return the id for `symbol`, assigning a new one if unseen."""
        tid = self._ids.get(symbol)
        if tid is None:
            tid = len(self._names)
            self._ids[symbol] = tid
            self._names.append(symbol)
        return tid

    def id_of(self, symbol: str) -> int:
        return self._ids[symbol]

    def name(self, tid: int) -> str:
        return self._names[tid]

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._ids

    def ids(self) -> range:
        return range(len(self._names))

    def __repr__(self) -> str:
        return f"Alphabet({self._names!r})"


@dataclass(frozen=True)
class Event:
    """One timestamped event; `event_type` is an interned alphabet id."""

    event_type: int
    time: int


class EventSequence:
    """The input stream: events with nondecreasing, positive timestamps.

    Stored as parallel `types` / `times` lists plus the alphabet that
    interned the type ids.  Instances are immutable by convention and can
    be shared freely across counting passes.
    """

    __slots__ = ("alphabet", "types", "times")

    def __init__(self, alphabet: Alphabet, types: list[int], times: list[int]):
        if len(types) != len(times):
            raise ValueError("types and times must have equal length")
        prev = None
        for t in times:
            if t < 1:
                raise ValueError(f"timestamps must be positive, got {t}")
            if prev is not None and t < prev:
                raise ValueError(f"timestamps must be nondecreasing ({prev} then {t})")
            prev = t
        self.alphabet = alphabet
        self.types = types
        self.times = times

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[str, int]], alphabet: Alphabet | None = None
    ) -> EventSequence:
        """Build a sequence from (symbol, time) pairs, interning symbols."""
        alphabet = alphabet if alphabet is not None else Alphabet()
        types: list[int] = []
        times: list[int] = []
        for sym, t in pairs:
            types.append(alphabet.intern(sym))
            times.append(t)
        return cls(alphabet, types, times)

    def __len__(self) -> int:
        return len(self.types)

    def __getitem__(self, i: int) -> Event:
        return Event(self.types[i], self.times[i])

    def __iter__(self) -> Iterator[Event]:
        for tid, t in zip(self.types, self.times):
            yield Event(tid, t)

    @property
    def t_first(self) -> int:
        return self.times[0]

    @property
    def t_last(self) -> int:
        return self.times[-1]

    @property
    def span(self) -> int:
        """Total time span t_n - t_1 (0 for sequences shorter than 2)."""
        return self.times[-1] - self.times[0] if self.times else 0

    def pairs(self) -> list[tuple[str, int]]:
        name = self.alphabet.name
        return [(name(tid), t) for tid, t in zip(self.types, self.times)]

    def __repr__(self) -> str:
        return f"EventSequence(n={len(self)})"


@dataclass(frozen=True)
class Episode:
    """A serial episode: an ordered tuple of event-type ids, length >= 1.

    Repeated types are allowed; `injective` tells whether all types are
    distinct.  Equality and hashing are by node tuple, so episodes are
    usable as dict keys across counting passes.
    """

    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) < 1:
            raise ValueError("an episode needs at least one node")

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def injective(self) -> bool:
        return len(set(self.nodes)) == len(self.nodes)

    def prefix(self) -> Episode:
        """The (N-1)-node episode dropping the last node."""
        if len(self.nodes) < 2:
            raise ValueError("a 1-node episode has no proper prefix")
        return Episode(self.nodes[:-1])

    def suffix(self) -> Episode:
        """The (N-1)-node episode dropping the first node."""
        if len(self.nodes) < 2:
            raise ValueError("a 1-node episode has no proper suffix")
        return Episode(self.nodes[1:])

    def label(self, alphabet: Alphabet) -> str:
        return EPISODE_ARROW.join(alphabet.name(tid) for tid in self.nodes)


def parse_episode(text: str, alphabet: Alphabet) -> Episode:
    """Parse arrow notation like "A->B->C" into an episode.

    Tokens are interned into `alphabet` (symbols absent from the data are
    legal; they simply never match).  Surrounding whitespace per token is
    ignored.  Empty input or an empty token is a ParseError naming the
    offending token position.
    """
    if not text.strip():
        raise ParseError("empty episode")
    tokens = [tok.strip() for tok in text.split(EPISODE_ARROW)]
    for pos, tok in enumerate(tokens, start=1):
        if not tok:
            raise ParseError(f"empty episode token at position {pos} in {text!r}")
    return Episode(tuple(alphabet.intern(tok) for tok in tokens))


@dataclass(frozen=True)
class Window:
    """A closed time interval [t_s, t_e]."""

    t_s: int
    t_e: int

    def __post_init__(self):
        if self.t_s > self.t_e:
            raise ValueError(f"window start {self.t_s} after end {self.t_e}")

    @property
    def width(self) -> int:
        return self.t_e - self.t_s

    def contains(self, other: Window) -> bool:
        return self.t_s <= other.t_s and other.t_e <= self.t_e

    def properly_contains(self, other: Window) -> bool:
        return self.contains(other) and (self.t_s, self.t_e) != (other.t_s, other.t_e)


@dataclass(frozen=True)
class Occurrence:
    """A match of an episode: event indices plus their time vector.

    Times are strictly increasing (two events at the same timestamp can
    never belong to one serial-episode occurrence).  Indices are kept so
    that event-sharing between occurrences stays decidable when several
    events share a timestamp.
    """

    indices: tuple[int, ...]
    times: tuple[int, ...]

    def __post_init__(self):
        if len(self.indices) != len(self.times):
            raise ValueError("indices and times must have equal length")
        for a, b in zip(self.times, self.times[1:]):
            if a >= b:
                raise ValueError(f"occurrence times must strictly increase, got {self.times}")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def span(self) -> int:
        return self.times[-1] - self.times[0]

    @property
    def window(self) -> Window:
        return Window(self.times[0], self.times[-1])

    def sort_key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        # Lexicographic on times; indices only break exact-time ties so
        # that sorting stays deterministic under duplicate timestamps.
        return (self.times, self.indices)


def lex_compare(h1: Occurrence, h2: Occurrence) -> int:
    """Order two occurrences by their time vectors: -1, 0 or +1.

    The first differing position decides; occurrences with identical time
    vectors compare equal even if they use different events.
    """
    if h1.times < h2.times:
        return -1
    if h1.times > h2.times:
        return 1
    return 0


def is_subepisode(beta: Episode, alpha: Episode) -> bool:
    """True iff beta's types form a (not necessarily contiguous) subsequence of alpha's."""
    it = iter(alpha.nodes)
    return all(tid in it for tid in beta.nodes)


def subepisodes(alpha: Episode, k: int) -> set[Episode]:
    """All distinct k-node subepisodes of alpha, deduplicated as type sequences."""
    n = len(alpha)
    if not 1 <= k <= n:
        raise ValueError(f"subepisode size {k} out of range 1..{n}")
    from itertools import combinations

    return {Episode(tuple(alpha.nodes[i] for i in picks)) for picks in combinations(range(n), k)}


def all_subepisodes(alpha: Episode) -> set[Episode]:
    """Every subepisode of alpha of every size, including alpha itself."""
    out: set[Episode] = set()
    for k in range(1, len(alpha) + 1):
        out |= subepisodes(alpha, k)
    return out

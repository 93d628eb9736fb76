"""Event-log ingestion, canonical emission, and synthetic data generation.

The interchange format is line-oriented CSV: one "<time>,<event-type>"
per line, times nondecreasing, '#' starting a comment line.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from typing import Iterable

from .core import Alphabet, ConfigurationError, Episode, EventSequence, ParseError


def parse_events(lines: Iterable[str], alphabet: Alphabet | None = None) -> EventSequence:
    """Parse "<time>,<event-type>" lines into an event sequence.

    Blank lines and lines starting with '#' are skipped.  Errors carry
    the 1-based line number: non-integer or non-positive time, a time
    below the previous one, or an empty event type.
    """
    alphabet = alphabet if alphabet is not None else Alphabet()
    types: list[int] = []
    times: list[int] = []
    prev: int | None = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        time_text, sep, symbol = line.partition(",")
        if not sep:
            raise ParseError(f"expected '<time>,<event-type>', got {line!r}", lineno)
        try:
            t = int(time_text.strip())
        except ValueError:
            raise ParseError(f"non-integer timestamp {time_text.strip()!r}", lineno) from None
        if t < 1:
            raise ParseError(f"timestamp must be positive, got {t}", lineno)
        if prev is not None and t < prev:
            raise ParseError(f"decreasing timestamp at line {lineno}", lineno)
        symbol = symbol.strip()
        if not symbol:
            raise ParseError("empty event type", lineno)
        types.append(alphabet.intern(symbol))
        times.append(t)
        prev = t
    return EventSequence(alphabet, types, times)


def emit_events(sequence: EventSequence) -> str:
    """Canonical, newline-terminated rendering; parse(emit(s)) == s."""
    name = sequence.alphabet.name
    return "".join(
        f"{t},{name(tid)}\n" for tid, t in zip(sequence.types, sequence.times)
    )


def symbol_names(size: int) -> list[str]:
    """Default symbol names: A..Z for small alphabets, S0.. beyond."""
    if size <= 26:
        return list(string.ascii_uppercase[:size])
    return [f"S{i}" for i in range(size)]


@dataclass(frozen=True)
class SyntheticConfig:
    """Recipe for a reproducible synthetic sequence.

    When `planted` is set, `repetitions` disjoint copies of that episode
    are laid down in order, and `noise` in [0, 1] scales how many of the
    remaining `length` slots are filled with random events.  Construction
    guarantees at least `repetitions` non-overlapped occurrences.
    """

    alphabet_size: int
    length: int
    seed: int
    planted: str | None = None
    repetitions: int = 0
    noise: float = 1.0

    def __post_init__(self):
        if self.alphabet_size < 1:
            raise ConfigurationError("alphabet_size must be >= 1")
        if self.length < 0:
            raise ConfigurationError("length must be >= 0")
        if not 0.0 <= self.noise <= 1.0:
            raise ConfigurationError("noise rate must be in [0, 1]")
        if self.planted is not None and self.repetitions < 1:
            raise ConfigurationError("a planted episode needs repetitions >= 1")


def generate_synthetic(config: SyntheticConfig) -> EventSequence:
    """Deterministically generate an event sequence per `config`.

    Timestamps are the strictly increasing integers 1, 2, 3, ...
    """
    rng = random.Random(config.seed)
    alphabet = Alphabet(symbol_names(config.alphabet_size))
    draw = lambda: rng.randrange(config.alphabet_size)  # noqa: E731

    if config.planted is None:
        types = [draw() for _ in range(config.length)]
        return EventSequence(alphabet, types, list(range(1, config.length + 1)))

    from .core import parse_episode

    episode = parse_episode(config.planted, alphabet)
    block = list(episode.nodes)
    planted_total = config.repetitions * len(block)
    if planted_total > config.length:
        raise ConfigurationError(
            f"{config.repetitions} copies of a {len(block)}-node episode "
            f"do not fit in {config.length} events"
        )
    n_noise = round(config.noise * (config.length - planted_total))
    # Deal the noise slots into the gaps around the planted blocks.
    gap_sizes = [0] * (config.repetitions + 1)
    for _ in range(n_noise):
        gap_sizes[rng.randrange(len(gap_sizes))] += 1
    types = []
    for rep in range(config.repetitions):
        types.extend(draw() for _ in range(gap_sizes[rep]))
        types.extend(block)
    types.extend(draw() for _ in range(gap_sizes[-1]))
    return EventSequence(alphabet, types, list(range(1, len(types) + 1)))


def parse_episode_list(text: str, alphabet: Alphabet) -> list[Episode]:
    """Parse a comma- or semicolon-separated list of episode notations."""
    from .core import parse_episode

    parts = [p for chunk in text.split(";") for p in chunk.split(",")]
    episodes = [parse_episode(p, alphabet) for p in parts if p.strip()]
    if not episodes:
        raise ParseError(f"no episodes in {text!r}")
    return episodes

"""Level-wise candidate generation, specialized per anti-monotonicity class.

The frequency definitions fall into three classes.  Under the windows,
non-overlapped, distinct and total counts, every subepisode is at least
as frequent as the episode, so the classic full apriori check applies.
The minimal-window and non-interleaved counts only guarantee this for
the (N-1)-node prefix and suffix, so candidates come from a
suffix/prefix join alone.  The head count guarantees it only for
subepisodes that keep the first node, giving a third, looser rule.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations

from .core import Episode


@dataclass(frozen=True)
class LevelSet:
    """The frequent episodes of one level, sorted by node sequence."""

    k: int
    entries: tuple[tuple[Episode, int], ...]

    def __post_init__(self):
        seen: set[tuple[int, ...]] = set()
        prev = None
        for ep, _freq in self.entries:
            if len(ep) != self.k:
                raise ValueError(f"episode {ep.nodes} is not {self.k}-node")
            if ep.nodes in seen:
                raise ValueError(f"duplicate episode {ep.nodes}")
            if prev is not None and ep.nodes < prev:
                raise ValueError("entries must be sorted by node sequence")
            seen.add(ep.nodes)
            prev = ep.nodes

    @classmethod
    def from_counts(cls, k: int, counts: dict[Episode, int]) -> LevelSet:
        entries = tuple(sorted(counts.items(), key=lambda kv: kv[0].nodes))
        return cls(k, entries)

    def episodes(self) -> list[Episode]:
        return [ep for ep, _ in self.entries]

    def frequency(self, episode: Episode) -> int:
        for ep, f in self.entries:
            if ep == episode:
                return f
        raise KeyError(episode)


def _joins(frequent: LevelSet):
    """Yield beta + gamma's last node for every suffix/prefix block match."""
    episodes = frequent.episodes()
    keys = [ep.nodes for ep in episodes]
    for beta in episodes:
        suffix = beta.nodes[1:]
        # Episodes sharing this (k-1)-prefix form a contiguous block.
        pos = bisect_left(keys, suffix)
        while pos < len(keys) and keys[pos][: len(suffix)] == suffix:
            yield beta.nodes + (keys[pos][-1],)
            pos += 1


def generate_full(frequent: LevelSet) -> list[Episode]:
    """Candidates whose every k-node subepisode is frequent."""
    have = {ep.nodes for ep in frequent.episodes()}
    k = frequent.k
    out: set[tuple[int, ...]] = set()
    for cand in _joins(frequent):
        if all(
            tuple(cand[i] for i in picks) in have
            for picks in combinations(range(k + 1), k)
        ):
            out.add(cand)
    return [Episode(nodes) for nodes in sorted(out)]


def generate_suffix_prefix(frequent: LevelSet) -> list[Episode]:
    """Candidates whose (k)-node prefix and suffix are both frequent."""
    return [Episode(nodes) for nodes in sorted(set(_joins(frequent)))]


def generate_head(
    frequent: LevelSet, symbols: list[int] | None = None
) -> list[Episode]:
    """Candidates whose k-node subepisodes keeping the first node are frequent.

    `symbols` is the universe of types a candidate may end with; it
    defaults to the types present in `frequent`, but a miner should pass
    the data's full alphabet, since the head count bounds an episode only
    through subepisodes that keep its first node.
    """
    episodes = frequent.episodes()
    if symbols is None:
        symbols = sorted({tid for ep in episodes for tid in ep.nodes})
    have = {ep.nodes for ep in episodes}
    out: set[tuple[int, ...]] = set()
    for beta in episodes:
        for s in symbols:
            cand = beta.nodes + (s,)
            # dropping any one of positions 2..k+1 keeps the first node
            if all(
                cand[:i] + cand[i + 1 :] in have for i in range(1, len(cand))
            ):
                out.add(cand)
    return [Episode(nodes) for nodes in sorted(out)]

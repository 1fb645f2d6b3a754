"""Lexicon construction: seed terms, morphological variants, and
breadth-first synonym-graph expansion with per-seed blacklists.

The knowledge base is a plain file of ``term <TAB> relation <TAB> term``
edges (relation ``syn`` or ``ant``).  Antonym edges stop traversal: the
antonym is recorded for auditing but never enters the lexicon as a
same-category term.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from .errors import LexiconFormatError

log = logging.getLogger(__name__)

CATEGORIES = ("Defect", "Location", "Frequency")

ORIGIN_SEED = "seed"
ORIGIN_MORPH = "morph"

# Seeds whose noun form takes the -age suffix (leak -> leakage).
AGE_SUFFIX_SEEDS = frozenset({"leak", "block", "seep", "spill"})


def origin_depth(origin: str) -> int:
    if origin.startswith("syn"):
        return int(origin[3:])
    return 0


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    category: str
    origin: str  # "seed", "morph", or "syn<k>" with k >= 1
    seed_root: str

    def __post_init__(self):
        if not self.term or self.term != self.term.lower():
            raise ValueError(f"term must be non-empty lowercase: {self.term!r}")
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        if self.origin.startswith("syn") and origin_depth(self.origin) < 1:
            raise ValueError(f"synonym depth must be >= 1: {self.origin!r}")


class SynonymGraph:
    """Undirected term graph with 'syn' and 'ant' edges."""

    def __init__(self):
        self.nodes: set[str] = set()
        self._adj: dict[str, list[tuple[str, str]]] = {}

    def add_edge(self, a: str, b: str, relation: str) -> None:
        if relation not in ("syn", "ant"):
            raise ValueError(f"relation must be syn or ant, got {relation!r}")
        if a == b:
            raise ValueError(f"self-edge on {a!r}")
        for term in (a, b):
            self.nodes.add(term)
            self._adj.setdefault(term, [])
        self._adj[a].append((b, relation))
        self._adj[b].append((a, relation))

    def neighbors(self, term: str, relation: str) -> list[str]:
        return sorted(t for t, rel in self._adj.get(term, []) if rel == relation)

    @classmethod
    def load(cls, path) -> "SynonymGraph":
        graph = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise LexiconFormatError(f"{path}:{lineno}: expected 3 fields")
                graph.add_edge(parts[0].lower(), parts[2].lower(), parts[1])
        return graph


@dataclass
class Blacklist:
    per_seed: dict[str, set[str]] = field(default_factory=dict)

    def banned(self, seed: str) -> set[str]:
        return self.per_seed.get(seed, set())

    @classmethod
    def load(cls, path) -> "Blacklist":
        per_seed: dict[str, set[str]] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise LexiconFormatError(f"{path}:{lineno}: expected 2 fields")
                per_seed.setdefault(parts[0].lower(), set()).add(parts[1].lower())
        return cls(per_seed)


class Lexicon:
    """Term -> entry map with a longest-match index over multiword terms."""

    def __init__(self, entries: dict[str, LexiconEntry] | None = None):
        self.entries: dict[str, LexiconEntry] = {}
        self.antonyms: dict[str, set[str]] = {}
        self._index: dict[str, list[tuple[str, ...]]] = {}
        for entry in (entries or {}).values():
            self.add(entry)

    def add(self, entry: LexiconEntry) -> None:
        self.entries[entry.term] = entry
        words = tuple(entry.term.split())
        bucket = self._index.setdefault(words[0], [])
        if words not in bucket:
            bucket.append(words)
            bucket.sort(key=len, reverse=True)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, term: str) -> bool:
        return term in self.entries

    def __eq__(self, other):
        return isinstance(other, Lexicon) and self.entries == other.entries

    def terms(self) -> set[str]:
        return set(self.entries)

    def vocabulary(self) -> set[str]:
        """Individual words appearing in any term (for spelling correction)."""
        words: set[str] = set()
        for term in self.entries:
            words.update(term.split())
        return words

    def lookup(self, tokens: list[str]) -> list[tuple[tuple[int, int], LexiconEntry]]:
        """Longest-match, left-to-right, non-overlapping matches."""
        matches = []
        i = 0
        n = len(tokens)
        while i < n:
            hit = None
            for words in self._index.get(tokens[i], []):
                if tuple(tokens[i : i + len(words)]) == words:
                    hit = words
                    break
            if hit:
                matches.append(((i, i + len(hit)), self.entries[" ".join(hit)]))
                i += len(hit)
            else:
                i += 1
        return matches


def expand_morphology(seed: str) -> list[str]:
    """Seed plus suffix variants: -s, -ing / -ed with e-drop, and -age for
    seeds in the rule table."""
    stem = seed[:-1] if seed.endswith("e") else seed
    variants = [seed, seed + "s", stem + "ing", stem + "ed"]
    if seed in AGE_SUFFIX_SEEDS:
        variants.append(seed + "age")
    out = []
    for v in variants:
        if v not in out:
            out.append(v)
    return out


def _bfs_synonyms(
    seed: str, graph: SynonymGraph, banned: set[str], max_depth: int
) -> tuple[dict[str, int], set[str]]:
    """Depths of terms reachable from seed via syn edges, skipping banned
    nodes entirely; also the antonyms seen at traversal boundaries."""
    depths: dict[str, int] = {seed: 0}
    antonyms: set[str] = set()
    queue = deque([(seed, 0)])
    while queue:
        term, d = queue.popleft()
        antonyms.update(graph.neighbors(term, "ant"))
        if d == max_depth:
            continue
        for nxt in graph.neighbors(term, "syn"):
            if nxt in banned or nxt in depths:
                continue
            depths[nxt] = d + 1
            queue.append((nxt, d + 1))
    del depths[seed]
    return depths, antonyms


def expand_synonyms(
    seeds: list[tuple[str, str]],
    graph: SynonymGraph,
    blacklist: Blacklist,
    max_depth: int,
) -> Lexicon:
    """Build the lexicon from (term, category) seeds.

    Each seed contributes itself, its morphological variants (single-word
    seeds only), and its breadth-first synonym closure up to max_depth.
    On term collisions the smaller depth wins; ties go to the
    lexicographically smaller seed_root (seed beats morph beats synonym at
    equal depth).
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if not seeds:
        raise ValueError("seeds must be non-empty")
    # (depth, origin_rank, seed_root) orders collision resolution
    candidates: list[tuple[int, int, str, LexiconEntry]] = []
    antonyms: dict[str, set[str]] = {}
    for seed, category in seeds:
        seed = seed.lower()
        banned = blacklist.banned(seed)
        candidates.append((0, 0, seed, LexiconEntry(seed, category, ORIGIN_SEED, seed)))
        if " " not in seed:
            for variant in expand_morphology(seed)[1:]:
                if variant in banned:
                    continue
                candidates.append(
                    (0, 1, seed, LexiconEntry(variant, category, ORIGIN_MORPH, seed))
                )
        if seed not in graph.nodes:
            log.warning("seed %r not in synonym graph; kept as seed-only", seed)
            continue
        depths, ants = _bfs_synonyms(seed, graph, banned, max_depth)
        if ants:
            antonyms.setdefault(seed, set()).update(ants)
            log.info("seed %r: antonyms recorded, not added: %s", seed, sorted(ants))
        for term, depth in depths.items():
            candidates.append(
                (depth, 2, seed, LexiconEntry(term, category, f"syn{depth}", seed))
            )
    lexicon = Lexicon()
    best: dict[str, tuple[int, int, str]] = {}
    for depth, rank, root, entry in sorted(candidates, key=lambda c: (c[3].term, c[:3])):
        key = (depth, rank, root)
        if entry.term not in best or key < best[entry.term]:
            best[entry.term] = key
            lexicon.add(entry)
    lexicon.antonyms = antonyms
    return lexicon


def save_lexicon(lexicon: Lexicon, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for term in sorted(lexicon.entries):
            e = lexicon.entries[term]
            fh.write(f"{e.term}\t{e.category}\t{e.origin}\t{e.seed_root}\n")


def load_lexicon(path) -> Lexicon:
    lexicon = Lexicon()
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise LexiconFormatError(f"{path}:{lineno}: expected 4 fields")
            term, category, origin, seed_root = parts
            if term in seen:
                raise LexiconFormatError(f"{path}:{lineno}: duplicate term {term!r}")
            seen.add(term)
            try:
                lexicon.add(LexiconEntry(term, category, origin, seed_root))
            except ValueError as exc:
                raise LexiconFormatError(f"{path}:{lineno}: {exc}") from exc
    return lexicon


def load_seeds(path) -> list[tuple[str, str]]:
    """Seed file: ``term <TAB> category`` per line."""
    seeds = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or parts[1] not in CATEGORIES:
                raise LexiconFormatError(f"{path}:{lineno}: expected 'term<TAB>category'")
            seeds.append((parts[0].lower(), parts[1]))
    return seeds

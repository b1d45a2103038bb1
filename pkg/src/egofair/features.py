"""Per-message feature extraction: social features from the relationship
graph, textual features from the message body, and assembly into model
instances with the sensitive attribute held out of the feature vector.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .graph import (
    DirectedGraph,
    NodeId,
    degree_centrality,
    edge_betweenness,
    k_core_score,
    relationship_graph,
    tie_strength,
)

# fixed coarse tag order for the pos_counts vector
POS_TAGS = ("noun", "verb", "adjective", "pronoun", "interjection")

MODEL_FEATURE_NAMES = (
    "node_count",
    "edge_count",
    "deg_in_sender",
    "deg_out_sender",
    "deg_in_receiver",
    "edge_betweenness_sr",
    "tie_strength",
    "kcore_sender",
    "kcore_receiver",
    "bad_word_density",
    "uppercase_density",
    "exclaim_question_count",
    "smiley_count",
    "pos_noun",
    "pos_verb",
    "pos_adjective",
    "pos_pronoun",
    "pos_interjection",
)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class SocialFeatures:
    """The ten relationship-graph descriptors of one message."""

    node_count: int
    edge_count: int
    deg_in_sender: float
    deg_out_sender: float
    deg_in_receiver: float
    deg_out_receiver: float
    edge_betweenness_sr: float
    tie_strength: float
    kcore_sender: int
    kcore_receiver: int


@dataclass(frozen=True)
class TextFeatures:
    bad_word_density: float
    uppercase_density: float
    exclaim_question_count: int
    smiley_count: int
    pos_counts: tuple[int, int, int, int, int]


@dataclass(frozen=True)
class LabeledInstance:
    """Model-ready instance. ``model_features`` never contains the sensitive
    attribute (the receiver's out-degree centrality), which lives in
    ``sensitive_value`` instead.
    """

    model_features: tuple[float, ...]
    label: int
    sensitive_value: float
    message_id: str


def extract_social_features(graph: DirectedGraph, sender: NodeId, receiver: NodeId) -> SocialFeatures:
    """Build the relationship graph for one message and measure it."""
    rel = relationship_graph(graph, sender, receiver)
    sub = rel.subgraph
    if sub.has_edge(sender, receiver):
        betweenness = edge_betweenness(rel, sender, receiver)
    else:
        betweenness = 0.0
    return SocialFeatures(
        node_count=sub.node_count,
        edge_count=sub.edge_count,
        deg_in_sender=degree_centrality(rel, sender, "in"),
        deg_out_sender=degree_centrality(rel, sender, "out"),
        deg_in_receiver=degree_centrality(rel, receiver, "in"),
        deg_out_receiver=degree_centrality(rel, receiver, "out"),
        edge_betweenness_sr=betweenness,
        tie_strength=float(tie_strength(rel, sender, receiver)),
        kcore_sender=k_core_score(rel, sender),
        kcore_receiver=k_core_score(rel, receiver),
    )


def tag_token(token: str) -> str:
    """Rule-based coarse tagger: closed-class lexicons first, then suffix
    rules, noun as the fallback. Deterministic by construction.
    """
    word = token.lower()
    if word in _PRONOUNS:
        return "pronoun"
    if word in _INTERJECTIONS:
        return "interjection"
    if word in _VERBS:
        return "verb"
    if word in _ADJECTIVES:
        return "adjective"
    for suffix in _ADJECTIVE_SUFFIXES:
        if len(word) > len(suffix) + 1 and word.endswith(suffix):
            return "adjective"
    for suffix in _VERB_SUFFIXES:
        if len(word) > len(suffix) + 1 and word.endswith(suffix):
            return "verb"
    return "noun"


def extract_text_features(
    text: str,
    bad_word_lexicon: Iterable[str],
    smiley_patterns: Sequence[str],
    tagger: Callable[[str], str] = tag_token,
) -> TextFeatures:
    """Tokenize on non-alphanumeric runs and count the five textual families.

    Densities are guarded against empty input (empty text yields all zeros).
    """
    lexicon = frozenset(bad_word_lexicon)
    if not lexicon:
        raise ValueError("bad-word lexicon must not be empty")

    tokens = _TOKEN_RE.findall(text)
    bad = sum(1 for t in tokens if t.lower() in lexicon)
    bad_word_density = bad / max(1, len(tokens))

    letters = [c for c in text if c.isalpha()]
    upper = sum(1 for c in letters if c.isupper())
    uppercase_density = upper / max(1, len(letters))

    exclaim_question = sum(1 for c in text if c in "!?")
    smileys = sum(text.count(p) for p in smiley_patterns if p)

    counts = dict.fromkeys(POS_TAGS, 0)
    for t in tokens:
        tag = tagger(t)
        if tag not in counts:
            raise ValueError(f"tagger returned unknown tag {tag!r} for token {t!r}")
        counts[tag] += 1

    return TextFeatures(
        bad_word_density=bad_word_density,
        uppercase_density=uppercase_density,
        exclaim_question_count=exclaim_question,
        smiley_count=smileys,
        pos_counts=tuple(counts[tag] for tag in POS_TAGS),
    )


def assemble_instance(
    social: SocialFeatures,
    text: TextFeatures,
    label: int,
    message_id: str,
) -> LabeledInstance:
    """Fixed 18-entry vector; the receiver's out-degree centrality is held
    out as the sensitive value and never enters the vector.
    """
    if label not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {label!r}")
    vector = (
        float(social.node_count),
        float(social.edge_count),
        social.deg_in_sender,
        social.deg_out_sender,
        social.deg_in_receiver,
        social.edge_betweenness_sr,
        social.tie_strength,
        float(social.kcore_sender),
        float(social.kcore_receiver),
        text.bad_word_density,
        text.uppercase_density,
        float(text.exclaim_question_count),
        float(text.smiley_count),
        *(float(c) for c in text.pos_counts),
    )
    return LabeledInstance(
        model_features=vector,
        label=int(label),
        sensitive_value=social.deg_out_receiver,
        message_id=str(message_id),
    )


def load_lexicon(path: str | Path) -> frozenset[str]:
    """One lowercase token per line, UTF-8; blank lines ignored."""
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        token = line.strip().lower()
        if token:
            words.append(token)
    if not words:
        raise ValueError(f"lexicon file is empty: {path}")
    return frozenset(words)


def load_smiley_patterns(path: str | Path) -> tuple[str, ...]:
    """One literal pattern per line, UTF-8; blank lines ignored."""
    patterns = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        literal = line.strip()
        if literal:
            patterns.append(literal)
    return tuple(patterns)


def default_lexicon() -> frozenset[str]:
    text = resources.files("egofair.data").joinpath("bad_words.txt").read_text("utf-8")
    return frozenset(t.strip().lower() for t in text.splitlines() if t.strip())


def default_smiley_patterns() -> tuple[str, ...]:
    text = resources.files("egofair.data").joinpath("smileys.txt").read_text("utf-8")
    return tuple(t.strip() for t in text.splitlines() if t.strip())


_PRONOUNS = frozenset(
    """i you he she it we they me him her us them my your his its our their
    mine yours hers ours theirs myself yourself himself herself itself
    ourselves yourselves themselves this that these those who whom whose
    which what anybody anyone anything everybody everyone everything nobody
    noone nothing somebody someone something none""".split()
)

_INTERJECTIONS = frozenset(
    """oh wow hey ouch oops ugh yay hmm ah aha alas bravo eww gee gosh ha
    haha hehe hello hi huh hurray lol omg phew psst shh uh uhh um umm whoa
    yikes yo yuck wtf meh duh eh hooray ow oi""".split()
)

_VERBS = frozenset(
    """is am are was were be been being have has had do does did will would
    can could shall should may might must go goes went gone get gets got say
    says said make makes made know knows knew think thinks thought see sees
    saw want wants take takes took come comes came look looks use uses find
    finds give gives tell tells ask asks work works seem seems feel feels
    try tries leave leaves call calls keep keeps let lets put puts mean
    means become becomes show shows hear hears play plays run runs move
    moves like likes live lives believe believes bring brings happen write
    writes sit sits stand stands lose loses pay pays meet meets send sends
    stay stays fall falls cut cuts reach reaches kill kills remain shut""".split()
)

_ADJECTIVES = frozenset(
    """good bad big small new old great little own other long right high
    early young important few public same able ugly stupid dumb nice mean
    sad happy angry weird gross lame cool best worst better worse fat thin
    pretty cute smart lazy crazy fake real free full empty rich poor strong
    weak""".split()
)

_ADJECTIVE_SUFFIXES = ("ful", "less", "ous", "ious", "ive", "able", "ible", "ish", "est", "iest")
_VERB_SUFFIXES = ("ing", "ed", "ify", "ize", "ise", "ate")

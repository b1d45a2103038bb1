import dataclasses

import numpy as np
import pytest

from egofair.features import (
    MODEL_FEATURE_NAMES,
    assemble_instance,
    default_lexicon,
    default_smiley_patterns,
    extract_social_features,
    extract_text_features,
    load_lexicon,
    load_smiley_patterns,
    tag_token,
)
from egofair.graph import build_graph

from oracles import (
    brute_degree_centrality,
    brute_edge_betweenness,
    brute_k_core,
    brute_tie_strength,
    random_directed_graph,
)
from egofair.graph import relationship_graph


LEX = frozenset({"suck", "stupid", "idiot"})
SMILEYS = (":)", ":(", ":D")


class TestSocialFeatures:
    def test_three_node_example(self):
        g = build_graph([("S", "R"), ("S", "X")])
        social = extract_social_features(g, "S", "R")
        assert social.node_count == 3
        assert social.edge_count == 2
        assert social.deg_out_sender == 1.0

    def test_no_shared_neighbors_means_zero_tie(self):
        g = build_graph([("S", "R"), ("S", "A"), ("R", "C")])
        social = extract_social_features(g, "S", "R")
        assert social.tie_strength == 0.0

    def test_fields_match_per_measure_oracles(self):
        rng = np.random.default_rng(53)
        done = 0
        while done < 12:
            g = random_directed_graph(rng, max_nodes=10)
            edges = [(u, v) for u, v in g.edges() if u != v]
            if not edges:
                continue
            s, r = edges[int(rng.integers(len(edges)))]
            social = extract_social_features(g, s, r)
            rel = relationship_graph(g, s, r).subgraph
            assert social.node_count == rel.node_count
            assert social.edge_count == rel.edge_count
            assert social.deg_in_sender == brute_degree_centrality(rel, s, "in")
            assert social.deg_out_sender == brute_degree_centrality(rel, s, "out")
            assert social.deg_in_receiver == brute_degree_centrality(rel, r, "in")
            assert social.deg_out_receiver == brute_degree_centrality(rel, r, "out")
            assert social.edge_betweenness_sr == pytest.approx(
                brute_edge_betweenness(rel, s, r), abs=1e-12
            )
            assert social.tie_strength == brute_tie_strength(rel, s, r)
            assert social.kcore_sender == brute_k_core(rel, s)
            assert social.kcore_receiver == brute_k_core(rel, r)
            done += 1

    def test_exactly_ten_fields(self):
        assert len(dataclasses.fields(extract_social_features(build_graph([("a", "b")]), "a", "b"))) == 10


class TestTextFeatures:
    def test_shouted_insult(self):
        t = extract_text_features("YOU SUCK!!", LEX, SMILEYS)
        assert t.bad_word_density == 0.5
        assert t.uppercase_density == 1.0
        assert t.exclaim_question_count == 2
        assert t.smiley_count == 0

    def test_empty_text_is_all_zeros(self):
        t = extract_text_features("", LEX, SMILEYS)
        assert t.bad_word_density == 0.0
        assert t.uppercase_density == 0.0
        assert t.exclaim_question_count == 0
        assert t.smiley_count == 0
        assert t.pos_counts == (0, 0, 0, 0, 0)

    def test_smiley_and_question(self):
        t = extract_text_features("are you ok? :)", LEX, (":)",))
        assert t.smiley_count == 1
        assert t.exclaim_question_count == 1
        assert t.bad_word_density == 0.0

    def test_empty_lexicon_rejected(self):
        with pytest.raises(ValueError, match="lexicon"):
            extract_text_features("hello", frozenset(), SMILEYS)

    def test_densities_bounded_on_unicode(self):
        samples = [
            "ΣΠΘ ΑΛΦΑ!!",
            "你好吗 ? :)",
            "مرحبا يا صديقي",
            "🎉🎉 party 🎉🎉",
            "ЧТО ЭТО ТАКОЕ?!",
            "ｆｕｌｌｗｉｄｔｈ ｔｅｘｔ",
        ]
        for s in samples:
            t = extract_text_features(s, LEX, SMILEYS)
            assert 0.0 <= t.bad_word_density <= 1.0
            assert 0.0 <= t.uppercase_density <= 1.0

    def test_tagger_buckets(self):
        assert tag_token("you") == "pronoun"
        assert tag_token("lol") == "interjection"
        assert tag_token("running") == "verb"
        assert tag_token("hopeless") == "adjective"
        assert tag_token("homework") == "noun"

    def test_pos_counts_fixed_order(self):
        t = extract_text_features("you are hopeless lol homework", LEX, SMILEYS)
        # order: noun, verb, adjective, pronoun, interjection
        assert t.pos_counts == (1, 1, 1, 1, 1)


class TestAssembleInstance:
    def _sample(self):
        g = build_graph([("S", "R"), ("S", "X"), ("X", "R")])
        social = extract_social_features(g, "S", "R")
        text = extract_text_features("you are STUPID!!", LEX, SMILEYS)
        return social, text

    def test_vector_has_18_entries(self):
        social, text = self._sample()
        inst = assemble_instance(social, text, 1, "m1")
        assert len(inst.model_features) == 18
        assert len(MODEL_FEATURE_NAMES) == 18

    def test_sensitive_value_is_receiver_out_degree(self):
        social, text = self._sample()
        social = dataclasses.replace(social, deg_out_receiver=0.7)
        inst = assemble_instance(social, text, 0, "m2")
        assert inst.sensitive_value == 0.7
        assert 0.7 not in inst.model_features

    def test_deterministic(self):
        social, text = self._sample()
        a = assemble_instance(social, text, 1, "m3")
        b = assemble_instance(social, text, 1, "m3")
        assert a == b

    def test_label_validated(self):
        social, text = self._sample()
        with pytest.raises(ValueError, match="label"):
            assemble_instance(social, text, 2, "m4")

    def test_sensitive_exclusion_by_perturbation(self):
        # Two graphs that differ only in the receiver's out-edges: in the
        # first, C->B closes the B/C pair; in the second that edge is
        # replaced by R->B, which duplicates the undirected B-R adjacency.
        # Every model feature is provably identical; only the sensitive
        # value moves.
        base = [("S", "R"), ("S", "B"), ("S", "C"), ("B", "R"), ("C", "R"), ("B", "C")]
        g1 = build_graph(base + [("C", "B")])
        g2 = build_graph(base + [("R", "B")])
        s1 = extract_social_features(g1, "S", "R")
        s2 = extract_social_features(g2, "S", "R")
        text = extract_text_features("hi there", LEX, SMILEYS)
        i1 = assemble_instance(s1, text, 0, "m5")
        i2 = assemble_instance(s2, text, 0, "m5")
        assert i1.model_features == i2.model_features
        assert i1.sensitive_value != i2.sensitive_value

    def test_feature_order_immune_to_corpus_shuffling(self):
        rng = np.random.default_rng(59)
        edges = [("S", "R"), ("A", "R"), ("S", "A"), ("B", "S"), ("R", "B"), ("A", "B")]
        reference = None
        for _ in range(5):
            shuffled = list(edges)
            rng.shuffle(shuffled)
            g = build_graph(shuffled)
            social = extract_social_features(g, "S", "R")
            text = extract_text_features("same text", LEX, SMILEYS)
            inst = assemble_instance(social, text, 0, "m6")
            if reference is None:
                reference = inst.model_features
            assert inst.model_features == reference


class TestLexiconFiles:
    def test_bundled_defaults_load(self):
        lex = default_lexicon()
        assert "stupid" in lex
        pats = default_smiley_patterns()
        assert ":)" in pats

    def test_load_from_files(self, tmp_path):
        lex_file = tmp_path / "lex.txt"
        lex_file.write_text("foo\nBar\n\n", encoding="utf-8")
        assert load_lexicon(lex_file) == frozenset({"foo", "bar"})
        smiley_file = tmp_path / "smile.txt"
        smiley_file.write_text(":)\n:D\n", encoding="utf-8")
        assert ":)" in load_smiley_patterns(smiley_file)

    def test_empty_lexicon_file_rejected(self, tmp_path):
        f = tmp_path / "empty.txt"
        f.write_text("\n\n", encoding="utf-8")
        with pytest.raises(ValueError, match="empty"):
            load_lexicon(f)

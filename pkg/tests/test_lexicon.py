import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from montee.errors import LexiconError
from montee.lexicon import (
    LexiconEntry,
    TriggerLexicon,
    lexicon_from_rows,
    load_lexicon,
    match_at,
    read_lexicon,
    validate,
)


def test_starter_rows_load(starter_lexicon):
    (shall,) = starter_lexicon.lookup(["shall"])
    assert (shall.lemma_phrase, shall.category, shall.pos, shall.strength) == (("shall",), "MOD", "MD", 3)
    (alas,) = starter_lexicon.lookup(["as", "long", "as"])
    assert alas.category == "COND" and len(alas.lemma_phrase) == 3 and alas.pos == "RB"


def test_strength_out_of_range_names_line():
    with pytest.raises(LexiconError, match="strength out of range, line 2"):
        lexicon_from_rows(["shall\tMOD\tMD\t3\t", "succeed\tMOD\tVB\t9\t"])


@pytest.mark.parametrize("row, message", [
    ("succeed\tMOD", "columns"),
    ("succeed\tMOD\tVB\tfour\t", "non-integer strength"),
    ("succeed\tMAYBE\tVB\t4\t", "unknown category"),
    ("succeed\tMOD\tVB\t4\tfurious", "unknown subcategory"),
    ("\tMOD\tVB\t4\t", "empty lemma"),
])
def test_malformed_rows(row, message):
    with pytest.raises(LexiconError, match=message + ".*line 3"):
        lexicon_from_rows(["# comment", "will\tMOD\tMD\t3\t", row])


def test_header_comments_and_blank_lines_are_skipped():
    lex = lexicon_from_rows(["lemma\tcategory\tpos\tstrength\tsubcategory", "", "# x", "will\tMOD\tMD\t3\t"])
    assert len(lex) == 1


def test_longest_match_over_single_token(starter_lexicon):
    lex = lexicon_from_rows(["as\tCOND\tRB\t\t", "as long as\tCOND\tRB\t2\t"])
    entry, span = match_at(lex, ["as", "long", "as", "they", "protest"], ["RB", "RB", "IN", "PRP", "VBP"], 0)
    assert entry.phrase == "as long as" and span == 3
    entry, span = match_at(starter_lexicon, ["as", "long", "as", "they", "protest"],
                           ["RB", "RB", "IN", "PRP", "VBP"], 0)
    assert entry.phrase == "as long as" and span == 3


def test_prefix_only_falls_back_to_shorter_entry():
    lex = lexicon_from_rows(["as\tCOND\tRB\t\t", "as long as\tCOND\tRB\t2\t"])
    entry, span = match_at(lex, ["as", "long", "ago"], ["RB", "RB", "RB"], 0)
    assert entry.phrase == "as" and span == 1


def test_absent_and_concede(starter_lexicon):
    assert match_at(starter_lexicon, ["banana"], ["NN"], 0) is None
    entry, span = match_at(starter_lexicon, ["concede"], ["VB"], 0)
    assert (entry.category, entry.strength, span) == ("ATT_SAY", 4, 1)


def test_pos_gating_and_prefix_match(starter_lexicon):
    assert match_at(starter_lexicon, ["shall"], ["VB"], 0) is None
    entry, _ = match_at(starter_lexicon, ["concede"], ["VBZ"], 0)
    assert entry.phrase == "concede"


def test_exact_pos_beats_wildcard():
    lex = lexicon_from_rows(["will\tMOD\t*\t2\t", "will\tMOD\tMD\t3\t"])
    entry, _ = match_at(lex, ["will"], ["MD"], 0)
    assert entry.pos == "MD" and entry.strength == 3
    entry, _ = match_at(lex, ["will"], ["NN"], 0)
    assert entry.pos == "*"


def test_conflicting_rows_are_a_load_error():
    with pytest.raises(LexiconError, match="conflicting"):
        lexicon_from_rows(["will\tMOD\tMD\t3\t", "will\tMOD\tMD\t2\t"])


def test_low_strength_normalises_to_lneg(starter_lexicon):
    (impossible,) = starter_lexicon.lookup(["impossible"])
    assert impossible.category == "MOD" and impossible.tag == "LNEG"
    (shall,) = starter_lexicon.lookup(["shall"])
    assert shall.tag == "MOD"


def test_validate_starter_lexicon(starter_lexicon):
    report = validate(starter_lexicon)
    assert report.n_entries == 7
    assert report.counts == {"MOD": 4, "COND": 1, "ATT_SAY": 1, "ATT_THINK": 1}
    assert report.ok and report.format().startswith("7 entries\n")


def test_validate_duplicate_rows_warn():
    lex = lexicon_from_rows(["shall\tMOD\tMD\t3\t", "shall\tMOD\tMD\t3\t"])
    report = validate(lex)
    assert len(lex) == 1
    assert len(report.duplicates) == 1 and "shall/MD" in report.duplicates[0]
    assert "warning: duplicate" in report.format()


def test_validate_empty_file():
    report = validate(read_lexicon(io.StringIO("")))
    assert report.n_entries == 0 and report.format().startswith("0 entries")


def test_validate_inconsistent_strength():
    report = validate(lexicon_from_rows(["refrain\tLNEG\tVB\t3\t", "if\tCOND\tIN\t1\t"]))
    assert not report.ok and any("refrain" in e for e in report.errors)
    assert any("if" in w for w in report.warnings)


def test_row_order_and_reload_do_not_change_lookup(fixtures_dir):
    path = fixtures_dir / "lex.tsv"
    a, b = load_lexicon(path), load_lexicon(path)
    rows = [l for l in path.read_text().splitlines()[1:] if l and not l.startswith("#")]
    c = lexicon_from_rows(reversed(rows))
    assert a.entries == b.entries == c.entries


def test_every_entry_reachable_by_own_phrase(lexicon):
    for entry in lexicon:
        assert entry in lexicon.lookup(entry.lemma_phrase)


# -- properties against a brute-force oracle -----------------------------------------

VOCAB = ["as", "long", "will", "not", "shall", "have", "to", "if"]
POS = ["MD", "VB", "VBZ", "RB", "IN", "NN"]

entry_strategy = st.builds(
    lambda toks, cat, pos, strength: (tuple(toks), cat, pos, strength),
    st.lists(st.sampled_from(VOCAB), min_size=1, max_size=3),
    st.sampled_from(["MOD", "COND", "ATT_SAY"]),
    st.sampled_from(["*", "MD", "VB", "RB", "IN"]),
    st.one_of(st.none(), st.integers(2, 4)),
)


def build(raw):
    seen, entries = set(), []
    for toks, cat, pos, strength in raw:
        if (toks, pos) in seen:
            continue
        seen.add((toks, pos))
        entries.append(LexiconEntry(toks, cat, pos, strength))
    return TriggerLexicon(entries)


def oracle_match(entries, lemmas, pos_tags, i):
    best = None
    for e in entries:
        k = len(e.lemma_phrase)
        if tuple(lemmas[i:i + k]) != e.lemma_phrase or not e.pos_matches(pos_tags[i]):
            continue
        key = (k, e.specificity)
        if best is None or key > best[0]:
            best = (key, e, k)
    return None if best is None else (best[1], best[2])


@given(
    st.lists(entry_strategy, max_size=12),
    st.lists(st.tuples(st.sampled_from(VOCAB), st.sampled_from(POS)), min_size=1, max_size=8),
    st.data(),
)
def test_match_at_equals_brute_force_longest_match(raw, sentence, data):
    lex = build(raw)
    lemmas = [w for w, _ in sentence]
    pos_tags = [p for _, p in sentence]
    i = data.draw(st.integers(0, len(lemmas) - 1))
    assert match_at(lex, lemmas, pos_tags, i) == oracle_match(lex.entries, lemmas, pos_tags, i)


@given(st.sampled_from(VOCAB), st.integers(2, 4))
def test_md_entry_never_matches_vb(word, strength):
    lex = TriggerLexicon([LexiconEntry((word,), "MOD", "MD", strength)])
    for pos in ("VB", "VBD", "VBZ", "VBN", "VBG", "VBP"):
        assert match_at(lex, [word], [pos], 0) is None

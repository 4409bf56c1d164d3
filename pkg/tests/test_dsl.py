import logging
import re
from pathlib import Path

import pytest

from kottwitz.dsl import DSLError, DSLValidationError, Scenario, parse, serialize, tokenize
from kottwitz.catalog import build
from kottwitz.sets import GroupDatum

FIXTURES = Path(__file__).parent / "fixtures"
VALID = sorted(FIXTURES.glob("*.kw"))
MALFORMED = sorted((FIXTURES / "malformed").glob("*.kw"))


def test_fixture_sets_present():
    assert {p.stem for p in VALID} >= {"gl4_enumerate", "drinfeld_dualize", "u3_minute"}
    assert len(MALFORMED) >= 5


@pytest.mark.parametrize("path", VALID, ids=lambda p: p.stem)
def test_round_trip(path):
    s = parse(path.read_text())
    text = serialize(s)
    assert parse(text) == s
    assert serialize(parse(text)) == text


@pytest.mark.parametrize("path", VALID, ids=lambda p: p.stem)
def test_serialize_idempotent_on_whitespace_normalized_input(path):
    text = serialize(parse(path.read_text()))
    squashed = re.sub(r"\s+", " ", text)
    assert serialize(parse(squashed)) == text


@pytest.mark.parametrize("path", MALFORMED, ids=lambda p: p.stem)
def test_malformed_fixtures_have_positions(path):
    with pytest.raises(DSLError) as info:
        parse(path.read_text())
    err = info.value
    assert err.line >= 1 and err.col >= 1
    assert f"line {err.line}, column {err.col}" in str(err)


def test_gl4_fixture_contents():
    s = parse((FIXTURES / "gl4_enumerate.kw").read_text())
    assert s.mu == (1, 1, 0, 0)
    assert s.command == "enumerate" and s.output == "table"
    rd, _ = build("gl", [4])
    assert s.group.rd == rd


def test_u3_fixture_has_one_orbit():
    s = parse((FIXTURES / "u3_minute.kw").read_text())
    assert s.group.rel.size == 1
    assert s.command == "minute"


def test_catalog_statement():
    s = parse("group g { catalog res_gl (2,2) }\nquery { group g mu (1,0,0,0) }")
    assert s.group.rel.size == 1
    assert parse(serialize(s)) == s


def test_bad_pairing_names_axiom():
    with pytest.raises(DSLValidationError) as info:
        parse((FIXTURES / "malformed" / "bad_pairing.kw").read_text())
    assert info.value.axiom == "<alpha^vee,alpha> != 2"
    assert info.value.line == 4


def test_non_based_galois_rejected():
    with pytest.raises(DSLValidationError) as info:
        parse((FIXTURES / "malformed" / "nonbased_galois.kw").read_text())
    assert "Delta" in info.value.axiom


def test_expected_tokens_reported():
    with pytest.raises(DSLError) as info:
        parse("group g { rank 2 simple_roots [ (1,-1) ] simple_coroots [ (1,-1) ] }\nquery { group g mu (1,0) command frobnicate }")
    assert info.value.line == 2
    assert "enumerate" in info.value.expected


def test_decimal_rejected_with_position():
    with pytest.raises(DSLError) as info:
        tokenize("xi (0.5,-1/2)")
    assert (info.value.line, info.value.col) == (1, 5)


def test_zero_denominator_rejected():
    with pytest.raises(DSLError):
        tokenize("(1/0)")


def test_crlf_and_comments():
    text = (FIXTURES / "gl4_enumerate.kw").read_text().replace("\n", "\r\n")
    assert parse(text).mu == (1, 1, 0, 0)


def test_mu_normalized_with_warning(caplog):
    text = "group g { catalog gl (3) }\nquery { group g mu (0,1,0) }"
    with caplog.at_level(logging.WARNING, logger="kottwitz"):
        s = parse(text)
    assert s.mu == (1, 0, 0)
    assert any("dominant" in r.message for r in caplog.records)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "query { group g mu (1,0) }",
        "group g { rank 2 }\nquery { group g mu (1,0) }",
        "group g { catalog gl (2) rank 2 }\nquery { group g mu (1,0) }",
        "group g { catalog nope (2) }\nquery { group g mu (1,0) }",
        "group g { catalog gl (2) }\nquery { group g mu (1,0,0) }",
        "group g { catalog gl (2) }\nquery { group g mu (1/2,0) }",
        "group g { catalog gl (2) }\ngroup g { catalog gl (2) }\nquery { group g mu (1,0) }",
        "group g { catalog gl (2) }\nquery { group g mu (1,0) }\nquery { group g mu (1,0) }",
        "group g { catalog gl (2) xi (1/2) }\nquery { group g mu (1,0) }",
        "group g { rank 99 simple_roots [ ] simple_coroots [ ] }\nquery { group g mu (1) }",
        "group g { rank 2 simple_roots [ (1,-1) ] simple_coroots [ (1,-1) ] galois order 3 matrix [ (1,0) ; (0,1) ] }\nquery { group g mu (1,0) }",
        "group g { rank 2 simple_roots [ (1,-1) ] simple_coroots [ (1,-1) ] roots [ (1,-1):(1,-1) ] }\nquery { group g mu (1,0) }",
        "group g { catalog gl (2) } @",
    ],
)
def test_rejections_are_dsl_errors(text):
    with pytest.raises(DSLError):
        parse(text)


def test_scenario_equality_is_structural():
    a = parse("group g { catalog gl (2) xi (1/2,-1/2) }\nquery { group g mu (1,0) command dualize }")
    rd, g = build("gl", [2])
    from fractions import Fraction

    b = Scenario(GroupDatum.make(rd, g, (Fraction(1, 2), Fraction(-1, 2)), "g"), (1, 0), "dualize")
    assert a == b

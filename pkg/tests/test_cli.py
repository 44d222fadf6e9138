import json

import pytest
from hypothesis import given, settings, strategies as st

from situskit.cli import parse_order, parse_structure, run, serialize_structure
from situskit.errors import ParseError
from situskit.fostruct import FinStructure

CHAIN4 = "universe 1 2 3 4\nrel R/2: " + " ".join(f"({a},{b})" for a in range(1, 5) for b in range(a, 5)) + "\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def call(capsys, *argv):
    code = run(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_stability_check(files, capsys):
    code, out = call(capsys, "check", "stability", "--model", files("c4.txt", CHAIN4), "--formula", "x R y",
                     "--chain", "5", "--distinct", "3")
    assert code == 1
    assert out["holds"] is False and out["agree"] is True
    code, out = call(capsys, "check", "stability", "--model", files("eq.txt", "universe 1 2 3\n"), "--formula", "x = y",
                     "--chain", "5", "--distinct", "3")
    assert code == 0 and out["holds"]


def test_hom_and_validate(files, capsys):
    c2 = files("c2.txt", "chain a b\n")
    code, out = call(capsys, "hom", "--from", c2, "--to", c2)
    assert code == 0 and out["count"] == 3
    code, out = call(capsys, "validate", "--object", "stone", "--model", files("eq3.txt", "universe 1 2 3\n"))
    assert code == 0 and out["status"] == "ok"


def test_other_commands(files, capsys):
    eq = files("eq.txt", "universe 1 2 3\n")
    assert call(capsys, "check", "op", "--model", eq)[0] == 0
    assert call(capsys, "check", "nip", "--model", eq, "--chain", "4")[0] == 0
    assert call(capsys, "check", "ntp", "--model", eq, "--formula", "x = y")[0] == 0
    assert call(capsys, "check", "non-dividing", "--model", eq, "--a", "1", "--b", "2", "--chain", "2")[0] in (0, 1)
    m = files("m.txt", "points a b\ndist a b = 1/2\n")
    assert call(capsys, "check", "complete", "--metric", m)[0] == 0
    t = files("t.txt", "points a b\nopen\nopen a\nopen a b\n")
    assert call(capsys, "check", "compact", "--topology", t)[0] == 0
    code, out = call(capsys, "ramsey", "--atoms", "6")
    assert out["every_coloring_has_homogeneous"]
    code, out = call(capsys, "orbits", "--model", eq, "--over", "1")
    assert out["count"] == 2
    code, out = call(capsys, "surject", "--model", files("c4.txt", CHAIN4), "--to", "star:2")
    assert code == 0 and out["exists"]


def test_reduct_prints_structure(files, capsys):
    code = run(["reduct", "--model", files("f.txt", "universe 1 2\nfun f: 1->2 2->2\n")])
    text = capsys.readouterr().out
    assert code == 0
    R = parse_structure(text)
    assert set(R.relations) == {"E_f", "E_id", "P_f_id"}


def test_errors_exit_2(files, capsys):
    code, out = call(capsys, "check", "nip", "--model", files("bad.txt", "universe 1 2\nrelx R\n"))
    assert code == 2 and out["error"] == "ParseError"
    code, out = call(capsys, "check", "nip", "--model", files("bad2.txt", "universe 1 2\nrel R/2: (1,3)\n"))
    assert code == 2 and out["error"] == "DomainError"
    big = files("big.txt", "universe " + " ".join(map(str, range(12))) + "\n")
    code, out = call(capsys, "validate", "--object", "stone", "--model", big)
    assert code == 2 and out["error"] == "ResourceError" and out["bound"]


def test_parse_error_positions():
    with pytest.raises(ParseError) as exc:
        parse_structure("universe a b\nrel R/2: (a,b) c\n")
    assert exc.value.line == 2 and exc.value.column == 16
    with pytest.raises(ParseError):
        parse_structure("rel R/2: (a,b)\n")


def test_order_closure():
    P = parse_order("elements a b c\nle a<=b b<=c\n")
    assert P.leq("a", "c") and P.is_linear


atoms = st.sampled_from(["a", "b", "c", 1, 2, 3])


@st.composite
def structures(draw):
    els = draw(st.lists(atoms, min_size=1, max_size=4, unique=True))
    pairs = draw(st.lists(st.tuples(st.sampled_from(els), st.sampled_from(els)), max_size=6))
    f = {a: draw(st.sampled_from(els)) for a in els}
    return FinStructure(els, {"R": pairs}, {"f": f}, {"c": els[0]}, arities={"R": 2})


@settings(max_examples=60, deadline=None)
@given(structures())
def test_round_trip(M):
    text = serialize_structure(M)
    N = parse_structure(text)
    assert serialize_structure(N) == text
    assert N.relations == M.relations and N.functions == M.functions and N.constants == M.constants

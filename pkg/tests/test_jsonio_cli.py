import io
import json
import subprocess
import sys

import pytest

import cases
from test_homcats import par2_lens
from deltalens import jsonio
from deltalens.adjunction import apply_M, apply_R
from deltalens.category import Functor
from deltalens.cli import run
from deltalens.homcats import (
    embed_lens_spn,
    embed_lens_sym,
    identity_2cell,
    identity_sym_2cell,
    identity_symlens,
    spnlens_2cell,
)
from deltalens.jsonio import ParseError, dump, dumps, load, loads, to_doc
from deltalens.lenses import lens_to_terminal
from deltalens.testgen import CYCLE2, IDEM, ONE, PAR2, TWO, GenConfig, gen_mealy, gen_span, gen_symlens


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run([str(a) for a in argv], out, err)
    return status, out.getvalue(), err.getvalue()


def write(path, x):
    dump(x, path)
    return path


def collapse():
    return lens_to_terminal(TWO(), ONE())


# -- documents ----------------------------------------------------------------------


def roundtrip_values():
    t = gen_span(GenConfig(seed=3), TWO(), IDEM())
    s = gen_symlens(GenConfig(seed=4), TWO(), ONE())
    return [
        PAR2(),
        CYCLE2(),
        Functor.identity(TWO()),
        collapse().put,
        gen_mealy(GenConfig(seed=1), TWO(), IDEM()),
        collapse(),
        cases.small_lens(5, IDEM()),
        t,
        s,
        identity_2cell(t),
        identity_sym_2cell(s),
    ]


@pytest.mark.parametrize("k", range(11))
def test_roundtrip_is_exact(k):
    x = roundtrip_values()[k]
    text = dump(x)
    y = loads(text)
    assert dump(y) == text
    if hasattr(x, "state_map"):
        assert y.state_map == x.state_map
    elif hasattr(x, "h"):
        assert y.h.same_maps(x.h)
    else:
        assert y == x


def test_tuple_identifiers_survive():
    r = apply_R(gen_symlens(GenConfig(seed=2), TWO(), TWO()))
    assert loads(dump(r)) == r
    assert apply_M(loads(dump(r))) == apply_M(r)


def test_subdocument_by_path(tmp_path):
    write(tmp_path / "two.json", TWO())
    doc = to_doc(Functor.identity(TWO()))
    doc["dom"] = "two.json"
    (tmp_path / "f.json").write_text(dumps(doc))
    assert load(tmp_path / "f.json") == Functor.identity(TWO())


def test_parse_error_names_file_line_and_key(tmp_path):
    doc = to_doc(TWO())
    doc["identities"] = 5
    path = tmp_path / "bad.json"
    path.write_text(dumps(doc))
    with pytest.raises(ParseError) as err:
        load(path)
    e = err.value
    assert str(e.file) == str(path) and e.key == "identities"
    assert path.read_text().splitlines()[e.line - 1].strip().startswith('"identities"')
    status, out, _ = cli("validate", path)
    assert status == 2
    assert json.loads(out)["key"] == "identities"


def test_unknown_endpoint_is_a_law_failure(tmp_path):
    doc = to_doc(TWO())
    doc["morphisms"][2]["tgt"] = "9"
    (tmp_path / "c.json").write_text(dumps(doc))
    assert cli("validate", tmp_path / "c.json")[0] == 1


def test_missing_key_and_bad_json(tmp_path):
    doc = to_doc(TWO())
    del doc["identities"]
    with pytest.raises(ParseError) as err:
        loads(dumps(doc))
    assert err.value.key == "identities"
    with pytest.raises(ParseError):
        loads("{not json")
    with pytest.raises(ParseError):
        loads(dumps({"kind": "mystery"}))


def test_wrong_kind_rejected():
    with pytest.raises(ParseError):
        loads(dump(TWO()), kind="lens")


def test_encoding_helpers():
    assert jsonio.enc_ident(("a", ("b", 1))) == ["a", ["b", 1]]
    assert jsonio.dec_ident(["a", ["b", 1]]) == ("a", ("b", 1))
    assert jsonio.enc_map({"a": 1}) == {"a": 1}
    assert jsonio.enc_map({("a",): 1}) == [[["a"], 1]]


# -- command line -------------------------------------------------------------------


def test_validate_one(tmp_path):
    status, out, _ = cli("validate", write(tmp_path / "one.json", ONE()))
    assert status == 0
    assert json.loads(out)["valid"] is True


def test_validate_broken_category_exits_1(tmp_path):
    doc = to_doc(IDEM())
    doc["composition"] = [row for row in doc["composition"] if row[:2] != ["e", "e"]]
    (tmp_path / "c.json").write_text(dumps(doc))
    status, out, _ = cli("validate", tmp_path / "c.json")
    assert status == 1
    assert json.loads(out)["kind"] == "error"


def test_apply_L_on_idempotent_exits_3(tmp_path):
    path = write(tmp_path / "s.json", identity_symlens(IDEM()))
    status, out, _ = cli("apply", "L", path, "--bound", 8)
    assert status == 3
    doc = json.loads(out)
    assert doc["bound"] == 8
    assert doc["wordCounts"] == sorted(doc["wordCounts"])


def test_check_adjunction_exits_0(tmp_path):
    a = write(tmp_path / "a.json", TWO())
    status, out, _ = cli("check-adjunction", a, a, "--seed", 7, "--count", 50)
    assert status == 0
    assert json.loads(out)["checks"]["MR-identity"] == "PASS"


def test_summary_format(tmp_path):
    a = write(tmp_path / "a.json", TWO())
    b = write(tmp_path / "b.json", ONE())
    status, out, _ = cli("check-adjunction", a, b, "--count", 3, "--format", "summary")
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == "CHECK MR-identity PASS"
    assert all(line.split()[0] == "CHECK" and line.split()[2] in ("PASS", "FAIL", "SKIP") for line in lines)
    status, out, _ = cli("validate", a, "--format", "summary")
    assert out == "CHECK validate PASS\n"


def test_usage_errors_exit_2(tmp_path):
    assert cli("frobnicate")[0] == 2
    assert cli("validate", tmp_path / "missing.json")[0] == 2
    assert cli("validate", "x.json", "--nope")[0] == 2
    assert cli("gen", "lens")[0] == 2
    assert cli("gen", "fixture", "NOPE")[0] == 2


def test_check_2cell(tmp_path):
    t = embed_lens_spn(cases.small_lens(2, TWO()))
    status, out, _ = cli("check-2cell", write(tmp_path / "c.json", identity_2cell(t)))
    assert status == 0 and json.loads(out)["invertible"]
    bad = spnlens_2cell(Functor.identity(PAR2()), embed_lens_spn(par2_lens("u")), embed_lens_spn(par2_lens("v")))
    status, out, _ = cli("check-2cell", write(tmp_path / "d.json", bad))
    assert status == 1
    assert json.loads(out)["witness"] == ["right", "put", "0", "u"]


def test_verbs_are_thin_adapters(tmp_path):
    lens = cases.small_lens(3, TWO())
    lp = write(tmp_path / "l.json", lens)
    cp = write(tmp_path / "c.json", collapse())
    status, out, _ = cli("embed", lp, "--into", "span")
    assert status == 0 and loads(out) == embed_lens_spn(lens)
    status, out, _ = cli("embed", lp)
    assert loads(out) == embed_lens_sym(lens)
    sp = write(tmp_path / "s.json", embed_lens_sym(lens))
    status, out, _ = cli("dagger", sp)
    assert loads(out).forward == embed_lens_sym(lens).backward
    status, out, _ = cli("compose", lp, cp)
    assert status == 0 and loads(out).view == ONE()
    status, out, _ = cli("apply", "M", write(tmp_path / "t.json", embed_lens_spn(lens)))
    assert loads(out) == apply_M(embed_lens_spn(lens))
    for verb in ("classify", "factor"):
        assert cli(verb, write(tmp_path / "f.json", lens.get))[0] == 0
    assert cli("span-rep", lp)[0] == 0
    assert cli("fake-pullback", cp, cp)[0] == 0
    assert cli("product", cp, cp)[0] == 0


def test_gen_outputs_are_byte_deterministic(tmp_path):
    a = write(tmp_path / "a.json", TWO())
    for argv in (
        ("gen", "category", "--seed", 4),
        ("gen", "fixture", "IDEM"),
        ("gen", "lens", a, "--seed", 2),
        ("gen", "cofunctor", a),
        ("gen", "mealy", a, a),
        ("gen", "symmetric-lens", a, a, "--seed", 9),
        ("gen", "lens-span", a, a, "--seed", 9),
    ):
        first, second = cli(*argv), cli(*argv)
        assert first[0] == 0
        assert first == second
        loads(first[1])


def test_out_flag_writes_file(tmp_path):
    path = tmp_path / "out.json"
    status, out, _ = cli("gen", "fixture", "TWO", "--out", path)
    assert status == 0 and out == ""
    assert loads(path.read_text()) == TWO()


def test_module_entry_point(tmp_path):
    path = write(tmp_path / "one.json", ONE())
    proc = subprocess.run([sys.executable, "-m", "deltalens", "validate", str(path)], capture_output=True, text=True)
    assert proc.returncode == 0

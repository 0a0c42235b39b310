import csv
import io
import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from cesaro_ri.cli import main
from cesaro_ri.codec import (CodecError, decode_function, decode_phi, decode_space,
                             encode_function, encode_phi, encode_space, parse_json)
from cesaro_ri.fncore import (Hyperbolic, LogRecip, Mirror, Power, Restrict, Scale, ShiftedRecip,
                              Step, Sum)
from cesaro_ri.rispaces import LogPhi, Lorentz, Lp, Marcinkiewicz, PowerPhi, RatioPsi

pos = st.floats(0.01, 5.0, allow_nan=False)
leaf = st.one_of(
    st.builds(Power, pos, st.floats(-0.9, 3.0)),
    st.builds(LogRecip, pos),
    st.builds(ShiftedRecip, st.floats(0.01, 0.99)),
    st.builds(lambda c: Step((0.0, 0.3, 1.0), (c, 2 * c)), pos),
    st.builds(lambda a: Hyperbolic(a, 1.0, 0.2, 0.9), pos),
)
exprs = st.recursive(leaf, lambda inner: st.one_of(
    st.builds(lambda fs: Sum(tuple(fs)), st.lists(inner, min_size=1, max_size=3)),
    st.builds(Scale, pos, inner),
    st.builds(Mirror, inner),
    st.builds(lambda f: Restrict(f, 0.1, 0.6), inner),
), max_leaves=6)


@settings(max_examples=80, deadline=None)
@given(exprs)
def test_function_round_trip(f):
    text = json.dumps(encode_function(f))
    assert decode_function(json.loads(text)) == f


@pytest.mark.parametrize("X", [Lp(1), Lp(2.5), Lp(math.inf), Lorentz(PowerPhi(0.5)),
                               Lorentz(LogPhi(2.0)), Marcinkiewicz(PowerPhi(0.3), True),
                               Marcinkiewicz(RatioPsi(PowerPhi(0.5)))])
def test_space_round_trip(X):
    assert decode_space(json.loads(json.dumps(encode_space(X)))) == X


def test_phi_round_trip():
    phi = RatioPsi(LogPhi(0.5))
    assert decode_phi(encode_phi(phi)) == phi


@pytest.mark.parametrize("obj, where", [
    ({"kind": "power"}, "$.a"),
    ({"kind": "sum", "terms": [{"kind": "power", "a": "x"}]}, "$.terms[0].a"),
    ({"kind": "nope"}, "$.kind"),
    ([1, 2], "$"),
    ({"kind": "step", "breaks": [0, 0.6, 0.4, 1], "values": [1, 2, 3]}, "$"),
])
def test_decode_errors_carry_path(obj, where):
    with pytest.raises(CodecError) as exc:
        decode_function(obj)
    assert exc.value.path == where


def test_parse_json_reports_location():
    with pytest.raises(CodecError, match="line 1 column"):
        parse_json('{"kind": ', "function")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


LORENTZ = '{"kind":"lorentz","phi":{"kind":"power","a":0.5}}'


def test_cli_norm_json(capsys):
    code, out, _ = run(capsys, "norm", "--space", LORENTZ, "--function", '{"kind":"shiftedrecip","y":0.5}')
    assert code == 0
    row = json.loads(out)["result"]
    assert float(row["value"]) == pytest.approx(math.sqrt(2) * math.pi / 4, rel=1e-9)


def test_cli_csv_and_json_agree(capsys):
    args = ["density-norm", "--space", LORENTZ, "--y", "0.1"]
    _, js, _ = run(capsys, *args)
    _, cs, _ = run(capsys, *args, "--format", "csv")
    row = next(csv.DictReader(io.StringIO(cs)))
    assert row["value"] == json.loads(js)["result"]["value"]


def test_cli_transform_table(capsys):
    code, out, _ = run(capsys, "cesaro", "--function", '{"kind":"power","a":1}', "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(float(r["value"]) == pytest.approx(float(r["x"]) / 2, rel=1e-12) for r in rows)


def test_cli_divergent_exit(capsys):
    code, out, _ = run(capsys, "cesaro", "--function", '{"kind":"power","a":-1.25}')
    assert code == 2
    assert json.loads(out)["result"] == {"kind": "divergent"}
    code, _, _ = run(capsys, "variation", "--space",
                     '{"kind":"lorentz","phi":{"kind":"log","p":2}}')
    assert code == 2


def test_cli_variation_on_set(capsys):
    code, out, _ = run(capsys, "variation", "--space", '{"kind":"lp","p":1}', "--set", "0.5,1")
    assert code == 0
    assert float(json.loads(out)["result"]["value"]) == pytest.approx((1 - math.log(2)) / 2, rel=1e-9)


@pytest.mark.parametrize("argv, needle", [
    (["norm", "--space", LORENTZ], "needs --function"),
    (["norm", "--space", "{bad", "--function", "{}"], "malformed JSON"),
    (["check", "nonsense"], "available:"),
    (["variation", "--space", LORENTZ, "--set", "0.6,0.2"], "--set"),
    (["density-norm", "--space", LORENTZ, "--y", "2"], "--y"),
])
def test_cli_usage_errors(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert needle in err


def test_cli_bad_tol_is_usage_error(capsys):
    code, _, _ = run(capsys, "norm", "--tol", "0.5")
    assert code == 1


def test_cli_check_single_and_override(capsys):
    code, out, _ = run(capsys, "check", "eigen", "--alpha", "3")
    assert code == 0
    cert = json.loads(out)["certificates"][0]
    assert cert["statement_id"] == "eigen" and cert["verdict"] == "pass"
    code, _, _ = run(capsys, "check", "not-ri", "--phi", '{"kind":"power","a":1}')
    assert code == 2


def test_cli_check_all(capsys):
    code, out, _ = run(capsys, "check", "all", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["statement_id"] for r in rows] == sorted(r["statement_id"] for r in rows)
    assert all(r["verdict"] == "pass" for r in rows)
    assert code == 0


def test_cli_output_file(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "norm", "--space", '{"kind":"lp","p":2}',
                       "--function", '{"kind":"const","c":3}', "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["result"]["value"] == "3"

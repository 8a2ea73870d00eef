import json

import pytest

from diagonalis.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


GEO_HALF = '{"field":"real","exact":true,"streams":[{"kind":"geometric","first":"1/2","ratio":"1/2"}]}'
THIRD_WITH_ZEROS = ('{"field":"real","exact":true,"streams":['
                    '{"kind":"finite","values":["1/3"]},'
                    '{"kind":"const","value":0,"count":"inf"}]}')


class TestDecide:
    def test_kadison_no_exit_one(self, capsys):
        code, body = invoke(capsys, "decide", "kadison", "--d", THIRD_WITH_ZEROS)
        assert code == 1
        assert body["verdict"] == "No"
        assert body["certificate"]["a"] == {"kind": "finite", "value": "1/3"}

    def test_schur_horn_inline(self, capsys):
        code, body = invoke(capsys, "decide", "schur-horn",
                            "--lambda", "[3,1,0]", "--d", "[2,1,1]", "--exact")
        assert code == 0
        assert body["verdict"] == "Yes"
        assert body["mode"] == "exact"

    def test_majorization_p(self, capsys):
        code, body = invoke(
            capsys, "decide", "majorization", "--kind", "p", "--p", "inf",
            "--d", '{"field":"real","exact":true,"streams":[{"kind":"telescoping","scale":1}]}',
            "--lambda", GEO_HALF)
        assert code == 0 and body["verdict"] == "Holds"

    def test_unknown_tag_is_error(self, capsys):
        code, body = invoke(capsys, "decide", "no-such-theorem", "--d", "[1]")
        assert code == 3
        assert "error" in body

    def test_three_point(self, capsys):
        spec = ('{"variant":"finite_spectrum","points":'
                '[["0","inf"],["1/2","inf"],["1","inf"]]}')
        d = '{"field":"real","exact":true,"streams":[{"kind":"const","value":"1/2","count":"inf"}]}'
        code, body = invoke(capsys, "decide", "three-point", "--spec", spec, "--d", d)
        assert code == 0 and body["verdict"] == "Yes"

    def test_ffh(self, capsys):
        rays = json.dumps([[0.0, json.loads(GEO_HALF)]])
        code, body = invoke(capsys, "decide", "ffh-trace", "--rays", rays)
        assert code == 0 and body["kind"] == "Point"


class TestConstruct:
    def test_schur_horn(self, capsys):
        code, body = invoke(capsys, "construct", "schur-horn",
                            "--lambda", "[3,1,0]", "--d", "[2,1,1]")
        assert code == 0
        assert body["residuals"]["diagonal"] <= 1e-10
        assert body["matrix"]["n"] == 3

    def test_unitary(self, capsys):
        code, body = invoke(capsys, "construct", "unitary", "--d", "[1,0,0]")
        assert code == 0
        assert body["residuals"]["unitarity"] <= 1e-10

    def test_precondition_error(self, capsys):
        code, body = invoke(capsys, "construct", "schur-horn",
                            "--lambda", "[1,0]", "--d", "[1.5,-0.5]")
        assert code == 3 and body["type"] == "PreconditionError"


class TestVerifyOracleRange:
    def test_verify_matrix(self, capsys):
        mat = json.dumps({"n": 2, "real": True,
                          "entries": [[0.5, 0], [0.5, 0], [0.5, 0], [0.5, 0]]})
        code, body = invoke(capsys, "verify", "matrix", "--matrix", mat,
                            "--eigenvalues", "[1,0]", "--diagonal", "[0.5,0.5]",
                            "--tol", "1e-8")
        assert code == 0 and body["ok"]

    def test_verify_kadison_codimension(self, capsys):
        mat = json.dumps({"n": 2, "real": True,
                          "entries": [[0.5, 0], [0.5, 0], [0.5, 0], [0.5, 0]]})
        code, body = invoke(capsys, "verify", "kadison-codimension", "--matrix", mat)
        assert code == 0 and body["ok"] and body["lhs"] == -1.0

    def test_oracle_rational(self, capsys):
        code, body = invoke(capsys, "oracle", "rational-majorization",
                            "--d", '["2","1","1"]', "--lambda", '["3","1","0"]',
                            "--exact")
        assert code == 0 and body["verdict"] == "Holds"

    def test_oracle_sample_deterministic(self, capsys):
        mat = json.dumps({"n": 2, "real": True,
                          "entries": [[1, 0], [0, 0], [0, 0], [0, 0]]})
        code1, body1 = invoke(capsys, "oracle", "sample", "--matrix", mat,
                              "--trials", "3", "--seed", "9")
        code2, body2 = invoke(capsys, "oracle", "sample", "--matrix", mat,
                              "--trials", "3", "--seed", "9")
        assert code1 == code2 == 0
        assert body1 == body2

    def test_range(self, capsys):
        mat = json.dumps({"n": 2, "real": False,
                          "entries": [[0, 0], [1, 0], [0, 0], [0, 0]]})
        code, body = invoke(capsys, "range", "--matrix", mat, "--grid", "16")
        assert code == 0
        radii = [abs(complex(x, y)) for x, y in body["hull"]]
        assert max(radii) <= 0.5 + 1e-9

    def test_schema(self, capsys):
        code, body = invoke(capsys, "schema")
        assert code == 0
        assert "sequence_spec" in body

    def test_malformed_json(self, capsys):
        code, body = invoke(capsys, "decide", "kadison", "--d", "{broken")
        assert code == 3


class TestRoundTrip:
    def test_sequence_round_trip(self):
        from diagonalis import jsonio
        spec = jsonio.decode_sequence(json.loads(GEO_HALF))
        again = jsonio.decode_sequence(jsonio.encode_sequence(spec))
        assert again == spec

    def test_operator_round_trip(self):
        from diagonalis import jsonio
        raw = {"variant": "diagonalizable",
               "eigs": json.loads(GEO_HALF), "kernel_dim": "inf"}
        spec = jsonio.decode_operator(raw)
        assert jsonio.decode_operator(jsonio.encode_operator(spec)) == spec

    def test_matrix_round_trip(self):
        from diagonalis import jsonio
        raw = {"n": 2, "real": False, "entries": [[1, 2], [0, 0], [3, -1], [0.5, 0]]}
        m = jsonio.decode_matrix(raw)
        again = jsonio.decode_matrix(jsonio.encode_matrix(m))
        assert (again.data == m.data).all()

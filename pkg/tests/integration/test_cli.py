"""End-to-end tests for the ``sftalgebra`` command line."""

import json
import logging
import os
from unittest.mock import patch

import pytest

from cli import build_parser, main
from sft.matrix import IntMatrix

REDUCIBLE = IntMatrix.from_rows([[1, 1, 1], [1, 1, 1], [0, 0, 0]])
CHAIN = [
    {"R": [[1], [1]], "S": [[1, 1]], "s": 1},
    {"R": [[1], [1]], "S": [[1, 1]], "s": -1},
]


@pytest.fixture(autouse=True)
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestInvariants:
    def test_report(self, capsys, nonplussed, write_matrix):
        code, out, _ = run_cli(capsys, "invariants", "report", write_matrix("n.mat", nonplussed))
        assert code == 0
        assert "det(I-tA) = (1 - 2t)(1 - t)" in out.splitlines()
        assert "Bowen-Franks group: Z" in out

    def test_json_output(self, capsys, golden_mean, write_matrix):
        code, out, _ = run_cli(
            capsys, "invariants", "report", write_matrix("g.mat", golden_mean), "--json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["tool"] == "invariants_report"
        assert doc["verdict"] == "info"

    def test_zeta_check_with_order(self, capsys, golden_mean, write_matrix):
        path = write_matrix("g.mat", golden_mean)
        code, out, _ = run_cli(capsys, "--order", "6", "invariants", "report", path, "--zeta-check")
        assert code == 0
        assert "zeta identity through order 6: pass" in out

    def test_missing_matrix_argument(self, capsys):
        code, _, err = run_cli(capsys, "invariants", "report")
        assert code == 2
        assert "needs a matrix file" in err

    def test_malformed_file(self, capsys, write_text):
        code, out, err = run_cli(capsys, "invariants", "report", write_text("bad.mat", "2 2\n1 1\n1 x\n"))
        assert code == 2
        assert out == ""
        assert "line 3, column 3" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "invariants", "report", str(tmp_path / "none.mat"))
        assert code == 2
        assert "error:" in err


class TestClassify2x2:
    def test_counts(self, capsys):
        code, out, _ = run_cli(capsys, "classify2x2", "--a", "6", "--b", "1", "--counts")
        assert code == 0
        assert "SIM classes: 3, SE classes: 2" in out

    def test_pair_through_invariants(self, capsys):
        code, out, _ = run_cli(
            capsys, "invariants", "classify2x2", "--a", "6", "--b", "1", "--x", "0", "--y", "1"
        )
        assert code == 1
        assert "M_0 ~SE-Z M_1: no" in out

    def test_bad_family(self, capsys):
        code, _, err = run_cli(capsys, "classify2x2", "--a", "2", "--b", "2")
        assert code == 2
        assert "a > |b| > 0" in err


class TestStructure:
    def test_primitive(self, capsys, golden_mean, write_matrix):
        code, out, _ = run_cli(capsys, "structure", "primitive", write_matrix("g.mat", golden_mean))
        assert code == 0
        assert out == "primitive: yes (A^2 > 0)\n"

    def test_reducible_period(self, capsys, write_matrix):
        code, out, _ = run_cli(capsys, "structure", "period", write_matrix("r.mat", REDUCIBLE))
        assert code == 1
        assert out == "reducible\n"

    def test_periodic_counts(self, capsys, write_matrix):
        path = write_matrix("two.mat", IntMatrix.scalar(2))
        code, out, _ = run_cli(capsys, "structure", "periodic", path, "--count", "3")
        assert code == 0
        assert out.splitlines()[0] == "fixed points: 2, 4, 8"


class TestEquiv:
    def test_verify_chain(self, capsys, write_json):
        code, out, _ = run_cli(capsys, "equiv", "verify-chain", write_json("c.json", CHAIN))
        assert code == 0
        assert out == "SSE chain over Zplus verified, lag 2\n"

    def test_verify_esse_files(self, capsys, write_text):
        code, out, _ = run_cli(
            capsys,
            "equiv",
            "verify-esse",
            "--a", write_text("a.mat", "2 2\n1 1\n1 1\n"),
            "--b", write_text("b.mat", "1 1\n3\n"),
            "--r", write_text("r.mat", "2 1\n1\n1\n"),
            "--s", write_text("s.mat", "1 2\n1 1\n"),
        )
        assert code == 1
        assert "B != SR" in out

    def test_compress_json(self, capsys, write_json):
        code, out, _ = run_cli(capsys, "equiv", "compress", "--chain", write_json("c.json", CHAIN), "--json")
        assert code == 0
        assert json.loads(out)["data"]["lag"] == 2


class TestNeighbors:
    def test_budget_exit_code(self, capsys, write_matrix):
        path = write_matrix("two.mat", IntMatrix.scalar(2))
        code, _, err = run_cli(capsys, "neighbors", path, "--max-entry", "2", "--budget", "3")
        assert code == 3
        assert "error:" in err

    def test_split(self, capsys, write_matrix):
        code, out, _ = run_cli(capsys, "neighbors", write_matrix("two.mat", IntMatrix.scalar(2)))
        assert code == 0
        assert out.splitlines()[0] == "1 neighbours"


class TestPoly:
    def test_psse(self, capsys, write_text):
        code, out, _ = run_cli(
            capsys,
            "poly",
            "psse",
            "--r", write_text("r.mat", "2 1\n1\n1\n"),
            "--s", write_text("s.mat", "1 2\n1 1\n"),
        )
        assert code == 0
        assert "replay inside NZC: pass" in out

    def test_flow_with_changes(self, capsys, write_text):
        path = write_text("a.pmat", "1 1\n3*t\n")
        code, out, _ = run_cli(capsys, "poly", "flow", path, "--change", "0,0,1,2")
        assert code == 0
        assert "Bowen-Franks group: Z/2 -> Z/2" in out


class TestNiep:
    def test_check(self, capsys):
        code, out, _ = run_cli(capsys, "--horizon", "32", "niep", "check", "3", "-1", "-1")
        assert code == 0
        assert any(line.startswith("Laffey G = 2/3") for line in out.splitlines())

    def test_perron_fail(self, capsys):
        code, out, _ = run_cli(capsys, "niep", "perron", "--", "1", "-2")
        assert code == 1
        assert out == "Perron condition: fail (another root has larger modulus)\n"

    def test_dense_ring(self, capsys):
        code, _, _ = run_cli(
            capsys, "niep", "check", "--poly", "2-3*t+5*t^2-6*t^3+4*t^4-3*t^5+t^6", "--ring", "dense"
        )
        assert code == 0

    def test_suleimanova(self, capsys):
        code, out, _ = run_cli(capsys, "niep", "suleimanova", "5", "-1", "-2")
        assert code == 0
        assert out.splitlines()[-1] == "10 13 2"


class TestGyrationAndSgc2:
    def test_shift_sgcc(self, capsys):
        code, out, _ = run_cli(capsys, "gyration", "--n", "2", "--level", "6", "--m", "6")
        assert code == 0
        assert "SGCC_6 = 3 in Z/6" in out

    def test_sgc2_edge(self, capsys, write_text):
        code, out, _ = run_cli(
            capsys, "sgc2", "--r", write_text("r.mat", "1 1\n2\n"), "--s", write_text("s.mat", "1 1\n1\n")
        )
        assert code == 0
        assert out == "sgc2(R, S) = 1\n"

    def test_cocycle_seeded(self, capsys):
        code, out, _ = run_cli(capsys, "sgc2", "--cocycle", "20", "--seed", "3")
        assert code == 0
        assert out == "20 seeded triangles, 0 failures\n"

    def test_triangle_file(self, capsys, write_json):
        path = write_json("t.json", {"R1": [[1]], "R2": [[1]], "S3": [[2]]})
        code, out, _ = run_cli(capsys, "sgc2", "--triangle", path)
        assert code == 0
        assert out.splitlines()[0] == "triangle identities: pass"


class TestUsage:
    def test_unknown_command(self, capsys):
        code, _, _ = run_cli(capsys, "frobnicate")
        assert code == 2

    def test_help(self, capsys):
        code, out, _ = run_cli(capsys, "--help")
        assert code == 0
        assert "sftalgebra" in out

    def test_bad_timeout(self, capsys):
        code, _, err = run_cli(capsys, "--timeout", "0", "sgc2", "--cocycle", "1")
        assert code == 2
        assert "timeouts must be positive" in err

    def test_bad_environment(self, capsys):
        with patch.dict(os.environ, {"SFT_HORIZON": "0"}):
            code, _, err = run_cli(capsys, "sgc2", "--cocycle", "1")
        assert code == 2
        assert "horizon must be positive" in err

    def test_subcommand_flags_after_action(self):
        ns = build_parser().parse_args(["structure", "higher", "m.mat", "--k", "3", "--json"])
        assert ns.k == 3 and ns.json

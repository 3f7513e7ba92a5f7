import csv
import json
import socket
import subprocess
import sys
import time

import httpx
import pytest
from click.testing import CliRunner

from conftest import FIXTURES, make_kb
from faqwise.cli import main
from faqwise.model_store import load_model, save_model


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def model_path(tmp_path):
    kb = make_kb(
        [
            ("How do I reset my password?", "Use the reset link."),
            ("Do you ship internationally?", "To over 40 countries."),
            ("Is there a student discount?", "Yes, 20 percent."),
        ],
        dimension=64,
    )
    path = tmp_path / "model.json"
    save_model(kb, path)
    return str(path)


class TestParse:
    def test_fixture_file(self, runner):
        result = runner.invoke(
            main, ["parse", "--file", str(FIXTURES / "grouped.html")]
        )
        assert result.exit_code == 0
        assert "pairs:          4" in result.output
        assert "How do I reset my password?" in result.output

    def test_grouped_scope_in_report(self, runner):
        result = runner.invoke(
            main, ["parse", "--file", str(FIXTURES / "sectioned.html")]
        )
        assert result.exit_code == 0
        assert "scope distance: 1" in result.output

    def test_empty_file_exit_2(self, runner, tmp_path):
        empty = tmp_path / "empty.html"
        empty.write_text("")
        result = runner.invoke(main, ["parse", "--file", str(empty)])
        assert result.exit_code == 2
        assert "EmptyDocument" in result.output

    def test_json_output(self, runner):
        result = runner.invoke(
            main, ["parse", "--file", str(FIXTURES / "flat.html"), "--json"]
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert len(doc["pairs"]) == 4
        assert doc["answer_scope_distance"] == 0

    def test_url_and_file_mutually_exclusive(self, runner):
        result = runner.invoke(
            main,
            ["parse", "--url", "http://x/", "--file", str(FIXTURES / "flat.html")],
        )
        assert result.exit_code == 2


class TestBuild:
    def test_build_from_fixture(self, runner, tmp_path):
        out = tmp_path / "model.json"
        result = runner.invoke(
            main,
            ["build", "--file", str(FIXTURES / "grouped.html"),
             "--out", str(out), "--dim", "64"],
        )
        assert result.exit_code == 0, result.output
        kb = load_model(out)
        assert len(kb) == 4
        assert kb.matrix.shape == (4, 64)

    def test_build_is_deterministic(self, runner, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            result = runner.invoke(
                main,
                ["build", "--file", str(FIXTURES / "french.html"),
                 "--out", str(out), "--dim", "32"],
            )
            assert result.exit_code == 0, result.output
        assert a.read_bytes() == b.read_bytes()

    def test_build_from_pairs_file(self, runner, tmp_path):
        pairs = tmp_path / "pairs.json"
        pairs.write_text(json.dumps([
            {"question": "Q one?", "answer": "A one."},
            {"question": "Q two?", "answer": "A two."},
        ]))
        out = tmp_path / "model.json"
        result = runner.invoke(
            main, ["build", "--pairs", str(pairs), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert len(load_model(out)) == 2


class TestAsk:
    def test_exact_question(self, runner, model_path):
        result = runner.invoke(
            main, ["ask", "--model", model_path, "How do I reset my password?"]
        )
        assert result.exit_code == 0
        assert "Use the reset link." in result.output

    def test_gibberish_rejected(self, runner, model_path):
        result = runner.invoke(
            main, ["ask", "--model", model_path, "xyzzy plugh"]
        )
        assert result.exit_code == 0
        assert "could not find a confident answer" in result.output

    def test_threshold_minus_one_always_answers(self, runner, model_path):
        result = runner.invoke(
            main,
            ["ask", "--model", model_path, "--threshold", "-1", "anything"],
        )
        assert result.exit_code == 0
        assert "could not find" not in result.output

    def test_model_from_env(self, runner, model_path, monkeypatch):
        monkeypatch.setenv("FAQWISE_MODEL", model_path)
        result = runner.invoke(main, ["ask", "Do you ship internationally?"])
        assert result.exit_code == 0
        assert "To over 40 countries." in result.output

    def test_interactive_loop(self, runner, model_path):
        result = runner.invoke(
            main,
            ["ask", "--model", model_path],
            input="How do I reset my password?\n",
        )
        assert result.exit_code == 0
        assert "Use the reset link." in result.output

    def test_json_flag(self, runner, model_path):
        result = runner.invoke(
            main,
            ["ask", "--model", model_path, "--json", "student discount?"],
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert set(doc) == {
            "answer", "matched_question", "confidence", "source", "rejected",
        }


class TestBench:
    def _testset(self, tmp_path):
        path = tmp_path / "testset.csv"
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["test_question", "expected_question"])
            writer.writerow(["reset my password please",
                             "How do I reset my password?"])
            writer.writerow(["international shipping?",
                             "Do you ship internationally?"])
            writer.writerow(["what color is the sky", ""])
        return str(path)

    def test_sweep_with_curve(self, runner, model_path, tmp_path):
        out = tmp_path / "curve.csv"
        result = runner.invoke(
            main,
            ["bench", "--model", model_path, "--testset",
             self._testset(tmp_path), "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert "best f1" in result.output
        with open(out, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 101
        recalls = [float(r["recall"]) for r in rows]
        assert recalls == sorted(recalls, reverse=True)

    def test_single_threshold(self, runner, model_path, tmp_path):
        out = tmp_path / "curve.csv"
        result = runner.invoke(
            main,
            ["bench", "--model", model_path, "--testset",
             self._testset(tmp_path), "--thresholds", "0.75",
             "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert len(out.read_text().splitlines()) == 2

    def test_missing_testset_exit_2(self, runner, model_path):
        result = runner.invoke(
            main,
            ["bench", "--model", model_path, "--testset", "/no/such/file.csv"],
        )
        assert result.exit_code == 2


def free_port():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class TestServe:
    def test_serves_model_and_answers(self, model_path):
        port = free_port()
        proc = subprocess.Popen(
            [sys.executable, "-m", "faqwise.cli", "serve",
             "--model", model_path, "--bind", f"127.0.0.1:{port}"],
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        )
        try:
            base = f"http://127.0.0.1:{port}"
            deadline = time.monotonic() + 15
            while time.monotonic() < deadline:
                try:
                    if httpx.get(base + "/health", timeout=1).json()["ready"]:
                        break
                except httpx.HTTPError:
                    time.sleep(0.1)
            else:
                pytest.fail("server never became ready")
            doc = httpx.post(
                base + "/ask",
                json={"question": "How do I reset my password?"},
            ).json()
            assert doc["answer"] == "Use the reset link."
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_occupied_port_exits_nonzero(self, model_path):
        with socket.socket() as sock:
            sock.bind(("127.0.0.1", 0))
            sock.listen(1)
            port = sock.getsockname()[1]
            proc = subprocess.run(
                [sys.executable, "-m", "faqwise.cli", "serve",
                 "--model", model_path, "--bind", f"127.0.0.1:{port}"],
                capture_output=True, timeout=30,
            )
        assert proc.returncode == 1

    def test_no_mode_exit_2(self):
        runner = CliRunner()
        result = runner.invoke(main, ["serve"])
        assert result.exit_code == 2

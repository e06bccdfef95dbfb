from __future__ import annotations

import json

from faqkit.cli import main


def test_index_builds_artifacts(tmp_path, capsys):
    assert main(["index", "--out", str(tmp_path / "idx")]) == 0
    out = capsys.readouterr().out
    assert "indexed 120 passages" in out
    assert (tmp_path / "idx" / "bm25_index.json").exists()
    assert (tmp_path / "idx" / "dense_store.npz").exists()
    assert (tmp_path / "idx" / "question_qrels.txt").exists()


def test_search_prints_trec_lines(capsys):
    assert main(["search", "how long is the degree", "--cutoff", "3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert 0 < len(lines) <= 3
    assert all(len(l.split()) == 6 for l in lines)


def test_search_rejects_ib_pipeline(capsys):
    assert main(["search", "anything", "--pipeline", "ib"]) == 2


def test_ask_outputs_answer_json(capsys):
    assert main(["ask", "Do Computer Science students complete a capstone project?",
                 "--pipeline", "ib"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["answered"] is True
    assert payload["pipeline"] == "ib"
    assert payload["passages"][0]["rank"] == 1


def test_run_batch_eval_compare_flow(tmp_path, capsys):
    runs = tmp_path / "runs"
    assert main(["run-batch", "--out", str(runs), "--pipeline", "ib",
                 "--pipeline", "rag-bm25", "--cutoff", "1"]) == 0
    report_path = tmp_path / "report.json"
    assert main(["eval", "--runs", str(runs), "--out", str(report_path),
                 "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "Known (84 questions)" in out
    assert report_path.exists()

    cmp_path = tmp_path / "cmp.json"
    assert main(["compare", str(report_path), "--format", "json",
                 "--out", str(cmp_path)]) == 0
    payload = json.loads(cmp_path.read_text())
    assert payload["alpha"] == 0.01
    assert "known:ndcg" in payload["entries"]


def test_custom_config_file(tmp_path, capsys):
    config = {"pipelines": ["ib"], "cutoffs": [2], "intent": {"tau": 0.5}}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    runs = tmp_path / "runs"
    assert main(["run-batch", "--config", str(path), "--out", str(runs)]) == 0
    manifest = json.loads((runs / "manifest.json").read_text())
    assert manifest["config"]["intent"]["tau"] == 0.5
    assert [s["label"] for s in manifest["systems"]] == ["ib"]


def test_hard_error_returns_nonzero(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert main(["run-batch", "--config", str(missing), "--out", str(tmp_path / "x")]) == 1
    assert "error:" in capsys.readouterr().err


def test_eval_on_missing_dir_fails(tmp_path, capsys):
    assert main(["eval", "--runs", str(tmp_path / "missing")]) == 1


def test_augment_against_live_fixture_endpoint(tmp_path, capsys):
    import json as jsonlib
    import threading
    from http.server import BaseHTTPRequestHandler, HTTPServer

    class ChatStub(BaseHTTPRequestHandler):
        def do_POST(self):
            body = jsonlib.loads(self.rfile.read(int(self.headers["Content-Length"])))
            question = body["messages"][0]["content"].split(": ", 1)[1]
            lines = "\n".join(f"{i}. Could you tell me, {question.rstrip('?')}, please?"[:120]
                              for i in range(1, 9))
            payload = jsonlib.dumps({"choices": [{"message": {"content": lines}}]}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, *args):
            pass

    server = HTTPServer(("127.0.0.1", 0), ChatStub)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        out_path = tmp_path / "paraphrases.jsonl"
        endpoint = f"http://127.0.0.1:{server.server_port}/chat"
        assert main(["augment", "--endpoint", endpoint, "--out", str(out_path)]) == 0
        rows = [json.loads(l) for l in open(out_path) if l.strip()]
        assert len(rows) == 14  # one per known topic
        for row in rows:
            assert 1 <= len(row["variations"]) <= 5
            assert all(v.strip() for v in row["variations"])
    finally:
        server.shutdown()
        thread.join(timeout=5)


def test_augment_without_endpoint_fails(tmp_path, capsys):
    assert main(["augment", "--out", str(tmp_path / "p.jsonl")]) == 2

import json

import pytest

from skewcyc import cli
from skewcyc.errors import ManifestParseError, UnknownOp
from skewcyc.field import build_field
from skewcyc.sets import SetDescriptor
from skewcyc.verify import Certificate, verify_skew_hadamard

ROW1 = "0,1,3,9,5,15,2,6,18,10,8"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--f", "5", "--k", "22", "--indices", ROW1, "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert (d["kind"], d["verdict"], d["method"]) == ("skew_hadamard", "pass", "exact_counting")
    assert set(d["field"]) >= {"p", "f", "modulus", "gamma"}
    cli.validate_certificate(d)
    assert Certificate.from_json(d).verdict == "pass"


def test_failed_certificate_text_names_condition(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--f", "2", "--k", "2", "--indices", "0", "--kind", "skew_hadamard")
    assert code == 1 and out.startswith("FAIL") and "condition" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["field", "--p", "3", "--f", "5"],
        ["gauss", "--p", "7", "--k", "6", "--j", "1"],
        ["dh-check", "--p", "13", "--k", "12", "--j", "1", "--ell", "2"],
        ["classify", "--k", "11", "--p", "3", "--f", "5"],
        ["partition", "--p", "3", "--f", "5", "--k", "11"],
        ["thm4", "--p", "3", "--f", "3", "--k", "13"],
        ["lift", "--k", "6", "--indices", "0,2,4", "--m", "2", "--p", "7", "--f", "1"],
        ["corollary1", "--p1", "13", "--m", "1", "--p", "3"],
        ["index4", "--p1", "13", "--p", "3"],
        ["coset-j", "--k", "22", "--p", "3", "--g", "-1", "--s", "1", "--I", "0", "--f", "5"],
    ],
)
def test_subcommands(capsys, argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    cli.validate_certificate(json.loads(out))


def test_library_error_exit_code(capsys):
    code, _, err = run(capsys, "corollary1", "--p1", "11", "--m", "2", "--p", "3")
    assert code == 2 and "IndexMismatch" in err


def test_float_certificate_carries_evidence_flag():
    F = build_field(3, 5)
    c = cli.run_op("verify", {"p": 3, "f": 5, "k": 11, "indices": [0], "kind": "srg", "spectrum": "float"}, cli.Settings())
    d = json.loads(cli.emit_certificate(c, "json"))
    assert d["float_evidence"] is True and d["method"] == "float_spectrum"
    assert F.q == d["field"]["p"] ** d["field"]["f"]


def test_schema_rejects_float_pass_without_flag():
    c = verify_skew_hadamard(build_field(7), SetDescriptor.classes(build_field(7), 2, [0]))
    d = c.to_json()
    d["method"] = "float_spectrum"
    with pytest.raises(Exception):
        cli.validate_certificate(d)


def _manifest(tmp_path, jobs, **settings):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"schema_version": "1.0", "settings": settings, "jobs": jobs}))
    return path


def test_empty_manifest(tmp_path, capsys):
    code, out, _ = run(capsys, "run", str(_manifest(tmp_path, [])))
    assert code == 0 and "0/0 matched" in out


def test_unknown_op(tmp_path, capsys):
    path = _manifest(tmp_path, [{"op": "frobnicate"}])
    with pytest.raises(UnknownOp):
        cli.run_manifest(path)
    code, _, err = run(capsys, "run", str(path))
    assert code == 2 and "UnknownOp" in err


def test_malformed_manifest(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ManifestParseError):
        cli.run_manifest(path)
    path.write_text(json.dumps({"jobs": [{"params": {}}]}))
    assert run(capsys, "run", str(path))[0] == 2
    path.write_text(json.dumps({"settings": {"exact_ceiling": 0}, "jobs": []}))
    assert run(capsys, "run", str(path))[0] == 2


JOBS = [
    {"op": "verify", "params": {"p": 3, "f": 5, "k": 22, "indices": [int(x) for x in ROW1.split(",")]}, "expect": "pass"},
    {"op": "thm4", "params": {"p": 3, "f": 3, "k": 13}, "expect": "pass"},
    {"op": "index4", "params": {"p1": 17, "p": 3}, "expect": "fail"},
    {"op": "corollary1", "params": {"p1": 11, "m": 2, "p": 3}, "expect": "error", "expect_error": "IndexMismatch"},
    {"op": "gauss", "params": {"p": 13, "k": 12}, "expect": "pass"},
]


def test_mismatch_exit_code(tmp_path, capsys):
    jobs = JOBS[:1] + [{"op": "index4", "params": {"p1": 17, "p": 3}, "expect": "pass"}]
    code, out, _ = run(capsys, "run", str(_manifest(tmp_path, jobs)))
    assert code == 1 and "NO" in out


def _strip_runtime(x):
    if isinstance(x, dict):
        return {k: _strip_runtime(v) for k, v in x.items() if k not in ("runtime_ms", "threads")}
    if isinstance(x, list):
        return [_strip_runtime(v) for v in x]
    return x


def test_thread_count_does_not_change_results(tmp_path):
    path = _manifest(tmp_path, JOBS)
    a = cli.run_manifest(path, {"threads": 1})
    b = cli.run_manifest(path, {"threads": 3})
    assert a.exit_code == b.exit_code == 0
    assert [j["index"] for j in b.jobs] == list(range(len(JOBS)))
    assert _strip_runtime(a.to_json()) == _strip_runtime(b.to_json())


def test_report_written_and_revalidates(tmp_path):
    out = tmp_path / "report.json"
    cli.run_manifest(_manifest(tmp_path, JOBS[:2]), {"output_path": str(out)})
    d = json.loads(out.read_text())
    assert d["summary"] == {"jobs": 2, "matched": 2, "mismatched": 0, "errors": 0}
    for job in d["jobs"]:
        cli.validate_certificate(job["certificate"])


def test_bundled_manifest_is_valid():
    data = cli.load_manifest(cli.bundled_manifest_path())
    ops = {j["op"] for j in data["jobs"]}
    assert ops <= set(cli.OPS)
    assert {"verify", "thm4", "corollary1", "lift", "index4"} <= ops


def test_bundled_manifest_all_pass(capsys):
    code, out, _ = run(capsys, "run", "bundled")
    assert code == 0
    assert "11/11 matched, 0 errors" in out

"""Command line driver: one subcommand per operation plus a manifest runner.

    skewcyc verify --p 3 --f 5 --k 22 --indices 0,1,3,5,9,15,2,6,10,18,8
    skewcyc run paper_tables.json --threads 2

Exit codes: 0 when every verdict matches its expectation, 1 on a verdict
mismatch, 2 on malformed input or an unexpected error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from . import charsum, construct, sw, verify
from .errors import ManifestParseError, SkewCycError, UnknownOp
from .field import build_field
from .sets import SetDescriptor
from .verify import SCHEMA_VERSION, Certificate

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": [
        "kind", "field", "k", "indices", "method", "verdict", "witness",
        "tolerance", "float_evidence", "deviations", "runtime_ms", "schema_version",
    ],
    "properties": {
        "kind": {"enum": ["skew_hadamard", "paley_pds", "difference_set", "srg", "gauss_property", "construction"]},
        "field": {"type": "object"},
        "k": {"type": ["integer", "null"]},
        "indices": {"type": ["array", "null"], "items": {"type": "integer"}},
        "method": {
            "enum": ["exact_counting", "exact_spectrum", "float_spectrum", "exact_arithmetic", "norm_bound", "structural"]
        },
        "verdict": {"enum": ["pass", "fail", "note"]},
        "witness": {"type": "object"},
        "tolerance": {"type": ["number", "null"]},
        "float_evidence": {"type": "boolean"},
        "deviations": {"type": "array", "items": {"type": "string"}},
        "runtime_ms": {"type": "number"},
        "schema_version": {"const": SCHEMA_VERSION},
    },
    "allOf": [
        {
            "if": {"properties": {"method": {"const": "float_spectrum"}, "verdict": {"const": "pass"}}},
            "then": {"properties": {"float_evidence": {"const": True}}},
        }
    ],
}

MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["jobs"],
    "properties": {
        "schema_version": {"type": "string"},
        "settings": {
            "type": "object",
            "properties": {
                "threads": {"type": "integer", "minimum": 1},
                "tolerance": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "exact_ceiling": {"type": "integer", "minimum": 1},
                "float_ceiling": {"type": "integer", "minimum": 1},
                "output_path": {"type": ["string", "null"]},
            },
        },
        "jobs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["op"],
                "properties": {
                    "op": {"type": "string"},
                    "params": {"type": "object"},
                    "expect": {"enum": ["pass", "fail", "note", "error"]},
                    "expect_error": {"type": "string"},
                    "label": {"type": "string"},
                },
            },
        },
    },
}


@dataclass
class Settings:
    threads: int = 1
    tolerance: float | None = None
    exact_ceiling: int = construct.EXACT_COUNT_CEILING
    float_ceiling: int = construct.FEASIBILITY_CEILING
    output_path: str | None = None


def validate_certificate(d: dict) -> None:
    jsonschema.validate(d, CERTIFICATE_SCHEMA)


def emit_certificate(cert: Certificate, fmt: str = "json") -> str:
    if fmt == "json":
        d = cert.to_json()
        validate_certificate(d)
        return json.dumps(d, indent=2, sort_keys=True, default=_jsonable)
    fd = cert.field
    where = f"q={fd['p']}^{fd['f']}" if "p" in fd else ", ".join(f"{a}={b}" for a, b in fd.items())
    head = f"{cert.verdict.upper():4} {cert.kind} {where}"
    if cert.k is not None:
        head += f" k={cert.k}"
    head += f" method={cert.method} ({cert.runtime_ms:.1f} ms)"
    if cert.float_evidence:
        head += " [float evidence]"
    lines = [head]
    if cert.verdict != "pass":
        for key in ("condition", "element", "count", "expected", "value"):
            if key in cert.witness:
                lines.append(f"  {key}: {cert.witness[key]}")
    for key in ("lambda", "parameters"):
        if key in cert.witness:
            lines.append(f"  {key}: {cert.witness[key]}")
    return "\n".join(lines)


def _jsonable(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "tolist"):
        return x.tolist()
    if hasattr(x, "item"):
        return x.item()
    raise TypeError(f"not serializable: {type(x).__name__}")


# -- operations ---------------------------------------------------------------------------


def _field(params):
    return build_field(int(params["p"]), int(params.get("f", 1)), params.get("modulus"))


def _indices(v):
    if isinstance(v, str):
        return [int(x) for x in v.replace(" ", "").split(",") if x]
    return [int(x) for x in v]


def _note(kind: str, F_desc: dict, witness: dict, t0: float, k=None, indices=None, verdict="note", method="structural"):
    return Certificate(
        kind=kind,
        field=F_desc,
        k=k,
        indices=indices,
        method=method,
        verdict=verdict,
        witness=witness,
        runtime_ms=round((time.perf_counter() - t0) * 1000, 3),
    )


def op_field(params, st):
    t0 = time.perf_counter()
    F = _field(params)
    return _note("construction", F.descriptor(), {"q": F.q}, t0)


def op_gauss(params, st):
    t0 = time.perf_counter()
    F = _field(params)
    k = int(params["k"])
    T = charsum.class_count_table(F, k)
    rep = charsum.check_gauss_properties(T)
    w = {"properties": rep.rows, "trivial_is_minus_one": rep.trivial_is_minus_one, "norm_check": rep.norm_method}
    if "j" in params:
        w["gauss_sum"] = charsum.gauss_sum(T, int(params["j"])).to_json()
    method = "exact_arithmetic" if rep.norm_method == "exact" else "norm_bound"
    return _note("gauss_property", F.descriptor(), w, t0, k=k, verdict="pass" if rep.all_pass else "fail", method=method)


def op_dh(params, st):
    t0 = time.perf_counter()
    F = _field(params)
    k = int(params["k"])
    T = charsum.class_count_table(F, k)
    r = charsum.davenport_hasse_check(T, charsum.Character(k, int(params.get("j", 1))), int(params["ell"]))
    method = "exact_arithmetic" if r.method == "exact" else "norm_bound"
    return _note("gauss_property", F.descriptor(), r.witness(), t0, k=k, verdict="pass" if r.passed else "fail", method=method)


def op_classify(params, st):
    t0 = time.perf_counter()
    c = sw.classify_case(int(params["k"]), int(params["p"]), int(params["f"]))
    return _note("construction", {"p": c.p, "f": c.f}, c.to_json(), t0, k=c.k)


def op_partition(params, st):
    t0 = time.perf_counter()
    F = _field(params)
    k = int(params["k"])
    part = sw.find_partition(F, k, subfield_check=bool(params.get("subfield_check", False)))
    w = part.to_json()
    small = part.L1 if len(part.L1) <= len(part.L2) else part.L2
    n = len(small)
    ds = sw.verify_quotient_ds(small, (k, n, n * (n - 1) // (k - 1)))
    w["quotient_difference_set"] = ds.witness
    return _note("construction", F.descriptor(), w, t0, k=k, verdict=ds.verdict, method="exact_arithmetic")


def _descriptor(F, params):
    if "elements" in params:
        return SetDescriptor.from_json(F, {"elements": params["elements"]})
    return SetDescriptor.classes(F, int(params["k"]), _indices(params["indices"]))


def op_verify(params, st):
    F = _field(params)
    D = _descriptor(F, params)
    kind = params.get("kind", "auto")
    method = params.get("method", "exact")
    spectrum = params.get("spectrum", "auto")
    if kind == "auto":
        kind = "skew_hadamard" if F.q % 4 == 3 else "paley_pds"
    if kind == "skew_hadamard":
        return verify.verify_skew_hadamard(F, D, method, spectrum, st.tolerance)
    if kind == "paley_pds":
        return verify.verify_paley_pds(F, D, method, spectrum, st.tolerance)
    if kind == "srg":
        return verify.verify_srg(F, D, spectrum, st.tolerance)
    if kind == "difference_set":
        lam = params.get("lambda")
        return verify.verify_difference_set(F, D, None if lam is None else int(lam))
    raise ValueError(f"unknown verification kind {kind!r}")


def op_thm4(params, st):
    F = _field(params)
    J, cert = construct.apply_thm4(F, int(params["k"]), params.get("method", "exact"))
    return cert


def op_lift(params, st):
    t0 = time.perf_counter()
    J = construct.JSet(int(params["k"]), tuple(_indices(params["indices"])), "explicit")
    m, p = int(params["m"]), int(params["p"])
    L = construct.lift_thm5(J, m, p)
    p1 = J.modulus // 2
    w = {"input": J.to_json(), "lifted": L.to_json()}
    if "f" in params:
        F = build_field(p, int(params["f"]) * p1 ** (m - 1))
        cert = construct._verify_by_q(F, L.descriptor(F), params.get("method", "exact"))
        cert.witness["construction"] = w
        return cert
    return _note("construction", {"p": p}, w, t0, k=L.modulus, indices=list(L.indices))


def op_corollary1(params, st):
    J, cert = construct.apply_corollary1(
        int(params["p1"]), int(params["m"]), int(params["p"]),
        feasibility_ceiling=st.float_ceiling, exact_ceiling=st.exact_ceiling,
    )
    return cert


def op_index4(params, st):
    t0 = time.perf_counter()
    p1, p = int(params["p1"]), int(params["p"])
    rep = construct.index4_screen(p1, p)
    w = rep.to_json()
    verdict = "pass" if rep.all_hold else "fail"
    if params.get("verify", rep.all_hold) and rep.cond_i:
        certs = construct.verify_index4_candidates(rep)
        w["candidate_verdicts"] = [c.verdict for c in certs]
        if not any(c.passed for c in certs):
            verdict = "fail"
    return _note("construction", {"p": p, "f": (p1 - 1) // 4}, w, t0, k=2 * p1, verdict=verdict, method="exact_counting")


def op_coset_j(params, st):
    t0 = time.perf_counter()
    k, p = int(params["k"]), int(params["p"])
    if "head" in params:
        J = construct.coset_union(k, p, params["head"], params.get("multipliers", []), params.get("doubled", []))
    else:
        J = construct.build_J_cosets(k, p, int(params["g"]), int(params["s"]), _indices(params["I"]))
    w = {"J": J.to_json(), "covers_mod_p1": J.covers(k // 2)}
    if "f" in params:
        F = build_field(p, int(params["f"]))
        cert = construct._verify_by_q(F, J.descriptor(F), params.get("method", "exact"))
        cert.witness["construction"] = w
        return cert
    return _note("construction", {"p": p}, w, t0, k=k, indices=list(J.indices))


OPS = {
    "field": op_field,
    "gauss": op_gauss,
    "dh-check": op_dh,
    "classify": op_classify,
    "partition": op_partition,
    "verify": op_verify,
    "thm4": op_thm4,
    "lift": op_lift,
    "corollary1": op_corollary1,
    "index4": op_index4,
    "coset-j": op_coset_j,
}


def run_op(op: str, params: dict, st: Settings) -> Certificate:
    if op not in OPS:
        raise UnknownOp(op)
    return OPS[op](params, st)


# -- manifests ----------------------------------------------------------------------------


@dataclass
class RunReport:
    settings: dict
    jobs: list = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def summary(self) -> dict:
        out = {"jobs": len(self.jobs), "matched": 0, "mismatched": 0, "errors": 0}
        for j in self.jobs:
            if j.get("infrastructure_error"):
                out["errors"] += 1
            elif j["matched"]:
                out["matched"] += 1
            else:
                out["mismatched"] += 1
        return out

    @property
    def exit_code(self) -> int:
        s = self.summary
        return 2 if s["errors"] else (1 if s["mismatched"] else 0)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "settings": self.settings,
            "jobs": self.jobs,
            "summary": self.summary,
            "runtime_ms": self.runtime_ms,
        }

    def table(self) -> str:
        rows = [f"{'#':>3}  {'op':<11} {'expect':<7} {'got':<14} {'ok':<3} label"]
        for j in self.jobs:
            got = j.get("verdict") or j.get("error", "?")
            rows.append(
                f"{j['index']:>3}  {j['op']:<11} {j.get('expect') or '-':<7} {got:<14} "
                f"{'yes' if j['matched'] else 'NO':<3} {j.get('label', '')}"
            )
        s = self.summary
        rows.append(f"{s['matched']}/{s['jobs']} matched, {s['errors']} errors, {self.runtime_ms / 1000:.2f} s")
        return "\n".join(rows)


def load_manifest(path) -> dict:
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
        data = json.loads(text)
        jsonschema.validate(data, MANIFEST_SCHEMA)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as exc:
        raise ManifestParseError(str(exc).splitlines()[0]) from exc
    return data


def bundled_manifest_path() -> Path:
    return Path(str(resources.files("skewcyc") / "data" / "paper_tables.json"))


def _run_job(index: int, job: dict, st: Settings) -> dict:
    rec = {"index": index, "op": job["op"], "params": job.get("params", {}), "expect": job.get("expect")}
    if "label" in job:
        rec["label"] = job["label"]
    expect = job.get("expect")
    try:
        cert = run_op(job["op"], job.get("params", {}), st)
    except SkewCycError as exc:
        name = type(exc).__name__
        rec.update(verdict=None, error=name, message=str(exc))
        if expect == "error":
            rec["matched"] = job.get("expect_error") in (None, name)
        else:
            rec["matched"] = False
            rec["infrastructure_error"] = isinstance(exc, (UnknownOp, ManifestParseError))
        return rec
    except Exception as exc:  # an unexpected failure is an infrastructure error
        rec.update(verdict=None, error=type(exc).__name__, message=str(exc), matched=False, infrastructure_error=True)
        return rec
    d = cert.to_json()
    validate_certificate(json.loads(json.dumps(d, default=_jsonable)))
    rec["verdict"] = cert.verdict
    rec["certificate"] = d
    rec["matched"] = expect is None or expect == cert.verdict
    return rec


def run_manifest(path, overrides: dict | None = None) -> RunReport:
    data = load_manifest(path)
    for job in data["jobs"]:
        if job["op"] not in OPS:
            raise UnknownOp(job["op"])
    st = Settings(**{**data.get("settings", {}), **{k: v for k, v in (overrides or {}).items() if v is not None}})
    t0 = time.perf_counter()
    jobs = list(enumerate(data["jobs"]))
    if st.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=st.threads) as pool:
            recs = list(pool.map(lambda ij: _run_job(ij[0], ij[1], st), jobs))
    else:
        recs = [_run_job(i, j, st) for i, j in jobs]
    report = RunReport(settings=dict(st.__dict__), jobs=recs, runtime_ms=round((time.perf_counter() - t0) * 1000, 3))
    if st.output_path:
        Path(st.output_path).write_text(json.dumps(report.to_json(), indent=2, sort_keys=True, default=_jsonable))
    return report


# -- argument parsing ---------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewcyc", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--exact-ceiling", type=int, default=None)
    common.add_argument("--float-ceiling", type=int, default=None)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, *flags, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for fl in flags:
            if fl == "--indices":
                sp.add_argument(fl, type=str, help="comma-separated residues")
            elif fl == "--method":
                sp.add_argument(fl, default="exact", choices=["exact", "spectral"])
            elif fl == "--kind":
                sp.add_argument(fl, default="auto", choices=["auto", "skew_hadamard", "paley_pds", "srg", "difference_set"])
            elif fl == "--spectrum":
                sp.add_argument(fl, default="auto", choices=["auto", "exact", "float"])
            elif fl == "--I":
                sp.add_argument("--I", dest="I", type=str, required=True)
            else:
                sp.add_argument(fl, type=int, default=None)
        return sp

    add("field", "--p", "--f", help="build F_{p^f}")
    add("gauss", "--p", "--f", "--k", "--j", help="Gauss sums and their identities")
    add("dh-check", "--p", "--f", "--k", "--j", "--ell", help="product formula check")
    add("classify", "--k", "--p", "--f", help="subfield / semi-primitive / sporadic")
    add("partition", "--p", "--f", "--k", help="L1/L2 split of a strongly regular case")
    add("verify", "--p", "--f", "--k", "--indices", "--method", "--kind", "--spectrum", help="verify a class union")
    add("thm4", "--p", "--f", "--k", "--method", help="J from a partition part, verified")
    add("lift", "--p", "--f", "--k", "--indices", "--m", "--method", help="lift J mod 2p1 to 2p1^m")
    add("corollary1", "--p1", "--m", "--p", help="premise, J and lift in one run")
    add("index4", "--p1", "--p", help="index-4 screening")
    add("coset-j", "--k", "--p", "--g", "--s", "--I", "--f", "--method", help="J from cosets of <p>")
    rp = sub.add_parser("run", parents=[common], help="run a manifest (use 'bundled' for the shipped one)")
    rp.add_argument("manifest")
    rp.add_argument("--output", default=None)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    overrides = {
        "threads": args.threads,
        "tolerance": args.tolerance,
        "exact_ceiling": args.exact_ceiling,
        "float_ceiling": args.float_ceiling,
    }
    if args.cmd == "run":
        path = bundled_manifest_path() if args.manifest == "bundled" else args.manifest
        overrides["output_path"] = args.output
        try:
            report = run_manifest(path, overrides)
        except (ManifestParseError, UnknownOp) as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return 2
        if args.format == "json":
            print(json.dumps(report.to_json(), indent=2, sort_keys=True, default=_jsonable))
        else:
            print(report.table())
        return report.exit_code

    st = Settings(**{k: v for k, v in overrides.items() if v is not None})
    params = {k: v for k, v in vars(args).items() if v is not None and k not in {"cmd", "format", *overrides}}
    params.pop("output", None)
    if args.cmd in {"field", "gauss", "dh-check", "partition", "verify", "thm4"} and "f" not in params:
        params["f"] = 1
    try:
        cert = run_op(args.cmd, params, st)
    except SkewCycError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: missing parameter {exc}", file=sys.stderr)
        return 2
    print(emit_certificate(cert, args.format))
    return 0 if cert.verdict in ("pass", "note") else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Five subcommands: cf (expansion), classify (verdict), sum (partial sums),
drift (even-denominator secular term), liouville (staircase construction
report).  Every run writes a manifest JSON next to its outputs, even when
it fails, so an experiment can be replayed from the recorded argv.

Exit codes: 0 success/decisive, 1 usage or certificate error, 2 resource
cap, 3 inconclusive classification.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__, cfrac, criterion, realsource, sumengine
from .criterion import Budget, FDescriptor, MeasureCertificate, Outcome
from .errors import (
    AmbiguousOrderError,
    CertificateError,
    DSeriesError,
    ResourceLimitError,
)
from .realsource import (
    DEFAULT_MAX_BITS,
    Kind,
    LiouvilleSpec,
    RealSource,
    Schedule,
)

__all__ = [
    "parse_alpha",
    "format_alpha",
    "parse_f",
    "parse_cert",
    "Config",
    "console_main",
    "main",
]

_DEFAULT_MANIFEST = "dseries_manifest.json"

_RAT_RE = re.compile(r"^rat:(-?\d+)/(-?\d+)$")
_SURD_RE = re.compile(r"^surd:\((-?\d+)([+-])(\d+)\*sqrt\((\d+)\)\)/(-?\d+)$")
_CONST_RE = re.compile(r"^const:(pi|invpi|e)$")
_LIOU_RE = re.compile(r"^liouville:(factorial|tower100)((?:,[a-z]+=[^,=]+)*)$")
_CF_RE = re.compile(r"^cf:\[(-?\d+)(?:;(.+))?\]$")


def parse_alpha(text: str, *, max_bits: int = DEFAULT_MAX_BITS) -> RealSource:
    """Parse the textual alpha grammar into a RealSource.

    Forms: rat:a/q, surd:(p+r*sqrt(d))/s, const:pi|invpi|e,
    liouville:SCHEDULE[,base=a/q][,digits=PATTERN][,start=M], and
    cf:[a0;a1,a2,...] where a trailing ",..." declares an all-ones tail.
    """
    m = _RAT_RE.match(text)
    if m:
        return realsource.make_rational(int(m.group(1)), int(m.group(2)), max_bits=max_bits)
    m = _SURD_RE.match(text)
    if m:
        p = int(m.group(1))
        r = int(m.group(3)) * (1 if m.group(2) == "+" else -1)
        d = int(m.group(4))
        s = int(m.group(5))
        return realsource.make_surd(p, r, d, s, max_bits=max_bits)
    m = _CONST_RE.match(text)
    if m:
        return realsource.make_constant(m.group(1), max_bits=max_bits)
    m = _LIOU_RE.match(text)
    if m:
        schedule = Schedule(m.group(1))
        base_num, base_den = 0, 1
        digits: Tuple[int, ...] = (1,)
        start = 1
        for item in filter(None, m.group(2).split(",")):
            key, _, value = item.partition("=")
            if key == "base":
                num_s, slash, den_s = value.partition("/")
                if not slash:
                    raise ValueError(f"base must look like a/q, got {value!r}")
                base_num, base_den = int(num_s), int(den_s)
            elif key == "digits":
                if not value or any(c not in "13" for c in value):
                    raise ValueError("digits pattern must be a nonempty string over {1,3}")
                digits = tuple(int(c) for c in value)
            elif key == "start":
                start = int(value)
            else:
                raise ValueError(f"unknown liouville parameter {key!r}")
        spec = LiouvilleSpec(
            base_num=base_num,
            base_den=base_den,
            digits=digits,
            start=start,
            schedule=schedule,
        )
        return realsource.make_liouville(spec, max_bits=max_bits)
    m = _CF_RE.match(text)
    if m:
        pqs: List[int] = [int(m.group(1))]
        all_ones = False
        rest = m.group(2)
        if rest is not None:
            items = [s.strip() for s in rest.split(",")]
            if items and items[-1] == "...":
                all_ones = True
                items = items[:-1]
            if not all(items):
                raise ValueError(f"empty partial quotient in {text!r}")
            pqs.extend(int(s) for s in items)
        return realsource.make_pq_stream(pqs, all_ones_tail=all_ones, max_bits=max_bits)
    raise ValueError(
        f"unrecognized alpha spec {text!r}; expected rat:, surd:, const:, "
        "liouville: or cf:"
    )


def format_alpha(source: RealSource) -> str:
    """Canonical textual form; parse(format(s)) describes the same number."""
    if source.kind is Kind.RATIONAL:
        return f"rat:{source.a}/{source.q}"
    if source.kind is Kind.QUADRATIC_SURD:
        if source.all_ones_tail and source.pqs:
            head = ",".join(str(a) for a in source.pqs[1:])
            sep = f";{head}," if head else ";"
            return f"cf:[{source.pqs[0]}{sep}...]"
        sign = "+" if source.r >= 0 else "-"
        return f"surd:({source.p}{sign}{abs(source.r)}*sqrt({source.d}))/{source.s}"
    if source.kind is Kind.NAMED_CONSTANT:
        return f"const:{source.const.value}"
    if source.kind is Kind.LIOUVILLE:
        spec = source.liouville
        out = f"liouville:{spec.schedule.value}"
        if (spec.base_num, spec.base_den) != (0, 1):
            out += f",base={spec.base_num}/{spec.base_den}"
        if spec.digits != (1,):
            out += ",digits=" + "".join(str(d) for d in spec.digits)
        if spec.start != 1:
            out += f",start={spec.start}"
        return out
    if source.kind is Kind.PQ_STREAM:
        if len(source.pqs) == 1:
            return f"cf:[{source.pqs[0]}]"
        rest = ",".join(str(a) for a in source.pqs[1:])
        return f"cf:[{source.pqs[0]};{rest}]"
    raise ValueError(f"cannot format source of kind {source.kind}")


def parse_f(text: str) -> FDescriptor:
    """Weight spec: pow:p with p a fraction or decimal in (0, 1]."""
    kind, _, param = text.partition(":")
    if kind == "pow" and param:
        try:
            p = Fraction(param)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse exponent {param!r}") from None
        return criterion.make_power_f(p)
    raise ValueError(f"unrecognized weight spec {text!r}; expected pow:p")


def parse_cert(text: str) -> MeasureCertificate:
    """Certificate spec: roth | mahler[:C] | measure:mu,C."""
    if text == "roth":
        return criterion.roth_certificate()
    if text == "mahler":
        return criterion.mahler_certificate()
    if text.startswith("mahler:"):
        return criterion.mahler_certificate(C=float(text.split(":", 1)[1]))
    if text.startswith("measure:"):
        body = text.split(":", 1)[1]
        parts = body.split(",")
        if len(parts) != 2:
            raise ValueError("measure certificate needs measure:mu,C")
        return MeasureCertificate(mu=float(parts[0]), C=float(parts[1]), label="user")
    raise ValueError(f"unrecognized certificate spec {text!r}")


@dataclass(frozen=True)
class Config:
    max_bits: int = DEFAULT_MAX_BITS
    max_terms: int = sumengine.DEFAULT_MAX_TERMS
    workers: int = 1


def _load_config(path: Optional[str]) -> Config:
    """Defaults <- config file (flag or DSERIES_CONFIG env); flags win later."""
    values = {"max_bits": DEFAULT_MAX_BITS, "max_terms": sumengine.DEFAULT_MAX_TERMS, "workers": 1}
    path = path or os.environ.get("DSERIES_CONFIG")
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.readlines()
        except OSError as exc:
            raise ValueError(f"cannot read config file {path}: {exc}") from None
        for i, line in enumerate(lines, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, eq, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not eq or key not in values:
                raise ValueError(f"config line {i}: expected max_bits/max_terms/workers = value")
            try:
                values[key] = int(value)
            except ValueError:
                raise ValueError(f"config line {i}: {key} must be an integer") from None
    return Config(**values)


def _resolve_config(args: argparse.Namespace) -> Config:
    cfg = _load_config(getattr(args, "config", None))
    overrides = {}
    for key in ("max_bits", "max_terms", "workers"):
        flag = getattr(args, key, None)
        if flag is not None:
            overrides[key] = flag
    if overrides:
        cfg = Config(**{**cfg.__dict__, **overrides})
    if cfg.max_bits < 64 or cfg.max_terms < 1 or cfg.workers < 1:
        raise ValueError("config values out of range: need max_bits >= 64, max_terms >= 1, workers >= 1")
    return cfg


def _fmt17(x: float) -> str:
    return format(x, ".17g")


def _json_float(x: float):
    return x if math.isfinite(x) else str(x)


def _outward_floats(iv) -> Tuple[float, float]:
    lo, hi = float(iv.lo), float(iv.hi)
    if Fraction(lo) > iv.lo:
        lo = math.nextafter(lo, -math.inf)
    if Fraction(hi) < iv.hi:
        hi = math.nextafter(hi, math.inf)
    return lo, hi


# -- subcommands --------------------------------------------------------------


def _cmd_cf(args: argparse.Namespace, cfg: Config, outputs: List[str]) -> Tuple[dict, int]:
    source = parse_alpha(args.alpha, max_bits=cfg.max_bits)
    exp = cfrac.expand(source, args.terms, max_bits=cfg.max_bits)
    convs = []
    for c in exp.convergents:
        lo, hi = _outward_floats(c.dist)
        convs.append(
            {"n": c.n, "a": str(c.a), "q": str(c.q), "pq": str(c.partial_quotient),
             "dist_lo": lo, "dist_hi": hi}
        )
    payload = {
        "schema": 1,
        "alpha": format_alpha(source),
        "exact": exp.exact,
        "capped": exp.capped,
        "cap_reason": exp.cap_reason,
        "partial_quotients": [str(a) for a in exp.partial_quotients],
        "convergents": convs,
    }
    return payload, (2 if exp.capped else 0)


def _cmd_classify(args: argparse.Namespace, cfg: Config, outputs: List[str]) -> Tuple[dict, int]:
    source = parse_alpha(args.alpha, max_bits=cfg.max_bits)
    f = parse_f(args.f)
    certs = [parse_cert(c) for c in (args.cert or [])]
    budget = Budget(convergents=args.budget, max_bits=cfg.max_bits)
    verdict = criterion.classify(source, f, budget, certs)
    payload = {
        "schema": 1,
        "alpha": format_alpha(source),
        "f": f.name,
        **verdict.to_json_dict(),
    }
    return payload, (0 if verdict.outcome is not Outcome.INCONCLUSIVE else 3)


def _result_dict(r: sumengine.PartialSumResult, duration: float) -> dict:
    return {
        "value": r.value,
        "rounding_bound": r.rounding_bound,
        "terms": r.terms,
        "mode": r.mode,
        "duration_s": duration,
    }


def _cmd_sum(args: argparse.Namespace, cfg: Config, outputs: List[str]) -> Tuple[dict, int]:
    source = parse_alpha(args.alpha, max_bits=cfg.max_bits)
    f = parse_f(args.f)
    N, M = args.N, args.M
    results: Dict[str, dict] = {}
    trace = None
    if args.trace:
        t0 = time.perf_counter()
        trace = sumengine.scan_partial_sums(source, f, N, M, max_terms=cfg.max_terms)
        dt = time.perf_counter() - t0
        if args.mode in ("direct", "both"):
            results["direct"] = _result_dict(trace.final, dt)
    elif args.mode in ("direct", "both"):
        t0 = time.perf_counter()
        rd = sumengine.partial_sum_direct(
            source, f, N, M, max_terms=cfg.max_terms, workers=cfg.workers
        )
        results["direct"] = _result_dict(rd, time.perf_counter() - t0)
    if args.mode in ("periodic", "both"):
        if source.kind is not Kind.RATIONAL:
            raise ValueError("periodic mode requires a rational alpha (rat:a/q)")
        t0 = time.perf_counter()
        rp = sumengine.partial_sum_periodic(source.a, source.q, f, N, M, max_terms=cfg.max_terms)
        results["periodic"] = _result_dict(rp, time.perf_counter() - t0)
    payload = {
        "schema": 1,
        "alpha": format_alpha(source),
        "f": f.name,
        "N": N,
        "M": M,
        "results": results,
    }
    if len(results) == 2:
        diff = abs(results["direct"]["value"] - results["periodic"]["value"])
        combined = (
            results["direct"]["rounding_bound"] + results["periodic"]["rounding_bound"]
        )
        payload["difference"] = diff
        payload["combined_bound"] = combined
        payload["agree"] = diff <= combined
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("M,S,rounding_bound\n")
            for row in trace.rows:
                fh.write(f"{row.m},{_fmt17(row.value)},{_fmt17(row.rounding_bound)}\n")
        outputs.append(args.trace)
        payload["trace"] = args.trace
    return payload, 0


def _cmd_drift(args: argparse.Namespace, cfg: Config, outputs: List[str]) -> Tuple[dict, int]:
    f = parse_f(args.f)
    pred = sumengine.drift_predict(args.a, args.q, f, args.N, args.M)
    measured = sumengine.partial_sum_periodic(
        args.a, args.q, f, args.N, args.M, max_terms=cfg.max_terms
    )
    gap = abs(measured.value - pred.predicted)
    payload = {
        "schema": 1,
        "a": args.a,
        "q": args.q,
        "f": f.name,
        "N": args.N,
        "M": args.M,
        "predicted": {
            "magnitude": pred.magnitude,
            "sign": pred.sign,
            "value": pred.predicted,
            "error_allowance": pred.error_allowance,
        },
        "measured": {
            "value": measured.value,
            "rounding_bound": measured.rounding_bound,
        },
        "gap": gap,
        "within_allowance": gap <= pred.error_allowance + measured.rounding_bound,
        "relative_magnitude_gap": abs(abs(measured.value) - pred.magnitude) / pred.magnitude,
    }
    return payload, 0


def _exponent_as_float(spec: LiouvilleSpec, k: int) -> float:
    e = spec.exponent(k, 10 ** 15)
    if e is not None:
        return float(e)
    lg = spec.exponent_log10(k)
    if math.isinf(lg) or lg > 307:
        return math.inf
    return 10.0 ** lg


_LOG10_20_3 = math.log10(20.0 / 3.0)


def _cmd_liouville(args: argparse.Namespace, cfg: Config, outputs: List[str]) -> Tuple[dict, int]:
    num_s, slash, den_s = args.base.partition("/")
    if not slash:
        raise ValueError(f"--base must look like a/q, got {args.base!r}")
    if not args.digits or any(c not in "13" for c in args.digits):
        raise ValueError("--digits must be a nonempty pattern over {1,3}")
    spec = LiouvilleSpec(
        base_num=int(num_s),
        base_den=int(den_s),
        digits=tuple(int(c) for c in args.digits),
        start=args.start,
        schedule=Schedule(args.schedule),
    )
    source = realsource.make_liouville(spec, max_bits=cfg.max_bits)
    p = Fraction(args.p)
    criterion.make_power_f(p)  # validates the exponent range
    levels: List[dict] = []
    error: Optional[str] = None
    top_level = spec.start + args.terms - 1
    top_den: Optional[int] = None
    for level in range(spec.start, top_level + 1):
        e_here = spec.exponent(level, 10 ** 9)
        if e_here is None:
            error = (
                f"exponent e_{level} of the {spec.schedule.value} schedule is not "
                f"representable; reporting levels below {level} only"
            )
            break
        lam = realsource.liouville_partial(spec, level)
        q_red = lam.denominator
        top_den = q_red
        lg_q = math.log10(q_red)
        e_next = _exponent_as_float(spec, level + 1)
        if math.isinf(e_next):
            q_next_lg = math.inf
            term_lg = math.inf
        else:
            q_next_lg = e_next - lg_q - _LOG10_20_3
            if p == 1:
                term_lg = math.log10(q_next_lg * math.log(10.0)) - 2 * lg_q
            else:
                term_lg = float(1 - p) * q_next_lg - 2 * lg_q
        # Legendre gap certificate: the remaining tail is < 4*10^-e_next, so
        # 8 q^2 < 10^e_next forces lambda to be a convergent of alpha.
        e_next_int = spec.exponent(level + 1, 10 ** 6)
        if e_next_int is not None:
            gap_ok = len(str(8 * q_red * q_red)) <= e_next_int
        else:
            gap_ok = e_next > 2.0 * len(str(q_red)) + 1
        levels.append(
            {
                "level": level,
                "exponent": e_here,
                "lambda_num": str(lam.numerator),
                "lambda_den": str(lam.denominator),
                "q": str(q_red),
                "q_even": q_red % 2 == 0,
                "q_next_log10_lower": _json_float(q_next_lg),
                "criterion_term_log10_lower": _json_float(term_lg),
                "_gap_ok": gap_ok,
            }
        )
    count = 24
    while True:
        exp = cfrac.expand(source, count, max_bits=cfg.max_bits)
        reached = exp.convergents and top_den and exp.convergents[-1].q >= top_den
        if exp.capped or reached or count >= 384:
            break
        count *= 2
    conv_pairs = {(c.a, c.q) for c in exp.convergents}
    for entry in levels:
        lam_pair = (int(entry["lambda_num"]), int(entry["lambda_den"]))
        gap_ok = entry.pop("_gap_ok")
        if lam_pair in conv_pairs:
            entry["verified_convergent"] = True
            entry["verification"] = "expansion"
        elif gap_ok:
            entry["verified_convergent"] = True
            entry["verification"] = "gap_bound"
        else:
            entry["verified_convergent"] = False
            entry["verification"] = None
    qalpha = cfrac.q_alpha(exp.convergents)
    verdict = criterion.classify(
        source, criterion.make_power_f(p), Budget(max_bits=cfg.max_bits)
    )
    payload = {
        "schema": 1,
        "alpha": format_alpha(source),
        "schedule": spec.schedule.value,
        "p": str(p),
        "levels": levels,
        "qalpha": [
            {"n": e.n, "q": str(e.q), "q_next": str(e.q_next)} for e in qalpha
        ],
        "expansion": {
            "convergents": len(exp.convergents),
            "capped": exp.capped,
            "cap_reason": exp.cap_reason,
        },
        "classify": {
            "outcome": verdict.outcome.value,
            "certificate": verdict.certificate.value,
        },
        "error": error,
    }
    return payload, (2 if error else 0)


# -- driver -------------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file (max_bits, max_terms, workers)")
    common.add_argument("--max-bits", dest="max_bits", type=int, help="precision cap override")
    common.add_argument("--max-terms", dest="max_terms", type=int, help="term cap override")
    common.add_argument("--workers", type=int, help="worker threads for direct summation")
    common.add_argument("--manifest", default=_DEFAULT_MANIFEST, help="run manifest path")
    common.add_argument("--json", dest="json_path", help="write the JSON document here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="dseries",
        description="Convergence toolkit for alternating sine-weighted series",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cf", parents=[common], help="continued-fraction expansion")
    s.add_argument("alpha")
    s.add_argument("--terms", type=_positive_int, default=12)
    s.set_defaults(func=_cmd_cf)

    s = sub.add_parser("classify", parents=[common], help="convergence verdict")
    s.add_argument("alpha")
    s.add_argument("--f", required=True, help="weight spec, e.g. pow:1 or pow:1/2")
    s.add_argument("--cert", action="append", help="roth | mahler[:C] | measure:mu,C")
    s.add_argument("--budget", type=_positive_int, default=24, help="expansion budget (convergents)")
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("sum", parents=[common], help="partial sums S(alpha; M, N)")
    s.add_argument("alpha")
    s.add_argument("--f", required=True)
    s.add_argument("--N", type=_nonneg_int, default=0)
    s.add_argument("--M", type=_positive_int, required=True)
    s.add_argument("--mode", choices=["direct", "periodic", "both"], default="direct")
    s.add_argument("--trace", help="CSV trace path (geometric checkpoints)")
    s.set_defaults(func=_cmd_sum)

    s = sub.add_parser("drift", parents=[common], help="even-q drift prediction vs measurement")
    s.add_argument("a", type=int)
    s.add_argument("q", type=int)
    s.add_argument("--f", required=True)
    s.add_argument("--N", type=_nonneg_int, required=True)
    s.add_argument("--M", type=_positive_int, required=True)
    s.set_defaults(func=_cmd_drift)

    s = sub.add_parser("liouville", parents=[common], help="staircase construction report")
    s.add_argument("--schedule", required=True, choices=["factorial", "tower100"])
    s.add_argument("--digits", default="1", help="repeating digit pattern over {1,3}")
    s.add_argument("--base", default="0/1", help="rational offset a/q")
    s.add_argument("--start", type=_positive_int, default=1)
    s.add_argument("--terms", type=_positive_int, default=4, help="number of staircase levels")
    s.add_argument("--p", default="1/2", help="power-weight exponent for criterion terms")
    s.set_defaults(func=_cmd_liouville)
    return parser


def _prescan_manifest(argv: Sequence[str]) -> str:
    for i, item in enumerate(argv):
        if item == "--manifest" and i + 1 < len(argv):
            return argv[i + 1]
        if item.startswith("--manifest="):
            return item.split("=", 1)[1]
    return _DEFAULT_MANIFEST


def _write_manifest(path: str, manifest: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
            fh.write("\n")
    except OSError as exc:
        print(f"warning: cannot write manifest {path}: {exc}", file=sys.stderr)


def console_main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    start = time.perf_counter()
    manifest: dict = {
        "schema": 1,
        "command": None,
        "argv": argv,
        "parameters": {},
        "version": __version__,
        "caps": {},
        "outputs": [],
        "duration_s": 0.0,
        "error": None,
    }
    manifest_path = _prescan_manifest(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = 0 if exc.code == 0 else 1
        if code:
            manifest["error"] = "argument parsing failed"
            manifest["duration_s"] = time.perf_counter() - start
            _write_manifest(manifest_path, manifest)
        return code
    manifest["command"] = args.command
    manifest["parameters"] = {
        k: (v if isinstance(v, (str, int, float, bool)) or v is None else str(v))
        for k, v in vars(args).items()
        if k != "func"
    }
    manifest_path = args.manifest
    outputs: List[str] = []
    code = 0
    try:
        cfg = _resolve_config(args)
        manifest["caps"] = {
            "max_bits": cfg.max_bits,
            "max_terms": cfg.max_terms,
            "workers": cfg.workers,
        }
        payload, code = args.func(args, cfg, outputs)
        if payload is not None:
            text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
            if args.json_path:
                with open(args.json_path, "w", encoding="utf-8") as fh:
                    fh.write(text)
                outputs.append(args.json_path)
            else:
                sys.stdout.write(text)
        if payload is not None and payload.get("error"):
            manifest["error"] = payload["error"]
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest["error"] = str(exc)
        code = 1
    except (ResourceLimitError, AmbiguousOrderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest["error"] = str(exc)
        code = 2
    except DSeriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest["error"] = str(exc)
        code = 1
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest["error"] = str(exc)
        code = 1
    manifest["outputs"] = outputs
    manifest["duration_s"] = time.perf_counter() - start
    _write_manifest(manifest_path, manifest)
    return code


def main() -> None:
    sys.exit(console_main())

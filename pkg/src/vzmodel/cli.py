"""Command-line entry point: ``vzmodel {compile,simulate,verify,supremacy,solve-sinc}``.

stdout carries one JSON summary per run; diagnostics go to stderr.

Exit codes: 0 success, 1 verification failed, 2 unreadable input,
3 synthesis failure, 4 size mismatch or too large, 5 infeasible sinc row.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import coupling
from .circuit import circuit_from_json, circuit_to_json, schedule_from_json, schedule_to_json
from .compiler import compile as compile_circuit
from .errors import CircuitError, CouplingInfeasible, DimensionError, SynthesisError
from .simulate import (
    STATE_CEILING, default_tolerance, output_distribution, run_schedule, tvd, verify,
)
from .supremacy import (
    compile_instance, gen_iqp, iqp_distribution, lower_iqp_to_1d, match_iqp_circuit,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SYNTH, EXIT_DIM, EXIT_SINC = 0, 1, 2, 3, 4, 5


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _dump(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CircuitError(f"cannot read {path}: {exc}") from exc


def cmd_compile(args) -> int:
    circuit = circuit_from_json(_read(args.circuit))
    stem = Path(args.circuit).with_suffix("")
    out = Path(args.out or f"{stem}.schedule.json")
    report_path = Path(args.report or f"{stem}.report.json")
    matched = match_iqp_circuit(circuit)
    if matched is not None:
        inst, phase = matched
        sched, report = compile_instance(inst, args.a, args.variant)
        sched = sched.with_layers(sched.layers, phase)
        report.details["route"] = "iqp-1d"
    else:
        sched, report = compile_circuit(circuit, args.a, variant=args.variant, optimize=args.optimize)
    _write(out, schedule_to_json(sched))
    _write(report_path, _dump(report.to_json()))
    print(json.dumps({"schedule": str(out), "report": str(report_path),
                      "applied_layers": len(sched), "per_category": report.per_category}))
    return EXIT_OK


def cmd_simulate(args) -> int:
    sched = schedule_from_json(_read(args.schedule))
    if sched.n > STATE_CEILING:
        raise DimensionError(f"n={sched.n} exceeds the state-vector limit {STATE_CEILING}")
    p = output_distribution(run_schedule(sched))
    body = {"n": sched.n, "probabilities": [float(x) for x in p]}
    if args.out:
        _write(Path(args.out), _dump(body))
        print(json.dumps({"distribution": args.out, "n": sched.n}))
    else:
        print(json.dumps(body))
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = circuit_from_json(_read(args.circuit))
    sched = schedule_from_json(_read(args.schedule))
    tol_op = args.tol_op if args.tol_op is not None else args.tol
    tol_tvd = args.tol_tvd if args.tol_tvd is not None else args.tol
    rep = verify(circuit, sched, tol_op, tol_tvd)
    body = rep.to_json()
    if args.out:
        _write(Path(args.out), _dump(body))
    print(json.dumps(body))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_supremacy(args) -> int:
    inst = gen_iqp(args.n, args.seed)
    sched, report = compile_instance(inst, args.a, args.variant)
    outdir = Path(args.out_dir)
    tol = args.tol
    summary = {"n": args.n, "seed": args.seed, "variant": args.variant,
               "applied_layers": len(sched), "per_category": report.per_category}
    verified = None
    p = None
    if args.n <= args.verify_max:
        p = iqp_distribution(inst)
        dist = tvd(output_distribution(run_schedule(sched)), p)
        verified = {"tvd": dist, "pass": dist < tol, "tolerances": {"tvd": tol}}
    else:
        verified = {"pass": None, "note": f"unverified at this size (n={args.n} > {args.verify_max})"}
    _write(outdir / "instance.json", inst.to_json())
    _write(outdir / "circuit.json", circuit_to_json(lower_iqp_to_1d(inst)))
    _write(outdir / "schedule.json", schedule_to_json(sched))
    _write(outdir / "report.json", _dump({"depth": report.to_json(), "verification": verified}))
    if args.samples:
        if p is None:
            if args.n > STATE_CEILING:
                raise DimensionError("sampling needs the full distribution")
            p = output_distribution(run_schedule(sched))
        rng = np.random.default_rng(args.seed)
        cdf = np.cumsum(p)
        picks = np.minimum(np.searchsorted(cdf, rng.random(args.samples) * cdf[-1], side="right"), len(p) - 1)
        lines = [format(int(s), f"0{args.n}b")[::-1] for s in picks]  # character j = qubit j
        _write(outdir / "samples.txt", "\n".join(lines) + "\n")
        summary["samples"] = str(outdir / "samples.txt")
    summary["verification"] = verified
    print(json.dumps(summary))
    if verified.get("pass") is False:
        return EXIT_FAIL
    return EXIT_OK


def sinc_grid(step: float, ks) -> list[float]:
    count = int(np.floor(np.pi / step + 1e-9))
    cs = [m * step for m in range(count + 1)]
    if np.pi - cs[-1] > 1e-9 and abs(np.pi / step - round(np.pi / step)) < 1e-9:
        cs.append(np.pi)
    return cs


def cmd_solve_sinc(args) -> int:
    if not 0 < args.step <= np.pi / 4 + 1e-12:
        raise CircuitError("step must lie in (0, π/4]")
    ks = tuple(range(args.kmax + 1))
    rows = coupling.feasibility_grid(sinc_grid(args.step, ks), args.a, ks)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    bad = []
    with out.open("w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["C"] + [f"k{k}" for k in ks] + ["k_chosen", "t_chosen"])
        for row in rows:
            if row["k"] is None and row["C"] > 0:
                bad.append(row["C"])
            wr.writerow([repr(float(row["C"]))] + [int(row["feasible"][k]) for k in ks]
                        + ["" if row["k"] is None else row["k"],
                           "" if row["t"] is None else repr(float(row["t"]))])
    print(json.dumps({"csv": str(out), "rows": len(rows), "infeasible": len(bad)}))
    if bad:
        print(f"no k in {ks} works for {len(bad)} values of C, "
              f"from {min(bad):.4f} to {max(bad):.4f}", file=sys.stderr)
        return EXIT_SINC
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vzmodel", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--a", type=float, default=1.0, help="X-field strength (default 1.0)")
        p.add_argument("--variant", choices=("homogeneous", "alternating"), default="homogeneous")

    p = sub.add_parser("compile", help="lower a circuit file to a schedule")
    p.add_argument("circuit")
    p.add_argument("-o", "--out")
    p.add_argument("--report")
    common(p)
    p.add_argument("--no-optimize", dest="optimize", action="store_false")
    p.set_defaults(func=cmd_compile, optimize=True)

    p = sub.add_parser("simulate", help="output distribution of a schedule")
    p.add_argument("schedule")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check a schedule against a circuit")
    p.add_argument("circuit")
    p.add_argument("schedule")
    p.add_argument("-o", "--out")
    p.add_argument("--tol", type=float, default=None, help="both tolerances (default $VZMODEL_TOL or 1e-8)")
    p.add_argument("--tol-op", type=float, default=None)
    p.add_argument("--tol-tvd", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("supremacy", help="random IQP instance -> circuit -> schedule")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.add_argument("--out-dir", default="supremacy_out")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--verify-max", type=int, default=5)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_supremacy)

    p = sub.add_parser("solve-sinc", help="feasibility map of the coupling pulse equation")
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("-o", "--out", default="sinc_map.csv")
    p.set_defaults(func=cmd_solve_sinc)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", 0) is None and args.command == "supremacy":
        args.tol = default_tolerance()
    try:
        return args.func(args)
    except CircuitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SynthesisError, CouplingInfeasible) as exc:
        print(f"synthesis error: {exc}", file=sys.stderr)
        return EXIT_SYNTH
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIM


if __name__ == "__main__":
    sys.exit(main())

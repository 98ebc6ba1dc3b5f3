"""Command-line entry point: single estimation runs, direction and Euler
recovery, the register-based variant, the introductory vignettes, and
the fidelity scaling sweep, all reproducible from an explicit seed."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analysis, frames, iterative, qpe, vignettes
from .frames import DegenerateInput, EulerAngles
from .runtime import RngStream, Session
from .vignettes import ConvergenceFailure

_ENCODINGS = {"bare": "bare", "logical": "logical-triple", "clock": "clock-qubit"}


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


class UsageError(ValueError):
    pass


def _build_parser():
    top = _Parser(prog="framealign",
                  description="Simulators for aligning spatial reference "
                              "frames by exchanging spin-1/2 systems.")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, trials_default=None):
        p.add_argument("--k", type=int, default=4, help="bits of precision")
        p.add_argument("--epsilon", type=float, default=0.1,
                       help="total failure budget")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--theta", type=float, default=0.0,
                       help="hidden polar Euler angle (radians)")
        p.add_argument("--phi", type=float, default=0.0,
                       help="hidden azimuthal Euler angle (radians)")
        p.add_argument("--psi", type=float, default=0.0,
                       help="hidden final Euler angle (radians)")
        p.add_argument("--random-frame", action="store_true",
                       help="draw the hidden frame from the seed instead")
        p.add_argument("--output", help="write structured output here")
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--encoding", choices=tuple(_ENCODINGS), default="bare")
        p.add_argument("--delta", type=float, default=0.25,
                       help="per-stage Chernoff precision override")
        if trials_default is not None:
            p.add_argument("--trials", type=int, default=trials_default)

    common(sub.add_parser("estimate-theta", help="k-bit estimate of theta"))
    common(sub.add_parser("estimate-euler", help="recover all Euler angles"))
    common(sub.add_parser("find-direction", help="locate Alice's z axis"))
    pq = sub.add_parser("qpe", help="register-based phase estimation")
    common(pq)
    pq.add_argument("--histogram", help="write the exact outcome distribution "
                                        "as a y,probability CSV")
    pv = sub.add_parser("vignette", help="run an introductory protocol")
    pv.add_argument("name", choices=tuple(vignettes.VIGNETTES))
    pv.add_argument("--trials", type=int, default=100000)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--spins", type=int, default=1,
                    help="spin count for forward-spins")
    pv.add_argument("--guess", choices=("outcome-axis", "random"),
                    default="outcome-axis")
    pv.add_argument("--output", help="write a vignette CSV here")
    pv.add_argument("--format", choices=("csv", "json"), default="csv")
    ps = sub.add_parser("sweep", help="fidelity scaling sweep")
    ps.add_argument("--k", default="2..8",
                    help="bit range, e.g. 2..6 or a single value")
    ps.add_argument("--seed", type=int, required=True)
    ps.add_argument("--trials", type=int, default=24)
    ps.add_argument("--workers", type=int, default=1)
    ps.add_argument("--output", help="write the sweep CSV here")
    ps.add_argument("--format", choices=("csv", "json"), default="csv")
    return top


def _frame_from_args(args):
    if args.random_frame:
        return frames.random_frame(RngStream(args.seed).derive("hidden-frame"))
    try:
        return EulerAngles(args.phi, args.theta, args.psi)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _session(args):
    return Session(_frame_from_args(args), master_seed=args.seed,
                   encoding=_ENCODINGS[args.encoding])


def _check_common(args):
    if not 1 <= args.k <= 16:
        raise UsageError("--k must lie in 1..16")
    if not 0.0 < args.epsilon < 1.0:
        raise UsageError("--epsilon must lie in (0, 1)")
    if not 0.0 < args.delta <= 0.5:
        raise UsageError("--delta must lie in (0, 1/2]")
    if args.format == "csv":
        raise UsageError("this subcommand writes the JSON estimate record")


def _cmd_estimate_theta(args):
    _check_common(args)
    session = _session(args)
    rng = RngStream(args.seed).derive("estimate-theta")
    est = iterative.estimate_theta(session, args.k, args.epsilon, rng,
                                   delta=args.delta)
    truth = session.angles.theta / np.pi
    report = analysis.estimate_report("estimate-theta", args.k, args.epsilon,
                                      args.seed, est.center, truth,
                                      session.ledger, est.half_width)
    print(f"T estimate {est.center:.10f} (theta {np.pi * est.center:.10f} rad), "
          f"truth T {truth:.10f}, half-width {est.half_width:.3e}")
    led = session.ledger
    print(f"ledger: {led.forward_qubits} fwd / {led.backward_qubits} bwd qubits, "
          f"rounds seq {led.rounds_sequential} par {led.rounds_parallel}")
    if args.output:
        analysis.emit(report, "json", args.output)
    return 0


def _cmd_find_direction(args):
    _check_common(args)
    session = _session(args)
    rng = RngStream(args.seed).derive("find-direction")
    u_hat, rep = iterative.find_direction(session, args.k, args.epsilon, rng)
    print(f"direction estimate [{u_hat[0]:.8f} {u_hat[1]:.8f} {u_hat[2]:.8f}] "
          f"fidelity {rep.fidelity:.8f} (delta alpha {rep.delta_alpha:.3e} rad)")
    if args.output:
        payload = {
            "protocol": "find-direction", "k": args.k, "epsilon": args.epsilon,
            "seed": args.seed,
            "estimate": {"direction": list(map(float, u_hat))},
            "truth": {"direction": list(map(float, rep.truth_direction))},
            "delta_alpha_rad": rep.delta_alpha,
            "fidelity": rep.fidelity,
            "success": rep.success,
            "ledger": session.ledger.as_dict(),
        }
        analysis.emit(payload, "json", args.output)
    return 0


def _cmd_estimate_euler(args):
    _check_common(args)
    session = _session(args)
    rng = RngStream(args.seed).derive("estimate-euler")
    est = iterative.estimate_euler(session, args.k, args.epsilon, rng)
    truth = session.angles
    print(f"euler estimate phi {est.phi:.8f} theta {est.theta:.8f} "
          f"psi {est.psi:.8f}")
    print(f"truth          phi {truth.phi:.8f} theta {truth.theta:.8f} "
          f"psi {truth.psi:.8f}")
    if args.output:
        payload = {
            "protocol": "estimate-euler", "k": args.k, "epsilon": args.epsilon,
            "seed": args.seed,
            "estimate": {"phi": est.phi, "theta": est.theta, "psi": est.psi},
            "truth": {"phi": truth.phi, "theta": truth.theta, "psi": truth.psi},
            "ledger": session.ledger.as_dict(),
        }
        analysis.emit(payload, "json", args.output)
    return 0


def _cmd_qpe(args):
    _check_common(args)
    session = _session(args)
    rng = RngStream(args.seed).derive("qpe")
    est = qpe.run_qpe(session, args.k, args.epsilon, rng)
    truth = session.angles.theta / np.pi
    x = qpe.register_size(args.k, args.epsilon)
    print(f"qpe estimate T {est.value:.10f} (register {x} control qubits), "
          f"truth T {truth:.10f}")
    if args.histogram:
        probs = qpe.run_register(session.angles, x)
        lines = ["y,probability"]
        lines += [f"{y},{format(float(p), '.17g')}" for y, p in enumerate(probs)]
        with open(args.histogram, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    if args.output:
        report = analysis.estimate_report("qpe", args.k, args.epsilon,
                                          args.seed, est.value, truth,
                                          session.ledger,
                                          2.0 ** -(args.k + 1))
        analysis.emit(report, "json", args.output)
    return 0


def _cmd_vignette(args):
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if args.name == "forward-spins":
        result = vignettes.forward_spins_avg(args.spins, args.trials, args.seed,
                                             guess=args.guess)
    else:
        result = vignettes.VIGNETTES[args.name](args.trials, args.seed)
    print(f"{result.name}: avg fidelity {result.avg_fidelity:.6f} "
          f"+- {result.stderr:.6f} over {result.trials} trials")
    led = result.ledger
    print(f"per-trial ledger: {led.forward_qubits} fwd qubits, "
          f"{led.backward_qubits} bwd qubits, {led.forward_cbits} fwd cbits, "
          f"{led.backward_cbits} bwd cbits")
    for key, val in result.stats.items():
        print(f"{key}: {val}")
    if args.output:
        analysis.emit([result], "csv", args.output, seed=args.seed)
    return 0


def _parse_k_range(text):
    try:
        if ".." in text:
            lo, hi = text.split("..")
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(text)]
    except ValueError as exc:
        raise UsageError(f"bad --k range {text!r}") from exc
    if not ks:
        raise UsageError("empty --k range")
    return ks


def _cmd_sweep(args):
    ks = _parse_k_range(args.k)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rows = analysis.scaling_sweep(ks, args.trials, args.seed,
                                  workers=max(1, args.workers))
    for line in analysis.sweep_csv_lines(rows):
        print(line)
    if len(rows) >= 2:
        slope = analysis.fit_scaling_slope(rows)
        print(f"# fitted log2(1-f_min) slope vs log2(roundtrips): {slope:.4f}")
    if args.output:
        analysis.emit(rows, args.format, args.output, seed=args.seed)
    return 0


_COMMANDS = {
    "estimate-theta": _cmd_estimate_theta,
    "estimate-euler": _cmd_estimate_euler,
    "find-direction": _cmd_find_direction,
    "qpe": _cmd_qpe,
    "vignette": _cmd_vignette,
    "sweep": _cmd_sweep,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"framealign: error: {exc}\n")
        return 1
    except (DegenerateInput, ConvergenceFailure, ArithmeticError) as exc:
        sys.stderr.write(f"framealign: numeric failure: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"framealign: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

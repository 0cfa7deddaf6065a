"""Command-line front end.

Commands: run, verify, equiv, transpile, accept, fmt. Exit codes: 0 on
success, 1 when a verification or simulation check fails, 2 on usage or
parse errors. Probabilities print with 12 significant digits in table mode
and full double precision in JSON mode.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import analysis, dsl
from .circuit import Circuit, Mode, validate, with_mode
from .simulate import (
    SimulationError,
    StateVector,
    bits_to_str,
    observe_outputs,
    run,
    run_deterministic,
    sample,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

_AMPLITUDE_CUTOFF = 1e-12


class UsageError(Exception):
    pass


def _load(path: str) -> Circuit:
    try:
        with open(path, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from e
    circuit, errors = dsl.try_parse(source)
    if errors:
        for err in errors:
            print(f"{path}:{err}", file=sys.stderr)
        raise UsageError(f"{path}: {len(errors)} parse error(s)")
    assert circuit is not None
    return circuit


def _parse_input_bits(circuit: Circuit, text: str | None) -> tuple[int, ...]:
    if text is None:
        if circuit.inputs == 0:
            return ()
        raise UsageError(f"circuit has {circuit.inputs} input registers; pass --input")
    if len(text) != circuit.inputs or any(ch not in "01" for ch in text):
        raise UsageError(
            f"--input wants {circuit.inputs} bits of 0/1, got {text!r}"
        )
    return tuple(int(ch) for ch in text)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _amp_str(value: complex | float) -> str:
    value = complex(value)
    if value.imag == 0.0:
        return _fmt(value.real)
    sign = "+" if value.imag >= 0 else "-"
    return f"{_fmt(value.real)}{sign}{_fmt(abs(value.imag))}i"


def _state_lines(state: StateVector) -> list[str]:
    lines = []
    for index, amp in enumerate(state.amps):
        if abs(amp) > _AMPLITUDE_CUTOFF:
            bits = bits_to_str(((index >> (state.registers - 1 - i)) & 1)
                               for i in range(state.registers))
            lines.append(f"amplitude {bits} {_amp_str(amp)}")
    return lines


def _state_json(state: StateVector) -> dict:
    out = {}
    for index, amp in enumerate(state.amps):
        if abs(amp) > _AMPLITUDE_CUTOFF:
            bits = bits_to_str(((index >> (state.registers - 1 - i)) & 1)
                               for i in range(state.registers))
            amp = complex(amp)
            out[bits] = amp.real if amp.imag == 0.0 else [amp.real, amp.imag]
    return out


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def _cmd_run(args) -> int:
    circuit = _load(args.file)
    input_bits = _parse_input_bits(circuit, args.input)
    payload: dict = {
        "circuit": circuit.name,
        "mode": circuit.mode.value,
        "registers": circuit.registers,
    }
    table: list[str] = []

    if circuit.mode is Mode.DETERMINISTIC and not args.trace:
        final_bits = run_deterministic(circuit, input_bits)
        table.append(f"state {bits_to_str(final_bits)}")
        payload["state"] = {bits_to_str(final_bits): 1.0}
        distribution = (
            {final_bits[: circuit.outputs]: 1.0} if circuit.outputs else None
        )
        final_state = None
    else:
        def trace(step: int, state: StateVector) -> None:
            if not args.trace or args.format == "json":
                return
            label = "initial" if step == 0 else str(circuit.gates[step - 1])
            print(f"trace {step} {label}")
            for line in _state_lines(state):
                print(f"  {line}")

        final_state = run(circuit, input_bits, on_state=trace)
        if circuit.mode is Mode.DETERMINISTIC:
            final_bits = run_deterministic(circuit, input_bits)
            table.append(f"state {bits_to_str(final_bits)}")
        else:
            table.extend(_state_lines(final_state))
        payload["state"] = _state_json(final_state)
        distribution = (
            observe_outputs(final_state, circuit.outputs) if circuit.outputs else None
        )

    if distribution is not None:
        payload["distribution"] = {
            bits_to_str(bits): p for bits, p in sorted(distribution.items())
        }
        table.extend(
            f"outcome {bits_to_str(bits)} {_fmt(p)}" for bits, p in sorted(distribution.items())
        )

    if args.sample:
        if final_state is None:
            final_state = run(circuit, input_bits)
        counts: dict[str, int] = {}
        for i in range(args.sample):
            drawn = sample(final_state, args.seed + i)
            key = bits_to_str(drawn)
            counts[key] = counts.get(key, 0) + 1
        payload["samples"] = dict(sorted(counts.items()))
        table.append(f"samples {args.sample} seed {args.seed}")
        table.extend(f"count {k} {v}" for k, v in sorted(counts.items()))

    if args.plot:
        from . import report

        plot_dist = distribution
        if plot_dist is None:
            source_state = final_state if final_state is not None else run(circuit, input_bits)
            plot_dist = observe_outputs(source_state, circuit.registers)
        report.render_distribution(plot_dist, args.plot, title=circuit.name)
        table.append(f"plot {args.plot}")

    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print("\n".join(table))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

_CHECK_NAMES = ("class", "reversible", "clean-ancilla", "simplex")


def _true_ancillas(circuit: Circuit) -> tuple[int, ...]:
    return tuple(
        r for r in range(1, circuit.registers + 1)
        if r > circuit.inputs and r > circuit.outputs
    )


def _run_check(circuit: Circuit, name: str, eps: float) -> tuple[bool, str]:
    if name == "class":
        problems = validate(circuit)
        if problems:
            return False, "; ".join(str(p) for p in problems)
        return True, f"all gates admissible in {circuit.mode} mode"
    if name == "reversible":
        ok = analysis.check_reversible(circuit, eps)
        return ok, "" if ok else "whole-circuit matrix is not invertible in its class"
    if name == "clean-ancilla":
        ancillas = _true_ancillas(circuit)
        if not ancillas:
            return True, "no ancilla registers"
        ok = analysis.check_clean_ancilla(circuit, ancillas, eps)
        names = " ".join(f"r{a}" for a in ancillas)
        return ok, f"checked {names}" if ok else f"ancilla among {names} ends dirty"
    if name == "simplex":
        bad_steps: list[str] = []

        def watch(step: int, state: StateVector) -> None:
            if not analysis.in_simplex(state, eps):
                bad_steps.append(f"step {step}")

        for input_bits in analysis.enumerate_inputs(circuit):
            run(circuit, input_bits, on_state=watch)
            if bad_steps:
                return False, f"state leaves the simplex at {bad_steps[0]}"
        return True, "all intermediate states stay in the simplex"
    raise UsageError(f"unknown check {name!r} (choose from {', '.join(_CHECK_NAMES)})")


def _cmd_verify(args) -> int:
    circuit = _load(args.file)
    checks = args.check or ["class"]
    failed = False
    for name in checks:
        ok, detail = _run_check(circuit, name, args.eps)
        suffix = f" ({detail})" if detail else ""
        print(f"{name}: {'PASS' if ok else 'FAIL'}{suffix}")
        failed |= not ok
    return EXIT_CHECK_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# equiv
# ---------------------------------------------------------------------------

def _lift_for_equivalence(circuit: Circuit) -> Circuit:
    if circuit.mode in (Mode.QUANTUM_REAL, Mode.QUANTUM_COMPLEX):
        return circuit
    try:
        return with_mode(circuit, Mode.QUANTUM_REAL)
    except ValueError as e:
        raise UsageError(
            f"circuit {circuit.name} is not liftable to quantum semantics: {e}"
        ) from e


def _cmd_equiv(args) -> int:
    a = _lift_for_equivalence(_load(args.file1))
    b = _lift_for_equivalence(_load(args.file2))
    try:
        rep = analysis.circuits_equivalent(a, b, args.eps)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if rep.equivalent:
        print(f"EQUIVALENT scale={analysis._format_scale(rep.scale)}")
        return EXIT_OK
    print(f"DISTINCT max-deviation={rep.max_deviation:.12g}")
    return EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# transpile
# ---------------------------------------------------------------------------

def _cmd_transpile(args) -> int:
    circuit = _load(args.file)
    if args.pass_name == "to-real":
        if circuit.mode is not Mode.QUANTUM_COMPLEX:
            raise UsageError(
                f"pass to-real applies to quantum-complex circuits, not {circuit.mode}"
            )
        transformed = analysis.realify_circuit(circuit)
        ok, detail = analysis.verify_realified(circuit, transformed)
    else:  # toffoli-to-cht
        if circuit.mode is Mode.QUANTUM_COMPLEX:
            raise UsageError("pass toffoli-to-cht applies to real circuits")
        if circuit.mode is not Mode.QUANTUM_REAL:
            try:
                circuit = with_mode(circuit, Mode.QUANTUM_REAL)
            except ValueError as e:
                raise UsageError(f"cannot lift circuit to quantum-real mode: {e}") from e
        transformed = analysis.decompose_toffoli(circuit)
        ok, detail = analysis.verify_decomposed(circuit, transformed)

    print(
        f"pass {args.pass_name}: registers {circuit.registers} -> {transformed.registers}, "
        f"gates {len(circuit.gates)} -> {len(transformed.gates)}"
    )
    if not ok:
        print(f"verification FAILED: {detail}; output not written", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(f"verified: {detail}")
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dsl.serialize(transformed))
    except OSError as e:
        raise UsageError(f"cannot write {args.out}: {e}") from e
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# accept
# ---------------------------------------------------------------------------

def _resolve_criterion(args) -> analysis.AcceptanceCriterion:
    if args.criterion:
        preset = analysis.PRESET_CRITERIA.get(args.criterion.upper())
        if preset is None:
            names = ", ".join(sorted(analysis.PRESET_CRITERIA))
            raise UsageError(f"unknown criterion {args.criterion!r} (presets: {names})")
        return preset
    if not (args.reject and args.accept):
        raise UsageError("pass --criterion NAME or both --reject and --accept")
    try:
        return analysis.AcceptanceCriterion(
            analysis.parse_interval_union(args.reject),
            analysis.parse_interval_union(args.accept),
        )
    except ValueError as e:
        raise UsageError(str(e)) from e


def _cmd_accept(args) -> int:
    circuit = _load(args.file)
    if circuit.outputs != 1:
        raise UsageError(
            f"acceptance needs exactly one output register, circuit has {circuit.outputs}"
        )
    criterion = _resolve_criterion(args)
    input_bits = _parse_input_bits(circuit, args.input)
    distribution = observe_outputs(run(circuit, input_bits), 1)
    p = distribution.get((1,), 0.0)
    verdict = criterion.evaluate(p)
    if args.format == "json":
        print(json.dumps({"p": p, "verdict": verdict.value, "criterion": str(criterion)}))
    else:
        print(f"p = {_fmt(p)}")
        print(f"verdict = {verdict}")
    if args.plot:
        from . import report

        report.render_acceptance(p, criterion, verdict.value, args.plot, title=circuit.name)
        print(f"plot {args.plot}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# fmt
# ---------------------------------------------------------------------------

def _cmd_fmt(args) -> int:
    circuit = _load(args.file)
    text = dsl.serialize(circuit)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            raise UsageError(f"cannot write {args.out}: {e}") from e
    else:
        print(text, end="")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcir",
        description="Simulate, verify, compare, and transpile .qcir circuit files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a circuit and print state + distribution")
    p_run.add_argument("file")
    p_run.add_argument("--input", help="input bits, e.g. 101")
    p_run.add_argument("--format", choices=("table", "json"), default="table")
    p_run.add_argument("--trace", action="store_true", help="print the state after every gate")
    p_run.add_argument("--sample", type=int, default=0, metavar="N", help="draw N samples")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--plot", metavar="PATH", help="save a distribution bar chart")
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="run verification checks")
    p_verify.add_argument("file")
    p_verify.add_argument(
        "--check", action="append", choices=_CHECK_NAMES,
        help="check to run (repeatable; default: class)",
    )
    p_verify.add_argument("--eps", type=float, default=1e-9)
    p_verify.set_defaults(func=_cmd_verify)

    p_equiv = sub.add_parser("equiv", help="compare two circuits up to global sign/phase")
    p_equiv.add_argument("file1")
    p_equiv.add_argument("file2")
    p_equiv.add_argument("--eps", type=float, default=1e-9)
    p_equiv.set_defaults(func=_cmd_equiv)

    p_trans = sub.add_parser("transpile", help="rewrite a circuit and write the result")
    p_trans.add_argument("file")
    p_trans.add_argument(
        "--pass", dest="pass_name", required=True, choices=("to-real", "toffoli-to-cht"),
    )
    p_trans.add_argument("--out", required=True, help="output .qcir path")
    p_trans.set_defaults(func=_cmd_transpile)

    p_accept = sub.add_parser("accept", help="evaluate an acceptance criterion")
    p_accept.add_argument("file")
    p_accept.add_argument("--input", help="input bits, e.g. 101")
    p_accept.add_argument("--criterion", help="preset name (P, NP, RP, BPP, PP, EQP, CEQP, RQP, BQP)")
    p_accept.add_argument("--reject", help="reject set, e.g. '[0,1/3]'")
    p_accept.add_argument("--accept", help="accept set, e.g. '[2/3,1]'")
    p_accept.add_argument("--format", choices=("table", "json"), default="table")
    p_accept.add_argument("--plot", metavar="PATH", help="save an acceptance-band figure")
    p_accept.set_defaults(func=_cmd_accept)

    p_fmt = sub.add_parser("fmt", help="canonically format a circuit file")
    p_fmt.add_argument("file")
    p_fmt.add_argument("--out", help="write here instead of stdout")
    p_fmt.set_defaults(func=_cmd_fmt)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SimulationError as e:
        print(f"simulation invariant failure: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

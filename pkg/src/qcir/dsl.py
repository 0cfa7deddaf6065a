"""Text format for circuits (`.qcir` files).

Line-oriented grammar; `#` starts a comment, one statement per line:

    circuit <name>
    mode <deterministic|probabilistic|quantum-real|quantum-complex>
    registers <n>
    inputs <k>                      # default 0
    outputs <l>                     # default 0
    init r<i> <0|1>                 # noninput registers; default 0
    defgate <name> <arity> rows: <row;row;...>
    apply <GATE> r<i> [r<j> ...]
    apply FLIP(<p>,<q>) r<i>

Matrix entries are decimals, exact fractions `a/b`, `rsqrt2` (= 1/sqrt 2),
or complex `x+yi` / `x-yi`. Built-in gate names: NOT AND OR XOR CNOT TOFFOLI
H Z IDENT T TINV PHASE8. Serialization is canonical: lowercase keywords,
single spaces, statements in a fixed order, numbers in shortest
round-tripping form.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import gates
from .circuit import Circuit, GateApplication, Mode, validate

_RSQRT2 = 1.0 / math.sqrt(2.0)

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")
_UNSIGNED_NUM = r"(?:rsqrt2|\d+/\d+|(?:\d+(?:\.\d+)?|\.\d+)(?:[eE][+-]?\d+)?)"
_NUMBER_RE = re.compile(rf"[+-]?{_UNSIGNED_NUM}\Z")
_COMPLEX_RE = re.compile(rf"(?P<re>[+-]?{_UNSIGNED_NUM})(?P<sign>[+-])(?P<im>{_UNSIGNED_NUM})i\Z")
_FLIP_APPLY_RE = re.compile(
    r"apply\s+FLIP\s*\(\s*(?P<p>[^,()\s]+)\s*,\s*(?P<q>[^,()\s]+)\s*\)\s+(?P<targets>.+)\Z"
)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    message: str
    kind: str  # lex | syntax | semantic

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.kind} error: {self.message}"


class DslError(ValueError):
    """Parse failure; carries every recoverable error with its source span."""

    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


def _parse_real(token: str) -> float:
    """One real literal: decimal, fraction, or (signed) rsqrt2."""
    if not _NUMBER_RE.match(token):
        raise ValueError(f"bad number {token!r}")
    sign = 1.0
    body = token
    if body and body[0] in "+-":
        sign = -1.0 if body[0] == "-" else 1.0
        body = body[1:]
    if body == "rsqrt2":
        return sign * _RSQRT2
    if "/" in body:
        num, den = body.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {token!r}")
        return sign * int(num) / int(den)
    return sign * float(body)


def _parse_entry(token: str) -> complex | float:
    """One matrix entry: a real literal or x+yi / x-yi."""
    m = _COMPLEX_RE.match(token)
    if m:
        re_part = _parse_real(m.group("re"))
        im_part = _parse_real(m.group("im"))
        if m.group("sign") == "-":
            im_part = -im_part
        return complex(re_part, im_part)
    return _parse_real(token)


def format_number(x: float) -> str:
    """Canonical text for a real value; round-trips exactly through parsing."""
    if x == _RSQRT2:
        return "rsqrt2"
    if x == -_RSQRT2:
        return "-rsqrt2"
    return repr(float(x))


def _format_entry(x: complex | float) -> str:
    x = complex(x)
    if x.imag == 0.0:
        return format_number(x.real)
    sign = "-" if x.imag < 0 else "+"
    return f"{format_number(x.real)}{sign}{format_number(abs(x.imag))}i"


def _parse_register(token: str) -> int:
    body = token[1:] if token.startswith("r") else token
    if not body.isdigit():
        raise ValueError(f"bad register {token!r}, expected r<i>")
    idx = int(body)
    if idx < 1:
        raise ValueError(f"register indices start at 1, got {token!r}")
    return idx


@dataclass
class _Parser:
    source: str
    errors: list[ParseError] = field(default_factory=list)

    def error(self, line: int, column: int, message: str, kind: str) -> None:
        self.errors.append(ParseError(SourceSpan(line, column), message, kind))

    # one (value, line) slot per single-occurrence header statement
    def _set_once(self, slot: str, keyword: str, value, line: int, column: int) -> None:
        if getattr(self, slot, None) is not None:
            self.error(line, column, f"duplicate '{keyword}' statement", "semantic")
        else:
            setattr(self, slot, (value, line))

    def run(self) -> tuple[Circuit | None, list[ParseError]]:
        self._name = None
        self._mode = None
        self._registers = None
        self._inputs = None
        self._outputs = None
        inits: dict[int, tuple[int, int]] = {}  # register -> (bit, line)
        defgates: dict[str, gates.GateSpec] = {}
        applies: list[tuple[GateApplication, int]] = []

        for lineno, raw in enumerate(self.source.splitlines(), start=1):
            text = raw.split("#", 1)[0]
            if not text.strip():
                continue
            tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]
            keyword, kcol = tokens[0]
            rest = tokens[1:]
            try:
                if keyword == "circuit":
                    self._stmt_name(rest, lineno)
                elif keyword == "mode":
                    self._stmt_mode(rest, lineno)
                elif keyword in ("registers", "inputs", "outputs"):
                    self._stmt_count(keyword, rest, lineno)
                elif keyword == "init":
                    self._stmt_init(rest, lineno, inits)
                elif keyword == "defgate":
                    self._stmt_defgate(rest, lineno, text, defgates)
                elif keyword == "apply":
                    self._stmt_apply(rest, lineno, text, defgates, applies)
                else:
                    self.error(lineno, kcol, f"unknown statement {keyword!r}", "syntax")
            except _StatementError:
                pass  # already recorded

        return self._assemble(inits, applies)

    def _fail(self, line: int, column: int, message: str, kind: str) -> None:
        self.error(line, column, message, kind)
        raise _StatementError()

    def _expect_args(self, rest, line: int, count: int, usage: str) -> None:
        if len(rest) != count:
            self._fail(line, 1, f"expected '{usage}'", "syntax")

    def _stmt_name(self, rest, line: int) -> None:
        self._expect_args(rest, line, 1, "circuit <name>")
        name, col = rest[0]
        if not _IDENT_RE.match(name):
            self._fail(line, col, f"bad circuit name {name!r}", "lex")
        self._set_once("_name", "circuit", name, line, col)

    def _stmt_mode(self, rest, line: int) -> None:
        self._expect_args(rest, line, 1, "mode <semantics>")
        word, col = rest[0]
        try:
            mode = Mode(word)
        except ValueError:
            choices = ", ".join(m.value for m in Mode)
            self._fail(line, col, f"unknown mode {word!r} (one of: {choices})", "semantic")
        self._set_once("_mode", "mode", mode, line, col)

    def _stmt_count(self, keyword: str, rest, line: int) -> None:
        self._expect_args(rest, line, 1, f"{keyword} <count>")
        word, col = rest[0]
        if not word.isdigit():
            self._fail(line, col, f"{keyword} wants a nonnegative integer, got {word!r}", "lex")
        self._set_once(f"_{keyword}", keyword, int(word), line, col)

    def _stmt_init(self, rest, line: int, inits: dict) -> None:
        self._expect_args(rest, line, 2, "init r<i> <0|1>")
        (reg_tok, reg_col), (bit_tok, bit_col) = rest
        try:
            reg = _parse_register(reg_tok)
        except ValueError as e:
            self._fail(line, reg_col, str(e), "lex")
        if bit_tok not in ("0", "1"):
            self._fail(line, bit_col, f"initial value must be 0 or 1, got {bit_tok!r}", "syntax")
        if reg in inits:
            self._fail(line, reg_col, f"duplicate init for r{reg}", "semantic")
        inits[reg] = (int(bit_tok), line)

    def _stmt_defgate(self, rest, line: int, text: str, defgates: dict) -> None:
        if len(rest) < 3 or rest[2][0] != "rows:":
            self._fail(line, 1, "expected 'defgate <name> <arity> rows: <row;row;...>'", "syntax")
        (name, name_col), (arity_tok, arity_col) = rest[0], rest[1]
        if not _IDENT_RE.match(name):
            self._fail(line, name_col, f"bad gate name {name!r}", "lex")
        if name in gates.BUILTIN_NAMES or name == "FLIP":
            self._fail(line, name_col, f"gate name {name!r} is reserved", "semantic")
        if name in defgates:
            self._fail(line, name_col, f"duplicate defgate {name!r}", "semantic")
        if not arity_tok.isdigit() or int(arity_tok) < 1:
            self._fail(line, arity_col, f"bad arity {arity_tok!r}", "lex")
        arity = int(arity_tok)
        dim = 2 ** arity

        spec = text[text.index("rows:") + len("rows:"):]
        rows_col = text.index("rows:") + len("rows:") + 1
        rows = [r for r in spec.split(";")]
        if len(rows) != dim:
            self._fail(line, rows_col, f"expected {dim} rows, got {len(rows)}", "syntax")
        entries = []
        for row in rows:
            row_tokens = [t for t in re.split(r"[,\s]+", row) if t]
            if len(row_tokens) != dim:
                self._fail(line, rows_col, f"expected {dim} entries per row, got {len(row_tokens)}", "syntax")
            for tok in row_tokens:
                try:
                    entries.append(_parse_entry(tok))
                except ValueError as e:
                    col = text.find(tok, rows_col - 1) + 1
                    self._fail(line, max(col, 1), str(e), "lex")
        dtype = complex if any(isinstance(e, complex) and e.imag != 0.0 for e in entries) else float
        matrix = np.array(entries, dtype=dtype).reshape(dim, dim)
        defgates[name] = gates.custom(name, arity, matrix)

    def _stmt_apply(self, rest, line: int, text: str, defgates: dict, applies: list) -> None:
        gate_token = rest[0][0] if rest else ""
        is_flip = gate_token == "FLIP" or gate_token.startswith("FLIP(")
        flip = _FLIP_APPLY_RE.match(text.strip()) if is_flip else None
        if is_flip and flip is None:
            self._fail(line, 1, "expected 'apply FLIP(<p>,<q>) r<i>'", "syntax")
        if flip is not None:
            try:
                p = _parse_real(flip.group("p"))
                q = _parse_real(flip.group("q"))
                gate = gates.coin_flip(p, q)
            except ValueError as e:
                self._fail(line, text.find("FLIP") + 1, str(e), "semantic")
            target_tokens = [(t, text.find(t) + 1) for t in flip.group("targets").split()]
        else:
            if not rest:
                self._fail(line, 1, "expected 'apply <GATE> r<i> ...'", "syntax")
            gate_name, gate_col = rest[0]
            target_tokens = rest[1:]
            if gate_name in gates.BUILTIN_NAMES:
                gate = gates.builtin(gate_name)
            elif gate_name in defgates:
                gate = defgates[gate_name]
            else:
                self._fail(line, gate_col, f"unknown gate {gate_name!r}", "semantic")
        targets = []
        for tok, col in target_tokens:
            try:
                targets.append(_parse_register(tok))
            except ValueError as e:
                self._fail(line, col, str(e), "lex")
        if not targets:
            self._fail(line, 1, "apply needs at least one target register", "syntax")
        applies.append((GateApplication(gate, tuple(targets)), line))

    def _assemble(self, inits, applies) -> tuple[Circuit | None, list[ParseError]]:
        if self._registers is None:
            self.error(1, 1, "missing 'registers' statement", "semantic")
        if self._mode is None:
            self.error(1, 1, "missing 'mode' statement", "semantic")

        name = self._name[0] if self._name else "main"
        num_inputs, inputs_line = self._inputs if self._inputs else (0, 1)
        num_outputs, outputs_line = self._outputs if self._outputs else (0, 1)

        # Report everything the known header fields allow, even when other
        # statements are broken, so independent mistakes surface together.
        header_ok = self._registers is not None
        ancilla: list[int] = []
        if self._registers is not None:
            registers, registers_line = self._registers
            if registers < 1:
                self.error(registers_line, 1, "a circuit needs at least one register", "semantic")
                header_ok = False
            if num_inputs > registers:
                self.error(inputs_line, 1, f"inputs {num_inputs} exceeds registers {registers}", "semantic")
                header_ok = False
            if num_outputs > registers:
                self.error(outputs_line, 1, f"outputs {num_outputs} exceeds registers {registers}", "semantic")
                header_ok = False
            ancilla = [0] * max(registers - num_inputs, 0)
            for reg, (bit, line) in sorted(inits.items()):
                if reg > registers:
                    self.error(line, 1, f"init register r{reg} out of range 1..{registers}", "semantic")
                elif reg <= num_inputs:
                    self.error(line, 1, f"r{reg} is an input register and cannot be initialized", "semantic")
                elif header_ok:
                    ancilla[reg - num_inputs - 1] = bit

        if self._mode is None or not header_ok or self.errors:
            return None, self.errors
        registers = self._registers[0]
        mode = self._mode[0]

        shell = Circuit(
            name=name,
            registers=registers,
            mode=mode,
            inputs=num_inputs,
            outputs=num_outputs,
            ancilla_init=tuple(ancilla),
        )
        for ga, line in applies:
            for message in shell.gate_violations(ga):
                self.error(line, 1, message, "semantic")
        if self.errors:
            return None, self.errors

        circuit = Circuit(
            name=name,
            registers=registers,
            mode=mode,
            inputs=num_inputs,
            outputs=num_outputs,
            ancilla_init=tuple(ancilla),
            gates=tuple(ga for ga, _ in applies),
        )
        return circuit, []


class _StatementError(Exception):
    """Internal: abandon the current statement after recording its error."""


def try_parse(source: str) -> tuple[Circuit | None, list[ParseError]]:
    """Parse, returning (circuit, []) on success or (None, errors) on failure."""
    return _Parser(source).run()


def parse(source: str) -> Circuit:
    """Parse a circuit, raising DslError with all recoverable errors on failure."""
    circuit, errors = try_parse(source)
    if errors:
        raise DslError(errors)
    assert circuit is not None
    return circuit


def serialize(circuit: Circuit) -> str:
    """Canonical text form; parse(serialize(c)) is structurally equal to c."""
    problems = validate(circuit)
    if problems:
        raise ValueError("cannot serialize invalid circuit: " + "; ".join(map(str, problems)))
    if not _IDENT_RE.match(circuit.name):
        raise ValueError(f"circuit name {circuit.name!r} is not serializable")

    lines = [
        f"circuit {circuit.name}",
        f"mode {circuit.mode.value}",
        f"registers {circuit.registers}",
        f"inputs {circuit.inputs}",
        f"outputs {circuit.outputs}",
    ]
    for reg in range(circuit.inputs + 1, circuit.registers + 1):
        if circuit.init_value(reg) == 1:
            lines.append(f"init r{reg} 1")

    seen: dict[str, gates.GateSpec] = {}
    for ga in circuit.gates:
        g = ga.gate
        if g.name in gates.BUILTIN_NAMES or g.name == "FLIP":
            continue
        if g.name in seen:
            if not np.array_equal(seen[g.name].matrix, g.matrix):
                raise ValueError(f"two gates named {g.name!r} with different matrices")
            continue
        seen[g.name] = g
        rows = "; ".join(
            " ".join(_format_entry(x) for x in row) for row in g.matrix
        )
        lines.append(f"defgate {g.name} {g.arity} rows: {rows}")

    for ga in circuit.gates:
        g = ga.gate
        targets = " ".join(f"r{t}" for t in ga.targets)
        if g.name == "FLIP":
            p = float(g.matrix[0, 0].real)
            q = float(g.matrix[0, 1].real)
            lines.append(f"apply FLIP({format_number(p)},{format_number(q)}) {targets}")
        else:
            lines.append(f"apply {g.name} {targets}")
    return "\n".join(lines) + "\n"

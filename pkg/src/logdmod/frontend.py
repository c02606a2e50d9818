"""Expression and problem-file parsing, and report serialization.

Problem files are line oriented::

    # the log line with two modules
    chart LL
    module O rank 1
      row th1
    module C0 rank 1
      row t1
      row th1
    task holonomic O
    task restrict O stratum=1

See README.md for the full grammar.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .chart import Chart
from .ncgb import ModulePresentation, row_to_vec
from .opalg import OpElement, normal_form

SCHEMA = "logdmod-report/1"

TASKS = ("check", "gb", "resolve", "charvar", "holonomic", "dual", "restrict", "split",
         "perverse", "gabber")

PRESETS = {
    "LL": Chart(0, 1),
    "LP": Chart(0, 2),
    "PT": Chart(0, 1, frozenset({1})),
    "A1": Chart(1, 0),
    "A2": Chart(2, 0),
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message, self.line, self.col = message, line, col


# -- expressions ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")
_OP_GENS = re.compile(r"^(th|x|t|d)(\d+)$")
_COT_GENS = re.compile(r"^(tau|xi|x|t)(\d+)$")


def _tokenize(text: str, line: int, col0: int):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", line, col0 + start)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), col0 + start))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


class _Parser:
    """Recursive descent over the expression grammar, building tuple trees."""

    def __init__(self, text: str, gens: re.Pattern, check_gen, line: int, col0: int):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.gens, self.check_gen, self.line = gens, check_gen, line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        tree = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("num", "name") or tok[1] == "(":
                self.fail("juxtaposition is not allowed; write '*'")
            self.fail(f"unexpected {tok[1]!r}")
        return tree

    def expr(self):
        tree = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            tree = ("add" if op == "+" else "sub", tree, rhs)
        return tree

    def term(self):
        tree = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op[1] == "*":
                tree = ("mul", tree, rhs)
            else:
                c = _constant(rhs)
                if c is None:
                    self.fail("division is only allowed by a rational constant", op)
                if c == 0:
                    self.fail("division by zero", op)
                tree = ("mul", tree, ("num", 1 / c))
        return tree

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            inner = self.unary()
            return ("neg", inner) if tok[1] == "-" else inner
        return self.power()

    def power(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            inner = self.expr()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            if self.peek()[1] == "^":
                self.fail("exponent on a non-atom; expand the power or repeat the factor")
            return inner
        atom = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            e = self.peek()
            if e[0] != "num":
                self.fail("exponent must be a non-negative integer")
            self.take()
            if self.peek()[1] == "^":
                self.fail("exponent on a non-atom")
            return ("pow", atom, int(e[1]))
        return atom

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            return ("num", Fraction(int(tok[1])))
        if tok[0] == "name":
            m = self.gens.match(tok[1])
            if not m:
                self.fail(f"unknown generator {tok[1]!r}", tok)
            kind, idx = m.group(1), int(m.group(2))
            err = self.check_gen(kind, idx)
            if err:
                self.fail(err, tok)
            return ("gen", kind, idx)
        if tok[0] == "end":
            self.fail("unexpected end of expression", tok)
        self.fail(f"unexpected {tok[1]!r}", tok)


def _constant(tree):
    tag = tree[0]
    if tag == "num":
        return tree[1]
    if tag == "neg":
        c = _constant(tree[1])
        return None if c is None else -c
    if tag == "pow":
        c = _constant(tree[1])
        return None if c is None else c ** tree[2]
    return None


def _op_checker(chart: Chart):
    def check(kind, idx):
        bound = chart.n_free if kind in ("x", "d") else chart.n_log
        if not 1 <= idx <= bound:
            return f"unknown generator {kind}{idx} on this chart"
        return None
    return check


def _cot_checker(chart: Chart):
    def check(kind, idx):
        bound = chart.n_free if kind in ("x", "xi") else chart.n_log
        if not 1 <= idx <= bound:
            return f"unknown variable {kind}{idx} on this chart"
        return None
    return check


def parse_tree(text: str, chart: Chart, line: int = 1, col: int = 1):
    return _Parser(text, _OP_GENS, _op_checker(chart), line, col).parse()


def parse_expression(text: str, chart: Chart, line: int = 1, col: int = 1) -> OpElement:
    """Parse an operator expression into canonical PBW form."""
    return normal_form(parse_tree(text, chart, line, col), chart)


def _eval_comm(tree, chart: Chart) -> dict:
    n = chart.nvars
    tag = tree[0]
    if tag == "num":
        return {(0,) * n: tree[1]} if tree[1] else {}
    if tag == "gen":
        kind, idx = tree[1], tree[2]
        slot = {"x": chart.x_slot, "t": chart.t_slot, "xi": chart.d_slot,
                "tau": chart.th_slot}[kind](idx)
        e = [0] * n
        e[slot] = 1
        return {tuple(e): Fraction(1)}
    if tag == "neg":
        return {e: -c for e, c in _eval_comm(tree[1], chart).items()}
    if tag in ("add", "sub"):
        a, b = _eval_comm(tree[1], chart), _eval_comm(tree[2], chart)
        sign = 1 if tag == "add" else -1
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + sign * c
        return {e: c for e, c in out.items() if c}
    if tag == "mul":
        a, b = _eval_comm(tree[1], chart), _eval_comm(tree[2], chart)
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return {e: c for e, c in out.items() if c}
    if tag == "pow":
        acc = {(0,) * n: Fraction(1)}
        for _ in range(tree[2]):
            acc = _eval_comm(("mul", ("lit", acc), tree[1]), chart)
        return acc
    if tag == "lit":
        return tree[1]
    raise ValueError(tag)


def parse_polynomial(text: str, chart: Chart, line: int = 1, col: int = 1) -> dict:
    """Parse a commutative polynomial in x, t, xi, tau (cotangent coordinates)."""
    tree = _Parser(text, _COT_GENS, _cot_checker(chart), line, col).parse()
    return _eval_comm(tree, chart)


# -- problem files ----------------------------------------------------------

@dataclass
class TaskSpec:
    command: str
    module: str | None
    options: dict
    line: int


@dataclass
class ProblemFile:
    chart: Chart | None = None
    chart_label: str | None = None
    modules: dict = field(default_factory=dict)
    order: list = field(default_factory=list)
    tasks: list = field(default_factory=list)


def _parse_chart(args: list[tuple[str, int]], line: int) -> tuple[Chart, str]:
    if len(args) == 1 and "=" not in args[0][0]:
        name, col = args[0]
        if name not in PRESETS:
            raise ParseError(f"unknown chart preset {name!r}", line, col)
        return PRESETS[name], name
    vals = {"n": 0, "r": 0, "idealized": ""}
    for word, col in args:
        if "=" not in word:
            raise ParseError(f"expected key=value, got {word!r}", line, col)
        k, v = word.split("=", 1)
        if k not in vals:
            raise ParseError(f"unknown chart field {k!r}", line, col)
        vals[k] = v
    try:
        n, r = int(vals["n"]), int(vals["r"])
        ideal = frozenset(int(s) for s in str(vals["idealized"]).split(",") if s)
        chart = Chart(n, r, ideal)
    except ValueError as exc:
        raise ParseError(f"invalid chart: {exc}", line, args[0][1] if args else 1) from None
    return chart, chart.describe()


def _words(text: str, col0: int = 1) -> list[tuple[str, int]]:
    return [(m.group(0), col0 + m.start()) for m in re.finditer(r"\S+", text)]


def _split_row(body: str, col0: int) -> list[tuple[str, int]]:
    out, start = [], 0
    for i, ch in enumerate(body + ","):
        if ch == ",":
            piece = body[start:i]
            lead = len(piece) - len(piece.lstrip())
            out.append((piece.strip(), col0 + start + lead))
            start = i + 1
    return out


def parse_problem(text: str) -> ProblemFile:
    """Parse and validate a problem file."""
    pf = ProblemFile()
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        words = _words(line)
        head, hcol = words[0]
        if head == "chart":
            if pf.chart is not None:
                raise ParseError("chart declared twice", lineno, hcol)
            if pf.modules:
                raise ParseError("chart must precede modules", lineno, hcol)
            pf.chart, pf.chart_label = _parse_chart(words[1:], lineno)
        elif head == "module":
            if pf.chart is None:
                raise ParseError("module declared before chart", lineno, hcol)
            current = _parse_module_head(pf, words, lineno)
        elif head == "row":
            if current is None:
                raise ParseError("row outside a module block", lineno, hcol)
            body_start = line.index("row", hcol - 1) + 3
            cells = _split_row(line[body_start:], body_start + 1)
            if len(cells) != current["rank"]:
                raise ParseError(f"row has {len(cells)} entries but module {current['name']!r} "
                                 f"has rank {current['rank']}", lineno, hcol)
            row = []
            for cell, col in cells:
                row.append(parse_expression(cell, pf.chart, lineno, col))
            current["rows"].append(row)
        elif head == "task":
            current = None
            pf.tasks.append(_parse_task(pf, words, lineno))
        else:
            raise ParseError(f"unknown statement {head!r}", lineno, hcol)
    for name in pf.order:
        entry = pf.modules[name]
        pf.modules[name] = ModulePresentation(
            pf.chart, entry["rank"], tuple(row_to_vec(r) for r in entry["rows"]), entry["side"],
            entry["localized"])
    return pf


def _parse_module_head(pf: ProblemFile, words, lineno: int) -> dict:
    if len(words) < 4 or words[2][0] != "rank":
        raise ParseError("expected 'module <name> rank <m> [left|right] [localized=j,...]'",
                         lineno, words[0][1])
    name, ncol = words[1]
    if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
        raise ParseError(f"invalid module name {name!r}", lineno, ncol)
    if name in pf.modules:
        raise ParseError(f"duplicate module name {name!r}", lineno, ncol)
    try:
        rank = int(words[3][0])
    except ValueError:
        raise ParseError("rank must be an integer", lineno, words[3][1]) from None
    if rank < 1:
        raise ParseError("rank must be at least 1", lineno, words[3][1])
    side, localized = "left", frozenset()
    for word, col in words[4:]:
        if word in ("left", "right"):
            side = word
        elif word.startswith("localized="):
            try:
                localized = frozenset(int(s) for s in word.split("=", 1)[1].split(",") if s)
            except ValueError:
                raise ParseError("localized expects a list of log directions", lineno, col) from None
            bad = [j for j in localized
                   if not 1 <= j <= pf.chart.n_log or j in pf.chart.idealized]
            if bad:
                raise ParseError(f"cannot localize at direction {bad[0]}", lineno, col)
        else:
            raise ParseError(f"unexpected {word!r}", lineno, col)
    entry = {"name": name, "rank": rank, "rows": [], "side": side, "localized": localized}
    pf.modules[name] = entry
    pf.order.append(name)
    return entry


def _parse_task(pf: ProblemFile, words, lineno: int) -> TaskSpec:
    if len(words) < 2:
        raise ParseError("expected 'task <command> <module> [key=value ...]'", lineno, words[0][1])
    cmd, ccol = words[1]
    if cmd not in TASKS:
        raise ParseError(f"unknown task {cmd!r}", lineno, ccol)
    if len(words) < 3 or "=" in words[2][0]:
        raise ParseError(f"task {cmd!r} needs a module name", lineno, ccol)
    mod, mcol = words[2]
    if mod not in pf.modules:
        raise ParseError(f"unknown module {mod!r}", lineno, mcol)
    opts = {}
    for word, col in words[3:]:
        if "=" not in word:
            raise ParseError(f"expected key=value, got {word!r}", lineno, col)
        k, v = word.split("=", 1)
        if k in opts:
            raise ParseError(f"option {k!r} given twice", lineno, col)
        opts[k] = (v, col)
    _validate_options(pf, cmd, opts, lineno)
    return TaskSpec(cmd, mod, {k: v for k, (v, _) in opts.items()}, lineno)


_OPTIONS = {
    "check": set(),
    "gb": {"order"},
    "resolve": {"order"},
    "charvar": set(),
    "holonomic": set(),
    "dual": set(),
    "restrict": {"stratum"},
    "split": {"k", "z"},
    "perverse": {"degree", "level", "dual"},
    "gabber": {"method"},
}


def _validate_options(pf: ProblemFile, cmd: str, opts: dict, lineno: int) -> None:
    chart = pf.chart
    for k, (v, col) in opts.items():
        if k not in _OPTIONS[cmd]:
            raise ParseError(f"option {k!r} is not valid for task {cmd!r}", lineno, col)
        if k == "order" and v not in ("pot", "top", "symbols"):
            raise ParseError("order must be pot, top or symbols", lineno, col)
        if k in ("degree", "level", "k") and not re.fullmatch(r"-?\d+", v):
            raise ParseError(f"{k} must be an integer", lineno, col)
        if k == "dual" and v not in ("true", "false"):
            raise ParseError("dual must be true or false", lineno, col)
        if k == "method" and v not in ("auto", "dual-route"):
            raise ParseError("method must be auto or dual-route", lineno, col)
        if k == "stratum":
            try:
                T = [int(s) for s in v.split(",") if s]
            except ValueError:
                raise ParseError("stratum expects a list of log directions", lineno, col) from None
            if not T or any(j not in chart.free_log for j in T):
                raise ParseError("stratum must list free log directions", lineno, col)
        if k == "z":
            for piece in v.split(","):
                parse_polynomial(piece, chart, lineno, col)
    if cmd == "split" and "k" not in opts:
        raise ParseError("split needs k=<stratum level>", lineno, 1)
    if cmd == "restrict" and "stratum" not in opts:
        raise ParseError("restrict needs stratum=<directions>", lineno, 1)


# -- reports ----------------------------------------------------------------

def alias_table(chart: Chart) -> dict:
    """What each generator name stands for."""
    out = {}
    for i in range(1, chart.n_free + 1):
        out[f"x{i}"] = "coordinate"
        out[f"d{i}"] = f"d/dx{i}"
        out[f"xi{i}"] = f"symbol of d{i}"
    for j in range(1, chart.n_log + 1):
        idealized = j in chart.idealized
        out[f"t{j}"] = "log coordinate (idealized, acts by 0)" if idealized else "log coordinate"
        out[f"th{j}"] = f"t{j}*d/dt{j}"
        out[f"tau{j}"] = f"symbol of th{j}"
    return dict(sorted(out.items()))


def _normalize(obj):
    """Sort ideal generator lists and make the payload JSON-stable."""
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def build_report(results: list[dict], chart: Chart | None = None,
                 chart_label: str | None = None) -> dict:
    rep = {"schema": SCHEMA, "tasks": [_normalize(r) for r in results]}
    if chart is not None:
        rep["chart"] = {"label": chart_label or chart.describe(), "n": chart.n_free,
                        "r": chart.n_log, "idealized": sorted(chart.idealized),
                        "dim": chart.dim, "logdim": chart.logdim}
        rep["aliases"] = alias_table(chart)
    return rep


def _text_lines(obj, prefix: str, out: list[str]) -> None:
    if isinstance(obj, dict):
        if not obj:
            out.append(f"{prefix}  {{}}")
        for k in sorted(obj):
            _text_lines(obj[k], f"{prefix}.{k}" if prefix else k, out)
    elif isinstance(obj, list):
        if not obj:
            out.append(f"{prefix}  []")
        elif all(not isinstance(v, (dict, list)) for v in obj):
            out.append(f"{prefix}  " + ", ".join(json.dumps(v) if v is None or isinstance(v, bool)
                                                else str(v) for v in obj))
        else:
            for i, v in enumerate(obj):
                _text_lines(v, f"{prefix}[{i}]", out)
    else:
        out.append(f"{prefix}  {json.dumps(obj) if obj is None or isinstance(obj, bool) else obj}")


def emit_report(results: list[dict], fmt: str = "json", chart: Chart | None = None,
                chart_label: str | None = None) -> str:
    """Deterministic JSON or plain-text rendering of one report."""
    rep = build_report(results, chart, chart_label)
    if fmt == "json":
        return json.dumps(rep, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        lines: list[str] = []
        _text_lines(rep, "", lines)
        width = max(len(l.split("  ", 1)[0]) for l in lines)
        body = []
        for l in lines:
            key, _, val = l.partition("  ")
            body.append(f"{key.ljust(width)}  {val}")
        return "\n".join(body) + "\n"
    raise ValueError(f"unknown format {fmt!r}")

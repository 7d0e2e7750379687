"""Script language for defining structures, families, filters, elements, and
invoking operations: hand-written span-tracking lexer and recursive-descent
parser, plus a canonical printer for round-tripping."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    col: int
    message: str
    witness: Any = None

    def to_json(self) -> dict:
        out = {
            "severity": self.severity,
            "line": self.line,
            "col": self.col,
            "message": self.message,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.severity}: {self.message}"


class ParseError(Exception):
    def __init__(self, diag: Diagnostic):
        super().__init__(str(diag))
        self.diag = diag


# ---------------------------------------------------------------------------
# lexer


SYMBOLS = ("->", "==", "<=", "{", "}", "(", ")", "[", "]", ",", ";", ":", "=", "<", "+")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | symbol | eof
    text: str
    line: int
    col: int


def lex(text: str) -> list[Token]:
    toks: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            if j >= n:
                raise ParseError(Diagnostic("error", line, col, "unterminated string"))
            toks.append(Token("string", text[i + 1:j], line, col))
            col += j - i + 1
            i = j + 1
            continue
        matched = False
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("symbol", sym, line, col))
                i += len(sym)
                col += len(sym)
                matched = True
                break
        if matched:
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("number", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_-"):
                j += 1
            # a trailing '-' belongs to an arrow or nothing
            while text[j - 1] == "-" and not text.startswith("->", j - 1):
                j -= 1
            toks.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(Diagnostic("error", line, col, f"unexpected character {c!r}"))
    toks.append(Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# ast


@dataclass(frozen=True)
class Node:
    kind: str
    line: int
    col: int
    data: tuple

    def __getitem__(self, i: int):
        return self.data[i]


@dataclass(frozen=True)
class Script:
    statements: tuple[Node, ...]


# ---------------------------------------------------------------------------
# parser


CHECK_KINDS = ("pom", "cu", "w", "q", "o6")

CALLS = {
    "gamma": 1, "tau": 1, "antisym": 1, "compacts": 1, "card": 1,
    "product": None, "colimit": 1, "limit": 1, "coequalizer": 4,
    "leq": None, "uleq": 3, "qleq": 3,
    "in_c0": 1, "in_cu": 2, "quotient": 2, "classes": 4,
    "add": 2, "times": 2, "inf_times": 1, "compact": 1, "ucompact": 2,
    "simple": 1, "cn": 2, "pin": 2, "wpi": 1,
    "unperforated": 1, "almost_unperforated": 1, "near_unperforated": 1,
    "totally_ordered": 1,
    "scaled": 2, "sproduct": 1, "sultra": 2, "in_scale": 2, "in_carrier": 2,
    "mvn": None, "verdict": 2, "is_iso": 2,
}


class Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def err(self, msg: str, tok: Token | None = None) -> ParseError:
        t = tok or self.peek()
        return ParseError(Diagnostic("error", t.line, t.col, msg))

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.next()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            raise self.err(f"expected {want!r}, found {t.text!r}", t)
        return t

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        return None

    def label(self) -> str:
        t = self.next()
        if t.kind not in ("ident", "number"):
            raise self.err(f"expected a name, found {t.text!r}", t)
        return t.text

    def int_lit(self) -> int:
        t = self.expect("number")
        return int(t.text)

    # -- entry ---------------------------------------------------------------

    def script(self) -> Script:
        out = []
        while self.peek().kind != "eof":
            out.append(self.statement())
        return Script(tuple(out))

    def statement(self) -> Node:
        t = self.peek()
        if t.kind != "ident":
            raise self.err(f"expected a statement, found {t.text!r}")
        if t.text == "semigroup":
            return self.define_semigroup()
        if t.text == "family":
            return self.define_family()
        if t.text == "ultrafilter":
            return self.define_ultrafilter()
        if t.text == "elem":
            return self.define_elem()
        if t.text == "models":
            return self.define_models()
        if t.text == "let":
            self.next()
            name = self.label()
            self.expect("symbol", "=")
            return Node("let", t.line, t.col, (name, self.expr()))
        if t.text == "check":
            self.next()
            kind = self.expect("ident").text
            if kind not in CHECK_KINDS:
                raise self.err(f"unknown check kind {kind!r}; one of {CHECK_KINDS}")
            name = self.label()
            return Node("check", t.line, t.col, (kind, name))
        if t.text == "compute":
            self.next()
            return Node("compute", t.line, t.col, (self.expr(),))
        if t.text == "assert":
            self.next()
            left = self.expr()
            self.expect("symbol", "==")
            right = self.expr()
            return Node("assert", t.line, t.col, (left, right))
        if t.text == "emit":
            self.next()
            return Node("emit", t.line, t.col, (self.expr(),))
        raise self.err(f"unknown statement {t.text!r}")

    # -- definitions ----------------------------------------------------------

    def define_semigroup(self) -> Node:
        t = self.expect("ident", "semigroup")
        name = self.label()
        self.expect("symbol", "=")
        head = self.expect("ident")
        if head.text == "builtin":
            self.expect("symbol", "(")
            kind = self.expect("ident").text
            k = None
            if kind == "truncnat":
                k = self.int_lit()
            self.expect("symbol", ")")
            return Node("semigroup", t.line, t.col, (name, ("builtin", kind, k)))
        if head.text != "finite":
            raise self.err("semigroup body is builtin(...) or finite {...}", head)
        self.expect("symbol", "{")
        self.expect("ident", "elements")
        self.expect("symbol", ":")
        elements = [self.label()]
        while self.accept("symbol", ","):
            elements.append(self.label())
        self.expect("symbol", ";")
        self.expect("ident", "zero")
        self.expect("symbol", ":")
        zero = self.label()
        self.expect("symbol", ";")
        self.expect("ident", "add")
        self.expect("symbol", "{")
        add = []
        while not self.accept("symbol", "}"):
            a = self.label()
            self.expect("symbol", "+")
            b = self.label()
            self.expect("symbol", "=")
            c = self.label()
            self.expect("symbol", ";")
            add.append((a, b, c))
        order: Any = None
        if self.peek().kind == "ident" and self.peek().text == "order":
            self.next()
            if self.accept("ident", "algebraic"):
                self.expect("symbol", ";")
                order = "algebraic"
            else:
                self.expect("symbol", "{")
                order = []
                while not self.accept("symbol", "}"):
                    a = self.label()
                    self.expect("symbol", "<=")
                    b = self.label()
                    self.expect("symbol", ";")
                    order.append((a, b))
        aux = None
        if self.peek().kind == "ident" and self.peek().text == "aux":
            self.next()
            self.expect("symbol", "{")
            aux = []
            while not self.accept("symbol", "}"):
                a = self.label()
                self.expect("symbol", "<")
                b = self.label()
                self.expect("symbol", ";")
                aux.append((a, b))
        self.expect("symbol", "}")
        return Node(
            "semigroup", t.line, t.col,
            (name, ("finite", tuple(elements), zero, tuple(add),
                    tuple(order) if isinstance(order, list) else order,
                    tuple(aux) if aux is not None else None)),
        )

    def define_family(self) -> Node:
        t = self.expect("ident", "family")
        name = self.label()
        self.expect("symbol", "=")
        head = self.expect("ident")
        if head.text == "constant":
            self.expect("symbol", "(")
            comp = self.label()
            self.expect("symbol", ")")
            self.expect("ident", "on")
            self.expect("ident", "naturals")
            return Node("family", t.line, t.col, (name, ("constant", comp)))
        if head.text == "list":
            self.expect("symbol", "(")
            comps = [self.label()]
            while self.accept("symbol", ","):
                comps.append(self.label())
            self.expect("symbol", ")")
            return Node("family", t.line, t.col, (name, ("list", tuple(comps))))
        raise self.err("family body is constant(S) on naturals or list(...)", head)

    def define_ultrafilter(self) -> Node:
        t = self.expect("ident", "ultrafilter")
        name = self.label()
        self.expect("symbol", "=")
        head = self.expect("ident")
        if head.text == "principal":
            self.expect("symbol", "(")
            j = self.int_lit()
            self.expect("symbol", ")")
            return Node("ultrafilter", t.line, t.col, (name, ("principal", j)))
        if head.text == "factorial":
            self.expect("symbol", "(")
            self.expect("symbol", ")")
            return Node("ultrafilter", t.line, t.col, (name, ("factorial",)))
        if head.text != "profinite":
            raise self.err("ultrafilter is principal(j), factorial(), or profinite(...)", head)
        self.expect("symbol", "(")
        self.expect("ident", "moduli")
        self.expect("symbol", "=")
        moduli = self.int_list()
        self.expect("symbol", ",")
        self.expect("ident", "residues")
        self.expect("symbol", "=")
        residues = self.int_list()
        self.expect("symbol", ")")
        return Node(
            "ultrafilter", t.line, t.col,
            (name, ("profinite", tuple(moduli), tuple(residues))),
        )

    def int_list(self) -> list[int]:
        self.expect("symbol", "[")
        out = []
        if not self.accept("symbol", "]"):
            out.append(self.int_lit())
            while self.accept("symbol", ","):
                out.append(self.int_lit())
            self.expect("symbol", "]")
        return out

    def define_elem(self) -> Node:
        t = self.expect("ident", "elem")
        name = self.label()
        self.expect("symbol", "=")
        head = self.expect("ident")
        if head.text == "anchor":
            self.expect("symbol", "(")
            fn = self.fnform()
            self.expect("symbol", ")")
            self.expect("ident", "on")
            fam = self.label()
            return Node("elem", t.line, t.col, (name, ("anchor", fn), fam))
        if head.text == "top":
            self.expect("symbol", "(")
            fn = self.fnform()
            self.expect("symbol", ")")
            self.expect("ident", "on")
            fam = self.label()
            return Node("elem", t.line, t.col, (name, ("top", fn), fam))
        if head.text != "chain":
            raise self.err("elem body is anchor(...), top(...), or chain(...)", head)
        self.expect("symbol", "(")
        self.expect("ident", "levels")
        self.expect("symbol", "=")
        self.expect("symbol", "[")
        levels = [self.fnform()]
        while self.accept("symbol", ","):
            levels.append(self.fnform())
        self.expect("symbol", "]")
        self.expect("symbol", ")")
        self.expect("ident", "on")
        fam = self.label()
        return Node("elem", t.line, t.col, (name, ("chain", tuple(levels)), fam))

    def fnform(self) -> tuple:
        head = self.expect("ident")
        if head.text == "const":
            self.expect("symbol", "(")
            v = self.value()
            self.expect("symbol", ")")
            return ("const", v)
        if head.text == "ident":
            return ("ident",)
        if head.text == "affine":
            self.expect("symbol", "(")
            a = self.int_lit()
            self.expect("symbol", ",")
            b = self.int_lit()
            self.expect("symbol", ")")
            return ("affine", a, b)
        if head.text == "support":
            self.expect("symbol", "(")
            self.expect("ident", "default")
            self.expect("symbol", "=")
            default = self.value()
            overrides = []
            while self.accept("symbol", ","):
                j = self.int_lit()
                self.expect("symbol", ":")
                overrides.append((j, self.value()))
            self.expect("symbol", ")")
            return ("support", default, tuple(overrides))
        if head.text == "periodic":
            self.expect("symbol", "(")
            self.expect("ident", "prefix")
            self.expect("symbol", "=")
            prefix = self.value_list()
            self.expect("symbol", ",")
            self.expect("ident", "pattern")
            self.expect("symbol", "=")
            pattern = self.value_list()
            self.expect("symbol", ")")
            return ("periodic", tuple(prefix), tuple(pattern))
        if head.text == "tuple":
            self.expect("symbol", "(")
            vals = [self.value()]
            while self.accept("symbol", ","):
                vals.append(self.value())
            self.expect("symbol", ")")
            return ("tuple", tuple(vals))
        raise self.err(
            "function form is const, ident, affine, support, periodic, or tuple", head
        )

    def value(self) -> str:
        t = self.next()
        if t.kind not in ("ident", "number"):
            raise self.err(f"expected a value, found {t.text!r}", t)
        return t.text

    def value_list(self) -> list[str]:
        self.expect("symbol", "[")
        out = []
        if not self.accept("symbol", "]"):
            out.append(self.value())
            while self.accept("symbol", ","):
                out.append(self.value())
            self.expect("symbol", "]")
        return out

    def define_models(self) -> Node:
        t = self.expect("ident", "models")
        name = self.label()
        self.expect("symbol", "=")
        head = self.expect("ident")
        if head.text == "constant":
            self.expect("symbol", "(")
            m = self.model()
            self.expect("symbol", ")")
            self.expect("ident", "on")
            self.expect("ident", "naturals")
            return Node("models", t.line, t.col, (name, ("constant", m)))
        if head.text == "periodic":
            self.expect("symbol", "(")
            self.expect("ident", "prefix")
            self.expect("symbol", "=")
            prefix = self.model_list()
            self.expect("symbol", ",")
            self.expect("ident", "pattern")
            self.expect("symbol", "=")
            pattern = self.model_list()
            self.expect("symbol", ")")
            return Node("models", t.line, t.col, (name, ("periodic", tuple(prefix), tuple(pattern))))
        if head.text == "list":
            self.expect("symbol", "(")
            ms = [self.model()]
            while self.accept("symbol", ","):
                ms.append(self.model())
            self.expect("symbol", ")")
            return Node("models", t.line, t.col, (name, ("list", tuple(ms))))
        raise self.err("models body is constant(...), periodic(...), or list(...)", head)

    def model(self) -> tuple:
        head = self.expect("ident")
        if head.text == "matrix":
            self.expect("symbol", "(")
            k = self.int_lit()
            self.expect("symbol", ")")
            return ("matrix", k)
        if head.text == "spi":
            return ("spi",)
        if head.text == "nscaled":
            self.expect("symbol", "(")
            k = self.int_lit()
            self.expect("symbol", ")")
            return ("nscaled", k)
        if head.text == "nfull":
            return ("nfull",)
        if head.text == "custom":
            self.expect("symbol", "(")
            s = self.label()
            self.expect("symbol", ",")
            self.expect("symbol", "{")
            scale = [self.label()]
            while self.accept("symbol", ","):
                scale.append(self.label())
            self.expect("symbol", "}")
            self.expect("symbol", ")")
            return ("custom", s, tuple(scale))
        raise self.err("model is matrix(k), spi, nscaled(k), nfull, or custom(S, {..})", head)

    def model_list(self) -> list[tuple]:
        self.expect("symbol", "[")
        out = [self.model()]
        while self.accept("symbol", ","):
            out.append(self.model())
        self.expect("symbol", "]")
        return out

    # -- expressions -----------------------------------------------------------

    def expr(self) -> Node:
        t = self.peek()
        if t.kind == "number":
            self.next()
            return Node("int", t.line, t.col, (int(t.text),))
        if t.kind == "string":
            self.next()
            return Node("str", t.line, t.col, (t.text,))
        if t.kind != "ident":
            raise self.err(f"expected an expression, found {t.text!r}")
        if t.text in ("true", "false", "unknown"):
            self.next()
            return Node("tri", t.line, t.col, (t.text,))
        name = self.next().text
        if self.peek().kind == "symbol" and self.peek().text == "(":
            if name == "diagram":
                raise self.err("diagram literals appear only inside colimit/limit", t)
            if name not in CALLS:
                raise self.err(f"unknown operation {name!r}", t)
            self.next()
            args: list[Any] = []
            if not self.accept("symbol", ")"):
                args.append(self.call_arg(name, 0))
                while self.accept("symbol", ","):
                    args.append(self.call_arg(name, len(args)))
                self.expect("symbol", ")")
            arity = CALLS[name]
            if arity is not None and len(args) != arity:
                raise self.err(f"{name} takes {arity} arguments, got {len(args)}", t)
            return Node("call", t.line, t.col, (name, tuple(args)))
        return Node("name", t.line, t.col, (name,))

    def call_arg(self, func: str, i: int):
        t = self.peek()
        if t.kind == "symbol" and t.text == "{":
            if func == "coequalizer":
                return ("morph", self.morph())
            if func == "scaled":
                return ("set", self.brace_set())
            raise self.err("unexpected block argument")
        if t.kind == "ident" and t.text == "diagram":
            return ("diagram", self.diagram())
        if func == "mvn" and t.kind == "ident" and t.text in (
            "const", "ident", "support", "periodic", "tuple", "affine"
        ):
            return ("fn", self.fnform())
        return self.expr()

    def morph(self) -> tuple:
        self.expect("symbol", "{")
        out = []
        while not self.accept("symbol", "}"):
            a = self.label()
            self.expect("symbol", "->")
            b = self.label()
            self.expect("symbol", ";")
            out.append((a, b))
        return tuple(out)

    def brace_set(self) -> tuple:
        self.expect("symbol", "{")
        out = [self.label()]
        while self.accept("symbol", ","):
            out.append(self.label())
        self.expect("symbol", "}")
        return tuple(out)

    def diagram(self) -> tuple:
        self.expect("ident", "diagram")
        self.expect("symbol", "{")
        self.expect("ident", "nodes")
        self.expect("symbol", ":")
        nodes = [self.label()]
        while self.accept("symbol", ","):
            nodes.append(self.label())
        self.expect("symbol", ";")
        arrows = []
        while self.peek().kind == "ident" and self.peek().text == "arrow":
            self.next()
            name = self.label()
            self.expect("symbol", ":")
            src = self.label()
            self.expect("symbol", "->")
            dst = self.label()
            m = self.morph()
            self.expect("symbol", ";")
            arrows.append((name, src, dst, m))
        self.expect("symbol", "}")
        return (tuple(nodes), tuple(arrows))


def parse(text: str) -> tuple[Script | None, list[Diagnostic]]:
    try:
        toks = lex(text)
        script = Parser(toks).script()
        return script, []
    except ParseError as e:
        return None, [e.diag]


# ---------------------------------------------------------------------------
# printer


def _print_fnform(fn: tuple) -> str:
    kind = fn[0]
    if kind == "const":
        return f"const({fn[1]})"
    if kind == "ident":
        return "ident"
    if kind == "affine":
        return f"affine({fn[1]}, {fn[2]})"
    if kind == "support":
        parts = [f"default={fn[1]}"] + [f"{j}: {v}" for j, v in fn[2]]
        return "support(" + ", ".join(parts) + ")"
    if kind == "periodic":
        return (
            "periodic(prefix=[" + ", ".join(fn[1]) + "], pattern=["
            + ", ".join(fn[2]) + "])"
        )
    if kind == "tuple":
        return "tuple(" + ", ".join(fn[1]) + ")"
    raise ValueError(kind)


def _print_model(m: tuple) -> str:
    if m[0] == "matrix":
        return f"matrix({m[1]})"
    if m[0] == "spi":
        return "spi"
    if m[0] == "nscaled":
        return f"nscaled({m[1]})"
    if m[0] == "nfull":
        return "nfull"
    return "custom(" + m[1] + ", {" + ", ".join(m[2]) + "})"


def _print_expr(e: Node) -> str:
    if e.kind == "int":
        return str(e[0])
    if e.kind == "str":
        return f'"{e[0]}"'
    if e.kind == "tri":
        return e[0]
    if e.kind == "name":
        return e[0]
    name, args = e[0], e[1]
    parts = []
    for a in args:
        if isinstance(a, Node):
            parts.append(_print_expr(a))
        elif a[0] == "morph":
            parts.append("{ " + " ".join(f"{x} -> {y};" for x, y in a[1]) + " }")
        elif a[0] == "set":
            parts.append("{" + ", ".join(a[1]) + "}")
        elif a[0] == "fn":
            parts.append(_print_fnform(a[1]))
        elif a[0] == "diagram":
            nodes, arrows = a[1]
            body = "nodes: " + ", ".join(nodes) + ";"
            for an, src, dst, m in arrows:
                body += (
                    f" arrow {an}: {src} -> {dst} "
                    + "{ " + " ".join(f"{x} -> {y};" for x, y in m) + " };"
                )
            parts.append("diagram { " + body + " }")
    return name + "(" + ", ".join(parts) + ")"


def print_script(script: Script) -> str:
    lines = []
    for st in script.statements:
        if st.kind == "semigroup":
            name, body = st[0], st[1]
            if body[0] == "builtin":
                arg = body[1] + (f" {body[2]}" if body[2] is not None else "")
                lines.append(f"semigroup {name} = builtin({arg})")
            else:
                _, elements, zero, add, order, aux = body
                lines.append(f"semigroup {name} = finite {{")
                lines.append("  elements: " + ", ".join(elements) + ";")
                lines.append(f"  zero: {zero};")
                lines.append(
                    "  add { " + " ".join(f"{a} + {b} = {c};" for a, b, c in add) + " }"
                )
                if order == "algebraic":
                    lines.append("  order algebraic;")
                elif order is not None:
                    lines.append(
                        "  order { " + " ".join(f"{a} <= {b};" for a, b in order) + " }"
                    )
                if aux is not None:
                    lines.append(
                        "  aux { " + " ".join(f"{a} < {b};" for a, b in aux) + " }"
                    )
                lines.append("}")
        elif st.kind == "family":
            name, body = st[0], st[1]
            if body[0] == "constant":
                lines.append(f"family {name} = constant({body[1]}) on naturals")
            else:
                lines.append(f"family {name} = list(" + ", ".join(body[1]) + ")")
        elif st.kind == "ultrafilter":
            name, body = st[0], st[1]
            if body[0] == "principal":
                lines.append(f"ultrafilter {name} = principal({body[1]})")
            elif body[0] == "factorial":
                lines.append(f"ultrafilter {name} = factorial()")
            else:
                lines.append(
                    f"ultrafilter {name} = profinite(moduli=["
                    + ", ".join(map(str, body[1]))
                    + "], residues=["
                    + ", ".join(map(str, body[2]))
                    + "])"
                )
        elif st.kind == "elem":
            name, body, fam = st[0], st[1], st[2]
            if body[0] == "anchor":
                lines.append(f"elem {name} = anchor({_print_fnform(body[1])}) on {fam}")
            elif body[0] == "top":
                lines.append(f"elem {name} = top({_print_fnform(body[1])}) on {fam}")
            else:
                lvls = ", ".join(_print_fnform(f) for f in body[1])
                lines.append(f"elem {name} = chain(levels=[{lvls}]) on {fam}")
        elif st.kind == "models":
            name, body = st[0], st[1]
            if body[0] == "constant":
                lines.append(f"models {name} = constant({_print_model(body[1])}) on naturals")
            elif body[0] == "periodic":
                lines.append(
                    f"models {name} = periodic(prefix=["
                    + ", ".join(_print_model(m) for m in body[1])
                    + "], pattern=["
                    + ", ".join(_print_model(m) for m in body[2])
                    + "])"
                )
            else:
                lines.append(
                    f"models {name} = list(" + ", ".join(_print_model(m) for m in body[1]) + ")"
                )
        elif st.kind == "let":
            lines.append(f"let {st[0]} = {_print_expr(st[1])}")
        elif st.kind == "check":
            lines.append(f"check {st[0]} {st[1]}")
        elif st.kind == "compute":
            lines.append(f"compute {_print_expr(st[0])}")
        elif st.kind == "assert":
            lines.append(f"assert {_print_expr(st[0])} == {_print_expr(st[1])}")
        elif st.kind == "emit":
            lines.append(f"emit {_print_expr(st[0])}")
    return "\n".join(lines) + "\n"

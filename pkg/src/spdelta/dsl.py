"""Parser for the .spd input format.

Grammar (EBNF):

    file     := header line*
    header   := "vars" name+ NEWLINE "unknowns" name+ NEWLINE
    line     := "eq" sum "=" "0" NEWLINE
    sum      := term (("+" | "-") term)*
    term     := [rational "*"?] name "_" name+
    rational := integer ["/" positive-integer]

Derivative subscripts concatenate variable names: with vars x y, "u_xxy"
means two x-derivatives and one y-derivative.  Comments run from "#" to the
end of the line.  Each equation must be homogeneous in derivative order:
these files describe symbols, so a mixed-order equation like "u_t - u_xx"
must be entered as its principal part.

Subspace expressions use "d<var>" for covectors and "@<var>" (ASCII alias
of the partial-derivative sign) for vectors, as comma-separated rational
linear combinations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class ParseError(Exception):
    """Lexical or syntax error with a 1-based position."""

    def __init__(self, message: str, line: int, col: int, text: str = ""):
        self.message = message
        self.line = line
        self.col = col
        self.text = text
        where = f"{line}:{col}"
        shown = f" near {text!r}" if text else ""
        super().__init__(f"{where}: {message}{shown}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME INT PLUS MINUS STAR SLASH EQUALS UNDER COMMA AT NEWLINE EOF
    text: str
    line: int
    col: int


_SINGLE = {"+": "PLUS", "-": "MINUS", "*": "STAR", "/": "SLASH",
           "=": "EQUALS", "_": "UNDER", ",": "COMMA"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    length = len(text)
    while i < length:
        ch = text[i]
        if ch == "#":
            while i < length and text[i] != "\n":
                i += 1
            continue
        if ch == "\n":
            tokens.append(Token("NEWLINE", "\\n", line, col))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch in _SINGLE:
            tokens.append(Token(_SINGLE[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch in "@∂":
            tokens.append(Token("AT", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            while i < length and text[i].isdigit():
                i += 1
            tokens.append(Token("INT", text[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha():
            start = i
            while i < length and (text[i].isalnum()):
                i += 1
            tokens.append(Token("NAME", text[start:i], line, col))
            col += i - start
            continue
        raise ParseError("unexpected character", line, col, ch)
    tokens.append(Token("EOF", "", line, col))
    return tokens


@dataclass(frozen=True)
class Equation:
    order: int
    terms: tuple  # (Fraction coefficient, unknown index, exponent tuple)


@dataclass(frozen=True)
class EquationSet:
    variables: tuple
    unknowns: tuple
    equations: tuple

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def nu(self) -> int:
        return len(self.unknowns)


def split_subscript(s: str, variables) -> list[int] | None:
    """Decompose a concatenated subscript into declared variable names,
    longest-match first with backtracking; None when impossible."""
    ordered = sorted(range(len(variables)), key=lambda i: -len(variables[i]))

    def rec(pos: int):
        if pos == len(s):
            return []
        for vi in ordered:
            name = variables[vi]
            if s.startswith(name, pos):
                rest = rec(pos + len(name))
                if rest is not None:
                    return [vi] + rest
        return None

    return rec(0)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}", tok.line, tok.col, tok.text)
        return self.advance()

    def skip_newlines(self):
        while self.peek().kind == "NEWLINE":
            self.advance()

    def end_of_line(self):
        tok = self.peek()
        if tok.kind == "EOF":
            return
        if tok.kind != "NEWLINE":
            raise ParseError("expected end of line", tok.line, tok.col, tok.text)
        self.advance()

    def keyword(self, word: str):
        tok = self.expect("NAME", f"'{word}'")
        if tok.text != word:
            raise ParseError(f"expected '{word}'", tok.line, tok.col, tok.text)

    def name_list(self) -> list[str]:
        names = []
        while self.peek().kind == "NAME":
            names.append(self.advance().text)
        if not names:
            tok = self.peek()
            raise ParseError("expected at least one name", tok.line, tok.col,
                             tok.text)
        return names

    def rational(self) -> Fraction:
        num = self.expect("INT", "an integer")
        value = Fraction(int(num.text))
        if self.peek().kind == "SLASH":
            self.advance()
            den = self.expect("INT", "a positive integer denominator")
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.line, den.col, den.text)
            value /= int(den.text)
        return value

    def parse_file(self) -> EquationSet:
        self.skip_newlines()
        self.keyword("vars")
        variables = self.name_list()
        self.end_of_line()
        self.skip_newlines()
        self.keyword("unknowns")
        unknowns = self.name_list()
        self.end_of_line()
        for seq, kind in ((variables, "variable"), (unknowns, "unknown")):
            seen = set()
            for name in seq:
                if name in seen:
                    raise ParseError(f"duplicate {kind} name '{name}'", 1, 1)
                seen.add(name)
        equations = []
        while True:
            self.skip_newlines()
            if self.peek().kind == "EOF":
                break
            equations.append(self.parse_equation(variables, unknowns))
        return EquationSet(tuple(variables), tuple(unknowns), tuple(equations))

    def parse_equation(self, variables, unknowns) -> Equation:
        self.keyword("eq")
        terms = []
        order = None
        sign = 1
        if self.peek().kind in ("PLUS", "MINUS"):
            sign = -1 if self.advance().kind == "MINUS" else 1
        while True:
            coeff, u, alpha, tok = self.parse_term(variables, unknowns)
            term_order = sum(alpha)
            if order is None:
                order = term_order
            elif term_order != order:
                raise ParseError(
                    "mixed derivative orders in one equation; enter the "
                    "principal symbol only (orders here: "
                    f"{order} and {term_order})", tok.line, tok.col, tok.text)
            terms.append((sign * coeff, u, alpha))
            nxt = self.peek()
            if nxt.kind in ("PLUS", "MINUS"):
                sign = 1 if nxt.kind == "PLUS" else -1
                self.advance()
                continue
            break
        self.expect("EQUALS", "'='")
        zero = self.expect("INT", "the right-hand side 0")
        if zero.text != "0":
            raise ParseError("right-hand side must be 0", zero.line, zero.col,
                             zero.text)
        self.end_of_line()
        return Equation(order, tuple(terms))

    def parse_term(self, variables, unknowns):
        coeff = Fraction(1)
        if self.peek().kind == "INT":
            coeff = self.rational()
            if self.peek().kind == "STAR":
                self.advance()
        tok = self.expect("NAME", "an unknown name")
        if tok.text not in unknowns:
            raise ParseError(f"undeclared unknown '{tok.text}'", tok.line,
                             tok.col, tok.text)
        u = unknowns.index(tok.text)
        self.expect("UNDER", "'_' and a derivative subscript")
        sub_parts = []
        sub_tok = self.expect("NAME", "a derivative subscript")
        sub_parts.append(sub_tok.text)
        while self.peek().kind == "NAME":
            sub_parts.append(self.advance().text)
        subscript = "".join(sub_parts)
        split = split_subscript(subscript, variables)
        if split is None:
            raise ParseError(
                f"subscript '{subscript}' is not a concatenation of declared "
                "variables", sub_tok.line, sub_tok.col, sub_tok.text)
        alpha = [0] * len(variables)
        for vi in split:
            alpha[vi] += 1
        return coeff, u, tuple(alpha), tok


def parse(text: str) -> EquationSet:
    """Parse a .spd document; raises ParseError with a 1-based position."""
    return _Parser(text).parse_file()


def _coeff_str(c: Fraction) -> str:
    return str(c)


def pretty_print(eqs: EquationSet) -> str:
    """Canonical rendering; reparsing it reproduces the same EquationSet."""
    lines = ["vars " + " ".join(eqs.variables),
             "unknowns " + " ".join(eqs.unknowns)]
    for eq in eqs.equations:
        parts = []
        for idx, (coeff, u, alpha) in enumerate(eq.terms):
            sub = "".join(eqs.variables[i] * a for i, a in enumerate(alpha))
            mag = abs(coeff)
            body = f"{eqs.unknowns[u]}_{sub}" if mag == 1 \
                else f"{_coeff_str(mag)}*{eqs.unknowns[u]}_{sub}"
            if idx == 0:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + body)
        lines.append("eq " + " ".join(parts) + " = 0")
    return "\n".join(lines) + "\n"


def parse_subspace(text: str, mode: str, variables) -> list[list[Fraction]]:
    """Parse comma-separated covector ("dx, dy+dz") or vector ("@x - @y")
    expressions into coordinate rows over the declared variables."""
    if mode not in ("covectors", "vectors"):
        raise ValueError("mode must be 'covectors' or 'vectors'")
    tokens = tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def advance():
        nonlocal pos
        tok = tokens[pos]
        if tok.kind != "EOF":
            pos += 1
        return tok

    def skip_ws():
        while peek().kind == "NEWLINE":
            advance()

    def symbol_coord() -> int:
        tok = peek()
        if mode == "vectors":
            if tok.kind != "AT":
                raise ParseError("expected '@<var>'", tok.line, tok.col, tok.text)
            advance()
            name = peek()
            if name.kind != "NAME" or name.text not in variables:
                raise ParseError("expected a declared variable after '@'",
                                 name.line, name.col, name.text)
            advance()
            return variables.index(name.text)
        if tok.kind != "NAME" or not tok.text.startswith("d"):
            raise ParseError("expected 'd<var>'", tok.line, tok.col, tok.text)
        var = tok.text[1:]
        if var not in variables:
            raise ParseError(f"'d{var}' does not match a declared variable",
                             tok.line, tok.col, tok.text)
        advance()
        return variables.index(var)

    def parse_item() -> list[Fraction]:
        row = [Fraction(0)] * len(variables)
        sign = 1
        skip_ws()
        if peek().kind in ("PLUS", "MINUS"):
            sign = -1 if advance().kind == "MINUS" else 1
        while True:
            coeff = Fraction(1)
            if peek().kind == "INT":
                tok = advance()
                coeff = Fraction(int(tok.text))
                if peek().kind == "SLASH":
                    advance()
                    den = peek()
                    if den.kind != "INT" or int(den.text) == 0:
                        raise ParseError("expected a positive denominator",
                                         den.line, den.col, den.text)
                    coeff /= int(advance().text)
                if peek().kind == "STAR":
                    advance()
            coord = symbol_coord()
            row[coord] += sign * coeff
            skip_ws()
            if peek().kind in ("PLUS", "MINUS"):
                sign = -1 if advance().kind == "MINUS" else 1
                continue
            break
        return row

    rows = [parse_item()]
    while peek().kind == "COMMA":
        advance()
        rows.append(parse_item())
    tok = peek()
    if tok.kind != "EOF":
        raise ParseError("unexpected trailing input", tok.line, tok.col, tok.text)
    return rows

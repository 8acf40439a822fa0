"""Greechie orthogonality diagrams and the GDL text format.

A diagram is a set of named rays (unit vectors in the 3-dimensional complex
space) grouped into contexts of three mutually orthogonal rays; contexts may
share rays ("interlinks").  The GDL format is line-oriented:

    # comment
    ray a = (1, 0, 0)
    ray b = (0.5+0.5i, 0, 0.7071067811865476)
    context z = { a, b, c }

Complex components are written ``a``, ``bi``, ``a+bi`` or ``a-bi`` with
decimal literals (a bare ``i`` is accepted for ``1i``).  Whitespace inside
declarations is insignificant.  The parser normalizes rays that are written
unnormalized and records the factor it divided out.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

import numpy as np

from . import linalg
from .ks import KSOperator, context_of
from .tolerances import DEFAULT, Tolerances

_EXACT_NORM = 1e-12  # below this the parser keeps the written components


class GDLParseError(ValueError):
    """Syntax or structural error in GDL text, with 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


@dataclass(frozen=True)
class RayDecl:
    """A named ray: normalized components plus the scale divided out."""

    name: str
    components: tuple[complex, complex, complex]
    scale: float = 1.0

    def vector(self) -> np.ndarray:
        return np.array(self.components, dtype=complex)


@dataclass(frozen=True, eq=False)
class GreechieDiagram:
    rays: dict[str, RayDecl]
    contexts: tuple[tuple[str, tuple[str, str, str]], ...]

    def ray_vector(self, name: str) -> np.ndarray:
        return self.rays[name].vector()

    def interlinks(self) -> tuple[tuple[str, tuple[str, ...]], ...]:
        """Rays shared by more than one context, with the context names."""
        membership: dict[str, list[str]] = {}
        for cname, members in self.contexts:
            for rname in members:
                membership.setdefault(rname, []).append(cname)
        return tuple(
            (rname, tuple(cnames))
            for rname, cnames in membership.items()
            if len(cnames) > 1
        )

    def to_dict(self) -> dict:
        return {
            "rays": [
                {
                    "name": ray.name,
                    "components": [[z.real, z.imag] for z in ray.components],
                    "scale": ray.scale,
                }
                for ray in self.rays.values()
            ],
            "contexts": [
                {"name": cname, "rays": list(members)}
                for cname, members in self.contexts
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# --- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t]+)
      | (?P<comment>\#.*)
      | (?P<imag>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i\b)
      | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<punct>[(){}=,+-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize_line(text: str, line_no: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise GDLParseError(
                f"unexpected character {text[pos]!r}", line_no, pos + 1
            )
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), line_no, pos + 1))
        pos = m.end()
    return tokens


class _LineParser:
    """Recursive-descent parser over one line of tokens."""

    def __init__(self, tokens: list[_Token], line_no: int, line_len: int):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no
        self.end_column = line_len + 1

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, expected: str) -> GDLParseError:
        tok = self.peek()
        if tok is None:
            return GDLParseError(
                f"expected {expected}, got end of line", self.line_no, self.end_column
            )
        return GDLParseError(
            f"expected {expected}, got {tok.text!r}", tok.line, tok.column
        )

    def take(self, kind: str, expected: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != kind or (text is not None and tok.text != text):
            raise self.error(expected)
        self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def _float(self, tok: _Token, text: str) -> float:
        value = float(text)
        if not math.isfinite(value):
            raise GDLParseError(
                f"number {text!r} overflows to infinity", tok.line, tok.column
            )
        return value

    def complex_literal(self) -> complex:
        sign = 1.0
        tok = self.peek()
        if tok is not None and tok.kind == "punct" and tok.text in "+-":
            sign = -1.0 if tok.text == "-" else 1.0
            self.pos += 1
            tok = self.peek()
        if tok is None:
            raise self.error("a complex number")
        if tok.kind == "imag":
            self.pos += 1
            return complex(0.0, sign * self._float(tok, tok.text[:-1]))
        if tok.kind == "ident" and tok.text == "i":
            self.pos += 1
            return complex(0.0, sign)
        if tok.kind != "number":
            raise self.error("a complex number")
        self.pos += 1
        real = sign * self._float(tok, tok.text)
        nxt = self.peek()
        if nxt is None or nxt.kind != "punct" or nxt.text not in "+-":
            return complex(real, 0.0)
        imag_sign = -1.0 if nxt.text == "-" else 1.0
        self.pos += 1
        tok = self.peek()
        if tok is not None and tok.kind == "imag":
            self.pos += 1
            return complex(real, imag_sign * self._float(tok, tok.text[:-1]))
        if tok is not None and tok.kind == "ident" and tok.text == "i":
            self.pos += 1
            return complex(real, imag_sign)
        raise self.error("an imaginary part like 0.5i")


# --- parsing ---------------------------------------------------------------


def parse_diagram(text: str, tol: Tolerances = DEFAULT) -> GreechieDiagram:
    """Parse GDL text into a diagram.

    Raises :class:`GDLParseError` with a 1-based line/column position on any
    syntax or structural problem (duplicate names, undeclared rays, wrong
    arity); never raises anything else, however malformed the input.
    """
    rays: dict[str, RayDecl] = {}
    contexts: list[tuple[str, tuple[str, str, str]]] = []
    context_names: set[str] = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(raw, line_no)
        if not tokens:
            continue
        parser = _LineParser(tokens, line_no, len(raw))
        head = tokens[0]
        if head.kind != "ident" or head.text not in ("ray", "context"):
            raise GDLParseError(
                f"expected 'ray' or 'context', got {head.text!r}",
                head.line,
                head.column,
            )
        parser.pos += 1
        name_tok = parser.take("ident", "a name")
        parser.take("punct", "'='", "=")
        if head.text == "ray":
            if name_tok.text in rays:
                raise GDLParseError(
                    f"duplicate ray name {name_tok.text!r}",
                    name_tok.line,
                    name_tok.column,
                )
            parser.take("punct", "'('", "(")
            components = [parser.complex_literal()]
            for _ in range(2):
                parser.take("punct", "','", ",")
                components.append(parser.complex_literal())
            parser.take("punct", "')'", ")")
            if not parser.at_end():
                raise parser.error("end of line")
            norm = math.sqrt(
                sum(z.real * z.real + z.imag * z.imag for z in components)
            )
            if norm == 0.0:
                raise GDLParseError(
                    f"ray {name_tok.text!r} is the zero vector",
                    name_tok.line,
                    name_tok.column,
                )
            if not math.isfinite(norm):
                raise GDLParseError(
                    f"ray {name_tok.text!r} is too large to normalize",
                    name_tok.line,
                    name_tok.column,
                )
            if abs(norm - 1.0) > _EXACT_NORM:
                components = [z / norm for z in components]
            rays[name_tok.text] = RayDecl(
                name=name_tok.text, components=tuple(components), scale=norm
            )
        else:
            if name_tok.text in context_names:
                raise GDLParseError(
                    f"duplicate context name {name_tok.text!r}",
                    name_tok.line,
                    name_tok.column,
                )
            open_tok = parser.take("punct", "'{'", "{")
            members = [parser.take("ident", "a ray name")]
            while True:
                nxt = parser.peek()
                if nxt is not None and nxt.kind == "punct" and nxt.text == ",":
                    parser.pos += 1
                    members.append(parser.take("ident", "a ray name"))
                else:
                    break
            parser.take("punct", "'}'", "}")
            if not parser.at_end():
                raise parser.error("end of line")
            if len(members) != 3:
                raise GDLParseError(
                    f"a context must list exactly 3 rays, got {len(members)}",
                    open_tok.line,
                    open_tok.column,
                )
            seen: set[str] = set()
            for member in members:
                if member.text not in rays:
                    raise GDLParseError(
                        f"undeclared ray {member.text!r}",
                        member.line,
                        member.column,
                    )
                if member.text in seen:
                    raise GDLParseError(
                        f"ray {member.text!r} repeated within one context",
                        member.line,
                        member.column,
                    )
                seen.add(member.text)
            context_names.add(name_tok.text)
            contexts.append(
                (name_tok.text, tuple(member.text for member in members))
            )
    return GreechieDiagram(rays=rays, contexts=tuple(contexts))


# --- serialization ---------------------------------------------------------


def _format_complex(z: complex) -> str:
    if z.imag == 0.0:
        return repr(float(z.real))
    if z.real == 0.0:
        return repr(float(z.imag)) + "i"
    sign = "+" if z.imag > 0 else "-"
    return f"{float(z.real)!r}{sign}{abs(float(z.imag))!r}i"


def serialize_diagram(d: GreechieDiagram) -> str:
    """Render a diagram back to GDL text (floats in round-trip precision)."""
    lines = []
    for ray in d.rays.values():
        comps = ", ".join(_format_complex(z) for z in ray.components)
        lines.append(f"ray {ray.name} = ({comps})")
    for cname, members in d.contexts:
        lines.append(f"context {cname} = {{ {', '.join(members)} }}")
    return "\n".join(lines) + "\n"


# --- validation ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ValidationReport:
    """Numerical audit of a diagram.

    Lists orthogonality residuals |<a|b>| per in-context ray pair,
    unit-norm residuals of the stored rays, the written scale factors the
    parser divided out, and the interlink structure.  ``valid`` means every
    residual is below its threshold.
    """

    valid: bool
    orthogonality: tuple[tuple[str, tuple[str, str], float], ...]
    normalization: tuple[tuple[str, float], ...]
    scales: tuple[tuple[str, float], ...]
    interlinks: tuple[tuple[str, tuple[str, ...]], ...]
    orthogonality_threshold: float
    normalization_threshold: float

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "interlinks": [
                {"ray": rname, "contexts": list(cnames)}
                for rname, cnames in self.interlinks
            ],
            "residuals": {
                "orthogonality": [
                    {"context": cname, "pair": list(pair), "value": value}
                    for cname, pair, value in self.orthogonality
                ],
                "normalization": [
                    {"ray": rname, "value": value}
                    for rname, value in self.normalization
                ],
            },
            "scales": [
                {"ray": rname, "value": value} for rname, value in self.scales
            ],
            "thresholds": {
                "orthogonality": self.orthogonality_threshold,
                "normalization": self.normalization_threshold,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def validate_diagram(d: GreechieDiagram, tol: Tolerances = DEFAULT) -> ValidationReport:
    """Check orthogonality and normalization of every context of ``d``."""
    orthogonality = []
    for cname, members in d.contexts:
        vectors = [d.ray_vector(m) for m in members]
        for i in range(3):
            for j in range(i + 1, 3):
                residual = float(abs(vectors[i].conj() @ vectors[j]))
                orthogonality.append((cname, (members[i], members[j]), residual))
    normalization = tuple(
        (ray.name, float(abs(np.linalg.norm(ray.vector()) - 1.0)))
        for ray in d.rays.values()
    )
    scales = tuple((ray.name, float(ray.scale)) for ray in d.rays.values())
    valid = all(
        value < tol.context_orthogonality for _, _, value in orthogonality
    ) and all(value < tol.ray_norm_residual for _, value in normalization)
    return ValidationReport(
        valid=valid,
        orthogonality=tuple(orthogonality),
        normalization=normalization,
        scales=scales,
        interlinks=d.interlinks(),
        orthogonality_threshold=tol.context_orthogonality,
        normalization_threshold=tol.ray_norm_residual,
    )


# --- construction from operators -------------------------------------------


def diagram_from_operators(
    ops: list[KSOperator] | tuple[KSOperator, ...], tol: Tolerances = DEFAULT
) -> GreechieDiagram:
    """Build a diagram from maximal operators, deduplicating shared rays.

    Rays are identified when their projectors are closer than
    ``tol.ray_dedup`` in Frobenius norm (so phase differences never split a
    ray).  Generated names are deterministic: rays r1, r2, ... in discovery
    order, contexts c1, c2, ...; operators with identical ray sets collapse
    into a single context.
    """
    ray_decls: dict[str, RayDecl] = {}
    ray_projectors: list[tuple[str, np.ndarray]] = []
    contexts: list[tuple[str, tuple[str, str, str]]] = []
    seen_member_sets: set[frozenset[str]] = set()

    for op in ops:
        ctx = context_of(op, tol)
        members = []
        for ray in ctx.rays:
            proj = linalg.projector(ray, tol)
            name = None
            for existing_name, existing_proj in ray_projectors:
                if float(np.linalg.norm(proj - existing_proj)) < tol.ray_dedup:
                    name = existing_name
                    break
            if name is None:
                name = f"r{len(ray_projectors) + 1}"
                ray_projectors.append((name, proj))
                ray_decls[name] = RayDecl(
                    name=name, components=tuple(complex(z) for z in ray), scale=1.0
                )
            members.append(name)
        member_set = frozenset(members)
        if member_set in seen_member_sets:
            continue
        seen_member_sets.add(member_set)
        contexts.append((f"c{len(contexts) + 1}", tuple(members)))
    return GreechieDiagram(rays=ray_decls, contexts=tuple(contexts))

"""Text formats shared by the command line tools.

Matrix files:
    field Q            (or: field GF(7))
    <m> <n>
    <m rows of n whitespace-separated scalars>
Blank lines and '#' comments are ignored; scalars are integers or a/b with
b > 0 over Q, integers reduced mod p over GF(p).  Writing then parsing a
matrix reproduces it exactly.

Certificates and quotient recipes reuse the same matrix body inside
begin/end blocks.
"""

from __future__ import annotations

from .division import QuotientRecipe
from .errors import ParseError
from .fields import Field, make_field
from .matrices import Matrix
from .polynomials import Poly
from .products import ProductCertificate
from .sums import SumCertificate


def _meaningful_lines(text: str) -> list:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_field(token: str) -> Field:
    token = token.strip()
    if token in ("Q", "q"):
        return make_field("Q")
    if token.upper().startswith("GF(") and token.endswith(")"):
        try:
            p = int(token[3:-1])
        except ValueError as exc:
            raise ParseError(f"bad field token {token!r}") from exc
        return make_field("GF", p)
    raise ParseError(f"bad field token {token!r}")


def format_field(field: Field) -> str:
    return "Q" if field.is_rationals else f"GF({field.p})"


def _parse_matrix_lines(lines: list, start: int, field: Field):
    """Parse '<m> <n>' plus m rows starting at lines[start]; returns
    (Matrix, next_index)."""
    try:
        m, n = (int(t) for t in lines[start].split())
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad dimension line: {lines[start]!r}") from exc
    rows = []
    for i in range(m):
        toks = lines[start + 1 + i].split()
        if len(toks) != n:
            raise ParseError(f"row {i} has {len(toks)} entries, expected {n}")
        try:
            rows.append([field.parse(t) for t in toks])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar in row {i}") from exc
    if m == 0:
        return Matrix(field, tuple(() for _ in range(0))), start + 1
    return Matrix.from_rows(field, rows), start + 1 + m


def parse_matrix(text: str, field_override: Field = None) -> Matrix:
    lines = _meaningful_lines(text)
    if not lines or not lines[0].startswith("field"):
        raise ParseError("matrix file must start with a field line")
    field = parse_field(lines[0].split(None, 1)[1])
    if field_override is not None:
        field = field_override
    mat, idx = _parse_matrix_lines(lines, 1, field)
    if idx != len(lines):
        raise ParseError("trailing content after the matrix body")
    return mat


def format_matrix(M: Matrix) -> str:
    out = [f"field {format_field(M.field)}", f"{M.m} {M.n}"]
    for row in M.rows:
        out.append(" ".join(M.field.format(e) for e in row))
    return "\n".join(out) + "\n"


def read_matrix(path: str, field_override: Field = None) -> Matrix:
    with open(path) as fh:
        return parse_matrix(fh.read(), field_override)


def structured_matrix(name: str, M: Matrix) -> str:
    entries = " ".join(M.field.format(e) for row in M.rows for e in row)
    return (f"matrix {name}\nfield {format_field(M.field)}\n"
            f"dims {M.m} {M.n}\nentries {entries}\n")


def format_poly(p: Poly) -> str:
    """Canonical text: ascending coefficient list."""
    if p.is_zero:
        return "0"
    return " ".join(p.field.format(c) for c in p.coeffs)


# ---- certificates ----

def format_certificate(cert) -> str:
    kind = "product" if isinstance(cert, ProductCertificate) else "sum"
    parts_name = "factor" if kind == "product" else "summand"
    out = [f"certificate {kind}",
           f"field {format_field(cert.input.field)}",
           f"trail {cert.trail}",
           "begin input",
           f"{cert.input.m} {cert.input.n}"]
    out += [" ".join(cert.input.field.format(e) for e in row) for row in cert.input.rows]
    out.append("end")
    parts = cert.factors if kind == "product" else cert.summands
    for i, part in enumerate(parts):
        role = cert.roles[i]
        head = f"begin {parts_name} role={role}"
        if kind == "product":
            head += f" rank={cert.claimed_ranks[i]}"
        out.append(head)
        out.append(f"{part.m} {part.n}")
        out += [" ".join(part.field.format(e) for e in row) for row in part.rows]
        out.append("end")
    return "\n".join(out) + "\n"


def parse_certificate(text: str):
    lines = _meaningful_lines(text)
    if not lines or not lines[0].startswith("certificate"):
        raise ParseError("not a certificate file")
    kind = lines[0].split()[1]
    if kind not in ("product", "sum"):
        raise ParseError(f"unknown certificate kind {kind!r}")
    if not lines[1].startswith("field"):
        raise ParseError("certificate needs a field line")
    field = parse_field(lines[1].split(None, 1)[1])
    idx = 2
    trail = ""
    if idx < len(lines) and lines[idx].startswith("trail"):
        trail = lines[idx].split(None, 1)[1] if " " in lines[idx] else ""
        idx += 1
    input_matrix = None
    parts = []
    roles = []
    ranks = []
    while idx < len(lines):
        head = lines[idx]
        if not head.startswith("begin"):
            break  # trailing report lines after the blocks are fine
        tokens = head.split()
        section = tokens[1]
        attrs = dict(t.split("=", 1) for t in tokens[2:])
        mat, nxt = _parse_matrix_lines(lines, idx + 1, field)
        if nxt >= len(lines) or lines[nxt] != "end":
            raise ParseError(f"unterminated block {section!r}")
        idx = nxt + 1
        if section == "input":
            input_matrix = mat
        else:
            parts.append(mat)
            roles.append(attrs.get("role", "Any"))
            ranks.append(int(attrs["rank"]) if "rank" in attrs else None)
    if input_matrix is None:
        raise ParseError("certificate has no input block")
    if kind == "product":
        from .matrices import rank as _rank

        claimed = tuple(r if r is not None else _rank(p) for r, p in zip(ranks, parts))
        return ProductCertificate(input_matrix, tuple(parts), tuple(roles), claimed, trail)
    return SumCertificate(input_matrix, tuple(parts), tuple(roles), trail)


# ---- quotient recipes ----

_RECIPE_BLOCKS = ("C", "B", "X", "S")


def parse_recipe(text: str, field: Field) -> QuotientRecipe:
    lines = _meaningful_lines(text)
    blocks = {}
    strategy = None
    idx = 0
    while idx < len(lines):
        line = lines[idx]
        if line.startswith("strategy"):
            strategy = line.split()[1]
            idx += 1
            continue
        if not line.startswith("begin"):
            raise ParseError(f"expected begin/strategy, got {line!r}")
        name = line.split()[1]
        if name not in _RECIPE_BLOCKS:
            raise ParseError(f"unknown recipe block {name!r}")
        mat, nxt = _parse_matrix_lines(lines, idx + 1, field)
        if nxt >= len(lines) or lines[nxt] != "end":
            raise ParseError(f"unterminated block {name!r}")
        blocks[name] = mat
        idx = nxt + 1
    return QuotientRecipe(C=blocks.get("C"), B=blocks.get("B"),
                          X=blocks.get("X"), S=blocks.get("S"), strategy=strategy)

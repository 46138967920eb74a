"""Positive-primitive formulas: parsing, eps-approximation, exact
satisfaction slack via LP, presentation formulas, and the satisfaction
transfer experiment for embeddings.

The slack of a formula at an assignment is the minimal uniform relaxation
of its norm bounds that makes it satisfiable; <= 0 means satisfied. With
polyhedral norms the slack is one LP, so satisfied and approximately
satisfied coincide (the minimum is attained).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import (
    AssignmentNotInSubspace,
    DimensionMismatch,
    FormulaSyntaxError,
    IsActuallyIdeal,
    ScopeError,
)
from .lp import EQ, LE, lp_solve, make_lp
from .purity import Embedding, ideal_defect
from .rationals import ONE, Q, ZERO, rat, rref, solve, transpose, vec, zeros
from .spaces import PolyhedralSpace


@dataclass(frozen=True)
class Term:
    """Rational-linear combination of free vars x_i and bound vars."""

    free: tuple  # length n
    bound: tuple  # length m

    def shifted(self, n: int, m: int) -> "Term":
        return Term(self.free + (ZERO,) * (n - len(self.free)), self.bound + (ZERO,) * (m - len(self.bound)))


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class NormLe:
    term: Term
    bound: object  # rational M >= 0


@dataclass(frozen=True)
class PPFormula:
    free_count: int
    bound_count: int
    bound_names: tuple
    atoms: tuple  # of Eq | NormLe


def approximate(phi: PPFormula, eps) -> PPFormula:
    """Relax every norm bound M to M + eps; equalities stay exact."""
    eps = Q(eps)
    atoms = tuple(
        NormLe(a.term, a.bound + eps) if isinstance(a, NormLe) else a for a in phi.atoms
    )
    return PPFormula(phi.free_count, phi.bound_count, phi.bound_names, atoms)


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<rat>\d+\s*/\s*\d+|\d+)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op><=|[()+\-*=.,])
    """,
    re.VERBOSE,
)
_FREE = re.compile(r"^x(\d+)$")


class _Tokens:
    def __init__(self, text: str):
        self.toks: List[Tuple[str, str, int, int]] = []
        line, col = 1, 1
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
            kind = m.lastgroup
            tok = m.group()
            if kind != "ws":
                self.toks.append((kind, tok, line, col))
            nl = tok.count("\n")
            if nl:
                line += nl
                col = len(tok) - tok.rfind("\n")
            else:
                col += len(tok)
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, "", 0, 0)

    def next(self):
        t = self.peek()
        if t[0] is None:
            last = self.toks[-1] if self.toks else ("", "", 1, 1)
            raise FormulaSyntaxError("unexpected end of input", last[2], last[3])
        self.i += 1
        return t

    def expect(self, value: str):
        kind, tok, line, col = self.next()
        if tok != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {tok!r}", line, col)

    @property
    def done(self):
        return self.i >= len(self.toks)


def parse_formula(text: str) -> PPFormula:
    """Parse `EXISTS y1, y2 . atom AND atom`-style pp-formulas.

    Atoms are `t = t` or `norm(t) <= p/q`; terms are rational-linear
    expressions over free variables x1, x2, ... and the declared bound
    variables.
    """
    toks = _Tokens(text)
    bound_names: List[str] = []
    kind, tok, line, col = toks.peek()
    if kind == "name" and tok == "EXISTS":
        toks.next()
        while True:
            k, name, ln, cl = toks.next()
            if k != "name" or name in ("AND", "EXISTS", "norm"):
                raise FormulaSyntaxError(f"expected variable name, found {name!r}", ln, cl)
            if _FREE.match(name):
                raise ScopeError(f"bound variable {name!r} clashes with free-variable syntax", ln, cl)
            if name in bound_names:
                raise ScopeError(f"duplicate bound variable {name!r}", ln, cl)
            bound_names.append(name)
            k, t2, _, _ = toks.peek()
            if t2 == ",":
                toks.next()
                continue
            break
        toks.expect(".")
    state = _ParseState(bound_names)
    atoms = [_parse_atom(toks, state)]
    while True:
        kind, tok, line, col = toks.peek()
        if kind is None:
            break
        if kind == "name" and tok == "AND":
            toks.next()
            atoms.append(_parse_atom(toks, state))
        else:
            raise FormulaSyntaxError(f"expected AND or end of input, found {tok!r}", line, col)
    n = state.max_free
    m = len(bound_names)
    atoms = [
        Eq(a.left.shifted(n, m), a.right.shifted(n, m))
        if isinstance(a, Eq)
        else NormLe(a.term.shifted(n, m), a.bound)
        for a in atoms
    ]
    return PPFormula(n, m, tuple(bound_names), tuple(atoms))


class _ParseState:
    def __init__(self, bound_names):
        self.bound_names = bound_names
        self.max_free = 0


def _parse_atom(toks: _Tokens, state):
    kind, tok, line, col = toks.peek()
    if kind == "name" and tok == "norm":
        toks.next()
        toks.expect("(")
        term = _parse_term(toks, state)
        toks.expect(")")
        toks.expect("<=")
        bound = _parse_rational(toks)
        if bound < 0:
            raise FormulaSyntaxError("norm bound must be >= 0", line, col)
        return NormLe(term, bound)
    left = _parse_term(toks, state)
    toks.expect("=")
    right = _parse_term(toks, state)
    return Eq(left, right)


def _parse_rational(toks: _Tokens):
    kind, tok, line, col = toks.next()
    neg = False
    if tok == "-":
        neg = True
        kind, tok, line, col = toks.next()
    if kind != "rat":
        raise FormulaSyntaxError(f"expected a rational number, found {tok!r}", line, col)
    q = rat(tok.replace(" ", ""))
    return -q if neg else q


def _parse_term(toks: _Tokens, state) -> Term:
    free: dict = {}
    bound: dict = {}
    sign = ONE
    first = True
    while True:
        kind, tok, line, col = toks.peek()
        if not first:
            if tok == "+":
                toks.next()
                sign = ONE
            elif tok == "-":
                toks.next()
                sign = -ONE
            else:
                break
        else:
            if tok == "-":
                toks.next()
                sign = -ONE
            first = False
        _parse_addend(toks, state, sign, free, bound)
    nfree = state.max_free
    fvec = tuple(free.get(i, ZERO) for i in range(nfree))
    bvec = tuple(bound.get(i, ZERO) for i in range(len(state.bound_names)))
    return Term(fvec, bvec)


def _parse_addend(toks, state, sign, free, bound):
    kind, tok, line, col = toks.next()
    coef = sign
    if kind == "rat":
        coef = sign * rat(tok.replace(" ", ""))
        k2, t2, _, _ = toks.peek()
        if t2 == "*":
            toks.next()
            kind, tok, line, col = toks.next()
        else:
            if coef != 0:
                raise FormulaSyntaxError("constants other than 0 are not allowed", line, col)
            return
    if kind != "name" or tok in ("AND", "EXISTS", "norm"):
        raise FormulaSyntaxError(f"expected a variable, found {tok!r}", line, col)
    m = _FREE.match(tok)
    if m:
        idx = int(m.group(1))
        if idx == 0:
            raise ScopeError("free variables are numbered from x1", line, col)
        state.max_free = max(state.max_free, idx)
        free[idx - 1] = free.get(idx - 1, ZERO) + coef
    else:
        if tok not in state.bound_names:
            raise ScopeError(f"unknown variable {tok!r}", line, col)
        j = state.bound_names.index(tok)
        bound[j] = bound.get(j, ZERO) + coef


def format_formula(phi: PPFormula) -> str:
    """Concrete syntax round-trips through parse_formula."""
    parts = []
    for atom in phi.atoms:
        if isinstance(atom, Eq):
            parts.append(f"{_fmt_term(atom.left, phi)} = {_fmt_term(atom.right, phi)}")
        else:
            parts.append(f"norm({_fmt_term(atom.term, phi)}) <= {atom.bound}")
    body = " AND ".join(parts)
    if phi.bound_count:
        return f"EXISTS {', '.join(phi.bound_names)} . {body}"
    return body


def _fmt_term(term: Term, phi: PPFormula) -> str:
    bits = []
    for i, c in enumerate(term.free):
        if c != 0:
            bits.append(f"{c} * x{i + 1}")
    for j, c in enumerate(term.bound):
        if c != 0:
            bits.append(f"{c} * {phi.bound_names[j]}")
    if not bits:
        return "0"
    return " + ".join(bits).replace("+ -", "- ")


# ---------------------------------------------------------- satisfaction

@dataclass(frozen=True)
class SlackResult:
    """Exact satisfaction slack; kind 'free' means no norm atoms and the
    equalities are satisfiable (slack is -infinity), 'infeasible' means
    the equality system has no solution (slack is +infinity)."""

    kind: str  # "finite" | "free" | "infeasible"
    value: Optional[object] = None

    @property
    def satisfied(self) -> bool:
        return self.kind == "free" or (self.kind == "finite" and self.value <= 0)

    def leq(self, other: "SlackResult") -> bool:
        order = {"free": 0, "finite": 1, "infeasible": 2}
        if self.kind != other.kind:
            return order[self.kind] < order[other.kind]
        if self.kind == "finite":
            return self.value <= other.value
        return True

    def __str__(self):
        if self.kind == "finite":
            return str(self.value)
        return "-inf" if self.kind == "free" else "+inf"


def satisfaction_slack(space: PolyhedralSpace, phi: PPFormula, assignment: Sequence) -> SlackResult:
    """min over bound-variable vectors (subject to the equality atoms) of
    the largest norm-bound violation, as one exact LP."""
    if len(assignment) < phi.free_count:
        raise DimensionMismatch(
            f"formula needs {phi.free_count} assigned vectors, got {len(assignment)}"
        )
    vals = [vec(a) for a in assignment]
    for a in vals:
        if len(a) != space.dim:
            raise DimensionMismatch("assignment vector does not match the space")
    d = space.dim
    m = phi.bound_count
    norm_atoms = [a for a in phi.atoms if isinstance(a, NormLe)]
    eq_atoms = [a for a in phi.atoms if isinstance(a, Eq)]
    nv = m * d + 1
    s_idx = m * d
    cons = []

    def term_rows(term: Term):
        """Per-coordinate (row over bound vars, constant) of the term value."""
        const = list(zeros(d))
        for i, c in enumerate(term.free):
            if c != 0:
                for r in range(d):
                    const[r] += c * vals[i][r]
        rows = []
        for r in range(d):
            row = [ZERO] * nv
            for j, c in enumerate(term.bound):
                if c != 0:
                    row[j * d + r] = c
            rows.append((row, const[r]))
        return rows

    for atom in eq_atoms:
        lrows = term_rows(atom.left)
        rrows = term_rows(atom.right)
        for (lrow, lconst), (rrow, rconst) in zip(lrows, rrows):
            row = [a - b for a, b in zip(lrow, rrow)]
            cons.append((row, EQ, rconst - lconst))
    for atom in norm_atoms:
        rows = term_rows(atom.term)
        for psi in space.ball_facets:
            row = [ZERO] * nv
            const = ZERO
            for r in range(d):
                trow, tconst = rows[r]
                if psi[r] != 0:
                    for j in range(nv):
                        row[j] += psi[r] * trow[j]
                    const += psi[r] * tconst
            row[s_idx] = -ONE
            cons.append((row, LE, atom.bound - const))
    if not norm_atoms:
        res = lp_solve(make_lp(nv, [ZERO] * nv, "min", cons))
        return SlackResult("free") if res.is_optimal else SlackResult("infeasible")
    obj = [ZERO] * nv
    obj[s_idx] = ONE
    res = lp_solve(make_lp(nv, obj, "min", cons))
    if res.status == "infeasible":
        return SlackResult("infeasible")
    assert res.is_optimal
    return SlackResult("finite", res.optimum)


def presentation_formula(space: PolyhedralSpace) -> PPFormula:
    """Vertex-truncated presentation formula: one atom
    norm(sum r_i x_i) <= 1 per ball vertex (r_1, ..., r_n).

    Satisfaction by (a_1, ..., a_n) in K holds iff e_i -> a_i has
    operator norm <= 1.
    """
    n = space.dim
    atoms = tuple(
        NormLe(Term(tuple(v), ()), ONE) for v in space.ball_vertices
    )
    return PPFormula(n, 0, (), atoms)


def pull_back_assignment(e: Embedding, assignment: Sequence):
    """Coordinates in K of ambient vectors lying in f[K]."""
    out = []
    for a in assignment:
        a = vec(a)
        x = solve(e.map.matrix, a)
        if x is None:
            raise AssignmentNotInSubspace(f"{a} is not in the embedded subspace")
        out.append(x)
    return out


def transfer_check(e: Embedding, phi: PPFormula, assignment: Sequence):
    """(slack in K, slack in L) for an assignment of ambient vectors that
    lie in the embedded copy of K."""
    in_k = pull_back_assignment(e, assignment)
    slack_k = satisfaction_slack(e.subspace, phi, in_k)
    slack_l = satisfaction_slack(e.ambient, phi, [vec(a) for a in assignment])
    return slack_k, slack_l


def distinguishing_formula(e: Embedding):
    """For a non-ideal embedding, a pp-formula and assignment with
    slack <= 0 in the ambient space but slack > 0 in the subspace.

    The formula existentially quantifies a complement basis of f[K] over
    the presentation formula of L, evaluated at the embedded basis of K.
    """
    report = ideal_defect(e)
    if report.value == 0:
        raise IsActuallyIdeal("embedding is an ideal; no distinguishing formula exists")
    l = e.ambient
    d = e.subspace.dim
    dl = l.dim
    cols = [tuple(row[j] for row in e.map.matrix) for j in range(d)]
    # complement basis: standard basis vectors at non-pivot coordinates
    _, pivots = rref(cols)
    complement = [j for j in range(dl) if j not in pivots][: dl - d]
    basis = cols + [tuple(ONE if i == j else ZERO for i in range(dl)) for j in complement]
    basis_matrix = transpose(basis)  # columns are the basis vectors
    atoms = []
    names = tuple(f"y{j + 1}" for j in range(dl - d))
    for v in l.ball_vertices:
        coords = solve(basis_matrix, v)
        assert coords is not None
        atoms.append(NormLe(Term(tuple(coords[:d]), tuple(coords[d:])), ONE))
    phi = PPFormula(d, dl - d, names, tuple(atoms))
    assignment = [vec(c) for c in cols]  # embedded basis of K, in L coordinates
    return phi, assignment

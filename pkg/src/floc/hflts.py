"""Hesitant fuzzy linguistic decision engine for choosing a node role.

Pipeline per node: standardised criteria -> linguistic expressions (one per
alternative and criterion) -> HFLTS -> envelopes -> 1-cuts -> one interval per
alternative -> possibility rank -> role with the highest rank.

The seven-term scale is ``el < vl < l < m < h < vh < p`` with uniform
triangular memberships peaking at (k - 1) / 6.
"""
from __future__ import annotations

import math
import re
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum, IntEnum
from importlib import resources

from .network import Role

ALTERNATIVES = (Role.CH, Role.CM, Role.RELAY)
N_CRITERIA = 6
_SNAP = 1e-9


class Term(IntEnum):
    EL = 1
    VL = 2
    L = 3
    M = 4
    H = 5
    VH = 6
    P = 7

    @property
    def label(self) -> str:
        return self.name.lower()

    @property
    def peak(self) -> float:
        return (self.value - 1) / 6

    def negate(self) -> Term:
        return Term(8 - self.value)

    def fold(self) -> Term:
        """Map to closeness-to-medium: m -> p, ends -> el."""
        return Term(7 - 2 * abs(self.value - 4))

    def __str__(self) -> str:
        return self.label


_ALIASES = {t.label: t for t in Term} | {"v_l": Term.VL, "v_h": Term.VH}


def parse_term(text: str) -> Term:
    key = text.strip().lower()
    if key not in _ALIASES:
        raise ValueError(f"unknown linguistic term: {text!r}")
    return _ALIASES[key]


@dataclass(frozen=True)
class TriangularMembership:
    left: float
    peak: float
    right: float

    def __call__(self, v: float) -> float:
        if v == self.peak:
            return 1.0
        if v < self.peak:
            return 0.0 if v <= self.left else (v - self.left) / (self.peak - self.left)
        return 0.0 if v >= self.right else (self.right - v) / (self.right - self.peak)


MEMBERSHIP = {
    t: TriangularMembership(max(t.peak - 1 / 6, 0.0), t.peak, min(t.peak + 1 / 6, 1.0)) for t in Term
}


def _check_unit(v: float) -> None:
    if not 0 <= v <= 1 or math.isnan(v):
        raise ValueError(f"value must lie in [0, 1], got {v}")


def anchors(v: float) -> tuple[Term, Term]:
    """The two adjacent terms whose triangles cover ``v`` (equal when v sits on a peak)."""
    _check_unit(v)
    x = v * 6
    k = round(x)
    if abs(x - k) < _SNAP:
        return Term(k + 1), Term(k + 1)
    lo = math.floor(x)
    return Term(lo + 1), Term(lo + 2)


def value_to_terms(v: float) -> dict[Term, float]:
    lo, hi = anchors(v)
    if lo == hi:
        return {lo: 1.0}
    mu_hi = v * 6 - (lo.value - 1)
    return {lo: 1.0 - mu_hi, hi: mu_hi}


class Kind(str, Enum):
    SINGLE = "single"
    GREATER_THAN = "greater_than"
    LOWER_THAN = "lower_than"
    BETWEEN = "between"


@dataclass(frozen=True)
class GrammarExpression:
    kind: Kind
    first: Term
    second: Term | None = None

    def __post_init__(self):
        if self.kind is Kind.BETWEEN:
            if self.second is None or self.second < self.first:
                raise ValueError("'between' needs an ordered pair of terms")
        elif self.second is not None:
            raise ValueError(f"{self.kind.value} takes a single anchor")

    def __str__(self) -> str:
        if self.kind is Kind.SINGLE:
            return self.first.label
        if self.kind is Kind.BETWEEN:
            return f"between {self.first} and {self.second}"
        word = "greater than" if self.kind is Kind.GREATER_THAN else "lower than"
        return f"{word} {self.first}"


_TERM_RE = r"(el|v_?l|l|m|h|v_?h|p)"
_PATTERNS = [
    (re.compile(rf"^greater\s+than\s+{_TERM_RE}$"), Kind.GREATER_THAN),
    (re.compile(rf"^lower\s+than\s+{_TERM_RE}$"), Kind.LOWER_THAN),
    (re.compile(rf"^between\s+{_TERM_RE}\s*(?:and|&)\s*{_TERM_RE}$"), Kind.BETWEEN),
    (re.compile(rf"^{_TERM_RE}$"), Kind.SINGLE),
]


def parse_expression(text: str) -> GrammarExpression:
    s = " ".join(text.strip().lower().split())
    for pattern, kind in _PATTERNS:
        m = pattern.match(s)
        if m:
            terms = [parse_term(g) for g in m.groups()]
            return GrammarExpression(kind, *terms)
    raise ValueError(f"cannot parse linguistic expression: {text!r}")


@dataclass(frozen=True)
class Hflts:
    terms: tuple[Term, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an HFLTS cannot be empty")
        values = [t.value for t in self.terms]
        if values != list(range(values[0], values[0] + len(values))):
            raise ValueError("HFLTS terms must be consecutive and ordered")

    @classmethod
    def span(cls, lo: Term, hi: Term) -> Hflts:
        return cls(tuple(Term(k) for k in range(lo.value, hi.value + 1)))

    def __str__(self) -> str:
        return "{" + ", ".join(t.label for t in self.terms) + "}"


@dataclass(frozen=True)
class TermInterval:
    lower: Term
    upper: Term

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("envelope lower bound above upper bound")

    def __str__(self) -> str:
        return "{" + f"{self.lower}, {self.upper}" + "}"


def transform_expression(expr: GrammarExpression) -> Hflts:
    """Map a grammar expression to its HFLTS; comparisons exclude the anchor."""
    if expr.kind is Kind.SINGLE:
        return Hflts((expr.first,))
    if expr.kind is Kind.BETWEEN:
        return Hflts.span(expr.first, expr.second)
    if expr.kind is Kind.GREATER_THAN:
        if expr.first is Term.P:
            raise ValueError("'greater than p' is empty")
        return Hflts.span(Term(expr.first + 1), Term.P)
    if expr.first is Term.EL:
        raise ValueError("'lower than el' is empty")
    return Hflts.span(Term.EL, Term(expr.first - 1))


def envelope(h: Hflts) -> TermInterval:
    return TermInterval(min(h.terms), max(h.terms))


def one_cut(iv: TermInterval) -> tuple[float, float]:
    return (iv.lower.peak, iv.upper.peak)


def aggregate_interval(intervals: Sequence[tuple[float, float]], mode: str) -> tuple[float, float]:
    """Component-wise max (optimistic) or min (pessimistic) over criteria."""
    if not intervals:
        raise ValueError("no intervals to aggregate")
    pick = {"optimistic": max, "pessimistic": min}.get(mode)
    if pick is None:
        raise ValueError(f"mode must be 'optimistic' or 'pessimistic', got {mode!r}")
    return (pick(u[0] for u in intervals), pick(u[1] for u in intervals))


def possibility_rank(u1: float, u2: float) -> float:
    """Possibility that the interval [u1, u2] dominates the unit interval."""
    if not 0 <= u1 <= u2 <= 1:
        raise ValueError(f"need 0 <= u1 <= u2 <= 1, got [{u1}, {u2}]")
    return max(1 - max((1 - u1) / (u2 - u1 + 1), 0), 0)


class Status(str, Enum):
    OPTIMISTIC = "optimistic"
    PESSIMISTIC = "pessimistic"


def evaluate_status(gain: float, ew: float, gain_threshold: float, ew_max: float = 1.0) -> Status:
    """Optimistic only when both gain degree and energy welfare are above their bars."""
    if gain > gain_threshold and ew > ew_max / 2:
        return Status.OPTIMISTIC
    return Status.PESSIMISTIC


def standardize(raw: Sequence[float], population: Sequence[Sequence[float]]) -> tuple[float, ...]:
    """Min-max scale each criterion of ``raw`` against the population's range.

    A criterion that is constant over the population maps to 0.5.
    """
    if not population:
        raise ValueError("empty population")
    out = []
    for c, v in enumerate(raw):
        col = [row[c] for row in population]
        lo, hi = min(col), max(col)
        out.append(0.5 if hi == lo else min(max((v - lo) / (hi - lo), 0.0), 1.0))
    return tuple(out)


def standardize_population(rows: Sequence[Sequence[float]]) -> list[tuple[float, ...]]:
    if not rows:
        return []
    cols = list(zip(*rows))
    bounds = [(min(c), max(c)) for c in cols]
    return [
        tuple(0.5 if hi == lo else min(max((v - lo) / (hi - lo), 0.0), 1.0) for v, (lo, hi) in zip(row, bounds))
        for row in rows
    ]


# Orientation of each criterion per alternative: '+' higher is better, '-'
# lower is better, '~' mid-range is best. CH and Relay follow the reference
# matrix; CM mirrors CH, so a member is a node that would make a poor head.
# Criteria order: gain degree, energy welfare, thermal entropy, link
# connectivity, expected optimal hop, link quality.
ORIENTATION = {
    Role.CH: "++-+-+",
    Role.CM: "--+-+-",
    Role.RELAY: "+~-+-+",
}


def expression_for(v: float, orientation: str) -> GrammarExpression:
    lo, hi = anchors(v)
    if orientation == "+":
        below = Term(lo - 1) if lo == hi and lo > Term.EL else lo
        if lo == hi == Term.EL:
            return GrammarExpression(Kind.BETWEEN, Term.EL, Term.P)
        return GrammarExpression(Kind.GREATER_THAN, below)
    if orientation == "-":
        if lo == hi == Term.P:
            return GrammarExpression(Kind.BETWEEN, Term.EL, Term.P)
        above = Term(hi + 1) if lo == hi else hi
        return GrammarExpression(Kind.LOWER_THAN, above)
    if orientation == "~":
        if lo == hi:
            return GrammarExpression(Kind.SINGLE, lo)
        return GrammarExpression(Kind.BETWEEN, lo, hi)
    raise ValueError(f"unknown orientation {orientation!r}")


def orient(iv: TermInterval, orientation: str) -> TermInterval:
    """Re-express an envelope as an "at least" suitability interval ending at p.

    Benefit envelopes keep their lower bound, cost envelopes are negated
    (s_k -> s_8-k) and mid-range envelopes are folded around m (m -> p,
    extremes -> el). After this every criterion reads "suitable at least to
    this degree", so alternatives compete on lower bounds alone.
    """
    if orientation == "+":
        low = iv.lower
    elif orientation == "-":
        low = iv.upper.negate()
    elif orientation == "~":
        low = min(Term(k).fold() for k in range(iv.lower, iv.upper + 1))
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return TermInterval(low, Term.P)


def build_matrix(criteria: Sequence[float], orientation=ORIENTATION) -> list[list[GrammarExpression]]:
    if len(criteria) != N_CRITERIA:
        raise ValueError(f"need {N_CRITERIA} criteria, got {len(criteria)}")
    return [[expression_for(v, o) for v, o in zip(criteria, orientation[alt])] for alt in ALTERNATIVES]


@dataclass(frozen=True)
class Decision:
    role: Role
    ranks: tuple[float, float, float]
    expressions: tuple[tuple[GrammarExpression, ...], ...]
    hflts: tuple[tuple[Hflts, ...], ...]
    envelopes: tuple[tuple[TermInterval, ...], ...]
    cuts: tuple[tuple[tuple[float, float], ...], ...]  # after orientation
    intervals: tuple[tuple[float, float], ...]  # per alternative
    mode: str

    @property
    def ordering(self) -> list[Role]:
        idx = sorted(range(3), key=lambda i: (-self.ranks[i], i))
        return [ALTERNATIVES[i] for i in idx]


def select_alternative(ranks: Sequence[float], tiebreak: Sequence[float] | None = None) -> int:
    """Index of the highest rank.

    Equal ranks are separated by ``tiebreak`` (higher wins) when given, then
    by the lowest index.
    """
    keys = [(r, 0.0 if tiebreak is None else tiebreak[i]) for i, r in enumerate(ranks)]
    best = 0
    for i, k in enumerate(keys):
        if k > keys[best]:
            best = i
    return best


def rank_matrix(
    matrix: Sequence[Sequence[GrammarExpression]],
    mode: str,
    orientation: dict | None = None,
    weights: Sequence[float] | None = None,
) -> Decision:
    """Run the ranking pipeline on a 3 x 6 expression matrix.

    ``orientation`` (per alternative strings of '+', '-', '~') re-expresses
    each envelope as suitability before the 1-cut; None uses the envelopes as
    given. With ``weights`` each alternative scores the weighted mean of its
    per-criterion possibility ranks instead of the aggregated interval's rank.
    """
    if len(matrix) != 3 or any(len(row) != N_CRITERIA for row in matrix):
        raise ValueError("decision matrix must be 3 x 6")
    hs, envs, cuts, ivals, ranks, scores = [], [], [], [], [], []
    w = weights if weights is not None else (1 / N_CRITERIA,) * N_CRITERIA
    for a, row in enumerate(matrix):
        h_row = tuple(transform_expression(e) for e in row)
        env_row = tuple(envelope(h) for h in h_row)
        if orientation is None:
            cut_row = tuple(one_cut(iv) for iv in env_row)
        else:
            ori = orientation[ALTERNATIVES[a]]
            cut_row = tuple(one_cut(orient(iv, o)) for iv, o in zip(env_row, ori))
        agg = aggregate_interval(cut_row, mode)
        score = math.fsum(wc * possibility_rank(*u) for wc, u in zip(w, cut_row))
        rank = score if weights is not None else possibility_rank(*agg)
        hs.append(h_row)
        envs.append(env_row)
        cuts.append(cut_row)
        ivals.append(agg)
        ranks.append(rank)
        scores.append(score)
    tiebreak = scores if orientation is not None and weights is None else None
    return Decision(
        role=ALTERNATIVES[select_alternative(ranks, tiebreak)],
        ranks=tuple(ranks),
        expressions=tuple(tuple(r) for r in matrix),
        hflts=tuple(hs),
        envelopes=tuple(envs),
        cuts=tuple(cuts),
        intervals=tuple(ivals),
        mode=mode,
    )


def decide_role(
    criteria: Sequence[float],
    status: Status,
    weights: Sequence[float] | None = None,
    *,
    matrix: Sequence[Sequence[GrammarExpression]] | None = None,
) -> Decision:
    """Pick CH, CM or Relay for one node.

    Optimistic nodes aggregate with max (retain), pessimistic ones with min
    (change). ``matrix`` replaces the generated expressions, e.g. with the
    reference fixture; it is then ranked without orientation.
    """
    mode = status.value
    if matrix is not None:
        return rank_matrix(matrix, mode, None, weights)
    for v in criteria:
        _check_unit(v)
    return rank_matrix(build_matrix(criteria), mode, ORIENTATION, weights)


def parse_matrix(text: str) -> list[list[GrammarExpression]]:
    """Three non-comment lines of six comma-separated expressions.

    An optional ``x1:`` style row label is ignored.
    """
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        line = re.sub(r"^x\d+\s*:\s*", "", line)
        cells = [c for c in line.split(",")]
        if len(cells) != N_CRITERIA:
            raise ValueError(f"expected {N_CRITERIA} cells per row, got {len(cells)}: {line!r}")
        rows.append([parse_expression(c) for c in cells])
    if len(rows) != 3:
        raise ValueError(f"expected 3 rows, got {len(rows)}")
    return rows


def load_matrix(path) -> list[list[GrammarExpression]]:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def _data_text(name: str) -> str:
    return resources.files("floc").joinpath(f"data/{name}").read_text(encoding="utf-8")


def reference_matrix() -> list[list[GrammarExpression]]:
    """The published example decision matrix shipped with the package."""
    return parse_matrix(_data_text("reference_matrix.txt"))


def parse_set_table(text: str) -> list[list[str]]:
    """Three rows of six ``;``-separated term sets such as ``{vh, p}``."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        line = re.sub(r"^x\d+\s*:\s*", "", line)
        cells = [" ".join(c.split()) for c in line.split(";")]
        if len(cells) != N_CRITERIA:
            raise ValueError(f"expected {N_CRITERIA} cells per row, got {len(cells)}: {line!r}")
        rows.append(cells)
    if len(rows) != 3:
        raise ValueError(f"expected 3 rows, got {len(rows)}")
    return rows


def reference_expected() -> tuple[list[list[str]], list[list[str]]]:
    """Expected (term sets, envelopes) for the reference matrix."""
    return (
        parse_set_table(_data_text("reference_hflts.txt")),
        parse_set_table(_data_text("reference_envelopes.txt")),
    )


@dataclass(frozen=True)
class CellCheck:
    stage: str  # "hflts" or "envelope"
    row: int
    col: int
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def check_reference(matrix: Sequence[Sequence[GrammarExpression]] | None = None) -> list[CellCheck]:
    """Compare transformed sets and envelopes of ``matrix`` (default: the reference) cell by cell."""
    matrix = reference_matrix() if matrix is None else matrix
    want_h, want_env = reference_expected()
    out = []
    for r, row in enumerate(matrix):
        for c, expr in enumerate(row):
            h = transform_expression(expr)
            out.append(CellCheck("hflts", r, c, want_h[r][c], str(h)))
            out.append(CellCheck("envelope", r, c, want_env[r][c], str(envelope(h))))
    return out


def format_table(cells: Sequence[Sequence[object]]) -> str:
    labels = [alt.value for alt in ALTERNATIVES]
    width = max(len(str(c)) for row in cells for c in row)
    lines = []
    for label, row in zip(labels, cells):
        lines.append(f"{label:<6}" + "  ".join(f"{str(c):<{width}}" for c in row))
    return "\n".join(lines)

"""Symmetrizable affine super Cartan data, weights and the invariant form.

Weights live in H* with basis {Lambda_0, alpha_0, ..., alpha_n}; a
:class:`Weight` stores the rational coordinates in that order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .report import VerificationReport

MAX_RANK = 6

SUPER_FAMILIES = ("B1_0", "A2_0", "C2", "A4_0")
PARTNER_FAMILIES = ("A2", "B1", "C1", "D2", "A1")


@dataclass(frozen=True)
class AlgebraData:
    """Cartan matrix, odd nodes, marks and form normalization."""

    name: str
    matrix: tuple[tuple[int, ...], ...]
    theta: frozenset[int]
    marks: tuple[int, ...]
    d: tuple[Fraction, ...]
    family: str = "custom"
    rank: int | None = None

    @property
    def n(self) -> int:
        return len(self.matrix) - 1

    @property
    def nodes(self) -> range:
        return range(len(self.matrix))

    @property
    def eps(self) -> tuple[int, ...]:
        return tuple(2 if 2 * di == 4 else 1 for di in self.d)

    @property
    def is_super(self) -> bool:
        return bool(self.theta)

    def parity(self, i: int) -> int:
        return 1 if i in self.theta else 0

    @cached_property
    def root_pairing(self) -> tuple[tuple[Fraction, ...], ...]:
        """(alpha_i, alpha_j) = d_i a_ij."""
        return tuple(
            tuple(self.d[i] * self.matrix[i][j] for j in self.nodes) for i in self.nodes
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "matrix": [list(r) for r in self.matrix],
            "theta": sorted(self.theta),
            "marks": list(self.marks),
            "d": [str(x) for x in self.d],
        }

    def fingerprint(self) -> str:
        return json.dumps(
            {k: v for k, v in self.to_json().items() if k != "name"}, sort_keys=True, separators=(",", ":")
        )


@dataclass(frozen=True)
class Weight:
    """c_L * Lambda_0 + sum_i c_i * alpha_i, stored as (c_L, c_0, ..., c_n)."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @classmethod
    def zero(cls, size: int) -> "Weight":
        return cls((0,) * (size + 1))

    @classmethod
    def lambda0(cls, size: int) -> "Weight":
        return cls((1,) + (0,) * size)

    @classmethod
    def simple_root(cls, size: int, i: int) -> "Weight":
        c = [0] * (size + 1)
        c[i + 1] = 1
        return cls(tuple(c))

    @classmethod
    def from_roots(cls, counts: Sequence, lam0: Fraction = Fraction(0)) -> "Weight":
        return cls((lam0,) + tuple(counts))

    def __add__(self, other: "Weight") -> "Weight":
        _check_size(self, other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        _check_size(self, other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, k) -> "Weight":
        return Weight(tuple(a * Fraction(k) for a in self.coords))

    __rmul__ = __mul__

    @property
    def lambda0_coeff(self) -> Fraction:
        return self.coords[0]

    @property
    def root_coords(self) -> tuple[Fraction, ...]:
        return self.coords[1:]


def _check_size(a: Weight, b: Weight) -> None:
    if len(a.coords) != len(b.coords):
        raise ValueError(f"weight size mismatch: {len(a.coords)} != {len(b.coords)}")


# --- catalog -----------------------------------------------------------------


def _chain(size: int) -> list[list[int]]:
    a = [[0] * size for _ in range(size)]
    for i in range(size):
        a[i][i] = 2
    return a


def _b1_0(n: int):
    # alpha_0 = delta - 2 eps_1 (length 4), eps_i - eps_{i+1} (length 2), eps_n odd (length 1)
    a = _chain(n + 1)
    d = [Fraction(2)] + [Fraction(1)] * (n - 1) + [Fraction(1, 2)]
    for i in range(n):
        a[i][i + 1] = -1
        a[i + 1][i] = -1
    a[1][0] = -2
    a[n][n - 1] = -2
    if n == 1:
        a[1][0] = -4
    marks = [1] + [2] * n
    return a, {n}, marks, d


def _a2_0(n: int):
    # shares the Cartan matrix of B_n^(1) (C_2^(1) when n = 2) with a short odd end node
    a = _chain(n + 1)
    if n == 2:
        a[0][1], a[1][0] = -1, -2
        a[2][1], a[1][2] = -1, -2
        return a, {1}, [1, 2, 1], [Fraction(1), Fraction(1, 2), Fraction(1)]
    a[0][2] = a[2][0] = -1
    a[1][2] = a[2][1] = -1
    for i in range(2, n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    a[n - 1][n] = -1
    a[n][n - 1] = -2
    marks = [1, 1] + [2] * (n - 1)
    d = [Fraction(1)] * n + [Fraction(1, 2)]
    return a, {n}, marks, d


def _c2(n: int):
    # D_{n+1}^(2) shape with both short ends odd
    a = _chain(n + 1)
    if n == 1:
        a[0][1] = a[1][0] = -2
        return a, {0, 1}, [1, 1], [Fraction(1, 2), Fraction(1, 2)]
    for i in range(n):
        a[i][i + 1] = a[i + 1][i] = -1
    a[0][1] = -2
    a[n][n - 1] = -2
    d = [Fraction(1, 2)] + [Fraction(1)] * (n - 1) + [Fraction(1, 2)]
    return a, {0, n}, [1] * (n + 1), d


def _a4_0(n: int):
    # A_{2n}^(2) shape with the affine node being the short odd end
    a = _chain(n + 1)
    for i in range(n):
        a[i][i + 1] = a[i + 1][i] = -1
    a[0][1] = -2
    a[n - 1][n] = -2
    if n == 1:
        a[0][1], a[1][0] = -4, -1
    d = [Fraction(1, 2)] + [Fraction(1)] * (n - 1) + [Fraction(2)]
    marks = [2] * n + [1]
    return a, {0}, marks, d


_SUPER_BUILDERS = {
    # family: (builder, min n, label formatter, partner family formatter)
    "B1_0": (_b1_0, 1, lambda n: f"B1_0_{n}", lambda n: f"A2_{2 * n}"),
    "A2_0": (_a2_0, 2, lambda n: f"A2_0_{2 * n - 1}", lambda n: "C1_2" if n == 2 else f"B1_{n}"),
    "C2": (_c2, 1, lambda n: f"C2_{n + 1}", lambda n: "A1_1" if n == 1 else f"D2_{n + 1}"),
    "A4_0": (_a4_0, 1, lambda n: f"A4_0_{2 * n}", None),
}

# partner family -> (super family, function from partner index to super n)
_PARTNER_SOURCE = {
    "A2": ("B1_0", lambda k: k // 2 if k % 2 == 0 else None),
    "B1": ("A2_0", lambda k: k if k >= 3 else None),
    "C1": ("A2_0", lambda k: 2 if k == 2 else None),
    "D2": ("C2", lambda k: k - 1 if k >= 3 else None),
    "A1": ("C2", lambda k: 1 if k == 1 else None),
}


def _build_super(family: str, n: int) -> AlgebraData:
    builder, nmin, label, _ = _SUPER_BUILDERS[family]
    if not nmin <= n <= MAX_RANK:
        raise ValueError(f"rank n={n} out of supported range {nmin}..{MAX_RANK} for {family}")
    a, theta, marks, d = builder(n)
    return AlgebraData(
        name=label(n),
        matrix=tuple(tuple(r) for r in a),
        theta=frozenset(theta),
        marks=tuple(marks),
        d=tuple(d),
        family=family,
        rank=n,
    )


def partner_of(data: AlgebraData) -> AlgebraData:
    """The non-graded algebra with the same A, marks and d."""
    if data.family not in _SUPER_BUILDERS:
        raise ValueError(f"{data.name} is not a catalog super family")
    fmt = _SUPER_BUILDERS[data.family][3]
    if fmt is None:
        raise ValueError(f"{data.name}: exceptional family, no partner")
    pname = fmt(data.rank)
    return AlgebraData(
        name=pname,
        matrix=data.matrix,
        theta=frozenset(),
        marks=data.marks,
        d=data.d,
        family=pname.rsplit("_", 1)[0],
        rank=int(pname.rsplit("_", 1)[1]),
    )


_NAME = re.compile(r"^(B1_0|A2_0|A4_0|C2|A2|B1|C1|D2|A1)_(\d+)$")


def catalog(name: str, n: int | None = None) -> AlgebraData:
    """Look up a catalog algebra.

    ``name`` is either a full identifier such as ``"B1_0_1"`` or ``"A2_2"``,
    or a super family key (``"B1_0"``, ``"A2_0"``, ``"C2"``, ``"A4_0"``)
    combined with the rank parameter ``n``.  The short aliases ``B``,
    ``A2odd``, ``C`` and ``A4`` are accepted for the super families.
    """
    aliases = {"B": "B1_0", "A2odd": "A2_0", "C": "C2", "A4": "A4_0"}
    if n is not None:
        family = aliases.get(name, name)
        if family not in _SUPER_BUILDERS:
            raise ValueError(f"unknown super family {name!r}")
        return _build_super(family, n)
    m = _NAME.match(name.strip())
    if not m:
        raise ValueError(f"unknown catalog algebra {name!r}")
    family, idx = m.group(1), int(m.group(2))
    if family == "B1_0":
        return _build_super("B1_0", idx)
    if family == "A2_0":
        if idx % 2 == 0:
            raise ValueError(f"A2_0_{idx}: index must be odd (2n-1)")
        return _build_super("A2_0", (idx + 1) // 2)
    if family == "C2" and idx >= 2:
        return _build_super("C2", idx - 1)
    if family == "A4_0":
        if idx % 2:
            raise ValueError(f"A4_0_{idx}: index must be even (2n)")
        return _build_super("A4_0", idx // 2)
    source, to_n = _PARTNER_SOURCE[family]
    sn = to_n(idx)
    if sn is None:
        raise ValueError(f"rank out of supported range for partner family {family}_{idx}")
    return partner_of(_build_super(source, sn))


def catalog_names() -> list[str]:
    """Every catalog identifier, super algebras first."""
    out = []
    for family, (_, nmin, label, _) in _SUPER_BUILDERS.items():
        out.extend(label(n) for n in range(nmin, MAX_RANK + 1))
    for family, (_, nmin, _, pfmt) in _SUPER_BUILDERS.items():
        if pfmt is None:
            continue
        out.extend(pfmt(n) for n in range(nmin, MAX_RANK + 1))
    return out


def catalog_families() -> list[dict]:
    rows = []
    for family, (_, nmin, label, pfmt) in _SUPER_BUILDERS.items():
        rows.append(
            {
                "family": family,
                "kind": "super",
                "ranks": [nmin, MAX_RANK],
                "examples": [label(nmin)],
                "partner": pfmt(nmin) if pfmt else None,
            }
        )
    partners = [("A2", "A2_2n", "B1_0"), ("B1", "B1_n (n>=3)", "A2_0"), ("C1", "C1_2", "A2_0"),
                ("D2", "D2_{n+1} (n>=2)", "C2"), ("A1", "A1_1", "C2")]
    for fam, pattern, source in partners:
        rows.append({"family": fam, "kind": "partner", "pattern": pattern, "partner_of": source})
    return rows


# --- custom specs --------------------------------------------------------------


class SpecError(ValueError):
    """Malformed algebra spec; ``field`` names the offending key."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        super().__init__(message)
        self.field = field
        self.line = line


def null_marks(matrix: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Positive primitive integer vector in the kernel of ``matrix``, if one exists."""
    size = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    pivots = []
    r = 0
    for c in range(size):
        p = next((k for k in range(r, size) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(size):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(size) if c not in pivots]
    if len(free) != 1:
        return None
    vec = [Fraction(0)] * size
    vec[free[0]] = Fraction(1)
    for row, c in enumerate(pivots):
        vec[c] = -m[row][free[0]]
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if all(x < 0 for x in ints):
        ints = [-x for x in ints]
    if not all(x > 0 for x in ints):
        return None
    return tuple(ints)


def from_json(obj: dict | str, name: str = "custom") -> AlgebraData:
    """Build AlgebraData from the JSON spec schema (text or parsed)."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(obj, dict):
        raise SpecError("spec must be a JSON object")
    if "matrix" not in obj:
        raise SpecError("missing required field", field="matrix")
    matrix = obj["matrix"]
    if not isinstance(matrix, list) or not matrix or not all(isinstance(r, list) for r in matrix):
        raise SpecError("matrix must be a non-empty list of rows", field="matrix")
    size = len(matrix)
    for k, row in enumerate(matrix):
        if len(row) != size or not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
            raise SpecError(f"row {k} must hold {size} integers", field="matrix")
    theta = obj.get("theta", [])
    if not isinstance(theta, list) or not all(isinstance(x, int) and 0 <= x < size for x in theta):
        raise SpecError("theta must list node indices", field="theta")
    if "d" not in obj:
        raise SpecError("missing required field", field="d")
    d_raw = obj["d"]
    if not isinstance(d_raw, list) or len(d_raw) != size:
        raise SpecError(f"d must hold {size} rationals", field="d")
    try:
        d = tuple(Fraction(str(x)) for x in d_raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"bad rational in d: {exc}", field="d") from exc
    marks = obj.get("marks")
    if marks is None:
        marks = null_marks(matrix) or (0,) * size
    elif not isinstance(marks, list) or len(marks) != size or not all(isinstance(x, int) for x in marks):
        raise SpecError(f"marks must hold {size} integers", field="marks")
    return AlgebraData(
        name=str(obj.get("name", name)),
        matrix=tuple(tuple(r) for r in matrix),
        theta=frozenset(theta),
        marks=tuple(marks),
        d=d,
    )


# --- validation and geometry ------------------------------------------------------


def validate(data: AlgebraData) -> VerificationReport:
    """Check every structural condition on the Cartan data."""
    a, size = data.matrix, len(data.matrix)
    failures: list[dict] = []

    def fail(cond, **where):
        failures.append({"condition": cond, **where})

    if len(data.d) != size or len(data.marks) != size:
        fail("dimensions", d=len(data.d), marks=len(data.marks), size=size)
        return VerificationReport.from_failures("validate", data.name, failures)
    for i in range(size):
        if a[i][i] != 2:
            fail("a_ii = 2", i=i, value=a[i][i])
        for j in range(size):
            if i == j:
                continue
            if a[i][j] > 0:
                fail("a_ij <= 0", i=i, j=j, value=a[i][j])
            if (a[i][j] == 0) != (a[j][i] == 0):
                fail("a_ij = 0 iff a_ji = 0", i=i, j=j)
    for mu in sorted(data.theta):
        for j in range(size):
            if a[mu][j] % 2:
                fail("a_ij even for i in theta", i=mu, j=j, value=a[mu][j])
    for i in range(size):
        if data.d[i] not in (Fraction(1, 2), Fraction(1), Fraction(2)):
            fail("d_i in {1/2, 1, 2}", i=i, value=str(data.d[i]))
        for j in range(i + 1, size):
            if data.d[i] * a[i][j] != data.d[j] * a[j][i]:
                fail("symmetrizable d_i a_ij = d_j a_ji", i=i, j=j)
    if any(m <= 0 for m in data.marks):
        fail("marks positive", marks=list(data.marks))
    for i in range(size):
        s = sum(a[i][j] * data.marks[j] for j in range(size))
        if s != 0:
            fail("sum_j a_ij a_j = 0", i=i, value=s)
    for mu in sorted(data.theta):
        if data.d[mu] != Fraction(1, 2):
            fail("(alpha_mu, alpha_mu) = 1 for mu in theta", i=mu, value=str(2 * data.d[mu]))
    return VerificationReport.from_failures("validate", data.name, failures)


def pairing(data: AlgebraData, lam: Weight, mu: Weight) -> Fraction:
    """The invariant form: (alpha_i, alpha_j) = d_i a_ij, (L0, alpha_i) = delta_i0 d_i, (L0, L0) = 0."""
    size = len(data.matrix)
    if len(lam.coords) != size + 1 or len(mu.coords) != size + 1:
        raise ValueError(f"weights must have {size + 1} coordinates")
    lc, lr = lam.coords[0], lam.coords[1:]
    mc, mr = mu.coords[0], mu.coords[1:]
    rp = data.root_pairing
    total = Fraction(0)
    for i, x in enumerate(lr):
        if x:
            row = rp[i]
            total += x * sum(row[j] * y for j, y in enumerate(mr) if y)
    total += lc * mr[0] * data.d[0] + mc * lr[0] * data.d[0]
    return total


def pairing_with_root(data: AlgebraData, lam: Weight, i: int) -> Fraction:
    return pairing(data, lam, Weight.simple_root(len(data.matrix), i))


def dynkin_label(data: AlgebraData, lam: Weight, i: int) -> Fraction:
    """2 (Lambda, alpha_i) / (alpha_i, alpha_i)."""
    return pairing_with_root(data, lam, i) / data.d[i]


def dynkin_labels(data: AlgebraData, lam: Weight) -> tuple[Fraction, ...]:
    return tuple(dynkin_label(data, lam, i) for i in data.nodes)


def integrable_dominant(data: AlgebraData, lam: Weight) -> bool:
    for i in data.nodes:
        lab = dynkin_label(data, lam, i)
        if lab.denominator != 1 or lab < 0:
            return False
        if i in data.theta and lab % 2:
            return False
    return True


def level(data: AlgebraData, labels: Sequence) -> Fraction:
    """Lambda_0 coefficient forced by the labels: sum a_i d_i l_i / (a_0 d_0)."""
    num = sum(Fraction(m) * di * Fraction(l) for m, di, l in zip(data.marks, data.d, labels))
    return num / (data.marks[0] * data.d[0])


def weight_from_labels(data: AlgebraData, labels: Sequence, lambda0=None) -> Weight:
    """Weight with the given Dynkin labels, alpha_0 coordinate fixed to zero.

    The Lambda_0 coefficient is forced by the labels; when ``lambda0`` is
    supplied it must agree.
    """
    size = len(data.matrix)
    labels = [Fraction(x) for x in labels]
    if len(labels) != size:
        raise ValueError(f"expected {size} labels, got {len(labels)}")
    c_lam = level(data, labels)
    if lambda0 is not None and Fraction(lambda0) != c_lam:
        raise ValueError(f"lambda0 coefficient {lambda0} inconsistent with labels (forced value {c_lam})")
    # solve sum_j a_ij c_j = l_i - c_lam delta_i0 with c_0 = 0, using rows 1..n on columns 1..n
    rhs = [labels[i] - (c_lam if i == 0 else 0) for i in range(size)]
    m = [[Fraction(data.matrix[i][j]) for j in range(1, size)] + [rhs[i]] for i in range(1, size)]
    sol = _solve(m) if size > 1 else []
    coords = (c_lam, Fraction(0)) + tuple(sol)
    lam = Weight(coords)
    if dynkin_labels(data, lam) != tuple(labels):
        raise ArithmeticError("label conversion failed")
    return lam


def _solve(aug: list[list[Fraction]]) -> list[Fraction]:
    size = len(aug)
    for c in range(size):
        p = next(k for k in range(c, size) if aug[k][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for k in range(size):
            if k != c and aug[k][c] != 0:
                f = aug[k][c]
                aug[k] = [x - f * y for x, y in zip(aug[k], aug[c])]
    return [aug[k][size] for k in range(size)]


def delta(data: AlgebraData) -> Weight:
    return Weight.from_roots(data.marks)


def parse_labels(text: str | Iterable) -> tuple[Fraction, ...]:
    if isinstance(text, str):
        parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
        return tuple(Fraction(p) for p in parts)
    return tuple(Fraction(x) for x in text)

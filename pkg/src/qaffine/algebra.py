"""Words in the generators, the graded adjoint action and symbolic identities.

Generators are ``Gen(kind, index)`` with kind one of ``d, k, kinv, e, f, S, C``.
An :class:`AlgElement` is a finite Scalar combination of words (tuples of
generators), multiplied by concatenation.  No normal form for the whole
algebra is attempted; :func:`k_normal_form` only moves Cartan-type symbols
to the right of e/f symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .cartan import AlgebraData
from .report import VerificationReport
from .scalars import GENERIC, ONE, ZERO, QParam, Scalar

KINDS = ("d", "k", "kinv", "e", "f", "S", "C")


class Gen(NamedTuple):
    kind: str
    index: int | None = None

    def __str__(self):
        if self.kind == "d":
            return "d"
        if self.kind == "kinv":
            return f"k{self.index}^-1"
        return f"{self.kind}{self.index}"


Word = tuple  # tuple[Gen, ...]


def gen(kind: str, i: int | None = None) -> Gen:
    if kind not in KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    if kind != "d" and i is None:
        raise ValueError(f"generator {kind} needs an index")
    return Gen(kind, i)


def symbol_parity(data: AlgebraData, g: Gen) -> int:
    if g.kind in ("e", "f") and g.index in data.theta:
        return 1
    return 0


def word_parity(data: AlgebraData, word: Word) -> int:
    return sum(symbol_parity(data, g) for g in word) % 2


def word_weight(data: AlgebraData, word: Word) -> tuple[int, ...]:
    """Root coordinates of the weight: +alpha_i per e_i, -alpha_i per f_i."""
    w = [0] * len(data.matrix)
    for g in word:
        if g.kind == "e":
            w[g.index] += 1
        elif g.kind == "f":
            w[g.index] -= 1
    return tuple(w)


def root_pair(data: AlgebraData, i: int, weight: Iterable[int]) -> Fraction:
    """(alpha_i, sum_j w_j alpha_j)."""
    row = data.root_pairing[i]
    return sum((row[j] * c for j, c in enumerate(weight) if c), Fraction(0))


class AlgElement:
    """Finite map word -> Scalar with no zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[Word, Scalar] = {}
        if terms:
            for w, c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    self.terms[tuple(w)] = c

    @classmethod
    def one(cls) -> "AlgElement":
        return cls({(): ONE})

    @classmethod
    def of(cls, *symbols: Gen, coeff=ONE) -> "AlgElement":
        return cls({tuple(symbols): coeff})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "AlgElement") -> "AlgElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        res = AlgElement()
        res.terms = out
        return res

    def __neg__(self) -> "AlgElement":
        res = AlgElement()
        res.terms = {w: -c for w, c in self.terms.items()}
        return res

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return self + (-other)

    def scale(self, s) -> "AlgElement":
        s = Scalar.coerce(s)
        res = AlgElement()
        if s:
            res.terms = {w: c * s for w, c in self.terms.items()}
        return res

    def __mul__(self, other):
        if not isinstance(other, AlgElement):
            return self.scale(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = out.get(w, ZERO) + c1 * c2
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        res = AlgElement()
        res.terms = out
        return res

    def __rmul__(self, other):
        return self.scale(other)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), [str(g) for g in w])):
            body = ".".join(str(g) for g in w) or "1"
            parts.append(f"({self.terms[w]})*{body}")
        return " + ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"AlgElement({self.render()})"


def E(i: int) -> AlgElement:
    return AlgElement.of(Gen("e", i))


def F(i: int) -> AlgElement:
    return AlgElement.of(Gen("f", i))


def K(i: int) -> AlgElement:
    return AlgElement.of(Gen("k", i))


def Kinv(i: int) -> AlgElement:
    return AlgElement.of(Gen("kinv", i))


def D() -> AlgElement:
    return AlgElement.of(Gen("d"))


def homogeneous_degree(data: AlgebraData, x: AlgElement) -> tuple[tuple[int, ...], int]:
    """(weight, parity) of a homogeneous element; ValueError otherwise."""
    if not x.terms:
        raise ValueError("zero element has no definite degree")
    degs = {(word_weight(data, w), word_parity(data, w)) for w in x.terms}
    if len(degs) != 1:
        raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
    return degs.pop()


def ad_e(data: AlgebraData, i: int, x: AlgElement, param: QParam = GENERIC) -> AlgElement:
    """e_i x - (-1)^([e_i][x]) q^((alpha_i, w(x))) x e_i."""
    if x.is_zero():
        return AlgElement()
    weight, par = homogeneous_degree(data, x)
    sign = -1 if (data.parity(i) and par) else 1
    coeff = param.qpow(root_pair(data, i, weight)) * sign
    return E(i) * x - (x * E(i)).scale(coeff)


def ad_f(data: AlgebraData, i: int, x: AlgElement, param: QParam = GENERIC) -> AlgElement:
    """f_i x - (-1)^([f_i][x]) q^(-(alpha_i, w(x))) x f_i."""
    if x.is_zero():
        return AlgElement()
    weight, par = homogeneous_degree(data, x)
    sign = -1 if (data.parity(i) and par) else 1
    coeff = param.qpow(-root_pair(data, i, weight)) * sign
    return F(i) * x - (x * F(i)).scale(coeff)


def serre_element(data: AlgebraData, i: int, j: int, side: str = "e", param: QParam = GENERIC) -> AlgElement:
    """(Ad e_i)^(1 - a_ij)(e_j), or the f-side analogue, fully expanded."""
    if i == j:
        raise ValueError("Serre elements need i != j")
    if side not in ("e", "f"):
        raise ValueError("side must be 'e' or 'f'")
    step = ad_e if side == "e" else ad_f
    x = E(j) if side == "e" else F(j)
    for _ in range(1 - data.matrix[i][j]):
        x = step(data, i, x, param)
    return x


def d_commutator(data: AlgebraData, x: AlgElement) -> AlgElement:
    """[d, x] computed from [d, e_i] = delta_i0 e_i and [d, f_i] = -delta_i0 f_i."""
    out = {}
    for w, c in x:
        if any(g.kind == "d" for g in w):
            raise ValueError("d inside words is not supported")
        deg = word_weight(data, w)[0]
        if deg:
            out[w] = c * deg
    return AlgElement(out)


def expand_sc(data: AlgebraData, x: AlgElement, param: QParam = GENERIC) -> AlgElement:
    """Replace S_i and C_i by their expressions in k_i and k_i^-1."""
    result = AlgElement()
    for w, c in x:
        acc = AlgElement({(): c})
        for g in w:
            if g.kind == "S":
                e = data.eps[g.index]
                denom = param.qpow(e) - param.qpow(-e)
                acc = acc * (K(g.index) - Kinv(g.index)).scale(denom.inverse())
            elif g.kind == "C":
                acc = acc * (K(g.index) + Kinv(g.index)).scale(Scalar.const(Fraction(1, 2)))
            else:
                acc = acc * AlgElement.of(g)
        result = result + acc
    return result


def k_normal_form(data: AlgebraData, x: AlgElement, param: QParam = GENERIC) -> AlgElement:
    """Move every k/k^-1 (after expanding S, C) to the right of the e/f block."""
    x = expand_sc(data, x, param)
    size = len(data.matrix)
    out: dict = {}
    for w, c in x:
        kexp = [0] * size
        ef = []
        exponent = Fraction(0)
        for g in w:
            if g.kind == "k":
                kexp[g.index] += 1
            elif g.kind == "kinv":
                kexp[g.index] -= 1
            elif g.kind in ("e", "f"):
                s = sum((kexp[i] * data.root_pairing[i][g.index] for i in range(size) if kexp[i]), Fraction(0))
                exponent += s if g.kind == "e" else -s
                ef.append(g)
            else:
                raise ValueError(f"unsupported symbol {g} in k_normal_form")
        kblock = []
        for i in range(size):
            if kexp[i] > 0:
                kblock.extend([Gen("k", i)] * kexp[i])
            elif kexp[i] < 0:
                kblock.extend([Gen("kinv", i)] * (-kexp[i]))
        word = tuple(ef) + tuple(kblock)
        s = out.get(word, ZERO) + c * param.qpow(exponent)
        if s:
            out[word] = s
        else:
            out.pop(word, None)
    res = AlgElement()
    res.terms = out
    return res


# --- relation catalogues ------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """A named element that must act as zero; ``i``/``j`` are node indices."""

    name: str
    i: int | None
    j: int | None
    element: AlgElement
    family: str


def defining_relations(data: AlgebraData, param: QParam = GENERIC, families: Iterable[str] | None = None) -> list[Relation]:
    """Every relation of the Drinfeld-Jimbo presentation, as elements equal to zero.

    Families: ``cartan`` (k k^-1 = 1, k_i k_j = k_j k_i), ``d``, ``kcomm``,
    ``ef`` (the graded commutator [e_i, f_j}), ``serre_e``, ``serre_f``.
    """
    fams = set(families) if families is not None else {"cartan", "d", "kcomm", "ef", "serre_e", "serre_f"}
    nodes = list(data.nodes)
    rels: list[Relation] = []
    one = AlgElement.one()
    if "cartan" in fams:
        for i in nodes:
            rels.append(Relation("k_i k_i^-1 = 1", i, None, K(i) * Kinv(i) - one, "cartan"))
            rels.append(Relation("k_i^-1 k_i = 1", i, None, Kinv(i) * K(i) - one, "cartan"))
            for j in nodes:
                if i < j:
                    rels.append(Relation("k_i k_j = k_j k_i", i, j, K(i) * K(j) - K(j) * K(i), "cartan"))
    if "d" in fams:
        for i in nodes:
            delta = 1 if i == 0 else 0
            rels.append(Relation("[d, k_i] = 0", i, None, D() * K(i) - K(i) * D(), "d"))
            rels.append(Relation("[d, e_i] = delta_i0 e_i", i, None, D() * E(i) - E(i) * D() - E(i).scale(delta), "d"))
            rels.append(Relation("[d, f_i] = -delta_i0 f_i", i, None, D() * F(i) - F(i) * D() + F(i).scale(delta), "d"))
    if "kcomm" in fams:
        for i in nodes:
            for j in nodes:
                m = data.root_pairing[i][j]
                rels.append(Relation("k_i e_j = q^(a_i,a_j) e_j k_i", i, j, K(i) * E(j) - (E(j) * K(i)).scale(param.qpow(m)), "kcomm"))
                rels.append(Relation("k_i f_j = q^-(a_i,a_j) f_j k_i", i, j, K(i) * F(j) - (F(j) * K(i)).scale(param.qpow(-m)), "kcomm"))
    if "ef" in fams:
        for i in nodes:
            for j in nodes:
                sign = -1 if (data.parity(i) and data.parity(j)) else 1
                el = E(i) * F(j) - (F(j) * E(i)).scale(sign)
                if i == j:
                    e = data.eps[i]
                    denom = param.qpow(e) - param.qpow(-e)
                    el = el - (K(i) - Kinv(i)).scale(denom.inverse())
                rels.append(Relation("[e_i, f_j} = delta_ij S_i", i, j, el, "ef"))
    for side in ("e", "f"):
        if f"serre_{side}" in fams:
            for i in nodes:
                for j in nodes:
                    if i != j:
                        rels.append(Relation(f"(Ad {side}_i)^(1-a_ij) {side}_j = 0", i, j,
                                             serre_element(data, i, j, side, param), f"serre_{side}"))
    return rels


def sc_relations(data: AlgebraData, param: QParam = GENERIC) -> list[tuple[str, int, int | None, AlgElement, AlgElement]]:
    """The relations involving k re-expressed through S_i and C_i, as (name, i, j, lhs, rhs)."""
    def S(i):
        return AlgElement.of(Gen("S", i))

    def C(i):
        return AlgElement.of(Gen("C", i))

    out = []
    nodes = list(data.nodes)
    for i in nodes:
        sh_i = param.sinh(data.eps[i])
        out.append(("[d, C_i] = 0", i, None, d_commutator(data, C(i)), AlgElement()))
        out.append(("[d, S_i] = 0", i, None, d_commutator(data, S(i)), AlgElement()))
        out.append(("C_i^2 - S_i^2 sinh^2 t_i = 1", i, None, C(i) * C(i) - (S(i) * S(i)).scale(sh_i * sh_i), AlgElement.one()))
        e = data.eps[i]
        denom = param.qpow(e) - param.qpow(-e)
        out.append(("[e_i, f_i} = S_i", i, i, (K(i) - Kinv(i)).scale(denom.inverse()), S(i)))
        for j in nodes:
            m = data.root_pairing[i][j]
            ch, sh = param.cosh(m), param.sinh(m)
            out.append(("C_i S_j = S_j C_i", i, j, C(i) * S(j), S(j) * C(i)))
            out.append(("C_i e_j - e_j C_i cosh = e_j S_i sinh t_i sinh", i, j,
                        C(i) * E(j) - (E(j) * C(i)).scale(ch), (E(j) * S(i)).scale(sh_i * sh)))
            out.append(("S_i e_j - e_j S_i cosh = e_j C_i sinh / sinh t_i", i, j,
                        S(i) * E(j) - (E(j) * S(i)).scale(ch), (E(j) * C(i)).scale(sh / sh_i)))
            out.append(("C_i f_j - f_j C_i cosh = -f_j S_i sinh t_i sinh", i, j,
                        C(i) * F(j) - (F(j) * C(i)).scale(ch), -(F(j) * S(i)).scale(sh_i * sh)))
            out.append(("S_i f_j - f_j S_i cosh = -f_j C_i sinh / sinh t_i", i, j,
                        S(i) * F(j) - (F(j) * S(i)).scale(ch), -(F(j) * C(i)).scale(sh / sh_i)))
    return out


def verify_sc_presentation(data: AlgebraData, param: QParam = GENERIC, relations=None) -> VerificationReport:
    """Check every S/C relation as an exact identity after k-normal ordering."""
    rels = sc_relations(data, param) if relations is None else relations
    report = VerificationReport(check="presentation", algebra=data.name)
    for name, i, j, lhs, rhs in rels:
        residual = k_normal_form(data, lhs - rhs, param)
        if residual:
            report.add_failure({"relation": name, "i": i, "j": j, "residual": residual.render()})
    report.details["relations_checked"] = len(rels)
    return report

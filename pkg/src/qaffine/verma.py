"""Induced highest-weight modules built from the explicit action formulas.

The module is modelled on f-words: the word ``(i_1, ..., i_p)`` stands for
f_{i_1} ... f_{i_p} v+, and a ModuleVector is a dict word -> Scalar.  The
irreducible quotient is never given a basis; a vector vanishes in it
exactly when its contravariant pairing with every word of the same weight
is zero (``in_radical``).

Contravariance convention: <f_i u, w> = <u, e_i w>, <v+, v+> = 1.
"""

from __future__ import annotations

import itertools
import random
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Protocol, Sequence

from .algebra import AlgElement, Gen, Relation, defining_relations
from .cartan import AlgebraData, Weight, integrable_dominant, pairing_with_root, weight_from_labels
from .linalg import rank_at_random_points, scalar_rank
from .report import VerificationReport
from .scalars import CLASSICAL, GENERIC, ONE, ZERO, QParam, Scalar

FWord = tuple  # tuple[int, ...]
ModuleVector = dict  # FWord -> Scalar

DEFAULT_DEPTH = 5


class ResourceLimit(RuntimeError):
    """A weight space exceeded the configured size bound."""

    def __init__(self, message: str, partial: dict | None = None):
        super().__init__(message)
        self.partial = partial or {}


def add_into(acc: dict, key, c: Scalar) -> None:
    s = acc.get(key)
    s = c if s is None else s + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def scale_vec(vec: dict, s: Scalar) -> dict:
    if not s:
        return {}
    return {k: c * s for k, c in vec.items()}


def vec_add(a: dict, b: dict, s: Scalar = ONE) -> dict:
    out = dict(a)
    for k, c in b.items():
        add_into(out, k, c * s)
    return out


def distinct_permutations(counts: Sequence[int]) -> list[FWord]:
    """All words with the given multiplicity of each index, lexicographic."""
    total = sum(counts)
    out: list[FWord] = []
    rem = list(counts)
    buf: list[int] = []

    def rec():
        if len(buf) == total:
            out.append(tuple(buf))
            return
        for i, c in enumerate(rem):
            if c:
                rem[i] -= 1
                buf.append(i)
                rec()
                buf.pop()
                rem[i] += 1

    rec()
    return out


def compositions(size: int, height: int) -> list[tuple[int, ...]]:
    """Count vectors of the given length summing to ``height``, lexicographically descending."""
    out = []
    for combo in itertools.combinations_with_replacement(range(size), height):
        c = [0] * size
        for i in combo:
            c[i] += 1
        out.append(tuple(c))
    return sorted(set(out), reverse=True)


def counts_key(counts: Sequence[int]) -> tuple:
    """Graded lexicographic order on alpha-coordinates."""
    return (sum(counts), tuple(counts))


@dataclass
class GramData:
    counts: tuple[int, ...]
    basis: list[FWord]
    matrix: list[list[Scalar]]
    rank: int
    pivots: list[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.basis)


class RankCache(Protocol):
    def get(self, key: str) -> dict | None: ...

    def put(self, key: str, value: dict) -> None: ...


class HighestWeightModule:
    """The induced module of highest weight Lambda, with its irreducible quotient.

    ``param`` decides how q is realized: generic (q = v^2), classical
    (q = 1) or negated (q = -v^2).
    """

    def __init__(
        self,
        data: AlgebraData,
        labels: Sequence,
        *,
        lambda0=None,
        param: QParam = GENERIC,
        seed: int = 0,
        max_space: int = 5000,
        rank_cache: RankCache | None = None,
    ):
        self.data = data
        self.labels = tuple(Fraction(x) for x in labels)
        self.weight = weight_from_labels(data, self.labels, lambda0)
        self.param = param
        self.size = len(data.matrix)
        self.max_space = max_space
        self.rank_cache = rank_cache
        self._rng = random.Random(seed)
        self._lam_pair = [pairing_with_root(data, self.weight, i) for i in range(self.size)]
        self._rp = data.root_pairing
        self._par = [data.parity(i) for i in range(self.size)]
        self._eps = data.eps
        self._e_cache: dict = {}
        self._pv_cache: dict = {}
        self._reduced: dict = {}
        self._lock = threading.Lock()

    # --- weights ---------------------------------------------------------------
    def __repr__(self):
        labels = ",".join(str(x) for x in self.labels)
        return f"HighestWeightModule({self.data.name}, labels={labels}, q={self.param.name})"

    def word_counts(self, word: FWord) -> tuple[int, ...]:
        c = [0] * self.size
        for i in word:
            c[i] += 1
        return tuple(c)

    def word_parity(self, word: FWord) -> int:
        return sum(self._par[i] for i in word) % 2

    def weight_pairing(self, counts: Sequence[int], i: int) -> Fraction:
        """(Lambda - sum_j c_j alpha_j, alpha_i)."""
        s = self._lam_pair[i]
        for j, c in enumerate(counts):
            if c:
                s -= c * self._rp[j][i]
        return s

    def weight_of(self, counts: Sequence[int]) -> Weight:
        return self.weight - Weight.from_roots(counts)

    def integrable(self) -> bool:
        return integrable_dominant(self.data, self.weight)

    # --- generator actions -----------------------------------------------------
    def act_f(self, i: int, vec: ModuleVector) -> ModuleVector:
        return {(i,) + w: c for w, c in vec.items()}

    def act_k(self, i: int, vec: ModuleVector, power: int = 1) -> ModuleVector:
        out = {}
        for w, c in vec.items():
            a = self.weight_pairing(self.word_counts(w), i)
            out[w] = c * self.param.qpow(power * a)
        return out

    def act_d(self, vec: ModuleVector) -> ModuleVector:
        out = {}
        for w, c in vec.items():
            z = sum(1 for i in w if i == 0)
            if z:
                out[w] = c * (-z)
        return out

    def e_on_word(self, i: int, word: FWord) -> dict:
        key = (i, word)
        hit = self._e_cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        eps = self._eps[i]
        odd_e = self._par[i]
        odd_left = 0
        tail = list(self.word_counts(word))
        for s, idx in enumerate(word):
            tail[idx] -= 1
            if idx == i:
                a = self.weight_pairing(tail, i)
                coeff = self.param.qbracket(a, eps)
                if coeff:
                    if odd_e and odd_left % 2:
                        coeff = -coeff
                    add_into(out, word[:s] + word[s + 1:], coeff)
            odd_left += self._par[idx]
        self._e_cache[key] = out
        return out

    def act_e(self, i: int, vec: ModuleVector) -> ModuleVector:
        out: dict = {}
        for w, c in vec.items():
            for w2, c2 in self.e_on_word(i, w).items():
                add_into(out, w2, c * c2)
        return out

    def act(self, g: Gen, vec: ModuleVector) -> ModuleVector:
        kind = g.kind
        if kind == "e":
            return self.act_e(g.index, vec)
        if kind == "f":
            return self.act_f(g.index, vec)
        if kind == "k":
            return self.act_k(g.index, vec, 1)
        if kind == "kinv":
            return self.act_k(g.index, vec, -1)
        if kind == "d":
            return self.act_d(vec)
        raise ValueError(f"generator {g} has no module action (expand S/C first)")

    def act_word(self, x: AlgElement, vec: ModuleVector) -> ModuleVector:
        return act_element(self, x, vec)

    # --- contravariant form ------------------------------------------------------
    def pairing_vector(self, word: FWord) -> dict:
        """{y: <y, word>} over words y of the same weight (the Gram column)."""
        hit = self._pv_cache.get(word)
        if hit is not None:
            return hit
        if not word:
            out = {(): ONE}
        else:
            out = {}
            for i in sorted(set(word)):
                for w2, c in self.e_on_word(i, word).items():
                    for y2, val in self.pairing_vector(w2).items():
                        add_into(out, (i,) + y2, c * val)
        self._pv_cache[word] = out
        return out

    def vector_pairings(self, vec: ModuleVector) -> dict:
        out: dict = {}
        for w, c in vec.items():
            for y, val in self.pairing_vector(w).items():
                add_into(out, y, c * val)
        return out

    def form(self, u: ModuleVector, w: ModuleVector) -> Scalar:
        """<u, w> extended bilinearly."""
        acc = ZERO
        pw = self.vector_pairings(w)
        for y, c in u.items():
            val = pw.get(y)
            if val is not None:
                acc = acc + c * val
        return acc

    def in_radical(self, vec: ModuleVector) -> bool:
        """True iff ``vec`` vanishes in the irreducible quotient."""
        if not vec:
            return True
        return not self.vector_pairings(vec)

    # --- weight spaces -------------------------------------------------------------
    def weight_basis(self, counts: Sequence[int] | None = None, depth: int | None = None) -> list[FWord]:
        """Every f-word of the given root counts (or of the given depth)."""
        if counts is not None:
            return distinct_permutations(counts)
        if depth is None:
            raise ValueError("give counts or depth")
        words: list[FWord] = []
        for c in sorted(compositions(self.size, depth)):
            words.extend(distinct_permutations(c))
        return sorted(words)

    def words_up_to(self, depth: int) -> list[FWord]:
        out: list[FWord] = []
        for p in range(depth + 1):
            out.extend(itertools.product(range(self.size), repeat=p))
        return out

    def gram(self, counts: Sequence[int]) -> GramData:
        counts = tuple(counts)
        basis = distinct_permutations(counts)
        if len(basis) > self.max_space:
            raise ResourceLimit(f"weight space {counts} has {len(basis)} words")
        return self._gram_on(counts, basis)

    def _gram_on(self, counts, basis: list[FWord]) -> GramData:
        cols = [self.pairing_vector(w) for w in basis]
        matrix = [[col.get(y, ZERO) for col in cols] for y in basis]
        rank, pivots = scalar_rank(matrix, self._rng)
        return GramData(tuple(counts), basis, matrix, rank, pivots)

    def _cache_key(self, counts) -> str:
        return "|".join([
            "gram-v1",
            self.data.fingerprint(),
            ",".join(str(x) for x in self.labels),
            self.param.name,
            ",".join(str(x) for x in counts),
        ])

    def reduced_space(self, counts: Sequence[int]) -> list[FWord]:
        """Words forming a basis of the quotient weight space.

        Candidates are f_i applied to the basis words one level up, which
        span the quotient; the Gram rank then selects independent ones.
        """
        counts = tuple(counts)
        hit = self._reduced.get(counts)
        if hit is not None:
            return hit
        if any(c < 0 for c in counts):
            return []
        if not any(counts):
            self._reduced[counts] = [()]
            return [()]
        key = self._cache_key(counts) if self.rank_cache is not None else None
        if key is not None:
            cached = self.rank_cache.get(key)
            if cached is not None:
                words = [tuple(w) for w in cached["basis"]]
                self._reduced[counts] = words
                return words
        cand = []
        for i in range(self.size):
            if counts[i]:
                up = list(counts)
                up[i] -= 1
                cand.extend((i,) + w for w in self.reduced_space(up))
        cand = sorted(set(cand))
        if not cand:
            words: list[FWord] = []
        else:
            if len(cand) > self.max_space:
                raise ResourceLimit(f"weight space {counts} needs {len(cand)} candidate words")
            g = self._gram_on(counts, cand)
            words = [cand[c] for c in g.pivots]
        with self._lock:
            self._reduced[counts] = words
        if key is not None:
            self.rank_cache.put(key, {"rank": len(words), "basis": [list(w) for w in words]})
        return words

    def multiplicity(self, counts: Sequence[int]) -> int:
        return len(self.reduced_space(counts))

    def character(self, depth: int = DEFAULT_DEPTH) -> dict[tuple[int, ...], int]:
        """Multiplicities of Lambda - sum c_i alpha_i for every height <= depth."""
        out: dict[tuple[int, ...], int] = {}
        for h in range(depth + 1):
            for c in compositions(self.size, h):
                try:
                    out[c] = self.multiplicity(c)
                except ResourceLimit as exc:
                    exc.partial = dict(sorted(out.items(), key=lambda kv: counts_key(kv[0])))
                    raise
        return dict(sorted(out.items(), key=lambda kv: counts_key(kv[0])))

    def full_rank_multiplicity(self, counts: Sequence[int]) -> int:
        """Multiplicity via the Gram matrix on all words (slow reference path)."""
        return self.gram(counts).rank

    # --- integrability probes ----------------------------------------------------
    def nilpotency_index(self, i: int, w: ModuleVector | None = None, m_max: int = 8) -> int | None:
        """Least m <= m_max with f_i^m w = 0 in the quotient, or None."""
        vec = {(): ONE} if w is None else dict(w)
        for m in range(0, m_max + 1):
            if self.in_radical(vec):
                return m
            vec = self.act_f(i, vec)
        return None

    def string_coefficient(self, i: int, m: int) -> Scalar:
        """c with e_i f_i^m v+ = c f_i^(m-1) v+ on the induced module."""
        if m < 1:
            raise ValueError("m must be positive")
        return self.e_on_word(i, (i,) * m).get((i,) * (m - 1), ZERO)

    def gram_is_symmetric(self, counts: Sequence[int]) -> bool:
        g = self.gram(counts)
        return all(g.matrix[a][b] == g.matrix[b][a] for a in range(g.size) for b in range(a))

    def basis_vectors(self, depth: int) -> Iterator[tuple[FWord, ModuleVector]]:
        for w in self.words_up_to(depth):
            yield w, {w: ONE}


def odd_string_closed_form(lam: Fraction, k: int, param: QParam = GENERIC) -> Scalar:
    """Closed form of e f^(k+1) v+ / f^k v+ at an odd node with (alpha, alpha) = 1.

    ``lam`` is (Lambda, alpha).  Equal to

        (-1)^k (q^((k+1)/2) + (-1)^k q^(-(k+1)/2)) (q^(lam - k/2) - (-1)^k q^(k/2 - lam))
        / ((q - q^-1)(q^(1/2) + q^(-1/2))).
    """
    q = param.qpow
    s = -1 if k % 2 else 1
    half = Fraction(k + 1, 2)
    num = (q(half) + q(-half) * s) * (q(lam - Fraction(k, 2)) - q(Fraction(k, 2) - lam) * s)
    den = (q(1) - q(-1)) * (q(Fraction(1, 2)) + q(Fraction(-1, 2)))
    return num / den * s


def act_element(module, x: AlgElement, vec: dict) -> dict:
    """Apply an algebra element to a vector, composing actions right to left."""
    out: dict = {}
    for word, c in x:
        v = vec
        for g in reversed(word):
            v = module.act(g, v)
            if not v:
                break
        if v:
            for k, val in v.items():
                add_into(out, k, val * c)
    return out


def character_table(module: HighestWeightModule, depth: int) -> dict:
    return module.character(depth)


def character_json(module: HighestWeightModule, depth: int, char: dict | None = None, *, include_zero: bool = False) -> dict:
    char = module.character(depth) if char is None else char
    entries = [
        {"alpha_coords": list(c), "multiplicity": m}
        for c, m in sorted(char.items(), key=lambda kv: counts_key(kv[0]))
        if m or include_zero
    ]
    return {
        "algebra": module.data.name,
        "highest_weight_labels": [str(x) for x in module.labels],
        "lambda0_coeff": str(module.weight.lambda0_coeff),
        "depth": depth,
        "entries": entries,
    }


# --- relation verification ----------------------------------------------------------


def verify_relations(
    module,
    depth: int,
    relations: Iterable[Relation] | None = None,
    *,
    families: Iterable[str] | None = None,
    check: str = "relations",
    stop_at_first: bool = True,
) -> VerificationReport:
    """Check that each relation acts as zero on every basis vector up to ``depth``.

    ``module`` needs ``data``, ``param``, ``act``, ``in_radical`` and
    ``basis_vectors``.  Exact vanishing and vanishing in the quotient are
    counted separately in the report details.
    """
    if relations is None:
        relations = defining_relations(module.data, module.param, families)
    relations = list(relations)
    report = VerificationReport(
        check=check,
        algebra=module.data.name,
        lambda_labels=list(getattr(module, "labels", [])) or None,
        depth=depth,
    )
    exact = quotient = 0
    vectors = list(module.basis_vectors(depth))
    for rel in relations:
        for label, vec in vectors:
            res = act_element(module, rel.element, vec)
            if not res:
                exact += 1
                continue
            if module.in_radical(res):
                quotient += 1
                continue
            report.add_failure({
                "relation": rel.name,
                "family": rel.family,
                "i": rel.i,
                "j": rel.j,
                "vector": _label_str(label),
                "residual": _vec_str(res),
            })
            if stop_at_first:
                break
        if stop_at_first and not report.passed:
            break
    report.details.update({
        "relations": len(relations),
        "vectors": len(vectors),
        "exact_zero": exact,
        "zero_in_quotient": quotient,
    })
    return report


def _label_str(label) -> str:
    if isinstance(label, tuple) and label and isinstance(label[0], tuple):
        return " (x) ".join(_label_str(x) for x in label)
    return "f" + ".f".join(str(i) for i in label) + ".v+" if label else "v+"


def _vec_str(vec: dict, limit: int = 4) -> str:
    items = sorted(vec.items(), key=lambda kv: str(kv[0]))[:limit]
    body = " + ".join(f"({c})*{_label_str(k)}" for k, c in items)
    if len(vec) > limit:
        body += f" + ... ({len(vec)} terms)"
    return body


# --- classical limit ----------------------------------------------------------------


def classical_action_check(data: AlgebraData, labels: Sequence, depth: int, *, seed: int = 0) -> VerificationReport:
    """Characters at generic v against characters of the q = 1 action."""
    gen_mod = HighestWeightModule(data, labels, seed=seed)
    cl_mod = HighestWeightModule(data, labels, param=CLASSICAL, seed=seed)
    report = VerificationReport(check="classical", algebra=data.name, lambda_labels=list(gen_mod.labels), depth=depth)
    a, b = gen_mod.character(depth), cl_mod.character(depth)
    for c in a:
        if a[c] != b.get(c):
            report.add_failure({"alpha_coords": list(c), "generic": a[c], "classical": b.get(c)})
    report.details["weights"] = len(a)
    report.details["dimension_to_depth"] = sum(a.values())
    return report


# --- tensor products ------------------------------------------------------------------


class TensorModule:
    """M1 (x) M2 with generators acting through the co-multiplication

        D(e_i) = e_i (x) k_i + 1 (x) e_i,   D(f_i) = f_i (x) 1 + k_i^-1 (x) f_i,
        D(k_i) = k_i (x) k_i,               D(d) = d (x) 1 + 1 (x) d,

    and the sign rule (x (x) y)(u (x) w) = (-1)^([y][u]) xu (x) yw.
    """

    def __init__(self, m1: HighestWeightModule, m2: HighestWeightModule, *, k_in_f: bool = True):
        if m1.data is not m2.data and m1.data != m2.data:
            raise ValueError("tensor factors must share the algebra data")
        self.m1, self.m2 = m1, m2
        # k_in_f=False drops the k_i^-1 from D(f_i); kept only as a negative control
        self.k_in_f = k_in_f
        self.data = m1.data
        self.param = m1.param
        self.labels = list(m1.labels) + ["|"] + list(m2.labels)

    def _apply(self, left, right, vec: dict, sign_of: Gen | None) -> dict:
        """(left (x) right) applied to vec; left/right are callables on ModuleVectors or None for identity."""
        out: dict = {}
        par = 1 if (sign_of is not None and sign_of.index in self.data.theta) else 0
        for (u, w), c in vec.items():
            lu = left({u: ONE}) if left else {u: ONE}
            if not lu:
                continue
            rw = right({w: ONE}) if right else {w: ONE}
            if not rw:
                continue
            s = c
            if par and self.m1.word_parity(u) % 2:
                s = -s
            for u2, a in lu.items():
                for w2, b in rw.items():
                    add_into(out, (u2, w2), s * a * b)
        return out

    def act(self, g: Gen, vec: dict) -> dict:
        m1, m2 = self.m1, self.m2
        i = g.index
        if g.kind == "k":
            return self._apply(lambda x: m1.act_k(i, x), lambda x: m2.act_k(i, x), vec, None)
        if g.kind == "kinv":
            return self._apply(lambda x: m1.act_k(i, x, -1), lambda x: m2.act_k(i, x, -1), vec, None)
        if g.kind == "d":
            return vec_add(self._apply(m1.act_d, None, vec, None), self._apply(None, m2.act_d, vec, None))
        if g.kind == "e":
            a = self._apply(lambda x: m1.act_e(i, x), lambda x: m2.act_k(i, x), vec, None)
            b = self._apply(None, lambda x: m2.act_e(i, x), vec, g)
            return vec_add(a, b)
        if g.kind == "f":
            a = self._apply(lambda x: m1.act_f(i, x), None, vec, None)
            left = (lambda x: m1.act_k(i, x, -1)) if self.k_in_f else None
            b = self._apply(left, lambda x: m2.act_f(i, x), vec, g)
            return vec_add(a, b)
        raise ValueError(f"generator {g} has no tensor action")

    def in_radical(self, vec: dict) -> bool:
        """Zero in (quotient of M1) (x) (quotient of M2)."""
        if not vec:
            return True
        acc: dict = {}
        for (u, w), c in vec.items():
            pu = self.m1.pairing_vector(u)
            if not pu:
                continue
            pw = self.m2.pairing_vector(w)
            for y1, a in pu.items():
                for y2, b in pw.items():
                    add_into(acc, (y1, y2), c * a * b)
        return not acc

    def basis_vectors(self, depth: int):
        for p in range(depth + 1):
            for a in range(p + 1):
                for u in itertools.product(range(self.m1.size), repeat=a):
                    for w in itertools.product(range(self.m2.size), repeat=p - a):
                        yield (u, w), {(u, w): ONE}


def tensor_act(m1: HighestWeightModule, m2: HighestWeightModule, g: Gen, u: ModuleVector, w: ModuleVector) -> dict:
    """Act with generator ``g`` on u (x) w; returns {(word1, word2): Scalar}."""
    vec = {}
    for a, ca in u.items():
        for b, cb in w.items():
            add_into(vec, (a, b), ca * cb)
    return TensorModule(m1, m2).act(g, vec)

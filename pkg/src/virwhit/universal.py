"""Universal Whittaker modules: exact generator action and vector families.

Basis vectors are labeled by pseudo-partitions: non-decreasing tuples of
generator indices drawn from the letters that are NOT in the Whittaker
subalgebra (for an order-r type: all integers below r; for a pair type:
all integers below n except 1).  The tuple (a_1 <= ... <= a_k) stands for
L_{a_1} ... L_{a_k} |w>, with |w> the generating Whittaker vector; the
empty tuple is |w> itself.

The module action is computed by PBW rewriting: a word of generator
indices applied to |w> is straightened with the commutation rule

    L_a L_b = L_b L_a + (a - b) L_{a+b} + (c/12) a (a^2-1) delta_{a+b,0},

and whenever a subalgebra letter reaches the right end it is replaced by
its scalar psi(L_k).  Each step either shortens the word or lowers its
inversion count under an order that ranks subalgebra letters rightmost,
so the rewriting terminates; results are memoized per (type, charge).

Statistics of a pseudo-partition: level = minus the sum of its negative
letters, length = the number of nonnegative letters, and l-value = the
smallest nonnegative letter (the subalgebra order when there is none).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .whittaker import (
    IndexOutsideSubalgebraError,
    ResidualCheck,
    VerificationReport,
    WhittakerType,
    WhittakerType1N,
    WhittakerTypeR,
)

PseudoPartition = tuple[int, ...]


class NotClassifiedError(ValueError):
    """The requested target order falls outside the classified ranges."""


def pp_level(word: PseudoPartition) -> int:
    return -sum(x for x in word if x < 0)


def pp_length(word: PseudoPartition) -> int:
    return sum(1 for x in word if x >= 0)


def pp_l_value(word: PseudoPartition, order: int) -> int:
    nonneg = [x for x in word if x >= 0]
    return min(nonneg) if nonneg else order


def pp_counts(word: PseudoPartition) -> list[tuple[int, int]]:
    """(index, multiplicity) pairs, ascending by index."""
    out: list[tuple[int, int]] = []
    for letter in word:
        if out and out[-1][0] == letter:
            out[-1] = (letter, out[-1][1] + 1)
        else:
            out.append((letter, 1))
    return out


def _allowed_letter(typ: WhittakerType, letter: int) -> bool:
    if isinstance(typ, WhittakerTypeR):
        return letter < typ.r
    return letter < typ.n and letter != 1


def validate_pseudo_partition(typ: WhittakerType, word) -> PseudoPartition:
    word = tuple(word)
    if list(word) != sorted(word):
        raise ValueError(f"letters must be non-decreasing: {word}")
    for letter in word:
        if not _allowed_letter(typ, letter):
            raise ValueError(f"letter {letter} is not a basis letter for {typ}")
    return word


@dataclass(frozen=True)
class UniversalVector:
    """Sparse vector in a universal Whittaker module."""

    whittaker_type: WhittakerType
    central_charge: Fraction
    terms: dict[PseudoPartition, Fraction] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word) -> Fraction:
        return self.terms.get(tuple(word), Fraction(0))

    def max_level(self) -> int:
        return max((pp_level(w) for w in self.terms), default=0)

    def max_length(self) -> int:
        return max((pp_length(w) for w in self.terms), default=0)

    def __add__(self, other: "UniversalVector") -> "UniversalVector":
        if (
            self.whittaker_type != other.whittaker_type
            or self.central_charge != other.central_charge
        ):
            raise ValueError("mixing vectors from different modules")
        merged = dict(self.terms)
        for word, coeff in other.terms.items():
            new = merged.get(word, Fraction(0)) + coeff
            if new:
                merged[word] = new
            else:
                merged.pop(word, None)
        return UniversalVector(self.whittaker_type, self.central_charge, merged)

    def __neg__(self) -> "UniversalVector":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "UniversalVector") -> "UniversalVector":
        return self + (-other)

    def scale(self, scalar: Fraction | int) -> "UniversalVector":
        scalar = Fraction(scalar)
        if not scalar:
            return UniversalVector(self.whittaker_type, self.central_charge, {})
        return UniversalVector(
            self.whittaker_type,
            self.central_charge,
            {w: c * scalar for w, c in self.terms.items()},
        )


def generating_vector(typ: WhittakerType, c: Fraction) -> UniversalVector:
    """|w>, the cyclic Whittaker vector of the universal module."""
    return UniversalVector(typ, Fraction(c), {(): Fraction(1)})


def basis_vector(typ: WhittakerType, c: Fraction, word) -> UniversalVector:
    return UniversalVector(
        typ, Fraction(c), {validate_pseudo_partition(typ, word): Fraction(1)}
    )


class _Rewriter:
    """Memoized PBW straightening for one (type, central charge) pair."""

    def __init__(self, typ: WhittakerType, c: Fraction):
        self.typ = typ
        self.c = Fraction(c)
        self._cache: dict[tuple[int, ...], dict[PseudoPartition, Fraction]] = {}
        if isinstance(typ, WhittakerTypeR):
            self._special = None
        else:
            # Letter 1 belongs to the subalgebra; rank it just below n so it
            # migrates past the basis letters 2..n-1 toward |w>.
            self._special = typ.n

    def _key(self, letter: int) -> tuple[int, int]:
        if self._special is not None and letter == 1:
            return (self._special - 1, 1)
        return (letter, 0)

    def reduce(self, word: tuple[int, ...]) -> dict[PseudoPartition, Fraction]:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        result = self._reduce(word)
        self._cache[word] = result
        return result

    def _reduce(self, word: tuple[int, ...]) -> dict[PseudoPartition, Fraction]:
        if not word:
            return {(): Fraction(1)}
        last = word[-1]
        if self.typ.in_subalgebra(last):
            scalar = self.typ.value(last)
            if not scalar:
                return {}
            return {
                w: c * scalar for w, c in self.reduce(word[:-1]).items()
            }
        swap_at = -1
        for i in range(len(word) - 2, -1, -1):
            if self._key(word[i]) > self._key(word[i + 1]):
                swap_at = i
                break
        if swap_at < 0:
            return {word: Fraction(1)}
        a, b = word[swap_at], word[swap_at + 1]
        head, tail = word[:swap_at], word[swap_at + 2:]
        acc: dict[PseudoPartition, Fraction] = {}

        def fold(partial: dict[PseudoPartition, Fraction], scalar: Fraction) -> None:
            if not scalar:
                return
            for w, coeff in partial.items():
                new = acc.get(w, Fraction(0)) + coeff * scalar
                if new:
                    acc[w] = new
                else:
                    acc.pop(w, None)

        fold(self.reduce(head + (b, a) + tail), Fraction(1))
        fold(self.reduce(head + (a + b,) + tail), Fraction(a - b))
        if a + b == 0:
            central = self.c * Fraction(a * (a * a - 1), 12)
            fold(self.reduce(head + tail), central)
        return acc


_REWRITERS: dict[tuple, _Rewriter] = {}


def _rewriter(typ: WhittakerType, c: Fraction) -> _Rewriter:
    if isinstance(typ, WhittakerTypeR):
        key = ("r", typ.r, typ.mu, Fraction(c))
    else:
        key = ("1n", typ.n, typ.nu1, typ.nun, Fraction(c))
    rewriter = _REWRITERS.get(key)
    if rewriter is None:
        rewriter = _Rewriter(typ, c)
        _REWRITERS[key] = rewriter
    return rewriter


def apply_word(word, v: UniversalVector) -> UniversalVector:
    """Left-multiply by L_{word[0]} ... L_{word[-1]}, exactly."""
    word = tuple(word)
    rewriter = _rewriter(v.whittaker_type, v.central_charge)
    acc: dict[PseudoPartition, Fraction] = {}
    for base, coeff in v.terms.items():
        for out, value in rewriter.reduce(word + base).items():
            new = acc.get(out, Fraction(0)) + value * coeff
            if new:
                acc[out] = new
            else:
                acc.pop(out, None)
    return UniversalVector(v.whittaker_type, v.central_charge, acc)


def act_universal(m: int, v: UniversalVector) -> UniversalVector:
    """The exact, untruncated action of L_m."""
    return apply_word((m,), v)


def dot_act(m: int, v: UniversalVector) -> UniversalVector:
    """Shifted action (L_m - psi(L_m)) v for subalgebra generators."""
    typ = v.whittaker_type
    if isinstance(typ, WhittakerTypeR):
        if m < typ.r:
            raise IndexOutsideSubalgebraError(
                f"dot action needs m >= {typ.r}, got {m}"
            )
    elif not typ.in_subalgebra(m):
        raise IndexOutsideSubalgebraError(
            f"L_{m} lies outside the subalgebra generated by L_1 and L_{typ.n}"
        )
    return act_universal(m, v) - v.scale(typ.value(m))


def nilpotency_index(m: int, v: UniversalVector, limit: int = 10_000) -> int:
    """Least k with the k-fold dot action of L_m annihilating v."""
    if v.is_zero():
        raise ValueError("nilpotency index is defined for nonzero vectors")
    count = 0
    current = v
    while not current.is_zero():
        current = dot_act(m, current)
        count += 1
        if count > limit:
            raise RuntimeError("dot action did not nilpotate within the limit")
    return count


def dot_nilpotency_bound(
    m: int, word, typ: WhittakerTypeR, c: Fraction, settle: int = 12
) -> int:
    """Upper bound 2 max(k_+ + 1, k_- + 1) for the nilpotency index on L_word |w>.

    k_- (resp. k_+) is the largest number of iterated commutators of L_m
    with the negative (resp. nonnegative) factor of the word that still act
    nonzero on |w>.  Iteration stops once ``settle`` consecutive
    applications vanish; each commutator pushes every index up by m, so
    vanishing is eventually permanent.
    """
    from . import virasoro

    word = validate_pseudo_partition(typ, word)
    minus = tuple(x for x in word if x < 0)
    plus = tuple(x for x in word if x >= 0)
    rewriter = _rewriter(typ, c)
    lm = virasoro.generator(m, Fraction(c))

    def applied_nonzero(element) -> bool:
        acc: dict[PseudoPartition, Fraction] = {}
        for mono, coeff in element.terms.items():
            for out, value in rewriter.reduce(mono).items():
                new = acc.get(out, Fraction(0)) + value * coeff
                if new:
                    acc[out] = new
                else:
                    acc.pop(out, None)
        return bool(acc)

    def last_nonzero(part: tuple[int, ...]) -> int:
        element = virasoro.EnvelopingElement(Fraction(c), {part: Fraction(1)})
        best = -1
        j = 0
        while not element.is_zero() and j <= best + settle:
            if applied_nonzero(element):
                best = j
            element = virasoro.commutator(lm, element)
            j += 1
            if j > 400:
                raise RuntimeError("iterated commutators did not settle")
        return best

    k_minus = last_nonzero(minus)
    k_plus = last_nonzero(plus)
    return 2 * max(k_plus + 1, k_minus + 1)


def verify_whittaker_vector(
    v: UniversalVector, target: WhittakerType
) -> VerificationReport:
    """Exact Whittaker-condition check against a target type.

    The checked index set covers every generator that can act nonzero on
    the vector's support (module rank plus maximal level), so a passing
    report certifies all conditions, untruncated.
    """
    module_typ = v.whittaker_type
    module_top = (
        module_typ.rank if isinstance(module_typ, WhittakerTypeR) else module_typ.n
    )
    reach = module_top + v.max_level() + 1
    if isinstance(target, WhittakerTypeR):
        ks = list(range(target.r, max(2 * target.r, reach) + 1))
    else:
        ks = [1] + list(range(target.n, max(target.n, reach) + 1))
    checks = []
    for k in ks:
        expected = target.value(k)
        residual = act_universal(k, v) - v.scale(expected)
        failure = None
        if not residual.is_zero():
            word = min(residual.terms)
            failure = (pp_level(word), word, residual.terms[word])
        checks.append(
            ResidualCheck(
                operator_index=k,
                expected=expected,
                complete_levels=None,
                residual_zero=failure is None,
                first_failure=failure,
            )
        )
    return VerificationReport(tuple(checks))


def level0_words(
    min_letter: int, max_letter: int, max_length: int
) -> list[PseudoPartition]:
    """All nonempty non-decreasing words over [min_letter, max_letter]."""
    out: list[PseudoPartition] = []
    if min_letter > max_letter:
        return out
    for length in range(1, max_length + 1):
        out.extend(
            itertools.combinations_with_replacement(
                range(min_letter, max_letter + 1), length
            )
        )
    return out


def restricted_type(psi: WhittakerTypeR, r_prime: int) -> WhittakerTypeR:
    """The type (psi(L_{r'}), ..., psi(L_s), 0, ..., 0) of order r'."""
    values = tuple(psi.value(k) for k in range(r_prime, 2 * r_prime + 1))
    return WhittakerTypeR(r_prime, values)


def whittaker_subspace_level0(
    psi: WhittakerTypeR, r_prime: int, c: Fraction, max_length: int = 5
) -> list[UniversalVector]:
    """Spanning vectors of the classified Whittaker subspace of order r'.

    For rank s in {2r-1, 2r}: r' = r yields span{|w>}, and orders
    s-r+2 <= r' <= s yield the level-zero words whose smallest letter is
    at least s-r'+1.  For s < 2r-1 the same span formula covers
    r <= r' <= s.  Every other r' raises NotClassifiedError.  The spanning
    set is restricted to words no longer than ``max_length``.
    """
    r, s = psi.r, psi.rank
    high_rank = s in (2 * r - 1, 2 * r)
    if high_rank:
        if r_prime == r:
            return [generating_vector(psi, c)]
        if not (s - r + 2 <= r_prime <= s):
            raise NotClassifiedError(
                f"order {r_prime} is not classified for rank {s}, order {r}"
            )
    elif not (r <= r_prime <= s):
        raise NotClassifiedError(
            f"order {r_prime} is not classified for rank {s}, order {r}"
        )
    lowest = s - r_prime + 1
    words: list[PseudoPartition] = [()]
    words.extend(level0_words(lowest, r - 1, max_length))
    return [basis_vector(psi, c, w) for w in words]


def family_w_l_2(
    psi: WhittakerType1N, l: int, c: Fraction, alpha0: Fraction = Fraction(1)
) -> UniversalVector:
    """The n = 4 Whittaker family: sum_k alpha_k L_2^{l-k} L_3^{2k} |w>.

    alpha_k = -(l+1-k) / (4 k nu_4) * alpha_{k-1}; l = 0 degenerates to
    alpha_0 |w>.
    """
    if psi.n != 4:
        raise ValueError("this family lives in the n = 4 module")
    if l < 0:
        raise ValueError("l must be nonnegative")
    alpha0 = Fraction(alpha0)
    if not alpha0:
        raise ValueError("alpha0 must be nonzero")
    terms: dict[PseudoPartition, Fraction] = {}
    alpha = alpha0
    for k in range(l + 1):
        if k:
            alpha *= Fraction(-(l + 1 - k)) / (4 * k * psi.nun)
        terms[(2,) * (l - k) + (3,) * (2 * k)] = alpha
    return UniversalVector(psi, Fraction(c), terms)


def family_w_l_2_n(
    psi: WhittakerType1N, l: int, c: Fraction, alpha0: Fraction = Fraction(1)
) -> UniversalVector:
    """The n > 4 generalization: sum_k alpha_k L_{n-2}^{l-k} L_{n-1}^{2k} |w>.

    alpha_{k+1} = -(n-3)(l-k) / (2 (n-2) (k+1) nu_n) * alpha_k.
    """
    n = psi.n
    if n <= 4:
        raise ValueError("this family needs n > 4")
    if l < 0:
        raise ValueError("l must be nonnegative")
    alpha0 = Fraction(alpha0)
    if not alpha0:
        raise ValueError("alpha0 must be nonzero")
    terms: dict[PseudoPartition, Fraction] = {}
    alpha = alpha0
    for k in range(l + 1):
        if k:
            alpha *= Fraction(-(n - 3) * (l - k + 1)) / (2 * (n - 2) * k * psi.nun)
        terms[(n - 2,) * (l - k) + (n - 1,) * (2 * k)] = alpha
    return UniversalVector(psi, Fraction(c), terms)


def family_w_1_l_n(
    psi: WhittakerType1N, l: int, c: Fraction, alpha_l: Fraction = Fraction(1)
) -> UniversalVector:
    """The second n > 4 family: sum_{k=l}^{n-1} alpha_k L_k L_{n-1}^{k-l} |w>.

    alpha_{k+1} = -(k-1) / ((n-2)(k+1-l) nu_n) * alpha_k for l <= k <= n-3,
    with the separate terminal step
    alpha_{n-1} = -(n-3) / ((n-2)(n-l) nu_n) * alpha_{n-2}.
    """
    n = psi.n
    if n <= 4:
        raise ValueError("this family needs n > 4")
    if not 2 <= l <= n - 2:
        raise ValueError(f"l must satisfy 2 <= l <= {n - 2}")
    alpha_l = Fraction(alpha_l)
    if not alpha_l:
        raise ValueError("alpha_l must be nonzero")
    alphas: dict[int, Fraction] = {l: alpha_l}
    for k in range(l, n - 2):
        alphas[k + 1] = alphas[k] * Fraction(-(k - 1)) / ((n - 2) * (k + 1 - l) * psi.nun)
    alphas[n - 1] = alphas[n - 2] * Fraction(-(n - 3)) / ((n - 2) * (n - l) * psi.nun)
    terms: dict[PseudoPartition, Fraction] = {}
    for k in range(l, n):
        word = tuple(sorted((k,) + (n - 1,) * (k - l)))
        terms[word] = terms.get(word, Fraction(0)) + alphas[k]
    return UniversalVector(psi, Fraction(c), terms)


def example_n5(which: str, psi: WhittakerType1N, c: Fraction) -> UniversalVector:
    """The two explicit n = 5 Whittaker vectors, with mu = nu_5."""
    if psi.n != 5:
        raise ValueError("these vectors live in the n = 5 module")
    mu = psi.nun
    if which == "w_11_23":
        terms = {
            (2, 3): Fraction(1),
            (2, 4, 4): Fraction(-1) / (3 * mu),
            (3, 3, 4): Fraction(-1) / (3 * mu),
            (3, 4, 4, 4): Fraction(5) / (27 * mu**2),
            (4, 4, 4, 4, 4): Fraction(-2) / (81 * mu**3),
        }
    elif which == "w_2_2":
        terms = {
            (2, 2): Fraction(1),
            (2, 3, 4): Fraction(-2) / (3 * mu),
            (2, 4, 4, 4): Fraction(4) / (27 * mu**2),
            (3, 3, 4, 4): Fraction(1) / (9 * mu**2),
            (3, 4, 4, 4, 4): Fraction(-4) / (81 * mu**3),
            (4,): Fraction(-1, 3),
            (4, 4, 4, 4, 4, 4): Fraction(4) / (729 * mu**4),
        }
    else:
        raise ValueError(f"unknown example {which!r}; use w_11_23 or w_2_2")
    return UniversalVector(psi, Fraction(c), terms)


@dataclass(frozen=True)
class ClauseResult:
    clause: str
    applicable: bool
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class CommutatorBoundsReport:
    order_index: int
    word: PseudoPartition
    clauses: tuple[ClauseResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses if c.applicable)


def check_lemma_bounds(
    m: int, word, psi: WhittakerTypeR, c: Fraction
) -> CommutatorBoundsReport:
    """Level and length bounds for commutators against the split word.

    Splits the pseudo-partition into its negative and nonnegative factors
    and checks, for whichever ranges contain m: vanishing of
    [L_m, L_plus]|w> above the rank and its length drop inside the
    subalgebra window; vanishing of [L_m, L_minus] L_plus |w> above
    rank + level, the level window bound below that, and the strict level
    drop inside the subalgebra window; and, when m = k + rank for the
    smallest represented depth k, the exact leading coefficient
    count(-k) psi(L_s) (2k + s) together with the level/length classes of
    the remainder.
    """
    word = validate_pseudo_partition(psi, word)
    r, s = psi.r, psi.rank
    minus = tuple(x for x in word if x < 0)
    plus = tuple(x for x in word if x >= 0)
    level = pp_level(word)
    length = pp_length(word)
    base = generating_vector(psi, c)
    clauses: list[ClauseResult] = []

    def residual_commutator(outer: int, inner: tuple[int, ...], rest: tuple[int, ...]):
        # [L_outer, L_inner] L_rest |w>
        left = apply_word((outer,) + inner + rest, base)
        right = apply_word(inner + (outer,) + rest, base)
        return left - right

    comm_plus = residual_commutator(m, plus, ())
    if m > s:
        clauses.append(
            ClauseResult(
                "raising_vanishes",
                True,
                comm_plus.is_zero(),
                f"[L_{m}, L_plus]|w> must vanish for m > {s}",
            )
        )
    if r <= m <= s:
        ok = comm_plus.is_zero() or comm_plus.max_length() < length
        clauses.append(
            ClauseResult(
                "raising_length_drop",
                True,
                ok,
                f"max length {comm_plus.max_length()} must drop below {length}",
            )
        )

    comm_minus = residual_commutator(m, minus, plus)
    if m > s + level:
        clauses.append(
            ClauseResult(
                "lowering_vanishes",
                True,
                comm_minus.is_zero(),
                f"[L_{m}, L_minus] L_plus |w> must vanish for m > {s + level}",
            )
        )
    if s < m <= s + level:
        ok = comm_minus.is_zero() or comm_minus.max_level() <= level + s - m
        clauses.append(
            ClauseResult(
                "lowering_level_window",
                True,
                ok,
                f"max level {comm_minus.max_level()} must not exceed {level + s - m}",
            )
        )
    if r <= m <= s:
        ok = comm_minus.is_zero() or comm_minus.max_level() < level
        clauses.append(
            ClauseResult(
                "lowering_level_drop",
                True,
                ok,
                f"max level {comm_minus.max_level()} must drop below {level}",
            )
        )

    depths = [-x for x in minus]
    k = min(depths) if depths else None
    if k is not None and m == k + s:
        count_k = sum(1 for x in minus if x == -k)
        expected = Fraction(count_k) * psi.value(s) * (2 * k + s)
        remaining = list(word)
        remaining.remove(-k)
        leading_word = tuple(remaining)
        actual = comm_minus.coefficient(leading_word)
        clauses.append(
            ClauseResult(
                "leading_term",
                True,
                actual == expected,
                f"coefficient on {leading_word} is {actual}, expected {expected}",
            )
        )
        remainder = comm_minus - basis_vector(psi, c, leading_word).scale(expected)
        ok = True
        detail = "remainder splits into the level/length classes"
        for out_word, coeff in remainder.terms.items():
            out_level = pp_level(out_word)
            if out_level > level - k or (
                out_level == level - k and pp_length(out_word) >= length
            ):
                ok = False
                detail = f"term {out_word} (coeff {coeff}) escapes both classes"
                break
        clauses.append(ClauseResult("remainder_split", True, ok, detail))

    return CommutatorBoundsReport(m, word, tuple(clauses))


@dataclass(frozen=True)
class SearchResult:
    ansatz: tuple[PseudoPartition, ...]
    checked_indices: tuple[int, ...]
    dimension: int
    basis: tuple[UniversalVector, ...]


def search_whittaker(
    psi: WhittakerType,
    ansatz,
    target: WhittakerType,
    c: Fraction,
) -> SearchResult:
    """Exact nullspace of the target Whittaker conditions on an ansatz span.

    Builds the homogeneous linear system expressing (L_k - target(L_k)) v = 0
    on the span of the given pseudo-partitions and returns a deterministic
    basis of its solution space.  The checked indices cover the target's
    generators up to the largest index that can act nonzero on the ansatz.
    """
    words = sorted(
        (validate_pseudo_partition(psi, w) for w in ansatz),
        key=lambda w: (pp_level(w), pp_length(w), w),
    )
    if len(set(words)) != len(words):
        raise ValueError("ansatz contains duplicate pseudo-partitions")
    module_top = psi.rank if isinstance(psi, WhittakerTypeR) else psi.n
    max_level = max((pp_level(w) for w in words), default=0)
    reach = module_top + max_level + 1
    if isinstance(target, WhittakerTypeR):
        ks = list(range(target.r, max(2 * target.r, reach) + 1))
    else:
        ks = [1] + list(range(target.n, max(target.n, reach) + 1))

    residuals = []
    row_index: dict[tuple[int, PseudoPartition], int] = {}
    for j, word in enumerate(words):
        vec = basis_vector(psi, c, word)
        per_word = {}
        for k in ks:
            residual = act_universal(k, vec) - vec.scale(target.value(k))
            for out, coeff in residual.terms.items():
                key = (k, out)
                if key not in row_index:
                    row_index[key] = len(row_index)
                per_word[row_index[key]] = coeff
        residuals.append(per_word)

    rows = [
        [residuals[j].get(i, Fraction(0)) for j in range(len(words))]
        for i in range(len(row_index))
    ]
    kernel = linalg.nullspace(rows, ncols=len(words))
    basis = []
    for vec in kernel:
        terms = {w: coeff for w, coeff in zip(words, vec) if coeff}
        basis.append(UniversalVector(psi, Fraction(c), terms))
    return SearchResult(tuple(words), tuple(ks), len(kernel), tuple(basis))

"""Backlund transformations s0..s3 and everything verified about them.

Words of generators act on points left to right: ``compose([1, 2])`` first
applies s1, then s2 with the already-transformed parameters. With this
convention the translation words shift the parameters by the integer vectors
(-2,2,0,0), (0,-2,2,0) and (0,0,-2,2).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

from .algebra import universe as U
from .algebra.poly import Poly
from .algebra.rational import RationalExpr, substitute
from .algebra.scalar import Q, to_scalar
from .errors import BudgetExceeded, PoleAtPoint
from .hamiltonian import (
    HamiltonianSystem,
    alpha0,
    alpha1,
    alpha2,
    alpha3,
    eliminate_alpha0,
    equations_of_motion,
    poisson_bracket,
    p,
    q,
    t,
    total_time_derivative,
    w,
    x,
    y,
    z,
)

ALPHA_POLYS = (alpha0, alpha1, alpha2, alpha3)

f0 = y + Q(1, 4) * z**2
f1 = w
f2 = w + p + Q(1, 2) * y + Q(1, 2) * x * z - Q(1, 4) * z * q + t
f3 = p


@dataclass(frozen=True)
class InvariantDivisor:
    index: int
    poly: Poly
    solved_var: int
    name: str


DIVISORS = (
    InvariantDivisor(0, f0, U.Y, "f0"),
    InvariantDivisor(1, f1, U.W, "f1"),
    InvariantDivisor(2, f2, U.W, "f2"),
    InvariantDivisor(3, f3, U.P, "f3"),
)

# alpha' = M alpha, rows indexed by the new parameter
_PARAM_ACTIONS = (
    ((-1, 0, 0, 0), (2, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
    ((1, 1, 0, 0), (0, -1, 0, 0), (0, 1, 1, 0), (0, 0, 0, 1)),
    ((1, 0, 0, 0), (0, 1, 1, 0), (0, 0, -1, 0), (0, 0, 1, 1)),
    ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 2), (0, 0, 0, -1)),
)
IDENTITY_ACTION = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def _matmul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4))


def apply_param_action(matrix, alpha):
    return [sum(matrix[i][j] * alpha[j] for j in range(4)) for i in range(4)]


@dataclass(frozen=True)
class BirationalMap:
    """Phase images plus a linear action on (alpha0..alpha3); t is fixed."""

    images: dict  # phase index -> RationalExpr; missing entries are identity
    param_action: tuple = IDENTITY_ACTION
    name: str = ""
    divisors: tuple = field(default=())  # named factors that may vanish at poles
    # optional sparse form {phase index: [(coeff Poly, divisor Poly, power)]}
    # meaning sum(coeff / divisor**power); power 0 terms are polynomial parts
    structured: dict | None = field(default=None, compare=False)

    def image(self, v) -> RationalExpr:
        i = U.index(v)
        r = self.images.get(i)
        return r if r is not None else RationalExpr(Poly.var(i))

    def param_bindings(self) -> dict:
        out = {}
        for i, row in enumerate(self.param_action):
            out[U.ALPHAS[i]] = sum((c * ALPHA_POLYS[j] for j, c in enumerate(row) if c), Poly())
        return out

    def param_shift(self):
        """Translation vector when the action is identity plus a shift on the sum-1 slice."""
        base = [Q(1, 4)] * 4
        img = apply_param_action(self.param_action, base)
        return [a - b for a, b in zip(img, base)]

    def size(self) -> int:
        return sum(r.size() for r in self.images.values())

    def apply(self, point, alpha):
        """Exact image of a point ``{x..p, t}`` with parameters ``alpha``."""
        env = {U.index(k): to_scalar(v) for k, v in point.items()}
        alpha = [to_scalar(a) for a in alpha]
        for i, a in enumerate(alpha):
            env[U.ALPHAS[i]] = a
        for dname, dpoly in self.divisors:
            if not dpoly.evaluate(env):
                raise PoleAtPoint(f"{self.name}: {dname} vanishes at the point", dname)
        new = {}
        if self.structured is not None:
            dvals: dict = {}
            for i in U.PHASE:
                terms = self.structured.get(i)
                if terms is None:
                    new[i] = env[i]
                    continue
                acc = Q(0)
                for c, d, k in terms:
                    val = c.evaluate(env)
                    if k:
                        dv = dvals.get(d)
                        if dv is None:
                            dv = dvals[d] = d.evaluate(env)
                        val = val / dv**k
                    acc += val
                new[i] = acc
            new[U.T] = env[U.T]
            return new, apply_param_action(self.param_action, alpha)
        for i in U.PHASE:
            r = self.images.get(i)
            if r is None:
                new[i] = env[i]
            else:
                den = r.den.evaluate(env)
                if not den:
                    raise PoleAtPoint(f"{self.name}: denominator of {U.name(i)}-image vanishes", str(r.den))
                new[i] = r.num.evaluate(env) / den
        new[U.T] = env[U.T]
        return new, apply_param_action(self.param_action, alpha)

    def then(self, other: "BirationalMap", budget: int | None = None) -> "BirationalMap":
        """The map 'apply self, then other'."""
        binds = {i: self.image(i) for i in U.PHASE}
        binds.update(self.param_bindings())
        factors = [d for _, d in self.divisors + other.divisors]
        moved: dict = {}  # divisor of `other` pulled back through self

        def pulled(d):
            r = moved.get(d)
            if r is None:
                r = eliminate_alpha0(substitute(d, binds))
                r = r.cancel(factors) if factors else r
                moved[d] = r
            return r

        images = {}
        for i in U.PHASE:
            r = other.images.get(i)
            if r is None:
                img = self.image(i)
            elif other.structured is not None and i in other.structured:
                img = RationalExpr(0)
                for c, d, k in other.structured[i]:
                    piece = eliminate_alpha0(substitute(c, binds))
                    if k:
                        piece = piece / pulled(d) ** k
                    img = img + piece
                img = img.cancel(factors) if factors else img
            else:
                img = substitute(r, binds)
                img = eliminate_alpha0(img)
                img = img.cancel(factors) if factors else img
            if budget is not None and img.size() > budget:
                raise BudgetExceeded(f"composed image of {U.name(i)} has {img.size()} terms")
            if img != RationalExpr(Poly.var(i)):
                images[i] = img
        return BirationalMap(
            images,
            _matmul(other.param_action, self.param_action),
            f"{self.name} {other.name}".strip(),
            self.divisors + tuple(d for d in other.divisors if d not in self.divisors),
        )


def identity_map() -> BirationalMap:
    return BirationalMap({}, IDENTITY_ACTION, "id")


def _generator_terms(i: int) -> dict:
    """Images of s_i as sums of coefficient / divisor**power."""
    h, qtr, eighth = Q(1, 2), Q(1, 4), Q(1, 8)
    one = Poly.const(1)
    if i == 0:
        return {
            U.X: [(x, one, 0), (alpha0, f0, 1)],
            U.W: [(w, one, 0), (-h * alpha0 * z, f0, 1)],
        }
    if i == 1:
        return {U.Z: [(z, one, 0), (alpha1, f1, 1)]}
    if i == 2:
        a, a2 = alpha2, alpha2 * alpha2
        return {
            U.X: [(x, one, 0), (h * a, f2, 1)],
            U.Y: [(y, one, 0), (-h * a * z, f2, 1), (-qtr * a2, f2, 2)],
            U.Z: [(z, one, 0), (a, f2, 1)],
            U.W: [(w, one, 0), (qtr * a * (q - 2 * x), f2, 1)],
            U.QV: [(q, one, 0), (a, f2, 1)],
            U.P: [(p, one, 0), (qtr * a * z, f2, 1), (eighth * a2, f2, 2)],
        }
    if i == 3:
        return {U.QV: [(q, one, 0), (alpha3, f3, 1)]}
    raise ValueError("generator index must be 0..3")


@lru_cache(maxsize=None)
def generator(i: int) -> BirationalMap:
    """The reflection s_i as an explicit birational map."""
    terms = _generator_terms(i)
    images = {}
    for v, parts in terms.items():
        img = RationalExpr(0)
        for c, d, k in parts:
            img = img + (RationalExpr(c) / RationalExpr(d) ** k if k else RationalExpr(c))
        images[v] = img
    div = DIVISORS[i]
    dname = {0: "f0", 1: "w", 2: "f2", 3: "p"}[i]
    return BirationalMap(images, _PARAM_ACTIONS[i], f"s{i}", ((dname, div.poly),), terms)


def parse_word(text) -> list:
    """'s1 s2 s0' -> [1, 2, 0]."""
    if isinstance(text, (list, tuple)):
        return [int(i) for i in text]
    word = []
    for tok in text.split():
        tok = tok.strip().lower()
        if not (tok.startswith("s") and tok[1:] in ("0", "1", "2", "3")):
            raise ValueError(f"bad generator token {tok!r}; expected s0..s3")
        word.append(int(tok[1:]))
    return word


DEFAULT_BUDGET = 4000


def compose(word, budget: int | None = DEFAULT_BUDGET) -> BirationalMap:
    """Left-to-right composition of generators; raises BudgetExceeded."""
    word = parse_word(word)
    m = identity_map()
    for i in word:
        m = m.then(generator(i), budget=budget)
    m = BirationalMap(m.images, m.param_action, " ".join(f"s{i}" for i in word) or "id", m.divisors)
    return m


def compose_param_action(word) -> tuple:
    action = IDENTITY_ACTION
    for i in parse_word(word):
        action = _matmul(_PARAM_ACTIONS[i], action)
    return action


def apply_word(word, point, alpha):
    """Exact point-wise application of a word (no symbolic composition)."""
    pt, al = dict(point), list(alpha)
    for i in parse_word(word):
        pt, al = generator(i).apply(pt, al)
    return pt, al


# ---------------------------------------------------------------------------
# symmetry verification


@dataclass
class SymmetryReport:
    ok: bool
    residuals: dict  # phase index -> numerator Poly of lhs - rhs (zero when ok)

    def __bool__(self):
        return self.ok


def is_backlund_symmetry(m: BirationalMap, sys: HamiltonianSystem) -> SymmetryReport:
    """Check the pushforward identity for every phase coordinate.

    For each coordinate u the time derivative of the image m(u) along the
    original flow must equal the u-component of the vector field with
    transformed parameters evaluated at the image point.
    """
    field_ = equations_of_motion(sys)
    images = {i: eliminate_alpha0(m.image(i)) for i in U.PHASE}
    binds = dict(images)
    binds.update({k: eliminate_alpha0(v) for k, v in m.param_bindings().items()})
    factors = [d for _, d in m.divisors]
    residuals = {}
    ok = True
    for u in U.PHASE:
        img = images[u]
        lhs = img.deriv(U.T)
        for v in U.PHASE:
            d = img.deriv(v)
            if d.is_zero:
                continue
            lhs = lhs + d * RationalExpr(field_[v])
        rhs = substitute(field_[u], binds)
        diff = lhs - rhs
        if factors and not diff.is_zero:
            diff = diff.cancel(factors)
        residuals[u] = diff.num
        if not diff.is_zero:
            ok = False
    return SymmetryReport(ok, residuals)


def adjoint_series(i: int, g, max_depth: int = 8):
    """Sum the exponential-adjoint series for s_i applied to ``g``.

    Returns (RationalExpr, order) where order is the highest non-vanishing
    bracket power. Raises RuntimeError if the series does not terminate.
    """
    div = DIVISORS[i].poly
    coeff = RationalExpr(ALPHA_POLYS[i]) / RationalExpr(div)
    g = Poly.coerce(g)
    total = RationalExpr(g)
    term = g
    order = 0
    for k in range(1, max_depth + 1):
        term = poisson_bracket(div, term)
        if term.is_zero:
            return total, order
        order = k
        total = total + (coeff**k) * RationalExpr(term.scale(Q(1, factorial(k))))
    raise RuntimeError(f"adjoint series for s{i} did not terminate within {max_depth} brackets")


def adjoint_series_check(i: int, g) -> tuple:
    """(matches generator image, series order) for a phase coordinate g."""
    gi = U.index(g)
    series, order = adjoint_series(i, Poly.var(gi))
    return series == generator(i).image(gi), order


# ---------------------------------------------------------------------------
# random exact points


def random_point(rng: random.Random, height: int = 9) -> dict:
    pt = {}
    for i in U.PHASE:
        pt[i] = Q(rng.randint(-height, height), rng.randint(1, height))
    tv = Q(0)
    while not tv:
        tv = Q(rng.randint(-height, height), rng.randint(1, height))
    pt[U.T] = tv
    return pt


def random_alpha(rng: random.Random, height: int = 9) -> list:
    a = [Q(rng.randint(-height, height), rng.randint(1, height)) for _ in range(3)]
    return [1 - sum(a)] + a


def random_pole_free(rng: random.Random, words, tries: int = 200):
    """A point and parameters at which every word applies without poles."""
    for _ in range(tries):
        pt, al = random_point(rng), random_alpha(rng)
        if any(a == 0 for a in al):
            continue
        try:
            for wd in words:
                apply_word(wd, pt, al)
        except PoleAtPoint:
            continue
        return pt, al
    raise RuntimeError("could not find a pole-free random point")


def involution_check(i: int, samples: int = 20, seed: int = 0) -> bool:
    """s_i applied twice returns every sampled point and parameter."""
    rng = random.Random(f"involution:{i}:{seed}")
    for _ in range(samples):
        pt, al = random_pole_free(rng, [[i, i]])
        pt2, al2 = apply_word([i, i], pt, al)
        if pt2 != pt or al2 != al:
            return False
    return True


def weyl_relation_order(i: int, j: int, sample_count: int = 20, seed: int = 0, cap: int = 12):
    """Order of s_i s_j from exact point iteration, or None if unresolved."""
    if i == j:
        raise ValueError("need distinct generators")
    rng = random.Random(f"coxeter:{i}:{j}:{seed}")
    orders = set()
    for _ in range(sample_count):
        pt, al = random_pole_free(rng, [[i, j] * cap])
        cur, cal = pt, al
        found = None
        for n in range(1, cap + 1):
            cur, cal = apply_word([i, j], cur, cal)
            if cur == pt and cal == al:
                found = n
                break
        orders.add(found)
        if None in orders or len(orders) > 1:
            return None
    return orders.pop()


# ---------------------------------------------------------------------------
# invariant divisors and particular solutions


def specialize_alpha_zero(poly: Poly, i: int) -> Poly:
    """Impose alpha_i = 0 together with the sum rule."""
    poly = eliminate_alpha0(poly)
    if i == 0:
        return poly.compose({U.A1: 1 - alpha2 - alpha3})
    return poly.specialize({U.ALPHAS[i]: 0})


def invariant_divisor_check(i: int, sys: HamiltonianSystem):
    """(ok, residual): d f_i/dt at alpha_i = 0 reduced modulo f_i."""
    div = DIVISORS[i]
    deriv = total_time_derivative(div.poly, sys)
    deriv = specialize_alpha_zero(deriv, i)
    residual = deriv.reduce_mod(div.poly, div.solved_var)
    return residual.is_zero, residual


@dataclass
class ParticularTransformReport:
    transform: BirationalMap
    inverse: dict
    w2_matches_f2: bool
    symplectic: bool
    invariant: bool
    brackets: dict


def alpha2_particular_transform() -> ParticularTransformReport:
    """The symplectic change of variables that straightens f2 into w2."""
    half, quarter, eighth = Q(1, 2), Q(1, 4), Q(1, 8)
    fwd = {
        U.X: x - half * z,
        U.Y: y + quarter * z**2,
        U.Z: z,
        U.W: w + half * y + p + t + half * x * z - quarter * z * q,
        U.QV: q - z,
        U.P: p - eighth * z**2,
    }
    m = BirationalMap({k: RationalExpr(v) for k, v in fwd.items()}, IDENTITY_ACTION, "phi2")
    # inverse in the new coordinates (stored in the same variable slots)
    xi = x + half * z
    yi = y - quarter * z**2
    qi = q + z
    pi_ = p + eighth * z**2
    wi = w - half * yi - pi_ - t - half * xi * z + quarter * z * qi
    inv = {U.X: xi, U.Y: yi, U.Z: z, U.W: wi, U.QV: qi, U.P: pi_}

    names = list(U.PHASE)
    brackets = {}
    symplectic = True
    for a_i, a in enumerate(names):
        for b in names[a_i + 1:]:
            val = poisson_bracket(fwd[b], fwd[a])
            brackets[(U.name(b), U.name(a))] = val
            expected = 1 if (a, b) in ((U.X, U.Y), (U.Z, U.W), (U.QV, U.P)) else 0
            if val != expected:
                symplectic = False

    roundtrip = all(
        Poly.var(i) == fwd[i].compose(inv) for i in U.PHASE
    )
    # transformed w2-equation: d(w2)/dt along the flow, rewritten in new coordinates
    sys = HamiltonianSystem(eliminate_alpha0(_hamiltonian()))
    dw2 = total_time_derivative(fwd[U.W], sys)
    dw2_new = specialize_alpha_zero(dw2, 2).compose(inv)
    invariant = roundtrip and dw2_new.reduce_mod(w, U.W).is_zero
    return ParticularTransformReport(
        m, inv, fwd[U.W] == f2, symplectic and roundtrip, invariant, brackets
    )


def _hamiltonian():
    from .hamiltonian import build_hamiltonian

    return build_hamiltonian()


# ---------------------------------------------------------------------------
# translations

TRANSLATION_WORDS = {
    1: [1, 2, 3, 2, 1, 0],
}
TRANSLATION_WORDS[2] = [1] + TRANSLATION_WORDS[1] + [1]
TRANSLATION_WORDS[3] = [2] + TRANSLATION_WORDS[2] + [2]
EXPECTED_SHIFTS = {1: (-2, 2, 0, 0), 2: (0, -2, 2, 0), 3: (0, 0, -2, 2)}


@dataclass
class Translation:
    k: int
    word: list
    param_action: tuple
    shift: tuple
    map: BirationalMap | None  # None when the phase composition exceeded its budget

    @property
    def matches(self) -> bool:
        return self.shift == EXPECTED_SHIFTS[self.k]


def translation(k: int, symbolic: bool = False, budget: int = DEFAULT_BUDGET) -> Translation:
    word = TRANSLATION_WORDS[k]
    action = compose_param_action(word)
    # shift = action(alpha) - alpha for alpha on the sum-1 slice; must be constant
    shifts = set()
    for base in ([Q(1), Q(0), Q(0), Q(0)], [Q(0), Q(0), Q(0), Q(1)], [Q(1, 3), Q(1, 5), Q(-2, 7), Q(1) - Q(1, 3) - Q(1, 5) + Q(2, 7)]):
        img = apply_param_action(action, base)
        shifts.add(tuple(int(a - b) if (a - b).denominator == 1 else a - b for a, b in zip(img, base)))
    shift = shifts.pop() if len(shifts) == 1 else None
    phase_map = None
    if symbolic:
        try:
            phase_map = compose(word, budget=budget)
        except BudgetExceeded:
            phase_map = None
    return Translation(k, word, action, shift, phase_map)

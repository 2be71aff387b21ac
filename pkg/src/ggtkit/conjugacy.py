"""Conjugacy deciders and conjugator-length machinery.

Solvers never overclaim: a negative answer carries a model-specific
certificate (abelianization mismatch, cyclic-word inequality, unsolvable
central system, exhausted finite group); everything else at bounded search
radius is reported Unknown.  Every returned witness g is re-verified by
exact multiplication (g^-1 u g = v) before it leaves the module.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cayley import Ball, ball
from .config import DEFAULT_BALL_CAP, DEFAULT_FIT_CAP, DEFAULT_RADIUS_CAP
from .errors import DomainError, UnsupportedCase
from .exactla import reduce_by_kernel, smith_normal_form, solve_integer_system  # noqa: F401
from .groups import (
    Element,
    FiniteGroup,
    FreeAbelian,
    FreeGroup,
    FreeProduct,
    GroupModel,
    TwoStepNilpotent,
    cyclic_reduce,
    exact_length,
)
from .rdalgebra import BoundingFunction

CONJUGATE = "conjugate"
NOT_CONJUGATE = "not_conjugate"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConjugacyResult:
    status: str
    witness: Optional[Element] = None
    witness_length: Optional[int] = None
    searched_radius: Optional[int] = None
    certificate: Optional[str] = None

    @property
    def is_conjugate(self) -> bool:
        return self.status == CONJUGATE

    def as_dict(self, model: Optional[GroupModel] = None) -> dict:
        out = {"status": self.status}
        if self.witness is not None and model is not None:
            out["witness"] = model.element_str(self.witness)
        if self.witness_length is not None:
            out["witness_length"] = self.witness_length
        if self.searched_radius is not None:
            out["searched_radius"] = self.searched_radius
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def _length_hint(model: GroupModel, g: Element) -> int:
    # a radius certain to contain g: spell every coordinate as a letter
    if isinstance(model, TwoStepNilpotent):
        return sum(abs(v) for v in g[0]) + sum(abs(v) for v in g[1])
    if isinstance(model, FiniteGroup):
        return model.order
    return DEFAULT_RADIUS_CAP


def verified_conjugate(model: GroupModel, u: Element, v: Element, g: Element) -> ConjugacyResult:
    """Wrap a witness after re-checking g^-1 u g = v by exact multiplication."""
    if model.conjugate(g, u) != v:
        raise DomainError("internal error: witness fails verification")
    length = exact_length(model, g, _length_hint(model, g))
    return ConjugacyResult(CONJUGATE, witness=g, witness_length=length)


def _exponent_sums(rank: int, word) -> tuple:
    sums = [0] * rank
    for letter in word:
        sums[abs(letter) - 1] += 1 if letter > 0 else -1
    return tuple(sums)


def _negative_certificate(model: GroupModel, u: Element, v: Element) -> Optional[str]:
    """A proof that u and v cannot be conjugate, when one is cheap."""
    if isinstance(model, FreeAbelian):
        return None if u == v else "abelian group: conjugacy is equality"
    if isinstance(model, TwoStepNilpotent):
        if u[0] != v[0]:
            return "abelianization mismatch: conjugation fixes the base image"
        return None
    if isinstance(model, FreeGroup):
        if _exponent_sums(model.rank, u) != _exponent_sums(model.rank, v):
            return "abelianization mismatch: exponent sums differ"
        if len(cyclic_reduce(u)[1]) != len(cyclic_reduce(v)[1]):
            return "cyclic reduction lengths differ"
        return None
    return None


def brute_force_conjugator(
    model: GroupModel,
    u: Element,
    v: Element,
    radius: int,
    *,
    ball_cap: int = DEFAULT_BALL_CAP,
    search_ball: Optional[Ball] = None,
) -> ConjugacyResult:
    """Scan the ball in BFS order for the first (hence shortest) conjugator."""
    model.validate_element(u)
    model.validate_element(v)
    if u == v:
        return verified_conjugate(model, u, v, model.identity())
    certificate = _negative_certificate(model, u, v)
    if certificate is not None:
        return ConjugacyResult(NOT_CONJUGATE, certificate=certificate)
    sb = search_ball if search_ball is not None else ball(model, radius, cap=ball_cap)
    for gi, g in enumerate(sb.elements):
        if model.conjugate(g, u) == v:  # the scan condition is the exact verification
            return ConjugacyResult(
                CONJUGATE, witness=g, witness_length=sb.lengths[gi], searched_radius=sb.radius
            )
    if isinstance(model, FiniteGroup) and len(sb.elements) == model.order:
        return ConjugacyResult(
            NOT_CONJUGATE, searched_radius=sb.radius, certificate="exhausted finite group"
        )
    return ConjugacyResult(UNKNOWN, searched_radius=sb.radius)


def bounded_conjugacy(
    model: GroupModel,
    u: Element,
    v: Element,
    bound: BoundingFunction,
    *,
    length_cap: int = DEFAULT_RADIUS_CAP,
    ball_cap: int = DEFAULT_BALL_CAP,
    theory_backed: bool = False,
) -> ConjugacyResult:
    """Brute-force search out to radius bound(L(u) + L(v)).

    With ``theory_backed=True`` the caller asserts the model provably has a
    solvable conjugacy bound with this function, upgrading Unknown to a
    flagged NotConjugate.
    """
    total = exact_length(model, u, length_cap) + exact_length(model, v, length_cap)
    radius = int(math.ceil(bound(total)))
    result = brute_force_conjugator(model, u, v, radius, ball_cap=ball_cap)
    if result.status == UNKNOWN and theory_backed:
        return ConjugacyResult(
            NOT_CONJUGATE,
            searched_radius=result.searched_radius,
            certificate="theory-backed: search exhausted the guaranteed bound",
        )
    return result


@dataclass(frozen=True)
class IntegerLinearSystem:
    """A z = rhs over the integers; rows are central coordinates, columns
    the unknown base exponents of the conjugator."""

    A: tuple  # n_central rows x m columns
    rhs: tuple

    def __post_init__(self):
        if any(len(row) != len(self.A[0]) for row in self.A):
            raise DomainError("ragged system matrix")
        if len(self.rhs) != len(self.A):
            raise DomainError("system dimensions inconsistent")


def nilpotent_central_system(
    model: TwoStepNilpotent, u: Element, v: Element
) -> IntegerLinearSystem:
    """The central equation a conjugator (z, *) of u into v must satisfy.

    With u = (x, c_u), v = (x, c_v) and this module's collection convention,

        sum_{i>j} (x_j z_i - x_i z_j) C[i][j] = c_v - c_u

    i.e. row t, column l has coefficient sum_{j != l} x_j C[l][j][t].
    """
    x, cu = u
    _, cv = v
    A = tuple(
        tuple(sum(x[j] * model.C[l][j][t] for j in range(model.m) if j != l) for l in range(model.m))
        for t in range(model.n)
    )
    return IntegerLinearSystem(A, tuple(cv[t] - cu[t] for t in range(model.n)))


def nilpotent_conjugator(model: TwoStepNilpotent, u: Element, v: Element) -> ConjugacyResult:
    """Complete conjugacy decision for the two-step nilpotent models.

    Equal base parts are necessary; the central equation (see
    nilpotent_central_system) is then solved over Z by Smith normal form,
    and the particular solution is shrunk by kernel vectors before the
    witness is verified.
    """
    if not isinstance(model, TwoStepNilpotent):
        raise UnsupportedCase("nilpotent solver needs a two-step nilpotent model")
    model.validate_element(u)
    model.validate_element(v)
    x, cu = u
    y, cv = v
    if x != y:
        return ConjugacyResult(
            NOT_CONJUGATE, certificate="abelianization mismatch: conjugation fixes the base image"
        )
    system = nilpotent_central_system(model, u, v)
    z, kernel = solve_integer_system([list(r) for r in system.A], list(system.rhs))
    if z is None:
        return ConjugacyResult(
            NOT_CONJUGATE, certificate="central linear system unsolvable over Z"
        )
    z = reduce_by_kernel(z, kernel)
    witness = (tuple(z), (0,) * model.n)
    return verified_conjugate(model, u, v, witness)


def free_group_conjugacy(model: FreeGroup, u: Element, v: Element) -> ConjugacyResult:
    """Exact free-group conjugacy via cyclic reduction and rotation matching."""
    if not isinstance(model, FreeGroup):
        raise UnsupportedCase("free solver needs a free group model")
    model.validate_element(u)
    model.validate_element(v)
    p1, c1 = cyclic_reduce(u)
    p2, c2 = cyclic_reduce(v)
    if len(c1) != len(c2):
        return ConjugacyResult(NOT_CONJUGATE, certificate="cyclic reduction lengths differ")
    if not c1:
        return verified_conjugate(model, u, v, model.identity())
    n = len(c1)
    best: Optional[tuple] = None
    for k in range(n):
        if c1[k:] + c1[:k] == c2:
            g = model.multiply(model.multiply(p1, c1[:k]), model.inverse(p2))
            if best is None or len(g) < len(best):
                best = g
    if best is None:
        return ConjugacyResult(
            NOT_CONJUGATE, certificate="cyclic words are not rotations of each other"
        )
    return verified_conjugate(model, u, v, best)


# ---------------------------------------------------------------------------
# element classification in free products


@dataclass(frozen=True)
class ElementClass:
    kind: str  # "identity" | "parabolic" | "hyperbolic"
    factor: Optional[int] = None
    witness: Optional[Element] = None  # w with w^-1 u w in the factor


def classify_element(model: FreeProduct, u: Element) -> ElementClass:
    """Parabolic iff conjugate into a factor; decided by cyclic syllable
    reduction, with the reduction prefix as the conjugating witness."""
    if not isinstance(model, FreeProduct):
        raise UnsupportedCase("classification needs a free product model")
    model.validate_element(u)
    if u == ():
        return ElementClass("identity")
    prefix, core = model.cyclic_syllable_reduce(u)
    if len(core) == 1:
        if model.conjugate(prefix, u) != core:
            raise DomainError("internal error: reduction prefix fails verification")
        return ElementClass("parabolic", factor=core[0][0], witness=prefix)
    return ElementClass("hyperbolic")


# ---------------------------------------------------------------------------
# centralizers


def _free_primitive_root(model: FreeGroup, h: Element) -> Element:
    prefix, core = cyclic_reduce(h)
    n = len(core)
    period = n
    for d in range(1, n):
        if n % d == 0 and core == core[:d] * (n // d):
            period = d
            break
    return model.multiply(model.multiply(prefix, core[:period]), model.inverse(prefix))


def centralizer_generators(
    model: GroupModel,
    h: Element,
    radius: int,
    *,
    ball_cap: int = DEFAULT_BALL_CAP,
    search_ball: Optional[Ball] = None,
) -> list:
    """Generators of the ball-restricted centralizer of h.

    Exact for finite groups once the radius covers the group; free groups
    get the primitive root of h.  Otherwise: all commuting ball elements,
    greedily reduced by subgroup closure within the ball.
    """
    model.validate_element(h)
    if h == model.identity():
        return model.positive_generators()
    if isinstance(model, FreeGroup):
        return [_free_primitive_root(model, h)]
    sb = search_ball if search_ball is not None else ball(model, radius, cap=ball_cap)
    commuting = [i for i, g in enumerate(sb.elements) if model.commutes(g, h)]
    generators: list = []
    known = {0}
    for i in commuting:
        if i in known or i == 0:
            continue
        generators.append(sb.elements[i])
        # re-close the generated set inside the ball
        step_elems = []
        for g in generators:
            step_elems.append(g)
            step_elems.append(model.inverse(g))
        frontier = [0]
        known = {0}
        while frontier:
            nxt = []
            for j in frontier:
                for s in step_elems:
                    w = model.multiply(sb.elements[j], s)
                    wj = sb.index.get(w)
                    if wj is not None and wj not in known:
                        known.add(wj)
                        nxt.append(wj)
            frontier = nxt
    return generators


# ---------------------------------------------------------------------------
# conjugacy-bound profiler


@dataclass(frozen=True)
class ProfileRecord:
    u: Element
    v: Element
    input_length: int
    min_conjugator_length: int
    witness: Element
    class_rep: int  # ball index of the class representative


@dataclass(frozen=True)
class ProfileFit:
    degree: Optional[int]
    constant: Optional[Fraction]
    per_degree: dict  # degree -> minimal dominating constant
    dominated: bool


@dataclass
class ProfileResult:
    model: GroupModel
    radius: int
    search_radius: int
    records: list
    fit: ProfileFit
    unknown_pairs: list  # (u, v) solver says conjugate, no witness in search radius
    notes: list

    def csv_rows(self) -> list:
        rows = [("input_length", "u", "v", "min_conj_length", "class_rep")]
        for rec in self.records:
            rows.append(
                (
                    rec.input_length,
                    self.model.element_str(rec.u),
                    self.model.element_str(rec.v),
                    rec.min_conjugator_length,
                    rec.class_rep,
                )
            )
        return rows


def _scan_chunk(args):
    model, u_list, sb_elements, sb_lengths, target_index = args
    found = {}
    for ui, u in u_list:
        for gi, g in enumerate(sb_elements):
            w = model.conjugate(g, u)
            vi = target_index.get(w)
            if vi is not None:
                key = (ui, vi)
                if key not in found:
                    found[key] = (sb_lengths[gi], gi)
    return found


def _exact_solver_for(model: GroupModel):
    if isinstance(model, FreeGroup):
        return lambda u, v: free_group_conjugacy(model, u, v)
    if isinstance(model, TwoStepNilpotent):
        return lambda u, v: nilpotent_conjugator(model, u, v)
    if isinstance(model, FreeAbelian):
        return lambda u, v: (
            verified_conjugate(model, u, v, model.identity())
            if u == v
            else ConjugacyResult(NOT_CONJUGATE, certificate="abelian")
        )
    if isinstance(model, FiniteGroup):
        full = ball(model, model.order)
        return lambda u, v: brute_force_conjugator(model, u, v, model.order, search_ball=full)
    return None


def fit_dominating_bound(
    records: Sequence[ProfileRecord],
    *,
    fit_cap: Fraction = DEFAULT_FIT_CAP,
    max_degree: int = 6,
) -> ProfileFit:
    """Least degree d with min_length <= A (1 + input_length)^d for all
    records and minimized A <= fit_cap."""
    per_degree = {}
    for d in range(max_degree + 1):
        A = Fraction(0)
        for rec in records:
            need = Fraction(rec.min_conjugator_length, (1 + rec.input_length) ** d)
            if need > A:
                A = need
        per_degree[d] = A
    for d in range(max_degree + 1):
        if per_degree[d] <= fit_cap:
            return ProfileFit(d, per_degree[d], per_degree, True)
    return ProfileFit(None, None, per_degree, False)


def profile_conjugacy_bound(
    model: GroupModel,
    radius: int,
    solver: str = "auto",
    *,
    slack: int = 2,
    fit_cap: Fraction = DEFAULT_FIT_CAP,
    max_degree: int = 6,
    ball_cap: int = DEFAULT_BALL_CAP,
    parallelism: int = 1,
    base_ball: Optional[Ball] = None,
    search_ball: Optional[Ball] = None,
) -> ProfileResult:
    """Minimal conjugator lengths for every conjugate pair in the ball.

    Conjugacy is decided by brute force within radius 2*radius + slack; an
    exact solver (chosen per model unless ``solver='brute'``) reports the
    conjugate pairs whose witnesses exceeded the search radius, so nothing
    is dropped silently.
    """
    notes: list[str] = []
    b = base_ball if base_ball is not None else ball(model, radius, cap=ball_cap)
    search_radius = 2 * radius + slack
    sb = (
        search_ball
        if search_ball is not None
        else ball(model, search_radius, cap=ball_cap)
    )

    u_items = list(enumerate(b.elements))
    if parallelism > 1:
        chunks = [u_items[i::parallelism] for i in range(parallelism)]
        args = [(model, chunk, sb.elements, sb.lengths, b.index) for chunk in chunks if chunk]
        found: dict = {}
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for part in pool.map(_scan_chunk, args):
                found.update(part)  # chunks cover disjoint (ui, vi) keys
    else:
        found = _scan_chunk((model, u_items, sb.elements, sb.lengths, b.index))

    # connected components of the found pairs = conjugacy classes in the ball
    parent = list(range(len(b.elements)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for ui, vi in found:
        ri, rj = find(ui), find(vi)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    records = []
    for (ui, vi), (length, gi) in found.items():
        records.append(
            ProfileRecord(
                u=b.elements[ui],
                v=b.elements[vi],
                input_length=b.lengths[ui] + b.lengths[vi],
                min_conjugator_length=length,
                witness=sb.elements[gi],
                class_rep=find(ui),
            )
        )
    order = {e: i for i, e in enumerate(b.elements)}
    records.sort(key=lambda r: (r.input_length, order[r.u], order[r.v]))

    unknown_pairs = []
    exact = None if solver == "brute" else _exact_solver_for(model)
    if solver not in ("auto", "brute"):
        wanted = {"free": FreeGroup, "nilpotent": TwoStepNilpotent}.get(solver)
        if wanted is None or not isinstance(model, wanted):
            raise DomainError(f"solver {solver!r} does not apply to {model!r}")
    if exact is None:
        if solver != "brute":
            notes.append(
                "no exact solver for this model: pairs beyond the search radius "
                "are undetectable and are not reported"
            )
    else:
        for ui in range(len(b.elements)):
            for vi in range(len(b.elements)):
                if (ui, vi) not in found:
                    if exact(b.elements[ui], b.elements[vi]).is_conjugate:
                        unknown_pairs.append((b.elements[ui], b.elements[vi]))

    fit = fit_dominating_bound(records, fit_cap=fit_cap, max_degree=max_degree)
    return ProfileResult(
        model=model,
        radius=radius,
        search_radius=search_radius,
        records=records,
        fit=fit,
        unknown_pairs=unknown_pairs,
        notes=notes,
    )

"""Mappings on a domain, composition, commutativity, and a builtin gallery.

A Mapping bundles a point function with the domain it acts on, a label, and
any known fixed points (verified to 1e-10 at registration). Registration
runs an empirical self-map check over a sample plan by default; mappings
whose codomain extends beyond the domain can opt out with self_map=False,
in which case only evaluation-time input checks guard them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ContractViolation, DomainError, InvalidInputError, PreconditionError
from .vecspace import (Domain, NormKind, SamplePlan, Vector, as_vector, dist,
                       norm, sample)
from .verdicts import Verdict, Witness

FIXED_POINT_TOL = 1e-10

_DEFAULT_REGISTRATION_PLAN = SamplePlan.grid(5)


@dataclass(eq=False)
class Mapping:
    """A labelled point mapping on a fixed domain."""

    fn: Callable[[np.ndarray], np.ndarray]
    domain: Domain
    label: str
    known_fixed_points: tuple[Vector, ...] = ()
    self_map: bool = True

    def __repr__(self) -> str:  # keep reports readable
        return f"Mapping({self.label!r} on {self.domain.shape} d={self.domain.dimension})"


def register_mapping(fn: Callable[[np.ndarray], np.ndarray],
                     domain: Domain,
                     label: str,
                     known_fixed_points: Optional[Sequence] = None,
                     plan: Optional[SamplePlan] = None,
                     self_map: bool = True) -> Mapping:
    """Build a Mapping, checking the self-map property and fixed points.

    The self-map check is empirical: every point of `plan` (default: a
    5-per-axis grid) must map back into the domain. Each claimed fixed
    point must satisfy ||T(z) - z|| <= 1e-10 under the domain norm.
    """
    kfp = tuple(as_vector(z) for z in (known_fixed_points or ()))
    for z in kfp:
        if not domain.contains(z):
            raise ContractViolation(
                f"mapping {label!r}: claimed fixed point {z.tolist()} lies outside the domain")
        image = as_vector(fn(z))
        gap = dist(image, z, domain.norm_kind)
        if gap > FIXED_POINT_TOL:
            raise ContractViolation(
                f"mapping {label!r}: claimed fixed point {z.tolist()} moves by {gap:.3e}")
    if self_map:
        for p in sample(domain, plan or _DEFAULT_REGISTRATION_PLAN):
            image = as_vector(fn(p))
            if not domain.contains(image):
                raise ContractViolation(
                    f"mapping {label!r} is not a self-map: {p.tolist()} -> {image.tolist()}")
    return Mapping(fn=fn, domain=domain, label=label,
                   known_fixed_points=kfp, self_map=self_map)


def evaluate(T: Mapping, x) -> Vector:
    """T(x) with input validation: x must be finite and inside T's domain."""
    v = as_vector(x)
    if v.shape != (T.domain.dimension,):
        raise DomainError(
            f"point of dimension {v.shape[0]} fed to {T.label!r} on a "
            f"{T.domain.dimension}-d domain")
    if not T.domain.contains(v):
        raise DomainError(f"{v.tolist()} is outside the domain of {T.label!r}")
    return as_vector(T.fn(v))


def compose(S: Mapping, T: Mapping, plan: Optional[SamplePlan] = None) -> Mapping:
    """The composite x -> S(T(x)), registered on the shared domain.

    Pointwise the composite equals evaluate(S, evaluate(T, x)) bitwise: the
    same two raw calls run in the same order. Fixed-point candidates are
    taken from both factors' lists and kept only if the composite actually
    fixes them.
    """
    if S.domain != T.domain:
        raise ContractViolation(
            f"cannot compose {S.label!r} with {T.label!r}: different domains")
    sfn, tfn = S.fn, T.fn

    def composite(x, _s=sfn, _t=tfn):
        return _s(_t(x))

    candidates: list[Vector] = []
    seen = set()
    for z in (*S.known_fixed_points, *T.known_fixed_points):
        key = z.tobytes()
        if key in seen:
            continue
        seen.add(key)
        if dist(as_vector(composite(z)), z, S.domain.norm_kind) <= FIXED_POINT_TOL:
            candidates.append(z)
    return register_mapping(composite, S.domain, f"{S.label}∘{T.label}",
                            known_fixed_points=candidates or None, plan=plan)


def check_commuting(S: Mapping, T: Mapping, plan: SamplePlan) -> Verdict:
    """Scan for points where S(T(x)) and T(S(x)) differ by more than epsilon.

    Samples are visited in plan order and the scan stops at the first
    violation, so the witness is deterministic and a violation is reported
    even when later samples would leave the domain under one of the maps.
    On a pass the maximum observed gap is recorded.
    """
    if S.domain != T.domain:
        raise ContractViolation(
            f"cannot compare {S.label!r} and {T.label!r}: different domains")
    label = f"commuting({S.label},{T.label})"
    pts = sample(S.domain, plan)
    worst = 0.0
    for i, x in enumerate(pts):
        left = evaluate(S, evaluate(T, x))
        right = evaluate(T, evaluate(S, x))
        gap = dist(left, right, S.domain.norm_kind)
        if gap > plan.epsilon:
            return Verdict(condition_label=label, passed=False, checked_pairs=i + 1,
                           witness=Witness.at(x, lhs=gap, rhs=0.0,
                                              left_value=left, right_value=right),
                           plan=plan)
        worst = max(worst, gap)
    return Verdict(condition_label=label, passed=True, checked_pairs=len(pts),
                   plan=plan, observed_max=worst)


@dataclass(eq=False)
class MappingFamily:
    """Mappings sharing one domain, optionally with a commuting certificate."""

    members: tuple[Mapping, ...]
    commuting_certificate: Optional[Verdict] = None

    def __post_init__(self):
        if not self.members:
            raise ContractViolation("a mapping family needs at least one member")
        d0 = self.members[0].domain
        for m in self.members[1:]:
            if m.domain != d0:
                raise ContractViolation(
                    f"family members {self.members[0].label!r} and {m.label!r} "
                    "live on different domains")

    @property
    def domain(self) -> Domain:
        return self.members[0].domain

    def __len__(self) -> int:
        return len(self.members)


def make_family(members: Sequence[Mapping],
                plan: Optional[SamplePlan] = None) -> MappingFamily:
    """Bundle mappings into a family; with a plan, certify pairwise commuting.

    The certificate is the merged outcome over all unordered pairs: a pass
    records the largest commutator gap seen anywhere, a fail carries the
    first failing pair's witness.
    """
    fam = MappingFamily(members=tuple(members))
    if plan is not None:
        worst = 0.0
        cert: Optional[Verdict] = None
        checked = 0
        for i in range(len(fam.members)):
            for j in range(i + 1, len(fam.members)):
                v = check_commuting(fam.members[i], fam.members[j], plan)
                checked += v.checked_pairs
                if not v.passed:
                    cert = Verdict(condition_label=v.condition_label, passed=False,
                                   checked_pairs=checked, witness=v.witness, plan=plan)
                    break
                worst = max(worst, v.observed_max or 0.0)
            if cert is not None:
                break
        if cert is None:
            cert = Verdict(condition_label="commuting(family)", passed=True,
                           checked_pairs=checked, plan=plan, observed_max=worst)
        fam.commuting_certificate = cert
    return fam


def common_fixed_points(family: MappingFamily,
                        tol: float = FIXED_POINT_TOL) -> tuple[Vector, ...]:
    """Known fixed points that every member actually fixes within `tol`.

    Candidates come from the members' known_fixed_points lists and are
    re-verified by evaluation, so the result never trusts a stale claim.
    """
    out: list[Vector] = []
    seen = set()
    for m in family.members:
        for z in m.known_fixed_points:
            key = z.tobytes()
            if key in seen:
                continue
            seen.add(key)
            if all(dist(as_vector(t.fn(z)), z, family.domain.norm_kind) <= tol
                   for t in family.members):
                out.append(z)
    return tuple(out)


# ---------------------------------------------------------------------------
# builtin gallery
# ---------------------------------------------------------------------------

def piecewise_map(domain: Domain, default: float,
                  cases: Sequence[tuple[float, float]],
                  label: str = "piecewise",
                  known_fixed_points: Optional[Sequence] = None,
                  plan: Optional[SamplePlan] = None) -> Mapping:
    """1-d map equal to `default` except at finitely many exact coordinates.

    Case matching is exact float equality; the exceptional coordinates are
    meant to be grid endpoints, which linspace reproduces exactly.
    """
    if domain.dimension != 1:
        raise ContractViolation("piecewise_map is 1-dimensional")
    table = {float(x): float(v) for x, v in cases}

    def fn(p, _table=table, _default=float(default)):
        return np.array([_table.get(float(p[0]), _default)])

    return register_mapping(fn, domain, label,
                            known_fixed_points=known_fixed_points, plan=plan)


def example1_map(domain: Optional[Domain] = None) -> Mapping:
    """Piecewise interval map: 0 everywhere except the right endpoint 4 -> 2.

    Discontinuous at 4, not nonexpansive, but quasi-nonexpansive with fixed
    point 0. The canonical stress case for the condition checks.
    """
    dom = domain or Domain.box([0.0], [4.0])
    return piecewise_map(dom, default=0.0, cases=[(4.0, 2.0)],
                         label="example1", known_fixed_points=[[0.0]])


def identity_map(domain: Domain, label: str = "identity") -> Mapping:
    kfp = None
    center = np.zeros(domain.dimension)
    if domain.contains(center):
        kfp = [center]
    return register_mapping(lambda p: p, domain, label, known_fixed_points=kfp)


def constant_map(domain: Domain, value: Sequence[float],
                 label: Optional[str] = None) -> Mapping:
    v = as_vector(value)
    if not domain.contains(v):
        raise ContractViolation(f"constant value {v.tolist()} lies outside the domain")

    def fn(p, _v=v):
        return _v

    return register_mapping(fn, domain, label or f"constant{v.tolist()}",
                            known_fixed_points=[v])


def affine_map(domain: Domain, matrix: Sequence[Sequence[float]],
               shift: Sequence[float], label: str = "affine",
               plan: Optional[SamplePlan] = None) -> Mapping:
    """x -> A x + b. If I - A is invertible and the solution lies in the
    domain, its fixed point is recorded."""
    A = np.asarray(matrix, dtype=float)
    b = as_vector(shift)
    d = domain.dimension
    if A.shape != (d, d) or b.shape != (d,):
        raise ContractViolation(
            f"affine map shapes {A.shape}/{b.shape} do not fit dimension {d}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("non-finite entry in affine matrix")
    kfp = None
    try:
        z = np.linalg.solve(np.eye(d) - A, b)
        if domain.contains(z) and dist(A @ z + b, z, domain.norm_kind) <= FIXED_POINT_TOL:
            kfp = [z]
    except np.linalg.LinAlgError:
        pass

    def fn(p, _A=A, _b=b):
        return _A @ p + _b

    return register_mapping(fn, domain, label, known_fixed_points=kfp, plan=plan)


def scaling_map(domain: Domain, factor: float,
                label: Optional[str] = None) -> Mapping:
    a = float(factor)

    def fn(p, _a=a):
        return _a * p

    kfp = None
    origin = np.zeros(domain.dimension)
    if domain.contains(origin):
        kfp = [origin]
    return register_mapping(fn, domain, label or f"scaling({a})",
                            known_fixed_points=kfp)


def rotation_scaling_map(domain: Domain, angle: float, factor: float = 1.0,
                         label: Optional[str] = None) -> Mapping:
    """Planar rotation by `angle` radians followed by scaling by `factor`."""
    if domain.dimension != 2:
        raise ContractViolation("rotation_scaling_map needs a 2-d domain")
    c, s = math.cos(angle), math.sin(angle)
    R = float(factor) * np.array([[c, -s], [s, c]])

    def fn(p, _R=R):
        return _R @ p

    kfp = [np.zeros(2)] if domain.contains(np.zeros(2)) else None
    return register_mapping(fn, domain, label or f"rotation_scaling({angle:g},{factor:g})",
                            known_fixed_points=kfp)


def translation_map(domain: Domain, offset: Sequence[float],
                    label: Optional[str] = None) -> Mapping:
    """x -> x + offset. Never a self-map of a bounded set, so it registers
    without the self-map check; useful as a commutativity counterexample."""
    v = as_vector(offset)

    def fn(p, _v=v):
        return p + _v

    return register_mapping(fn, domain, label or f"translation{v.tolist()}",
                            self_map=False)


GALLERY_BOX = Domain.box([-1.0, -1.0], [1.0, 1.0])
GALLERY_BALL = Domain.ball([0.0, 0.0], 1.0)

#: Matrix with spectral norm ~0.609 < 1; fixed point (3/7, -2/7).
GALLERY_AFFINE_MATRIX = ((0.6, 0.1), (-0.1, 0.5))
GALLERY_AFFINE_SHIFT = (0.2, -0.1)


def builtin_gallery() -> list[Mapping]:
    """The standing test gallery. Every member passes registration checks."""
    return [
        example1_map(),
        identity_map(GALLERY_BOX),
        constant_map(GALLERY_BOX, [0.3, -0.2]),
        affine_map(GALLERY_BOX, GALLERY_AFFINE_MATRIX, GALLERY_AFFINE_SHIFT,
                   label="affine_contraction"),
        scaling_map(GALLERY_BALL, 0.9),
        scaling_map(GALLERY_BALL, 0.7),
        scaling_map(GALLERY_BALL, 0.5),
        rotation_scaling_map(GALLERY_BALL, math.pi / 6, 0.8),
    ]


def build_mapping(descriptor: dict, domain: Domain) -> Mapping:
    """Construct a mapping on `domain` from a config descriptor.

    Recognized names: example1, identity, constant, affine, scaling,
    rotation_scaling, piecewise, translation. Extra fixed points may be
    supplied under "fixed_points"; they are verified at registration.
    """
    if "name" not in descriptor:
        raise ContractViolation("mapping descriptor lacks a 'name'")
    name = descriptor["name"]
    extra = descriptor.get("fixed_points")
    try:
        if name == "example1":
            m = example1_map(domain)
        elif name == "identity":
            m = identity_map(domain)
        elif name == "constant":
            m = constant_map(domain, descriptor["value"])
        elif name == "affine":
            m = affine_map(domain, descriptor["matrix"], descriptor["shift"],
                           label=descriptor.get("label", "affine"))
        elif name == "scaling":
            m = scaling_map(domain, descriptor["factor"])
        elif name == "rotation_scaling":
            m = rotation_scaling_map(domain, descriptor["angle"],
                                     descriptor.get("factor", 1.0))
        elif name == "piecewise":
            m = piecewise_map(domain, descriptor["default"],
                              [(c[0], c[1]) for c in descriptor["cases"]],
                              label=descriptor.get("label", "piecewise"))
        elif name == "translation":
            m = translation_map(domain, descriptor["offset"])
        else:
            raise ContractViolation(f"unknown builtin mapping {name!r}")
    except KeyError as exc:
        raise ContractViolation(
            f"mapping descriptor {name!r} lacks required key {exc.args[0]!r}") from exc
    if extra:
        kfp = list(m.known_fixed_points)
        have = {z.tobytes() for z in kfp}
        for z in extra:
            zv = as_vector(z)
            gap = dist(as_vector(m.fn(zv)), zv, domain.norm_kind)
            if gap > FIXED_POINT_TOL:
                raise ContractViolation(
                    f"declared fixed point {zv.tolist()} of {m.label!r} moves by {gap:.3e}")
            if zv.tobytes() not in have:
                kfp.append(zv)
        m.known_fixed_points = tuple(kfp)
    return m

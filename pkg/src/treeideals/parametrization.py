"""The ring maps of the tree parametrisation and the toricity decision.

Two maps are implemented, both sending an atom symbol p_i to the label
product of its root-to-leaf path.  The monomial map keeps the image in
the full label ring; the quotient map follows it with the sum-to-one
reduction, which substitutes one designated label per stage class by
1 minus the sum of the others.  Because those relations are linear, use
one eliminated symbol per class, and never mention an eliminated symbol
on a right-hand side, a single simultaneous substitution is a complete
normal form: a polynomial lies in the kernel exactly when its reduced
image is zero.  No ideal-membership machinery is needed anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import ForeignSymbol, InvalidSimplexPoint, UnboundSymbol
from .ideals import (
    GeneratorSet,
    _aligned_children,
    model_invariant_generators,
    mpaths_generators,
    paths_ideal_generators,
)
from .polycore import Polynomial, Scalar, Symbol
from .stagedtree import StagedTree


def _require_p_ring(t: StagedTree, f: Polynomial) -> None:
    allowed = set(t.atom_symbols)
    foreign = sorted(
        (s for s in f.symbols() if s not in allowed), key=lambda s: s.index
    )
    if foreign:
        names = ", ".join(s.name for s in foreign)
        raise ForeignSymbol(f"not in the atom ring of this tree: {names}")


def atom_images(t: StagedTree) -> dict[Symbol, Polynomial]:
    """p_i -> product of the edge labels along the i-th path."""
    return {a.symbol: Polynomial.term(1, a.monomial) for a in t.atoms}


def phi_toric_image(t: StagedTree, f: Polynomial) -> Polynomial:
    """Image under the monomial map; zero iff f is in its kernel."""
    _require_p_ring(t, f)
    return f.substitute(atom_images(t))


@dataclass(frozen=True)
class SumToOneReduction:
    """Per stage class: one eliminated label and its replacement.

    The eliminated symbol is the last label in the class's declaration
    order; its replacement is 1 - (sum of the other labels of the class).
    """

    eliminated: tuple[Symbol, ...]
    substitution: dict[Symbol, Polynomial]

    @classmethod
    def for_tree(cls, t: StagedTree) -> "SumToOneReduction":
        eliminated: list[Symbol] = []
        substitution: dict[Symbol, Polynomial] = {}
        for stage in t.stage_classes():
            last = stage.labels[-1]
            others = stage.labels[:-1]
            replacement = Polynomial.one()
            for s in others:
                replacement = replacement - Polynomial.variable(s)
            eliminated.append(last)
            substitution[last] = replacement
        return cls(tuple(eliminated), substitution)

    def apply(self, f: Polynomial) -> Polynomial:
        return f.substitute(self.substitution)


def phi_image(t: StagedTree, f: Polynomial) -> Polynomial:
    """Monomial image reduced by sum-to-one; zero iff f is in ker phi."""
    return SumToOneReduction.for_tree(t).apply(phi_toric_image(t, f))


# -- condition on subtree polynomials ----------------------------------


@dataclass(frozen=True)
class StarWitness:
    i: int
    j: int
    label_i: str
    label_j: str
    difference: Polynomial

    def __str__(self) -> str:
        return (
            f"aligned labels ({self.label_i}, {self.label_j}) "
            f"[indices {self.i},{self.j}]: difference {self.difference}"
        )


@dataclass(frozen=True)
class StarResult:
    v: str
    w: str
    holds: bool
    witnesses: tuple[StarWitness, ...]

    def __bool__(self) -> bool:
        return self.holds


def star_condition(t: StagedTree, v: str, w: str) -> StarResult:
    """Check t(v_i)t(w_j) = t(w_i)t(v_j) in the plain label ring.

    The products are compared without any sum-to-one reduction; every
    failing aligned index pair is returned as a witness.
    """
    aligned = _aligned_children(t, v, w)
    witnesses: list[StarWitness] = []
    for i in range(len(aligned)):
        for j in range(i + 1, len(aligned)):
            s_i, v_i, w_i = aligned[i]
            s_j, v_j, w_j = aligned[j]
            difference = (
                t.t_polynomial(v_i) * t.t_polynomial(w_j)
                - t.t_polynomial(w_i) * t.t_polynomial(v_j)
            )
            if not difference.is_zero():
                witnesses.append(StarWitness(i + 1, j + 1, s_i.name, s_j.name, difference))
    return StarResult(v, w, not witnesses, tuple(witnesses))


@dataclass(frozen=True)
class ToricityVerdict:
    toric: bool
    failures: tuple[StarResult, ...]
    all_same_position: bool
    checked_pairs: int

    def __bool__(self) -> bool:
        return self.toric


def is_toric(t: StagedTree) -> ToricityVerdict:
    """Decide toricity: the condition must hold for every staged pair.

    Also reports the sufficient fast path (all same-stage pairs being
    same-position forces toricity; the converse fails in general).
    """
    failures: list[StarResult] = []
    all_positions = True
    checked = 0
    for cls in t.stage_classes():
        if cls.size < 2:
            continue
        for a_pos in range(cls.size):
            for b_pos in range(a_pos + 1, cls.size):
                v, w = cls.vertices[a_pos], cls.vertices[b_pos]
                checked += 1
                if not t.same_position(v, w):
                    all_positions = False
                result = star_condition(t, v, w)
                if not result.holds:
                    failures.append(result)
    return ToricityVerdict(
        toric=not failures,
        failures=tuple(failures),
        all_same_position=all_positions,
        checked_pairs=checked,
    )


# -- containment evidence ----------------------------------------------


@dataclass(frozen=True)
class ContainmentReport:
    """Kernel containment evidence for all three generator sets."""

    checked: dict[str, int]
    phi_failures: tuple[tuple[str, Polynomial, Polynomial], ...]
    mpaths_toric_images: tuple[tuple[Polynomial, Polynomial], ...]

    @property
    def ok(self) -> bool:
        return not self.phi_failures

    @property
    def mpaths_in_toric_kernel(self) -> bool:
        return all(image.is_zero() for _, image in self.mpaths_toric_images)

    @property
    def mpaths_all_binomial(self) -> bool:
        return all(gen.is_binomial() for gen, _ in self.mpaths_toric_images)


def containment_report(t: StagedTree) -> ContainmentReport:
    """Check every generator of every ideal against ker phi.

    A nonzero reduced image is a hard failure.  For the maximal-path
    generators the unreduced monomial image is recorded too: on a toric
    tree those must vanish and every generator must be a binomial.
    """
    reduction = SumToOneReduction.for_tree(t)
    images = atom_images(t)
    sets: list[GeneratorSet] = [
        model_invariant_generators(t),
        paths_ideal_generators(t),
        mpaths_generators(t),
    ]
    checked: dict[str, int] = {}
    failures: list[tuple[str, Polynomial, Polynomial]] = []
    toric_images: list[tuple[Polynomial, Polynomial]] = []
    for genset in sets:
        checked[genset.kind] = len(genset.generators)
        for gen in genset.generators:
            toric = gen.substitute(images)
            image = reduction.apply(toric)
            if not image.is_zero():
                failures.append((genset.kind, gen, image))
            if genset.kind == "mpaths":
                toric_images.append((gen, toric))
    return ContainmentReport(
        checked=checked,
        phi_failures=tuple(failures),
        mpaths_toric_images=tuple(toric_images),
    )


# -- the parametrisation itself ----------------------------------------


def psi_evaluate(
    t: StagedTree, theta: Mapping[Symbol, Scalar]
) -> list[Fraction]:
    """Atom probabilities at a parameter point, exactly.

    The assignment must cover every label symbol, be strictly positive,
    and sum to 1 within each stage class; the open simplex for the
    output is then automatic and the result sums to 1 exactly.
    """
    values: dict[Symbol, Fraction] = {}
    for cls in t.stage_classes():
        total = Fraction(0)
        for s in cls.labels:
            try:
                x = Fraction(theta[s])
            except KeyError:
                raise UnboundSymbol(f"no value for label {s.name!r}") from None
            if x <= 0:
                raise InvalidSimplexPoint(
                    f"label {s.name!r} must be strictly positive, got {x}"
                )
            values[s] = x
            total += x
        if total != 1:
            raise InvalidSimplexPoint(
                f"labels of stage class {cls.index} sum to {total}, not 1"
            )
    out: list[Fraction] = []
    for atom in t.atoms:
        p = Fraction(1)
        for s in atom.labels:
            p *= values[s]
        out.append(p)
    assert sum(out) == 1
    return out

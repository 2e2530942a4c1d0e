"""Generator sets attached to a staged tree.

Three ideals are constructed, all inside the ring spanned by the atom
symbols:

* the model invariants: one odds-ratio quadric per same-stage vertex
  pair and shared edge label;
* the path ideal: bracket differences p_[v_i]p_[w_j] - p_[w_i]p_[v_j]
  over the label-aligned children of every same-stage pair;
* the maximal-path ideal: the same differences after extending each
  seed pair of paths as far as equal label products allow.

Every generator set is canonicalized: sign-normalized so the leading
coefficient is positive, deduplicated, zeros dropped, sorted descending
in the term order.  Provenance records which stage pair and which paths
produced each generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import NotSameStage
from .polycore import Monomial, Polynomial, Symbol, polynomial_key
from .stagedtree import StagedTree


@dataclass(frozen=True, slots=True)
class SeedOrigin:
    """The stage pair and aligned label indices a path pair came from."""

    v: str
    w: str
    i: int
    j: int
    label_i: str
    label_j: str

    def __str__(self) -> str:
        return (
            f"stage pair ({self.v}, {self.w}), "
            f"labels ({self.label_i}, {self.label_j})"
        )


@dataclass(frozen=True, slots=True)
class PathPair:
    """Two vertex-to-vertex paths, stored as full vertex sequences.

    The convention throughout: the difference polynomial of the pair is
    head1*tail1 - head2*tail2, each factor a bracket sum.
    """

    path1: tuple[str, ...]
    path2: tuple[str, ...]
    origin: SeedOrigin | None = None

    @property
    def head1(self) -> str:
        return self.path1[0]

    @property
    def tail1(self) -> str:
        return self.path1[-1]

    @property
    def head2(self) -> str:
        return self.path2[0]

    @property
    def tail2(self) -> str:
        return self.path2[-1]

    def endpoints(self) -> tuple[str, str, str, str]:
        return (self.head1, self.tail1, self.head2, self.tail2)

    def __str__(self) -> str:
        return (
            f"({self.head1}->{self.tail1}, {self.head2}->{self.tail2})"
        )


@dataclass(frozen=True)
class GeneratorSet:
    """Canonical list of ideal generators plus their origins."""

    kind: str
    generators: tuple[Polynomial, ...]
    provenance: dict[Polynomial, tuple[str, ...]]
    diagnostics: tuple[str, ...] = ()

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def as_set(self) -> frozenset[Polynomial]:
        return frozenset(self.generators)


def _canonical_set(
    kind: str,
    items: Iterable[tuple[Polynomial, str]],
    diagnostics: tuple[str, ...] = (),
) -> GeneratorSet:
    acc: dict[Polynomial, list[str]] = {}
    for poly, origin in items:
        canon = poly.normalized_sign()
        if canon.is_zero():
            continue
        acc.setdefault(canon, []).append(origin)
    ordered = sorted(acc, key=polynomial_key, reverse=True)
    return GeneratorSet(
        kind=kind,
        generators=tuple(ordered),
        provenance={g: tuple(acc[g]) for g in ordered},
        diagnostics=diagnostics,
    )


# -- paths inside the tree ---------------------------------------------


def tree_path(t: StagedTree, a: str, b: str) -> tuple[str, ...]:
    """The unique path between two vertices, as a vertex sequence."""
    up_a = _chain_to_root(t, a)
    index_a = {v: k for k, v in enumerate(up_a)}
    walk: list[str] = []
    v = b
    while v not in index_a:
        walk.append(v)
        v = t.parent_of(v).parent
    meet = index_a[v]
    return tuple(up_a[: meet + 1]) + tuple(reversed(walk))


def _chain_to_root(t: StagedTree, v: str) -> list[str]:
    out = [v]
    while (edge := t.parent_of(out[-1])) is not None:
        out.append(edge.parent)
    return out


def _chain_up(t: StagedTree, v: str, ancestor: str) -> list[str]:
    """Vertices from v up to ancestor, both inclusive."""
    out = [v]
    while out[-1] != ancestor:
        out.append(t.parent_of(out[-1]).parent)
    return out


def path_difference(t: StagedTree, pair: PathPair) -> Polynomial:
    return (
        t.p_bracket(pair.head1) * t.p_bracket(pair.tail1)
        - t.p_bracket(pair.head2) * t.p_bracket(pair.tail2)
    )


# -- seeds -------------------------------------------------------------


def _aligned_children(t: StagedTree, v: str, w: str) -> tuple[tuple[Symbol, str, str], ...]:
    """Label-aligned child triples (s, child of v via s, child of w via s).

    Alignment is by label symbol, in declaration order of the class's
    first member; declaration order at v or w itself plays no role.
    """
    cls = t.stage_class_of(v)
    if cls is None or t.stage_class_of(w) is not cls:
        raise NotSameStage(f"vertices {v!r} and {w!r} are not in the same stage")
    if v == w:
        raise NotSameStage(f"need two distinct same-stage vertices, got {v!r} twice")
    return tuple(
        (s, t.child_via(v, s), t.child_via(w, s)) for s in cls.labels
    )


def stage_pair_seeds(t: StagedTree, v: str, w: str) -> tuple[PathPair, ...]:
    """One seed path pair per label index pair i < j of a staged pair."""
    aligned = _aligned_children(t, v, w)
    seeds = []
    for i in range(len(aligned)):
        for j in range(i + 1, len(aligned)):
            s_i, v_i, w_i = aligned[i]
            s_j, v_j, w_j = aligned[j]
            origin = SeedOrigin(v, w, i + 1, j + 1, s_i.name, s_j.name)
            seeds.append(PathPair(
                path1=tree_path(t, v_i, w_j),
                path2=tree_path(t, w_i, v_j),
                origin=origin,
            ))
    return tuple(seeds)


# -- generator sets ----------------------------------------------------


def model_invariant_generators(t: StagedTree) -> GeneratorSet:
    """Odds-ratio quadrics p_[v]p_[w'] - p_[v']p_[w], one per pair and label."""
    items: list[tuple[Polynomial, str]] = []
    for cls in t.stage_classes():
        if cls.size < 2:
            continue
        for a_pos in range(cls.size):
            for b_pos in range(a_pos + 1, cls.size):
                v, w = cls.vertices[a_pos], cls.vertices[b_pos]
                for s in cls.labels:
                    v1 = t.child_via(v, s)
                    w1 = t.child_via(w, s)
                    poly = (
                        t.p_bracket(v) * t.p_bracket(w1)
                        - t.p_bracket(v1) * t.p_bracket(w)
                    )
                    items.append((poly, f"stage pair ({v}, {w}), label {s.name}"))
    return _canonical_set("model", items)


def stage_path_generators(t: StagedTree, v: str, w: str) -> list[Polynomial]:
    """Bracket differences of the seed paths of one staged pair.

    Returned in index-pair order (1,2), (1,3), ..., sign-normalized.
    """
    return [
        path_difference(t, seed).normalized_sign()
        for seed in stage_pair_seeds(t, v, w)
    ]


def paths_ideal_generators(t: StagedTree) -> GeneratorSet:
    """Union of the stage path generators over all same-stage pairs."""
    items: list[tuple[Polynomial, str]] = []
    for cls in t.stage_classes():
        if cls.size < 2:
            continue
        for a_pos in range(cls.size):
            for b_pos in range(a_pos + 1, cls.size):
                v, w = cls.vertices[a_pos], cls.vertices[b_pos]
                for seed in stage_pair_seeds(t, v, w):
                    items.append((
                        path_difference(t, seed),
                        f"{seed.origin}, paths {seed}",
                    ))
    return _canonical_set("paths", items)


# -- extensions --------------------------------------------------------


def extend_pair(t: StagedTree, pair: PathPair) -> list[PathPair]:
    """All single-step extensions with equal appended labels.

    One child edge is appended at an endpoint of each path, descending
    only; the two appended labels must be equal as symbols, and the new
    endpoint may not revisit its path.
    """
    out: list[PathPair] = []
    set1, set2 = set(pair.path1), set(pair.path2)
    first_options = _step_options(t, pair.path1, set1)
    second_options = _step_options(t, pair.path2, set2)
    for new_path1, label1 in first_options:
        for new_path2, label2 in second_options:
            if label1 == label2:
                out.append(PathPair(new_path1, new_path2, pair.origin))
    return out


def _step_options(
    t: StagedTree, path: tuple[str, ...], occupied: set[str]
) -> list[tuple[tuple[str, ...], Symbol]]:
    options = []
    for e in t.children_of(path[0]):
        if e.child not in occupied:
            options.append(((e.child,) + path, e.label))
    for e in t.children_of(path[-1]):
        if e.child not in occupied:
            options.append((path + (e.child,), e.label))
    return options


def _completions(
    t: StagedTree, endpoint: str, occupied: set[str]
) -> list[tuple[str, Monomial]]:
    """Descendants reachable from an endpoint without touching the path,
    with the label product of the connecting chain.  Includes the
    endpoint itself with product 1."""
    out = [(endpoint, Monomial.one())]
    stack: list[tuple[str, Monomial]] = [(endpoint, Monomial.one())]
    while stack:
        v, mono = stack.pop()
        for e in t.children_of(v):
            if e.child in occupied:
                continue
            extended = mono * Monomial.of(e.label)
            out.append((e.child, extended))
            stack.append((e.child, extended))
    return out


def _extended_pair(
    t: StagedTree, pair: PathPair, a: str, b: str, c: str, d: str
) -> PathPair:
    """Rebuild the full vertex sequences for endpoint completions a..d."""
    up1 = _chain_up(t, a, pair.head1)      # a up to head1
    down1 = _chain_up(t, b, pair.tail1)    # b up to tail1
    path1 = tuple(up1[:-1]) + pair.path1 + tuple(reversed(down1[:-1]))
    up2 = _chain_up(t, c, pair.head2)
    down2 = _chain_up(t, d, pair.tail2)
    path2 = tuple(up2[:-1]) + pair.path2 + tuple(reversed(down2[:-1]))
    return PathPair(path1, path2, pair.origin)


def _pair_sort_key(t: StagedTree, pair: PathPair) -> tuple[int, int, int, int]:
    return tuple(t.dfs_index(x) for x in pair.endpoints())  # type: ignore[return-value]


def maximal_extensions(t: StagedTree, seed: PathPair) -> list[PathPair]:
    """Maximal extensions of a seed under equal label products.

    The enumeration is exhaustive: each of the four endpoints descends
    to any vertex reachable without revisiting its path, a candidate is
    kept when the two paths gained edge sets with equal label products
    (equality of monomials, so multi-edge completions with reordered
    labels are found), and the maximal elements of the resulting partial
    order are returned.
    """
    set1, set2 = set(seed.path1), set(seed.path2)
    heads1 = _completions(t, seed.head1, set1)
    tails1 = _completions(t, seed.tail1, set1)
    heads2 = _completions(t, seed.head2, set2)
    tails2 = _completions(t, seed.tail2, set2)

    first: dict[Monomial, list[tuple[str, str]]] = {}
    for a, ma in heads1:
        for b, mb in tails1:
            first.setdefault(ma * mb, []).append((a, b))
    candidates: list[tuple[str, str, str, str]] = []
    for c, mc in heads2:
        for d, md in tails2:
            for a, b in first.get(mc * md, ()):
                candidates.append((a, b, c, d))

    maximal = []
    for p in candidates:
        if not any(q != p and _extends(t, q, p) for q in candidates):
            maximal.append(_extended_pair(t, seed, *p))
    maximal.sort(key=lambda pp: _pair_sort_key(t, pp))
    return maximal


def _extends(
    t: StagedTree, q: tuple[str, str, str, str], p: tuple[str, str, str, str]
) -> bool:
    return all(t.is_descendant_or_self(qx, px) for qx, px in zip(q, p))


def maximal_extensions_stepwise(t: StagedTree, seed: PathPair) -> list[PathPair]:
    """Closure under single equal-label steps; kept as a cross-check.

    This pass can miss completions whose label products only agree as
    whole products, so `maximal_extensions` is the authoritative one;
    `mpaths_generators` reports any disagreement as a diagnostic.
    """
    seen = {seed}
    frontier = [seed]
    maximal = []
    while frontier:
        pair = frontier.pop()
        steps = extend_pair(t, pair)
        if not steps:
            maximal.append(pair)
            continue
        for nxt in steps:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    maximal.sort(key=lambda pp: _pair_sort_key(t, pp))
    return maximal


def fully_extends(t: StagedTree, seed: PathPair) -> bool:
    """True when every maximal extension ends at four leaves."""
    return all(
        all(t.is_leaf(x) for x in pair.endpoints())
        for pair in maximal_extensions(t, seed)
    )


def mpaths_generators(t: StagedTree) -> GeneratorSet:
    """Bracket differences of all maximal extensions of all seeds."""
    items: list[tuple[Polynomial, str]] = []
    diagnostics: list[str] = []
    for cls in t.stage_classes():
        if cls.size < 2:
            continue
        for a_pos in range(cls.size):
            for b_pos in range(a_pos + 1, cls.size):
                v, w = cls.vertices[a_pos], cls.vertices[b_pos]
                for seed in stage_pair_seeds(t, v, w):
                    exhaustive = maximal_extensions(t, seed)
                    stepwise = maximal_extensions_stepwise(t, seed)
                    if set(exhaustive) != set(stepwise):
                        diagnostics.append(
                            f"seed {seed} of {seed.origin}: stepwise search found "
                            f"{len(stepwise)} maximal pairs, exhaustive search "
                            f"{len(exhaustive)}"
                        )
                    for pair in exhaustive:
                        items.append((
                            path_difference(t, pair),
                            f"{seed.origin}, seed {seed}, maximal {pair}",
                        ))
    return _canonical_set("mpaths", items, tuple(diagnostics))


# -- scalars of the model ----------------------------------------------


def denominator_product(t: StagedTree) -> Polynomial:
    """Product of p_[v] over vertices in stage classes of size >= 2.

    These brackets are exactly the denominators appearing in the
    recovered conditional probabilities of the staged vertices.
    """
    result = Polynomial.one()
    for cls in t.stage_classes():
        if cls.size < 2:
            continue
        for v in cls.vertices:
            result = result * t.p_bracket(v)
    return result


def dimension_forms(t: StagedTree) -> tuple[int, int]:
    """Both readings of the dimension count: by classes and by edges.

    The first sums (arity - 1) over stage classes; the second counts
    edges minus internal vertices minus the identification overlap.
    They agree on every valid tree.
    """
    by_classes = sum(cls.arity - 1 for cls in t.stage_classes())
    overlap = sum((cls.size - 1) * (cls.arity - 1) for cls in t.stage_classes())
    by_edges = t.n_edges - len(t.internal_vertices) - overlap
    return by_classes, by_edges


def model_dimension(t: StagedTree) -> int:
    """Number of free parameters: sum of (arity - 1) over stage classes."""
    by_classes, by_edges = dimension_forms(t)
    assert by_classes == by_edges, "dimension formulas disagree"
    return by_classes

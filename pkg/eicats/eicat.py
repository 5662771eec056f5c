"""
Finite EI-categories given by explicit composition tables.

A category is a finite set of objects, a set of morphism ids with sources and
targets, an identity per object and a composition table defined exactly on
composable pairs. The partial order i ⩽ j on objects holds when C(i, j) is nonempty.
"""
from dataclasses import dataclass
from enum import Enum
import itertools
import logging
import re
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from cached_property import cached_property

logger = logging.getLogger(__name__)


class CategoryError(Exception):
    pass


class UnknownIdError(CategoryError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class CompositionError(CategoryError):
    pass


def natural_key(identifier: str) -> Tuple:
    """Sort key which orders the digit runs of an id numerically, so that "2" comes before "10"."""
    return tuple(int(part) if part.isdigit() else part for part in re.split(r"(\d+)", str(identifier)))


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    dst: str


class ViolationKind(str, Enum):
    INCOMPLETE = "incomplete table"
    IDENTITY = "identity violated"
    ASSOCIATIVITY = "associativity violated"
    EI = "EI violated"
    ANTISYMMETRY = "antisymmetry violated"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


class FiniteEICategory:
    """
    A finite category given by its composition table.

    Objects and morphisms are string ids kept in natural sort order. Hom-sets list
    their morphisms in that order too, which fixes the bases of free modules.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[Morphism],
        identity: Mapping[str, str],
        compose: Mapping[Tuple[str, str], str],
        levels: Optional[Mapping[str, int]] = None,
        name: str = "",
    ):
        self.objects: Tuple[str, ...] = tuple(sorted((str(obj) for obj in objects), key=natural_key))
        self.morphisms: Dict[str, Morphism] = {
            morphism.id: morphism for morphism in sorted(morphisms, key=lambda m: natural_key(m.id))
        }
        self.identity: Dict[str, str] = dict(identity)
        self.composition: Dict[Tuple[str, str], str] = dict(compose)
        self.levels: Dict[str, int] = dict(levels) if levels else {}
        self.name = name

        object_set = set(self.objects)
        self._hom: Dict[Tuple[str, str], List[str]] = {(i, j): [] for i in self.objects for j in self.objects}
        for morphism in self.morphisms.values():
            if morphism.src not in object_set or morphism.dst not in object_set:
                raise UnknownIdError(f"Morphism {morphism.id} has an unknown endpoint.")
            self._hom[(morphism.src, morphism.dst)].append(morphism.id)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteEICategory{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def check_object(self, obj: str) -> str:
        if obj not in self._object_set:
            raise UnknownIdError(f"Unknown object {obj!r}.")
        return obj

    def check_morphism(self, morphism: str) -> Morphism:
        try:
            return self.morphisms[morphism]
        except KeyError:
            raise UnknownIdError(f"Unknown morphism {morphism!r}.")

    @cached_property
    def _object_set(self) -> FrozenSet[str]:
        return frozenset(self.objects)

    def hom(self, i: str, j: str) -> Tuple[str, ...]:
        """The morphisms C(i, j) in basis order."""
        self.check_object(i)
        self.check_object(j)
        return tuple(self._hom[(i, j)])

    def src(self, morphism: str) -> str:
        return self.check_morphism(morphism).src

    def dst(self, morphism: str) -> str:
        return self.check_morphism(morphism).dst

    def compose(self, g: str, f: str) -> str:
        """The composite g∘f, defined when dst(f) = src(g)."""
        if self.dst(f) != self.src(g):
            raise CompositionError(f"Cannot compose {g} after {f}.")
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise CompositionError(f"The composite of {g} after {f} is missing from the table.")

    def automorphisms(self, i: str) -> Tuple[str, ...]:
        return self.hom(i, i)

    def leq(self, i: str, j: str) -> bool:
        return bool(self.hom(i, j))

    def level(self, obj: str) -> Optional[int]:
        return self.levels.get(obj)

    @cached_property
    def generation_order(self) -> Tuple[str, ...]:
        """Morphisms with endomorphisms first, the order in which generators are chosen."""
        return tuple(
            sorted(
                self.morphisms,
                key=lambda m: (self.morphisms[m].src != self.morphisms[m].dst, natural_key(m)),
            )
        )

    @cached_property
    def _generation(self) -> Tuple[Tuple[str, ...], Dict[str, Tuple[str, str]]]:
        closed = {f: None for f in self.identity.values()}
        factorization: Dict[str, Tuple[str, str]] = {}
        generators: List[str] = []
        for morphism in self.generation_order:
            if morphism in closed:
                continue
            generators.append(morphism)
            closed[morphism] = None
            frontier = [morphism]
            while frontier:
                x = frontier.pop()
                for y in list(closed):
                    for g, f in ((x, y), (y, x)):
                        if self.dst(f) != self.src(g):
                            continue
                        gf = self.compose(g, f)
                        if gf not in closed:
                            closed[gf] = None
                            factorization[gf] = (g, f)
                            frontier.append(gf)
        logger.debug("%r: %d generators for %d morphisms", self, len(generators), len(self.morphisms))
        return tuple(generators), factorization

    @property
    def generators(self) -> Tuple[str, ...]:
        """
        A generating set of morphisms chosen greedily.

        Every morphism is an identity, a generator, or the composite of two morphisms
        recorded in `factorization`.
        """
        return self._generation[0]

    @property
    def factorization(self) -> Dict[str, Tuple[str, str]]:
        """For every morphism that is neither an identity nor a generator, a pair (g, f) with g∘f equal to it."""
        return self._generation[1]

    def automorphism_generators(self, i: str) -> Tuple[str, ...]:
        """Generators of Aut(i). In a skeletal EI-category only automorphisms compose to automorphisms."""
        self.check_object(i)
        return tuple(g for g in self.generators if self.src(g) == i and self.dst(g) == i)

    @cached_property
    def morphism_index(self) -> Dict[str, int]:
        return {morphism: index for index, morphism in enumerate(self.morphisms)}

    @cached_property
    def table(self) -> np.ndarray:
        """Dense composition table by morphism index, -1 where the composite is undefined or missing."""
        index = self.morphism_index
        table = np.full((len(index), len(index)), -1, dtype=np.int64)
        for (g, f), gf in self.composition.items():
            if g in index and f in index and gf in index:
                table[index[g], index[f]] = index[gf]
        return table

    def to_dict(self) -> dict:
        """The category as canonical JSON data, arrays sorted by id."""
        data = {
            "objects": list(self.objects),
            "morphisms": [{"id": m.id, "src": m.src, "dst": m.dst} for m in self.morphisms.values()],
            "identity": {obj: self.identity[obj] for obj in self.objects if obj in self.identity},
            "compose": [
                [g, f, gf]
                for (g, f), gf in sorted(
                    self.composition.items(), key=lambda item: (natural_key(item[0][0]), natural_key(item[0][1]))
                )
            ],
        }
        if self.levels:
            data["levels"] = {obj: self.levels[obj] for obj in self.objects if obj in self.levels}
        return data

    @classmethod
    def from_dict(cls, data: Mapping, name: str = "") -> "FiniteEICategory":
        morphisms = [Morphism(str(m["id"]), str(m["src"]), str(m["dst"])) for m in data["morphisms"]]
        compose = {(str(g), str(f)): str(gf) for g, f, gf in data.get("compose", [])}
        identity = {str(obj): str(morphism) for obj, morphism in data.get("identity", {}).items()}
        levels = {str(obj): int(level) for obj, level in data.get("levels", {}).items()}
        return cls(data["objects"], morphisms, identity, compose, levels=levels, name=name)


def _structural_violations(cat: FiniteEICategory) -> List[Violation]:
    violations = []
    for obj in cat.objects:
        morphism = cat.identity.get(obj)
        if morphism is None:
            violations.append(Violation(ViolationKind.INCOMPLETE, f"object {obj} has no identity"))
        elif morphism not in cat.morphisms or cat.src(morphism) != obj or cat.dst(morphism) != obj:
            violations.append(Violation(ViolationKind.INCOMPLETE, f"identity {morphism} of {obj} is not in C({obj},{obj})"))

    for (g, f), gf in cat.composition.items():
        if g not in cat.morphisms or f not in cat.morphisms or gf not in cat.morphisms:
            violations.append(Violation(ViolationKind.INCOMPLETE, f"composite {g}∘{f} = {gf} uses unknown ids"))
        elif cat.dst(f) != cat.src(g):
            violations.append(Violation(ViolationKind.INCOMPLETE, f"{g}∘{f} is listed but not composable"))
        elif cat.src(gf) != cat.src(f) or cat.dst(gf) != cat.dst(g):
            violations.append(Violation(ViolationKind.INCOMPLETE, f"{g}∘{f} = {gf} has the wrong source or target"))

    for f in cat.morphisms:
        for g in cat.morphisms:
            if cat.dst(f) == cat.src(g) and (g, f) not in cat.composition:
                violations.append(Violation(ViolationKind.INCOMPLETE, f"composite {g}∘{f} is missing"))
    return violations


def validate_category(cat: FiniteEICategory) -> List[Violation]:
    """
    Checks the category axioms and the EI property by exhaustive table scans.

    Structural incompleteness is reported on its own; the axioms are only checked on a
    structurally complete table.

    Returns:
        List[Violation]: Empty exactly when the category is a valid skeletal EI-category.
    """
    violations = _structural_violations(cat)
    if violations:
        return violations

    for f, morphism in cat.morphisms.items():
        if cat.compose(cat.identity[morphism.dst], f) != f or cat.compose(f, cat.identity[morphism.src]) != f:
            violations.append(Violation(ViolationKind.IDENTITY, f"identities are not units for {f}"))

    table = cat.table
    count = len(cat.morphisms)
    columns = np.arange(count)
    for h in range(count):
        # left[g, f] = (h∘g)∘f and right[g, f] = h∘(g∘f), wherever defined
        hg = table[h]
        defined_hg = hg >= 0
        left = np.where(defined_hg[:, None], table[np.where(defined_hg, hg, 0)][:, columns], -1)
        gf = table
        defined_gf = gf >= 0
        right = np.where(defined_gf, table[h][np.where(defined_gf, gf, 0)], -1)
        composable = defined_hg[:, None] & defined_gf
        bad = composable & (left != right)
        if bad.any():
            g, f = np.argwhere(bad)[0]
            names = list(cat.morphisms)
            violations.append(
                Violation(ViolationKind.ASSOCIATIVITY, f"({names[h]}∘{names[g]})∘{names[f]} differs from the other bracketing")
            )

    for obj in cat.objects:
        endomorphisms = cat.hom(obj, obj)
        identity = cat.identity[obj]
        for f in endomorphisms:
            if not any(cat.compose(g, f) == identity and cat.compose(f, g) == identity for g in endomorphisms):
                violations.append(Violation(ViolationKind.EI, f"endomorphism {f} of {obj} has no inverse"))

    for i, j in itertools.combinations(cat.objects, 2):
        if cat.leq(i, j) and cat.leq(j, i):
            violations.append(Violation(ViolationKind.ANTISYMMETRY, f"objects {i} and {j} are isomorphic or not skeletal"))

    return violations


def leq(cat: FiniteEICategory, i: str, j: str) -> bool:
    """
    The partial order on objects: i ⩽ j exactly when C(i, j) is nonempty.

    Raises:
        UnknownIdError: If either object is unknown.
    """
    return cat.leq(i, j)


def non_monomorphism_witness(cat: FiniteEICategory, f: str) -> Optional[Tuple[str, str]]:
    """A pair g ≠ h with f∘g = f∘h, or None if f is a monomorphism."""
    source = cat.src(f)
    for i in cat.objects:
        seen: Dict[str, str] = {}
        for g in cat.hom(i, source):
            fg = cat.compose(f, g)
            if fg in seen:
                return seen[fg], g
            seen[fg] = g
    return None


def is_monomorphism(cat: FiniteEICategory, f: str) -> bool:
    """
    Whether f∘g = f∘h implies g = h for every parallel pair g, h with codomain src(f).

    Raises:
        UnknownIdError: If f is unknown.
    """
    return non_monomorphism_witness(cat, f) is None


def downward_closure(cat: FiniteEICategory, objects: Iterable[str]) -> FrozenSet[str]:
    """All objects i with i ⩽ j for some j in the given set."""
    objects = [cat.check_object(obj) for obj in objects]
    return frozenset(i for i in cat.objects if any(cat.leq(i, j) for j in objects))


def is_right_closed(cat: FiniteEICategory, objects: Iterable[str]) -> bool:
    objects = frozenset(objects)
    return downward_closure(cat, objects) == objects


def is_convex(cat: FiniteEICategory, objects: Iterable[str]) -> bool:
    """Whether no chain i ⩽ j ⩽ k has i and k in the set and j outside it."""
    objects = frozenset(cat.check_object(obj) for obj in objects)
    outside = [j for j in cat.objects if j not in objects]
    for j in outside:
        below = any(cat.leq(i, j) for i in objects)
        above = any(cat.leq(j, k) for k in objects)
        if below and above:
            return False
    return True


@dataclass(frozen=True)
class Subcategory:
    """A full subcategory together with its inclusion into the ambient category."""

    category: FiniteEICategory
    ambient: FiniteEICategory
    inclusion: Mapping[str, str]

    @property
    def objects(self) -> FrozenSet[str]:
        return frozenset(self.category.objects)


def full_subcategory(cat: FiniteEICategory, objects: Iterable[str]) -> Subcategory:
    """The full subcategory on a set of objects. Object and morphism ids are kept."""
    objects = frozenset(cat.check_object(obj) for obj in objects)
    morphisms = [m for m in cat.morphisms.values() if m.src in objects and m.dst in objects]
    names = {m.id for m in morphisms}
    compose = {(g, f): gf for (g, f), gf in cat.composition.items() if g in names and f in names}
    identity = {obj: cat.identity[obj] for obj in objects if obj in cat.identity}
    levels = {obj: level for obj, level in cat.levels.items() if obj in objects}
    category = FiniteEICategory(objects, morphisms, identity, compose, levels=levels, name=cat.name)
    return Subcategory(category=category, ambient=cat, inclusion={obj: obj for obj in category.objects})


def right_closed_subcategory(cat: FiniteEICategory, objects: Iterable[str]) -> Subcategory:
    """
    The smallest right-closed full subcategory containing the given objects.

    That is the full subcategory on the downward closure of the set under ⩽.
    """
    return full_subcategory(cat, downward_closure(cat, objects))


def maximal_objects(cat: FiniteEICategory, objects: Iterable[str]) -> FrozenSet[str]:
    """The elements of the set which are maximal within it under ⩽."""
    objects = frozenset(cat.check_object(obj) for obj in objects)
    return frozenset(i for i in objects if not any(j != i and cat.leq(i, j) for j in objects))


def non_maximal_objects(cat: FiniteEICategory, objects: Iterable[str]) -> FrozenSet[str]:
    objects = frozenset(objects)
    return objects - maximal_objects(cat, objects)


def sort_objects(cat: FiniteEICategory, objects: Iterable[str]) -> Tuple[str, ...]:
    """Objects in the category's order."""
    objects = set(objects)
    return tuple(obj for obj in cat.objects if obj in objects)


def category_from_arrows(
    objects: Sequence[str], arrows: Sequence[Tuple[str, str, str]], compose: Mapping[Tuple[str, str], str], name: str = ""
) -> FiniteEICategory:
    """
    Builds a category from its non-identity morphisms.

    Identities are added as "id_<object>" and their composites filled in.

    Args:
        objects: The object ids.
        arrows: Triples (id, src, dst) of the non-identity morphisms.
        compose: The composites g∘f of non-identity morphisms, keyed by (g, f).
        name (str): An optional name.
    """
    identity = {obj: f"id_{obj}" for obj in objects}
    morphisms = [Morphism(identity[obj], obj, obj) for obj in objects]
    morphisms += [Morphism(str(m), str(src), str(dst)) for m, src, dst in arrows]
    table = dict(compose)
    for morphism in morphisms:
        table[(identity[morphism.dst], morphism.id)] = morphism.id
        table[(morphism.id, identity[morphism.src])] = morphism.id
    return FiniteEICategory(objects, morphisms, identity, table, name=name)


@dataclass(frozen=True)
class FinitenessReport:
    """Named predicates of a category given by a finite table."""

    skeletal: bool
    ei: bool
    largest_hom_set: int
    inward_morphisms: Dict[str, int]

    def to_dict(self) -> dict:
        return {
            "skeletal": self.skeletal,
            "ei": self.ei,
            "largest_hom_set": self.largest_hom_set,
            "inward_morphisms": dict(self.inward_morphisms),
        }


def finiteness_report(cat: FiniteEICategory) -> FinitenessReport:
    """
    Reports skeletality, the EI property and the sizes of the hom-sets.

    `inward_morphisms` counts, for each object j, the morphisms of all C(i, j).
    """
    violations = validate_category(cat)
    kinds = {violation.kind for violation in violations}
    return FinitenessReport(
        skeletal=ViolationKind.ANTISYMMETRY not in kinds,
        ei=ViolationKind.EI not in kinds and ViolationKind.INCOMPLETE not in kinds,
        largest_hom_set=max((len(cat.hom(i, j)) for i in cat.objects for j in cat.objects), default=0),
        inward_morphisms={j: sum(len(cat.hom(i, j)) for i in cat.objects) for j in cat.objects},
    )

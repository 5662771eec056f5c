"""
Property suites: machine-checkable statements about modules over a category, each
recorded with a verdict and a witness.

Verdicts distinguish a property that fails (a bug) from a documented boundary effect
of truncating an infinite category, which is recorded as "expected-fail".
"""
from dataclasses import dataclass, field
from enum import Enum
import itertools
import logging
import time
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import exactla as la
from .eicat import (
    FiniteEICategory,
    finiteness_report,
    is_monomorphism,
    non_monomorphism_witness,
    right_closed_subcategory,
    validate_category,
)
from .files import category_to_data, digest
from .nakayama import (
    adjunction_check,
    counit,
    in_kernel,
    inverse_nakayama,
    locally_self_injective_audit,
    nakayama,
    nakayama_preserves_exactness,
    unit,
)
from .randomize import random_module, random_pair, random_short_exact_sequence, random_vanishing_module
from .repmod import (
    CatModule,
    Side,
    dualize,
    find_isomorphism,
    free_basis,
    free_module,
    hom_space,
    is_injective,
    is_projective,
    sequence_is_exact,
    torsion_witness,
)
from .resolve import injective_resolution, resolution_step, verify_resolution

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    EXPECTED_FAIL = "expected-fail"

    def __str__(self):
        return self.value


class SuiteName(str, Enum):
    AXIOMS = "axioms"
    YONEDA = "yoneda"
    NAKAYAMA_PROJ_INJ = "nakayama-proj-inj"
    ADJUNCTION = "adjunction"
    COUNIT = "counit"
    RESOLUTION = "resolution"
    MONO_TORSION = "mono-torsion"
    KERNEL = "kernel"
    SELF_INJECTIVE_AUDIT = "self-injective-audit"
    ALL = "all"

    def __str__(self):
        return self.value


@dataclass
class SuiteConfig:
    """Sample counts and the largest random dimension used by the suites."""

    adjunction_pairs: int = 20
    resolution_samples: int = 10
    exact_sequences: int = 5
    duality_pairs: int = 5
    counit_samples: int = 5
    kernel_samples: int = 5
    max_dim: int = 3


# Property name → the citation recorded in reports.
ANCHORS: Dict[str, str] = {
    "category-axioms": "§2.1",
    "right-closed-subcategory": "Lemma 3.1",
    "graded-hom-spaces": "Eq. (idempotent)",
    "duality": "§2.1",
    "nakayama-on-projectives": "Corollary equiv",
    "adjunction": "Lemma adjoint",
    "counit-isomorphism": "Proposition section-functor",
    "projective-resolution-step": "Lemma 3.1",
    "injective-resolution": "Lemma 3.2",
    "monomorphism-torsion-free": "Lemma monomorphism",
    "kernel-of-nakayama": "Corollary kernel",
    "locally-self-injective": "Definition locally-self-injective",
    "nakayama-exact": "Lemma exact",
    "plumbing": "plumbing",
}
ALLOWED_ANCHORS = frozenset(ANCHORS.values())


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    inputs_digest: str
    verdict: Verdict
    detail: str = ""
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        data = {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "inputs_digest": self.inputs_digest,
            "verdict": str(self.verdict),
            "detail": self.detail,
        }
        if self.witness is not None:
            data["witness"] = self.witness
        return data


@dataclass
class SuiteReport:
    suite: str
    seed: int
    category_digest: str
    records: List[CheckRecord] = field(default_factory=list)
    timing: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(record.verdict != Verdict.FAIL for record in self.records)

    def counts(self) -> Dict[str, int]:
        return {str(verdict): sum(record.verdict == verdict for record in self.records) for verdict in Verdict}

    def sorted_records(self) -> List[CheckRecord]:
        return sorted(self.records, key=lambda record: record.check_id)

    def to_dict(self) -> dict:
        data = {
            "suite": self.suite,
            "seed": self.seed,
            "category_digest": self.category_digest,
            "passed": self.passed,
            "counts": self.counts(),
            "records": [record.to_dict() for record in self.sorted_records()],
        }
        if self.timing is not None:
            data["timing"] = round(self.timing, 3)
        return data


@dataclass
class SuiteContext:
    cat: FiniteEICategory
    seed: int
    config: SuiteConfig
    category_digest: str

    def rng(self, suite: SuiteName) -> np.random.Generator:
        """A generator for one suite, so suites give the same samples whether run alone or together."""
        index = list(SuiteName).index(suite)
        return np.random.default_rng([self.seed, index])

    def record(
        self,
        check_id: str,
        anchor: str,
        ok: bool,
        detail: str = "",
        inputs: Sequence[CatModule] = (),
        witness: Optional[dict] = None,
        expected: bool = False,
    ) -> CheckRecord:
        if ok:
            verdict = Verdict.PASS
        else:
            verdict = Verdict.EXPECTED_FAIL if expected else Verdict.FAIL
        inputs_digest = digest(
            {"category": self.category_digest, "check": check_id, "inputs": [module.to_dict() for module in inputs]}
        )
        return CheckRecord(check_id, ANCHORS[anchor], inputs_digest, verdict, detail, witness)


def _dims(module: CatModule) -> Dict[str, int]:
    return dict(module.dims)


def suite_axioms(ctx: SuiteContext) -> List[CheckRecord]:
    cat = ctx.cat
    violations = validate_category(cat)
    records = [
        ctx.record(
            "axioms/validate",
            "category-axioms",
            not violations,
            f"{len(violations)} violations",
            witness={"violations": [str(v) for v in violations]} if violations else None,
        )
    ]
    if violations:
        return records

    objects = cat.objects
    reflexive = all(cat.leq(i, i) for i in objects)
    antisymmetric = all(not (cat.leq(i, j) and cat.leq(j, i)) for i, j in itertools.combinations(objects, 2))
    transitive = all(
        cat.leq(i, k) for i, j, k in itertools.product(objects, repeat=3) if cat.leq(i, j) and cat.leq(j, k)
    )
    records.append(
        ctx.record(
            "axioms/partial-order",
            "category-axioms",
            reflexive and antisymmetric and transitive,
            f"reflexive={reflexive} antisymmetric={antisymmetric} transitive={transitive}",
        )
    )

    stable = True
    for i in objects:
        closed = right_closed_subcategory(cat, [i]).objects
        stable = stable and right_closed_subcategory(cat, closed).objects == closed
    records.append(ctx.record("axioms/right-closed", "right-closed-subcategory", stable))

    report = finiteness_report(cat)
    records.append(
        ctx.record(
            "axioms/finiteness",
            "plumbing",
            report.skeletal and report.ei and sum(report.inward_morphisms.values()) == len(cat.morphisms),
            witness=report.to_dict(),
        )
    )
    return records


def suite_yoneda(ctx: SuiteContext) -> List[CheckRecord]:
    cat = ctx.cat
    rng = ctx.rng(SuiteName.YONEDA)
    records = []
    for i in cat.objects:
        module = random_module(cat, Side.LEFT, rng, ctx.config.max_dim)
        dim = hom_space(free_module(cat, Side.LEFT, i), module).dim
        records.append(
            ctx.record(
                f"yoneda/free-{i}",
                "graded-hom-spaces",
                dim == module.dims[i],
                f"dim Hom(Ae_{i}, V) = {dim}, dim V({i}) = {module.dims[i]}",
                inputs=[module],
            )
        )
    for k in range(ctx.config.duality_pairs):
        source, target = random_pair(cat, rng, ctx.config.max_dim)
        forward = hom_space(source, target).dim
        backward = hom_space(dualize(target), dualize(source)).dim
        records.append(
            ctx.record(
                f"yoneda/duality-{k:02d}",
                "duality",
                forward == backward,
                f"dim Hom(V, W) = {forward}, dim Hom(DW, DV) = {backward}",
                inputs=[source, target],
            )
        )
    return records


def suite_nakayama_proj_inj(ctx: SuiteContext) -> List[CheckRecord]:
    cat = ctx.cat
    rng = ctx.rng(SuiteName.NAKAYAMA_PROJ_INJ)
    records = []
    for i in cat.objects:
        projective = free_module(cat, Side.LEFT, i)
        injective = dualize(free_module(cat, Side.RIGHT, i))
        nu = nakayama(projective)
        iso = find_isomorphism(nu, injective, rng)
        records.append(
            ctx.record(
                f"nakayama-proj-inj/nu-{i}",
                "nakayama-on-projectives",
                iso is not None,
                f"ν(Ae_{i}) has dims {_dims(nu)}, D(e_{i}A) has dims {_dims(injective)}",
                inputs=[projective],
                witness={"isomorphism": iso.to_dict()} if iso is not None else None,
            )
        )
        inverse = inverse_nakayama(injective)
        iso = find_isomorphism(inverse, projective, rng)
        records.append(
            ctx.record(
                f"nakayama-proj-inj/inverse-{i}",
                "nakayama-on-projectives",
                iso is not None,
                f"ν⁻¹(D(e_{i}A)) has dims {_dims(inverse)}, Ae_{i} has dims {_dims(projective)}",
                inputs=[injective],
                witness={"isomorphism": iso.to_dict()} if iso is not None else None,
            )
        )
    return records


def suite_adjunction(ctx: SuiteContext) -> List[CheckRecord]:
    cat = ctx.cat
    rng = ctx.rng(SuiteName.ADJUNCTION)
    pairs = [
        (f"free-{i}", free_module(cat, Side.LEFT, i), dualize(free_module(cat, Side.RIGHT, i))) for i in cat.objects
    ]
    for k in range(ctx.config.adjunction_pairs):
        pairs.append((f"random-{k:02d}", *random_pair(cat, rng, ctx.config.max_dim)))

    records = []
    for label, module, other in pairs:
        report = adjunction_check(module, other)
        records.append(
            ctx.record(
                f"adjunction/{label}",
                "adjunction",
                report.passed,
                f"dim Hom(νV, U) = {report.dim_left}, dim Hom(V, ν⁻¹U) = {report.dim_right}",
                inputs=[module, other],
                witness=report.to_dict(),
            )
        )
    return records


def suite_counit(ctx: SuiteContext) -> List[CheckRecord]:
    cat = ctx.cat
    rng = ctx.rng(SuiteName.COUNIT)
    records = []
    for i in cat.objects:
        injective = dualize(free_module(cat, Side.RIGHT, i))
        records.append(
            ctx.record(
                f"counit/injective-{i}",
                "counit-isomorphism",
                counit(injective).is_isomorphism(),
                f"counit at D(e_{i}A)",
                inputs=[injective],
            )
        )
        projective = free_module(cat, Side.LEFT, i)
        records.append(
            ctx.record(
                f"counit/unit-projective-{i}",
                "counit-isomorphism",
                unit(projective).is_isomorphism(),
                f"unit at Ae_{i}",
                inputs=[projective],
            )
        )
    for k in range(ctx.config.counit_samples):
        module = random_module(cat, Side.LEFT, rng, ctx.config.max_dim)
        if is_injective(module):
            ok, detail = counit(module).is_isomorphism(), "injective; counit must be an isomorphism"
        elif is_projective(module):
            ok, detail = unit(module).is_isomorphism(), "projective; unit must be an isomorphism"
        else:
            ok, detail = True, "neither injective nor projective; nothing claimed"
        records.append(ctx.record(f"counit/random-{k:02d}", "counit-isomorphism", ok, detail, inputs=[module]))
    return records


def suite_resolution(ctx: SuiteContext) -> List[CheckRecord]:
    cat = ctx.cat
    rng = ctx.rng(SuiteName.RESOLUTION)
    records = []
    for k in range(ctx.config.resolution_samples):
        module = random_module(cat, Side.RIGHT, rng, ctx.config.max_dim)
        step = resolution_step(module)
        failures = step.failures()
        records.append(
            ctx.record(
                f"resolution/step-{k:02d}",
                "projective-resolution-step",
                not failures,
                "; ".join(failures) or f"P has dims {_dims(step.P)}, kernel has dims {_dims(step.kernel)}",
                inputs=[module],
            )
        )
    for k in range(ctx.config.resolution_samples):
        module = random_module(cat, Side.LEFT, rng, ctx.config.max_dim)
        resolution = injective_resolution(module)
        certificate = verify_resolution(resolution.complex)
        projective_exact = sequence_is_exact(resolution.projective).exact
        records.append(
            ctx.record(
                f"resolution/injective-{k:02d}",
                "injective-resolution",
                certificate.passed and projective_exact,
                f"length {certificate.length}, bound {certificate.bound}"
                + ("" if projective_exact else "; the dual projective resolution is not exact"),
                inputs=[module],
                witness=certificate.to_dict(),
            )
        )
    return records


def suite_mono_torsion(ctx: SuiteContext) -> List[CheckRecord]:
    """
    Every morphism is mono exactly when every free left module is torsion-free.

    A pair g ≠ h with f∘g = f∘h gives the torsion element g − h of Ae_i, i = src(g),
    which f annihilates. Without such a pair the free modules are scanned for torsion.
    """
    cat = ctx.cat
    non_mono = None
    for f in cat.morphisms:
        if not is_monomorphism(cat, f):
            non_mono = (f, *non_monomorphism_witness(cat, f))
            break

    if non_mono is not None:
        f, g, h = non_mono
        i = cat.src(g)
        module = free_module(cat, Side.LEFT, i)
        basis = free_basis(cat, Side.LEFT, i, cat.src(f))
        element = la.zeros(len(basis), 1)
        element[basis.index(g), 0] = 1
        element[basis.index(h), 0] = -1
        annihilated = la.is_zero(la.matmul(module.action[f], element))
        torsion = {"module": f"Ae_{i}", "morphism": f, "element": {g: "1", h: "-1"}, "annihilated": annihilated}
        all_torsion_free = not annihilated
    else:
        torsion = None
        for i in cat.objects:
            witness = torsion_witness(free_module(cat, Side.LEFT, i))
            if witness is not None:
                torsion = {"module": f"Ae_{i}", "morphism": witness}
                break
        all_torsion_free = torsion is None

    all_mono = non_mono is None
    return [
        ctx.record(
            "mono-torsion/biconditional",
            "monomorphism-torsion-free",
            all_mono == all_torsion_free,
            f"all morphisms mono: {all_mono}; all free left modules torsion-free: {all_torsion_free}",
            witness={"non_monomorphism": list(non_mono) if non_mono else None, "torsion": torsion},
        )
    ]


def suite_kernel(ctx: SuiteContext) -> List[CheckRecord]:
    cat = ctx.cat
    rng = ctx.rng(SuiteName.KERNEL)
    all_mono = all(is_monomorphism(cat, f) for f in cat.morphisms)
    records = []
    for i in cat.objects:
        projective = free_module(cat, Side.LEFT, i)
        records.append(
            ctx.record(
                f"kernel/free-{i}",
                "kernel-of-nakayama",
                not in_kernel(projective),
                f"Ae_{i} is not in the kernel",
                inputs=[projective],
            )
        )
    for k in range(ctx.config.kernel_samples):
        module = random_vanishing_module(cat, Side.LEFT, rng, ctx.config.max_dim)
        records.append(
            ctx.record(
                f"kernel/vanishing-{k:02d}",
                "kernel-of-nakayama",
                in_kernel(module),
                f"module with dims {_dims(module)} vanishes at the maximal objects"
                + ("" if all_mono else "; not every morphism is mono, so nothing is claimed"),
                inputs=[module],
                expected=not all_mono,
            )
        )
    return records


def suite_self_injective_audit(ctx: SuiteContext) -> List[CheckRecord]:
    cat = ctx.cat
    rng = ctx.rng(SuiteName.SELF_INJECTIVE_AUDIT)
    audit = locally_self_injective_audit(cat)
    records = [
        ctx.record(
            "self-injective-audit/verdict",
            "locally-self-injective",
            audit.verdict,
            "every Ae_i is injective" if audit.verdict else "truncation boundary: some Ae_i is not injective",
            witness=audit.to_dict(),
            expected=True,
        )
    ]
    if not audit.verdict:
        return records
    for k in range(ctx.config.exact_sequences):
        sequence = random_short_exact_sequence(cat, Side.LEFT, rng, ctx.config.max_dim)
        _, report = nakayama_preserves_exactness(sequence)
        records.append(
            ctx.record(
                f"self-injective-audit/exact-{k:02d}",
                "nakayama-exact",
                report.exact,
                "ν of a short exact sequence",
                inputs=sequence.terms,
                witness=report.to_dict(),
            )
        )
    return records


SUITES: Dict[SuiteName, Callable[[SuiteContext], List[CheckRecord]]] = {
    SuiteName.AXIOMS: suite_axioms,
    SuiteName.YONEDA: suite_yoneda,
    SuiteName.NAKAYAMA_PROJ_INJ: suite_nakayama_proj_inj,
    SuiteName.ADJUNCTION: suite_adjunction,
    SuiteName.COUNIT: suite_counit,
    SuiteName.RESOLUTION: suite_resolution,
    SuiteName.MONO_TORSION: suite_mono_torsion,
    SuiteName.KERNEL: suite_kernel,
    SuiteName.SELF_INJECTIVE_AUDIT: suite_self_injective_audit,
}


def run_suite(
    cat: FiniteEICategory,
    suite: SuiteName = SuiteName.ALL,
    seed: int = 0,
    config: Optional[SuiteConfig] = None,
    timing: bool = False,
) -> SuiteReport:
    """
    Runs a property suite, or all of them, on a category.

    Args:
        cat (FiniteEICategory): The category.
        suite (SuiteName): The suite to run. Default all.
        seed (int): Seeds every random sample. Default 0.
        config (SuiteConfig, optional): Sample counts.
        timing (bool): Record the elapsed time, which makes the report differ between runs.

    Returns:
        SuiteReport: Records sorted by check id.
    """
    suite = SuiteName(suite)
    config = config or SuiteConfig()
    ctx = SuiteContext(cat, seed, config, digest(category_to_data(cat)))
    names: Iterable[SuiteName] = SUITES if suite == SuiteName.ALL else [suite]

    start = time.perf_counter()
    report = SuiteReport(str(suite), seed, ctx.category_digest)
    for name in names:
        logger.info("Running suite %s on %r", name, cat)
        if name != SuiteName.AXIOMS and validate_category(cat):
            report.records.append(ctx.record(f"{name}/skipped", "plumbing", False, "the category is invalid"))
            continue
        report.records.extend(SUITES[name](ctx))
    if timing:
        report.timing = time.perf_counter() - start
    return report

from dataclasses import dataclass
from pathlib import Path
import logging
import subprocess
import sys
from typing import Dict, Optional
import webbrowser

import pandas as pd
import typer

from . import files
from .eicat import CategoryError, FiniteEICategory, validate_category
from .instances import InstanceError
from .nakayama import inverse_nakayama, locally_self_injective_audit, nakayama, stabilized_nakayama
from .repmod import CatModule, ModuleError, hom_space, validate_module
from .resolve import ResolutionError, injective_resolution, verify_resolution
from .suites import SuiteConfig, SuiteName, run_suite

app = typer.Typer()

USAGE_ERRORS = (files.SchemaError, CategoryError, ModuleError, InstanceError, ResolutionError)


@dataclass
class Settings:
    seed: int = 0
    cap: Optional[int] = None
    out: str = "-"
    use_cache: bool = True


def version_callback(value: bool):
    if value:
        import importlib_metadata as lib_metadata

        version = lib_metadata.version("eicats")
        typer.echo(version)
        raise typer.Exit()


def settings(ctx: typer.Context) -> Settings:
    return ctx.obj if isinstance(ctx.obj, Settings) else Settings()


def usage_error(error: str, detail) -> typer.Exit:
    """Writes an error as JSON to standard error and returns the exit for a usage or validation error."""
    typer.echo(files.dumps({"error": error, "detail": detail}), err=True, nl=False)
    return typer.Exit(code=2)


def load_category(path: Path, config: Settings) -> FiniteEICategory:
    try:
        cat = files.read_category(path, cap=config.cap, use_cache=config.use_cache)
    except USAGE_ERRORS as err:
        raise usage_error(type(err).__name__, str(err))
    violations = validate_category(cat)
    if violations:
        raise usage_error("CategoryError", [str(v) for v in violations])
    return cat


def load_module(path: Path, cat: FiniteEICategory) -> CatModule:
    try:
        module = files.read_module(path, cat=cat)
    except USAGE_ERRORS as err:
        raise usage_error(type(err).__name__, str(err))
    violations = validate_module(module)
    if violations:
        raise usage_error("ModuleError", [str(v) for v in violations])
    return module


def dimension_table(columns: Dict[str, CatModule]) -> pd.DataFrame:
    """The dimension of each module at each object, one column per module."""
    cat = next(iter(columns.values())).cat
    df = pd.DataFrame({name: [module.dims[obj] for obj in cat.objects] for name, module in columns.items()})
    df.index = pd.Index(cat.objects, name="object")
    return df


def provenance(construction: str, cat: FiniteEICategory, *inputs: CatModule) -> dict:
    return {
        "construction": construction,
        "category": cat.name,
        "category_digest": files.digest(files.category_to_data(cat)),
        "inputs_digest": files.digest([module.to_dict() for module in inputs]),
    }


@app.command()
def docs(live: bool = True):
    """Builds the documentation.

    Args:
        live (bool, optional): Whether or not to use sphinx-autobuild to automatically build the documentation as files are edited. Defaults to True.
    """
    root_dir = Path(__file__).parent.parent.resolve()
    docs_dir = root_dir / "docs"
    docs_build_dir = docs_dir / "_build/html"

    if live:
        command = f"sphinx-autobuild {docs_dir} {docs_build_dir} --open-browser"
    else:
        command = f"sphinx-build -E -b html {docs_dir} {docs_build_dir}"

    subprocess.run(command, shell=True)

    if not live:
        index_page = docs_build_dir / "index.html"
        print(f"Open the index page at {index_page}")
        webbrowser.open_new("file://" + str(index_page))


@app.command()
def gen(
    ctx: typer.Context,
    spec_file: Path = typer.Argument(..., help="A JSON or TOML instance spec."),
    force: bool = typer.Option(False, help="Regenerate even if the instance is in the cache."),
):
    """
    Generates a truncation of FI_G or VI_q and writes the category JSON.
    """
    config = settings(ctx)
    try:
        spec = files.read_spec(spec_file, cap=config.cap)
        cat = files.cached_generate(spec, use_cache=config.use_cache, force=force)
    except USAGE_ERRORS as err:
        raise usage_error(type(err).__name__, str(err))
    data = files.category_to_data(cat)
    data["instance"] = spec.to_dict()
    files.write_output(data, config.out)


@app.command("nakayama")
def nakayama_command(
    ctx: typer.Context,
    category_file: Path = typer.Argument(..., help="A category JSON or an instance spec."),
    module_file: Path = typer.Argument(..., help="A left module JSON over the category."),
    inverse: bool = typer.Option(False, "--inverse", help="Apply ν⁻¹ instead of ν."),
):
    """
    Applies the Nakayama functor ν, or its inverse, to a left module.

    Writes the module JSON with a provenance block and prints the dimension table to standard error.
    """
    config = settings(ctx)
    cat = load_category(category_file, config)
    module = load_module(module_file, cat)
    try:
        output = inverse_nakayama(module) if inverse else nakayama(module)
    except USAGE_ERRORS as err:
        raise usage_error(type(err).__name__, str(err))

    label = "ν⁻¹" if inverse else "ν"
    typer.echo(dimension_table({"input": module, label: output}).to_string(), err=True)
    data = output.to_dict()
    data["provenance"] = provenance("inverse_nakayama" if inverse else "nakayama", cat, module)
    files.write_output(data, config.out)


@app.command()
def resolve(
    ctx: typer.Context,
    category_file: Path = typer.Argument(..., help="A category JSON or an instance spec."),
    module_file: Path = typer.Argument(..., help="A left module JSON over the category."),
    shortcut: bool = typer.Option(True, help="Stop as soon as a kernel is projective."),
):
    """
    Builds an injective resolution of a left module and certifies it.

    Exits with code 1 if the certificate fails.
    """
    config = settings(ctx)
    cat = load_category(category_file, config)
    module = load_module(module_file, cat)
    try:
        resolution = injective_resolution(module, stop_at_projective=shortcut)
    except USAGE_ERRORS as err:
        raise usage_error(type(err).__name__, str(err))
    certificate = verify_resolution(resolution.complex)
    files.write_output(
        {
            "complex": resolution.complex.to_dict(),
            "certificate": certificate.to_dict(),
            "provenance": provenance("injective_resolution", cat, module),
        },
        config.out,
    )
    if not certificate.passed:
        raise typer.Exit(code=1)


@app.command()
def check(
    ctx: typer.Context,
    category_file: Path = typer.Argument(..., help="A category JSON or an instance spec."),
    suite: SuiteName = typer.Option(SuiteName.ALL, case_sensitive=False, help="The property suite to run."),
    adjunction_pairs: int = typer.Option(SuiteConfig.adjunction_pairs, help="Random pairs for the adjunction."),
    resolution_samples: int = typer.Option(SuiteConfig.resolution_samples, help="Random modules to resolve."),
    exact_sequences: int = typer.Option(SuiteConfig.exact_sequences, help="Random short exact sequences."),
    max_dim: int = typer.Option(SuiteConfig.max_dim, help="The largest dimension of a random module at an object."),
    timing: bool = typer.Option(False, help="Include the elapsed time in the report."),
):
    """
    Runs property suites and writes the report.

    Exits with code 1 if any check fails. Expected failures do not change the exit code.
    """
    config = settings(ctx)
    cat = load_category(category_file, config)
    suite_config = SuiteConfig(
        adjunction_pairs=adjunction_pairs,
        resolution_samples=resolution_samples,
        exact_sequences=exact_sequences,
        max_dim=max_dim,
    )
    report = run_suite(cat, suite, seed=config.seed, config=suite_config, timing=timing)
    files.write_output(report.to_dict(), config.out)
    if not report.passed:
        raise typer.Exit(code=1)


@app.command()
def hom(
    ctx: typer.Context,
    category_file: Path = typer.Argument(..., help="A category JSON or an instance spec."),
    source_file: Path = typer.Argument(..., help="The source module JSON."),
    target_file: Path = typer.Argument(..., help="The target module JSON."),
    basis: bool = typer.Option(False, help="Include the canonical basis of the hom-space."),
):
    """
    Computes the space of homomorphisms between two modules.
    """
    config = settings(ctx)
    cat = load_category(category_file, config)
    source = load_module(source_file, cat)
    target = load_module(target_file, cat)
    try:
        space = hom_space(source, target)
    except USAGE_ERRORS as err:
        raise usage_error(type(err).__name__, str(err))
    data = {"dim": space.dim, "provenance": provenance("hom_space", cat, source, target)}
    if basis:
        data["basis"] = [element.to_dict() for element in space.basis]
    files.write_output(data, config.out)


@app.command()
def audit(
    ctx: typer.Context,
    category_file: Path = typer.Argument(..., help="A category JSON or an instance spec."),
):
    """
    Tests whether every free left module Ae_i is injective.

    The verdict is informational, so the exit code is 0 either way.
    """
    config = settings(ctx)
    cat = load_category(category_file, config)
    report = locally_self_injective_audit(cat)
    if not report.verdict:
        print(f"WARNING: {', '.join(report.witnesses)} not injective over {cat.name or 'the category'}.", file=sys.stderr)
    files.write_output(report.to_dict(), config.out)


@app.command()
def stabilize(
    ctx: typer.Context,
    spec_file: Path = typer.Argument(..., help="A JSON or TOML instance spec."),
    presentation_file: Path = typer.Argument(..., help="A JSON presentation of a left module."),
    level: Optional[int] = typer.Option(None, help="The truncation level. Defaults to the level of the spec."),
):
    """
    Computes ν of a finitely presented module at two consecutive truncation levels.

    Exits with code 1 if the dimensions disagree on the support of the first answer.
    """
    config = settings(ctx)
    try:
        spec = files.read_spec(spec_file, cap=config.cap)
        presentation = files.read_presentation(presentation_file)
        report = stabilized_nakayama(presentation, spec, level=level)
    except USAGE_ERRORS as err:
        raise usage_error(type(err).__name__, str(err))
    data = report.to_dict()
    data["module"] = report.module.to_dict()
    data["presentation"] = presentation.to_dict()
    files.write_output(data, config.out)
    if not report.stable:
        raise typer.Exit(code=1)


@app.callback()
def main(
    ctx: typer.Context,
    seed: int = typer.Option(0, help="Seeds every random choice."),
    cap: Optional[int] = typer.Option(None, help="Overrides the hom-set cap of instance specs."),
    out: str = typer.Option("-", help="Where to write the JSON output. '-' writes to standard output."),
    cache: bool = typer.Option(True, help="Read and write generated instances in the user cache."),
    verbose: bool = typer.Option(False, help="Log progress to standard error."),
    version: Optional[bool] = typer.Option(None, "--version", "-v", callback=version_callback, is_eager=True),
):
    """Computes with finite EI-categories: the Nakayama functor, injective resolutions and property suites."""
    if verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = Settings(seed=seed, cap=cap, out=out, use_cache=cache)

import hashlib
import json
import logging
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Optional, Union

from appdirs import user_cache_dir

from .eicat import CategoryError, FiniteEICategory
from .instances import InstanceError, InstanceSpec, generate
from .nakayama import Presentation
from .repmod import CatModule, ModuleError

logger = logging.getLogger(__name__)


class SchemaError(Exception):
    pass


def get_cached_path(filename: str) -> Path:
    """
    Returns a path in the eicats directory in the user's cache.

    File may or may not exist.
    """
    cache_dir = Path(user_cache_dir("eicats"))
    cache_dir.mkdir(exist_ok=True, parents=True)
    return cache_dir / filename


def dumps(data) -> str:
    """Canonical JSON: sorted keys and a trailing newline, so identical data gives identical bytes."""
    return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def digest(data) -> str:
    """The SHA-256 hex digest of the canonical JSON of some data."""
    return hashlib.sha256(json.dumps(data, sort_keys=True, ensure_ascii=False).encode("utf-8")).hexdigest()


def read_data(path: Union[str, Path]) -> dict:
    """
    Reads a JSON or TOML file.

    TOML is used when the file has the extension `.toml`.

    Raises:
        SchemaError: If the file cannot be read or parsed.
    """
    path = Path(path)
    try:
        if path.suffix.lower() == ".toml":
            with open(path, "rb") as f:
                return tomllib.load(f)
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError, tomllib.TOMLDecodeError) as err:
        raise SchemaError(f"Cannot read {path}: {err}")


def write_output(data, out: Union[str, Path, None] = "-") -> None:
    """Writes data as canonical JSON to a file, or to standard output when out is '-' or None."""
    text = dumps(data)
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        return
    out = Path(out)
    out.parent.mkdir(exist_ok=True, parents=True)
    out.write_text(text, encoding="utf-8")


def read_spec(path: Union[str, Path], cap: Optional[int] = None) -> InstanceSpec:
    """
    Reads an instance spec from a JSON or TOML file.

    Args:
        path (str, Path): The file.
        cap (int, optional): Overrides the cap given in the file.

    Raises:
        SchemaError: If the spec cannot be understood.
    """
    return spec_from_data(read_data(path), cap=cap)


def spec_from_data(data: dict, cap: Optional[int] = None) -> InstanceSpec:
    if cap is not None:
        data = dict(data, cap=cap)
    try:
        return InstanceSpec.from_dict(data)
    except InstanceError as err:
        raise SchemaError(str(err))


def cached_generate(spec: InstanceSpec, use_cache: bool = True, force: bool = False) -> FiniteEICategory:
    """
    Generates the truncation described by a spec, reading it from the cache if it is already there.

    Args:
        spec (InstanceSpec): The instance.
        use_cache (bool): Whether to read and write the cache. Default True.
        force (bool): Regenerate even if a cached file exists. Default False.
    """
    if not use_cache:
        return generate(spec)

    spec_data = spec.to_dict()
    spec_data.pop("cap", None)
    local_path = get_cached_path(f"{spec.family}-{digest(spec_data)[:16]}.json")
    if local_path.exists() and local_path.stat().st_size > 0 and not force:
        try:
            cat = category_from_data(json.loads(local_path.read_text(encoding="utf-8")))
            logger.debug("Read %r from the cache at %s", cat, local_path)
            return cat
        except (SchemaError, json.JSONDecodeError):
            print(f"WARNING: Ignoring unreadable cached instance {local_path}.", file=sys.stderr)

    cat = generate(spec)
    data = category_to_data(cat)
    data["instance"] = spec.to_dict()
    local_path.write_text(dumps(data), encoding="utf-8")
    return cat


def category_to_data(cat: FiniteEICategory) -> dict:
    data = cat.to_dict()
    if cat.name:
        data["name"] = cat.name
    return data


def category_from_data(data: dict, cap: Optional[int] = None, use_cache: bool = True) -> FiniteEICategory:
    """
    Reads a category from JSON data, or generates one if the data is an instance spec.

    Raises:
        SchemaError: If the data describes neither.
    """
    if not isinstance(data, dict):
        raise SchemaError("A category must be a JSON object.")
    if "family" in data:
        return cached_generate(spec_from_data(data, cap=cap), use_cache=use_cache)
    try:
        return FiniteEICategory.from_dict(data, name=data.get("name", ""))
    except (KeyError, TypeError, ValueError, CategoryError) as err:
        raise SchemaError(f"Cannot read category: {err}")


def read_category(path: Union[str, Path], cap: Optional[int] = None, use_cache: bool = True) -> FiniteEICategory:
    """
    Reads a category file, or an instance spec file which is then generated.

    Raises:
        SchemaError: If the file cannot be understood.
    """
    return category_from_data(read_data(path), cap=cap, use_cache=use_cache)


def module_from_data(data: dict, cat: Optional[FiniteEICategory] = None, base: Optional[Path] = None) -> CatModule:
    """
    Reads a module from JSON data.

    The category is the one given, or else the module's "category" entry: inline data or a
    path relative to `base`.

    Raises:
        SchemaError: If the module cannot be read.
    """
    if not isinstance(data, dict):
        raise SchemaError("A module must be a JSON object.")
    if cat is None:
        if "category" not in data:
            raise SchemaError("The module does not name its category.")
        category = data["category"]
        if isinstance(category, str):
            cat = read_category((base or Path(".")) / category)
        else:
            cat = category_from_data(category)
    try:
        return CatModule.from_dict(data, cat, name=data.get("name", ""))
    except (KeyError, TypeError, ValueError, ModuleError) as err:
        raise SchemaError(f"Cannot read module: {err}")


def read_module(path: Union[str, Path], cat: Optional[FiniteEICategory] = None) -> CatModule:
    path = Path(path)
    return module_from_data(read_data(path), cat=cat, base=path.parent)


def read_presentation(path: Union[str, Path]) -> Presentation:
    data = read_data(path)
    try:
        return Presentation.from_dict(data)
    except (KeyError, TypeError, ValueError) as err:
        raise SchemaError(f"Cannot read presentation: {err}")

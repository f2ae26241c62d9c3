"""Numeric surface and curve profiles feeding the formula layer.

A profile fixes the integers the formulas consume: the Euler
characteristic of the structure sheaf, an intersection lattice with the
canonical class, named line bundle classes, and optional graded
cohomology tables.  Riemann-Roch turns lattice data into Euler
characteristics; supplied cohomology tables are cross-validated against
it at load time, never derived.  In particular the cohomology of a dual
bundle is looked up, not computed by negating degrees.
"""

from __future__ import annotations

import json
import re
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .graded import GradedDim


class ConfigError(ValueError):
    """A profile or config document is malformed or inconsistent."""


class NonIntegralError(ValueError):
    """Riemann-Roch produced a non-integer; the lattice data is bad."""


@dataclass(frozen=True)
class LineBundleClass:
    """Coordinates of a line bundle class in the chosen Picard sublattice."""

    vector: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vector", tuple(int(c) for c in self.vector))

    def __add__(self, other: "LineBundleClass") -> "LineBundleClass":
        self._check(other)
        return LineBundleClass(tuple(a + b for a, b in zip(self.vector, other.vector)))

    def __sub__(self, other: "LineBundleClass") -> "LineBundleClass":
        self._check(other)
        return LineBundleClass(tuple(a - b for a, b in zip(self.vector, other.vector)))

    def __neg__(self) -> "LineBundleClass":
        return LineBundleClass(tuple(-a for a in self.vector))

    def scale(self, factor: int) -> "LineBundleClass":
        return LineBundleClass(tuple(factor * a for a in self.vector))

    def _check(self, other: "LineBundleClass") -> None:
        if len(self.vector) != len(other.vector):
            raise ValueError(
                f"rank mismatch: {len(self.vector)} vs {len(other.vector)}"
            )


@dataclass(frozen=True)
class SurfaceData:
    """Lattice and cohomology data of a projective surface profile."""

    chi_o: int
    picard_rank: int
    gram: tuple[tuple[int, ...], ...]
    canonical: tuple[int, ...]
    bundles: Mapping[str, LineBundleClass] = field(default_factory=dict)
    cohomology: Mapping[str, GradedDim] = field(default_factory=dict)
    chi_omega: int | None = None

    def bundle(self, name: str) -> LineBundleClass:
        if name in self.bundles:
            return self.bundles[name]
        if name == "O":
            return LineBundleClass((0,) * self.picard_rank)
        raise ConfigError(f"unknown bundle {name!r}; profile has {sorted(self.bundles)}")


@dataclass(frozen=True)
class CurveBundle:
    rank: int
    degree: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ConfigError(f"bundle rank must be positive, got {self.rank}")


@dataclass(frozen=True)
class CurveData:
    """Genus and named bundles of a smooth projective curve profile."""

    genus: int
    bundles: Mapping[str, CurveBundle] = field(default_factory=dict)
    cohomology: Mapping[str, GradedDim] = field(default_factory=dict)

    def bundle(self, name: str) -> CurveBundle:
        if name in self.bundles:
            return self.bundles[name]
        if name == "O":
            return CurveBundle(1, 0)
        raise ConfigError(f"unknown bundle {name!r}; profile has {sorted(self.bundles)}")


def pairing(surface: SurfaceData, a: LineBundleClass, b: LineBundleClass) -> int:
    """Intersection number of two classes under the profile's Gram matrix."""
    if len(a.vector) != surface.picard_rank or len(b.vector) != surface.picard_rank:
        raise ConfigError(
            f"class length must equal picard_rank={surface.picard_rank}"
        )
    return sum(
        a.vector[i] * surface.gram[i][j] * b.vector[j]
        for i in range(surface.picard_rank)
        for j in range(surface.picard_rank)
    )


def rr_chi(surface: SurfaceData, line: LineBundleClass) -> int:
    """Euler characteristic of a line bundle by surface Riemann-Roch."""
    canonical = LineBundleClass(surface.canonical)
    numerator = pairing(surface, line, line) - pairing(surface, line, canonical)
    quot, rem = divmod(numerator, 2)
    if rem:
        raise NonIntegralError("non-integral Riemann-Roch; check gram/canonical")
    return surface.chi_o + quot


def chi_pair(surface: SurfaceData, src: LineBundleClass, tgt: LineBundleClass) -> int:
    """Euler characteristic of the graded Hom between two line bundles."""
    return rr_chi(surface, tgt - src)


def chi_tensor_powers(
    surface: SurfaceData,
    sheaf: LineBundleClass | Sequence[int],
    line: LineBundleClass,
    k: int,
) -> list[int]:
    """Euler characteristics of sheaf (x) line^p for p = 0..k.

    When the sheaf is not a line bundle its values cannot come from the
    lattice, so a plain integer sequence is passed through unchanged
    (after a length check).
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if isinstance(sheaf, LineBundleClass):
        return [rr_chi(surface, sheaf + line.scale(p)) for p in range(k + 1)]
    values = [int(v) for v in sheaf]
    if len(values) < k + 1:
        raise ConfigError(
            f"explicit chi list needs entries for p = 0..{k}, got {len(values)}"
        )
    return values[: k + 1]


def curve_chi(curve: CurveData, bundle: CurveBundle | tuple[int, int]) -> int:
    """Euler characteristic on a curve: degree + rank(1 - genus)."""
    if not isinstance(bundle, CurveBundle):
        bundle = CurveBundle(*bundle)
    return bundle.degree + bundle.rank * (1 - curve.genus)


# -- cohomology table lookup -------------------------------------------

_DUAL_KEY = re.compile(r"^dual\((?P<name>[^(),]+)\)$")
_HOM_KEY = re.compile(r"^hom\((?P<src>[^(),]+),(?P<tgt>[^(),]+)\)$")


def _surface_key_class(surface: SurfaceData, key: str) -> LineBundleClass:
    # the lattice class whose Riemann-Roch value a cohomology table
    # under this key must reproduce
    m = _DUAL_KEY.match(key)
    if m:
        return -surface.bundle(m.group("name").strip())
    m = _HOM_KEY.match(key)
    if m:
        return surface.bundle(m.group("tgt").strip()) - surface.bundle(m.group("src").strip())
    return surface.bundle(key)


def table_for_class(surface: SurfaceData, wanted: LineBundleClass) -> GradedDim | None:
    """A supplied cohomology table for any bundle in the given class."""
    for name in sorted(surface.cohomology):
        try:
            cls = _surface_key_class(surface, name)
        except ConfigError:
            continue
        if cls == wanted:
            return surface.cohomology[name]
    return None


def surface_table(surface: SurfaceData, key: str) -> GradedDim:
    """Resolve a cohomology table by key, falling back to class matching.

    The exact key wins; otherwise any supplied table for a bundle in the
    same lattice class is equivalent (for line bundles, duals and Homs
    are themselves line bundles).  Tables are never synthesized.
    """
    if key in surface.cohomology:
        return surface.cohomology[key]
    wanted = _surface_key_class(surface, key)
    found = table_for_class(surface, wanted)
    if found is None:
        raise ConfigError(
            f"no cohomology table for {key!r} (class {list(wanted.vector)}); "
            "graded formulas need user-supplied tables"
        )
    return found


#: formula table roles resolved to profile cohomology keys, given the
#: bundle names selected for E, F, K, L
def variant_tables(
    surface: SurfaceData,
    variant_keys: Sequence[str],
    *,
    e_name: str = "O",
    f_name: str = "O",
    k_name: str = "O",
    l_name: str = "O",
) -> dict[str, GradedDim]:
    def key_for(role: str) -> str:
        if role == "coh_o":
            return "O"
        if role == "coh_f":
            return f_name
        if role == "coh_l":
            return l_name
        if role == "coh_e_dual":
            return f"dual({e_name})"
        if role == "coh_l_dual":
            return f"dual({l_name})"
        if role == "coh_k_dual":
            return f"dual({k_name})"
        if role == "hom_ef":
            return f"hom({e_name},{f_name})"
        if role == "hom_el":
            return f"hom({e_name},{l_name})"
        if role == "hom_lf":
            return f"hom({l_name},{f_name})"
        if role == "hom_kl":
            return f"hom({k_name},{l_name})"
        raise ValueError(f"unknown table role {role!r}")

    return {role: surface_table(surface, key_for(role)) for role in variant_keys}


def variant_chis(
    surface: SurfaceData,
    roles: Sequence[str],
    *,
    e_name: str = "O",
    f_name: str = "O",
    k_name: str = "O",
    l_name: str = "O",
) -> dict[str, int]:
    """Euler characteristic for each formula table role, from the lattice."""
    classes = {
        "coh_o": surface.bundle("O"),
        "coh_f": surface.bundle(f_name),
        "coh_l": surface.bundle(l_name),
        "coh_e_dual": -surface.bundle(e_name),
        "coh_l_dual": -surface.bundle(l_name),
        "coh_k_dual": -surface.bundle(k_name),
        "hom_ef": surface.bundle(f_name) - surface.bundle(e_name),
        "hom_el": surface.bundle(l_name) - surface.bundle(e_name),
        "hom_lf": surface.bundle(f_name) - surface.bundle(l_name),
        "hom_kl": surface.bundle(l_name) - surface.bundle(k_name),
    }
    out = {}
    for role in roles:
        if role not in classes:
            raise ValueError(f"unknown table role {role!r}")
        out[role] = rr_chi(surface, classes[role])
    return out


def curve_chis(curve: CurveData, e_name: str = "O", f_name: str = "O") -> dict[str, int]:
    """The four Euler characteristics the curve pairing formula needs."""
    src = curve.bundle(e_name)
    tgt = curve.bundle(f_name)
    return {
        "chi_ef": curve_chi(
            curve,
            CurveBundle(
                src.rank * tgt.rank,
                src.rank * tgt.degree - tgt.rank * src.degree,
            ),
        ),
        "chi_e_dual": curve_chi(curve, CurveBundle(src.rank, -src.degree)),
        "chi_f": curve_chi(curve, tgt),
        "chi_oc": curve_chi(curve, CurveBundle(1, 0)),
    }


# -- profile loading and validation ------------------------------------


def _as_int(value: object, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def surface_from_json(data: Mapping[str, object]) -> SurfaceData:
    known = {"chi_O", "picard_rank", "gram", "canonical", "bundles", "cohomology", "chi_Omega"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown surface fields {sorted(unknown)}")
    for required in ("chi_O", "picard_rank", "gram", "canonical"):
        if required not in data:
            raise ConfigError(f"surface is missing field {required!r}")
    chi_o = _as_int(data["chi_O"], "surface.chi_O")
    rank = _as_int(data["picard_rank"], "surface.picard_rank")
    if rank < 1:
        raise ConfigError(f"surface.picard_rank must be positive, got {rank}")
    gram_raw = data["gram"]
    if not isinstance(gram_raw, list) or len(gram_raw) != rank:
        raise ConfigError(f"surface.gram must be a {rank}x{rank} matrix")
    gram = []
    for i, row in enumerate(gram_raw):
        if not isinstance(row, list) or len(row) != rank:
            raise ConfigError(f"surface.gram row {i} must have length {rank}")
        gram.append(tuple(_as_int(x, f"surface.gram[{i}]") for x in row))
    for i in range(rank):
        for j in range(rank):
            if gram[i][j] != gram[j][i]:
                raise ConfigError(f"surface.gram is not symmetric at ({i},{j})")
    canonical_raw = data["canonical"]
    if not isinstance(canonical_raw, list) or len(canonical_raw) != rank:
        raise ConfigError(f"surface.canonical must have length {rank}")
    canonical = tuple(_as_int(x, "surface.canonical") for x in canonical_raw)

    bundles: dict[str, LineBundleClass] = {}
    for name, vec in (data.get("bundles") or {}).items():
        if not isinstance(vec, list) or len(vec) != rank:
            raise ConfigError(f"surface.bundles[{name!r}] must have length {rank}")
        bundles[name] = LineBundleClass(tuple(_as_int(x, f"surface.bundles[{name!r}]") for x in vec))

    cohomology: dict[str, GradedDim] = {}
    for key, table in (data.get("cohomology") or {}).items():
        if not isinstance(table, Mapping):
            raise ConfigError(f"surface.cohomology[{key!r}] must be a degree->dim map")
        try:
            cohomology[key] = GradedDim.from_json(table)
        except ValueError as exc:
            raise ConfigError(f"surface.cohomology[{key!r}]: {exc}") from None

    chi_omega = data.get("chi_Omega")
    if chi_omega is not None:
        chi_omega = _as_int(chi_omega, "surface.chi_Omega")

    surface = SurfaceData(
        chi_o=chi_o,
        picard_rank=rank,
        gram=tuple(gram),
        canonical=canonical,
        bundles=bundles,
        cohomology=cohomology,
        chi_omega=chi_omega,
    )
    for key, table in cohomology.items():
        try:
            cls = _surface_key_class(surface, key)
        except ConfigError as exc:
            raise ConfigError(f"surface.cohomology[{key!r}]: {exc}") from None
        expected = rr_chi(surface, cls)
        if table.euler() != expected:
            raise ConfigError(
                f"surface.cohomology[{key!r}] has euler {table.euler()} "
                f"but Riemann-Roch gives {expected}"
            )
    return surface


def _curve_key_chi(curve: CurveData, key: str) -> int:
    m = _DUAL_KEY.match(key)
    if m:
        b = curve.bundle(m.group("name").strip())
        return curve_chi(curve, CurveBundle(b.rank, -b.degree))
    m = _HOM_KEY.match(key)
    if m:
        src = curve.bundle(m.group("src").strip())
        tgt = curve.bundle(m.group("tgt").strip())
        # chi(Hom(E,F)) on a curve by Riemann-Roch for E^dual (x) F
        rank = src.rank * tgt.rank
        degree = src.rank * tgt.degree - tgt.rank * src.degree
        return curve_chi(curve, CurveBundle(rank, degree))
    return curve_chi(curve, curve.bundle(key))


def curve_from_json(data: Mapping[str, object]) -> CurveData:
    known = {"genus", "bundles", "cohomology"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown curve fields {sorted(unknown)}")
    if "genus" not in data:
        raise ConfigError("curve is missing field 'genus'")
    genus = _as_int(data["genus"], "curve.genus")
    if genus < 0:
        raise ConfigError(f"curve.genus must be non-negative, got {genus}")
    bundles: dict[str, CurveBundle] = {}
    for name, spec in (data.get("bundles") or {}).items():
        if not isinstance(spec, Mapping) or set(spec) != {"rank", "degree"}:
            raise ConfigError(
                f"curve.bundles[{name!r}] must be {{\"rank\": ..., \"degree\": ...}}"
            )
        bundles[name] = CurveBundle(
            _as_int(spec["rank"], f"curve.bundles[{name!r}].rank"),
            _as_int(spec["degree"], f"curve.bundles[{name!r}].degree"),
        )
    cohomology: dict[str, GradedDim] = {}
    for key, table in (data.get("cohomology") or {}).items():
        if not isinstance(table, Mapping):
            raise ConfigError(f"curve.cohomology[{key!r}] must be a degree->dim map")
        cohomology[key] = GradedDim.from_json(table)
    curve = CurveData(genus=genus, bundles=bundles, cohomology=cohomology)
    for key, table in cohomology.items():
        expected = _curve_key_chi(curve, key)
        if table.euler() != expected:
            raise ConfigError(
                f"curve.cohomology[{key!r}] has euler {table.euler()} "
                f"but Riemann-Roch gives {expected}"
            )
    return curve


@dataclass(frozen=True)
class Config:
    surface: SurfaceData | None = None
    curve: CurveData | None = None
    jobs: tuple[Mapping[str, object], ...] = ()


def packaged_profile(name: str) -> Path:
    """Path of one of the example profiles shipped with the package."""
    root = Path(__file__).resolve().parent / "profiles"
    candidate = root / name
    if not candidate.is_file():
        shipped = sorted(p.name for p in root.glob("*.json"))
        raise ConfigError(f"no packaged profile {name!r}; shipped: {shipped}")
    return candidate


def resolve_profile(spec: str) -> Path:
    """Interpret a profile argument as a path, else as a packaged name."""
    path = Path(spec)
    if path.is_file():
        return path
    try:
        return packaged_profile(spec)
    except ConfigError:
        raise ConfigError(
            f"profile {spec!r} is neither an existing file nor a packaged profile"
        ) from None


def _nested_section(value: object, field: str, parse: Callable):
    """A config section is either an inline object or a profile reference."""
    if isinstance(value, str):
        loaded = load_config(resolve_profile(value))
        part = getattr(loaded, field)
        if part is None:
            raise ConfigError(f"profile {value!r} does not define a {field}")
        return part
    if not isinstance(value, Mapping):
        raise ConfigError(f"config field {field!r} must be an object or a profile name")
    return parse(value)


def load_config(path: str | Path) -> Config:
    """Load a JSON profile: {"surface": ..., "curve": ..., "jobs": [...]}."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, Mapping):
        raise ConfigError(f"config {path} must be a JSON object")
    known = {"surface", "curve", "jobs"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config fields {sorted(unknown)}")
    surface = curve = None
    if "surface" in data:
        surface = _nested_section(data["surface"], "surface", surface_from_json)
    if "curve" in data:
        curve = _nested_section(data["curve"], "curve", curve_from_json)
    jobs = data.get("jobs", [])
    if not isinstance(jobs, list) or not all(isinstance(j, Mapping) for j in jobs):
        raise ConfigError("config field 'jobs' must be a list of objects")
    return Config(surface=surface, curve=curve, jobs=tuple(jobs))
